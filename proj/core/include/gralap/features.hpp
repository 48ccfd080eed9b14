#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gralap/annotations.hpp"
#include "gralap/corpus.hpp"
#include "gralap/text.hpp"

namespace gralap::features {

/// Cue-word lists for the context features. Each entry is the stemmed token
/// sequence of one term (single-token entries dominate; hyphenated terms
/// span several tokens). Matching is stem equality.
struct WordLists {
    std::vector<std::vector<std::string>> relevant;
    std::vector<std::vector<std::string>> recent;
    std::vector<std::vector<std::string>> extreme;
    std::vector<std::vector<std::string>> comparison;

    static const WordLists& builtin();
};

struct ContextFeatures {
    double alone = 0.0;      ///< fraction of mentions cited alone
    double first = 0.0;      ///< fraction of grouped mentions cited first
    double relevant = 0.0;   ///< fraction of contexts with a Rel cue
    double recent = 0.0;     ///< fraction of contexts with a Rec cue
    double extreme = 0.0;    ///< fraction of contexts with an Ext cue
    double comparison = 0.0; ///< fraction of contexts with a Comp cue
};

ContextFeatures context_features(const corpus::Paper& paper, const corpus::Reference& ref,
                                 const std::vector<corpus::ReferenceContext>& contexts,
                                 const WordLists& lists = WordLists::builtin());

/// Cosine similarities of the cited title (t_*) and of the aggregated
/// reference contexts (rc_*) against parts of the citing paper. "rest" is
/// everything outside abstract, introduction and conclusion.
struct SimilarityFeatures {
    double t_title = 0.0, t_abstract = 0.0, t_intro = 0.0, t_conclusion = 0.0, t_rest = 0.0;
    double rc_title = 0.0, rc_abstract = 0.0, rc_intro = 0.0, rc_conclusion = 0.0,
           rc_rest = 0.0;
};

SimilarityFeatures similarity_features(const corpus::Paper& paper,
                                       const corpus::Reference& ref,
                                       const std::vector<corpus::ReferenceContext>& contexts);

/// Mention counts over paper parts, divided by the citing paper's sentence
/// count. "rest" here is everything outside introduction and related work.
/// sections = distinct section categories with a mention, out of 5.
struct FrequencyFeatures {
    double whole = 0.0, intro = 0.0, related = 0.0, rest = 0.0, sections = 0.0;
};

FrequencyFeatures frequency_features(const corpus::Paper& paper, const corpus::Reference& ref);

/// begin/end: fraction of mentions in the first/second half of the paper by
/// sentence count. mean/stddev: mention position statistics divided by the
/// sentence count. All zero for a reference that is never mentioned.
struct PositionFeatures {
    double begin = 0.0, end = 0.0, mean = 0.0, stddev = 0.0;
};

PositionFeatures position_features(const corpus::Paper& paper, const corpus::Reference& ref);

/// Boolean evidence strings: context n-grams (lf:1g:, lf:2g:, lf:3g:),
/// reference-sentence POS tags (lf:pos:), main-verb tag and identity
/// (lf:tense:, lf:mainv:), modal presence (lf:modal), "but" presence
/// (lf:hasbut), dependency triples (lf:dep:) and the seven POS-pattern
/// matches (lf:posp:1..7). Tag-based evidence appears only for sentences
/// covered by the annotation sidecar.
std::set<std::string> linguistic_features(const corpus::Paper& paper,
                                          const corpus::Reference& ref,
                                          const std::vector<corpus::ReferenceContext>& contexts,
                                          const annotations::AnnotationSet* annotations);

struct MiscFeatures {
    double global_count = 0.0; ///< distinct papers besides the citing one citing the target
    double self_citation = 0.0; ///< 1 when the pair shares an author
    double year_gap = 0.0;      ///< citing year - cited year, clamped at 0
    double co_citation = 0.0;   ///< Jaccard overlap of the two reference sets
};

/// Distinct citing nodes per cited node; build once, share across pairs.
using CiterIndex = std::vector<std::set<int>>;

CiterIndex build_citer_index(const corpus::CitationGraph& graph);

MiscFeatures misc_features(const corpus::Corpus& corpus, const corpus::Paper& paper,
                           const corpus::Reference& ref, const corpus::CitationGraph& graph);

MiscFeatures misc_features(const corpus::Corpus& corpus, const corpus::Paper& paper,
                           const corpus::Reference& ref, const corpus::CitationGraph& graph,
                           const CiterIndex& citers);

struct GroupToggles {
    bool cf = true, sf = true, ff = true, pf = true, lf = true, ms = true;
    bool any() const { return cf || sf || ff || pf || lf || ms; }
};

struct PairId {
    std::string citing;
    std::string key;
    auto operator<=>(const PairId&) const = default;
};

struct PairFeatures {
    PairId id;
    std::optional<ContextFeatures> cf;
    std::optional<SimilarityFeatures> sf;
    std::optional<FrequencyFeatures> ff;
    std::optional<PositionFeatures> pf;
    std::optional<MiscFeatures> ms;
    std::set<std::string> lf;
};

struct Extraction {
    std::vector<PairFeatures> pairs; ///< corpus order: per paper, per reference
    GroupToggles toggles;
    bool annotated = false; ///< an annotation sidecar was supplied
};

/// Runs the enabled extractors over every paper-reference pair.
Extraction extract_pair_features(const corpus::Corpus& corpus,
                                 const corpus::CitationGraph& graph,
                                 const annotations::AnnotationSet* annotations,
                                 const GroupToggles& toggles = {});

/// Dense columns followed by the boolean block; every column divided by its
/// maximum over all pairs (all-zero columns untouched). The boolean
/// vocabulary keeps n-grams seen in at least two pairs, capped at 20000
/// columns by descending pair frequency.
struct FeatureMatrix {
    std::vector<PairId> pairs;
    std::vector<std::string> columns;
    Eigen::MatrixXd values;
};

inline constexpr int kNgramMinPairs = 2;
inline constexpr int kNgramMaxColumns = 20000;

std::vector<std::string> dense_column_names(const GroupToggles& toggles);

FeatureMatrix assemble_feature_matrix(const Extraction& extraction);

} // namespace gralap::features
