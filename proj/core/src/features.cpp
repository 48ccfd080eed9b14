#include "gralap/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <regex>
#include <unordered_set>

namespace gralap::features {

namespace {

std::vector<std::vector<std::string>> stem_terms(std::initializer_list<const char*> terms) {
    std::vector<std::vector<std::string>> out;
    for (const char* term : terms) {
        std::vector<std::string> stems = text::tokenize_and_stem(term);
        if (stems.empty()) continue;
        if (std::find(out.begin(), out.end(), stems) == out.end())
            out.push_back(std::move(stems));
    }
    return out;
}

} // namespace

const WordLists& WordLists::builtin() {
    static const WordLists lists = [] {
        WordLists w;
        w.relevant = stem_terms(
            {"pivotal",    "comparable", "innovative", "relevant",  "relevantly",
             "inspiring",  "related",    "relatedly",  "similar",   "similarly",
             "applicable", "appropriate", "pertinent", "influential", "influenced",
             "original",   "originally", "useful",     "suggested", "interesting",
             "inspired",   "likewise"});
        w.recent = stem_terms(
            {"recent",     "recently",     "latest",      "later",      "late",
             "up-to-date", "continuing",   "continued",   "upcoming",   "expected",
             "update",     "renewed",      "extended",    "subsequent", "subsequently",
             "initial",    "initially",    "sudden",      "current",    "currently",
             "future",     "unexpected",   "previous",    "previously", "old",
             "ongoing",    "imminent",     "anticipated", "unprecedented", "proposed",
             "startling",  "preliminary",  "ensuing",     "repeated",   "reported",
             "new",        "earlier",      "earliest",    "early",      "existing",
             "further",    "revised",      "improved"});
        w.extreme = stem_terms(
            {"greatly",      "awfully",     "drastically",  "intensely",
             "acutely",      "almighty",    "exceptionally", "excessively",
             "exceedingly",  "tremendously", "importantly",  "significantly",
             "notably",      "outstandingly"});
        w.comparison = stem_terms(
            {"easy",   "easier",  "easiest",  "vague",  "vaguer",   "vaguest",
             "weak",   "weaker",  "weakest",  "strong", "stronger", "strongest",
             "bogus",  "unclear"});
        return w;
    }();
    return lists;
}

namespace {

bool contains_term(const std::vector<std::string>& stems,
                   const std::vector<std::string>& term) {
    if (term.size() == 1)
        return std::find(stems.begin(), stems.end(), term[0]) != stems.end();
    if (term.size() > stems.size()) return false;
    for (std::size_t i = 0; i + term.size() <= stems.size(); ++i)
        if (std::equal(term.begin(), term.end(), stems.begin() + static_cast<long>(i)))
            return true;
    return false;
}

bool contains_any(const std::vector<std::string>& stems,
                  const std::vector<std::vector<std::string>>& list) {
    for (const auto& term : list)
        if (contains_term(stems, term)) return true;
    return false;
}

std::vector<std::string> window_stems(const corpus::Paper& paper,
                                      const corpus::ReferenceContext& ctx) {
    std::vector<std::string> stems;
    for (int idx : ctx.window) {
        std::vector<std::string> s = text::tokenize_and_stem(paper.sentence(idx));
        stems.insert(stems.end(), std::make_move_iterator(s.begin()),
                     std::make_move_iterator(s.end()));
    }
    return stems;
}

} // namespace

ContextFeatures context_features(const corpus::Paper& paper, const corpus::Reference& ref,
                                 const std::vector<corpus::ReferenceContext>& contexts,
                                 const WordLists& lists) {
    ContextFeatures f;
    if (ref.mentions.empty() || contexts.empty()) return f;

    int alone = 0, grouped = 0, grouped_first = 0;
    for (const corpus::Mention& m : ref.mentions) {
        if (m.alone) {
            ++alone;
        } else {
            ++grouped;
            if (m.first) ++grouped_first;
        }
    }
    const double n_mentions = static_cast<double>(ref.mentions.size());
    f.alone = alone / n_mentions;
    f.first = grouped > 0 ? static_cast<double>(grouped_first) / grouped : 0.0;

    int rel = 0, rec = 0, ext = 0, comp = 0;
    for (const corpus::ReferenceContext& ctx : contexts) {
        const std::vector<std::string> stems = window_stems(paper, ctx);
        if (contains_any(stems, lists.relevant)) ++rel;
        if (contains_any(stems, lists.recent)) ++rec;
        if (contains_any(stems, lists.extreme)) ++ext;
        if (contains_any(stems, lists.comparison)) ++comp;
    }
    const double n_contexts = static_cast<double>(contexts.size());
    f.relevant = rel / n_contexts;
    f.recent = rec / n_contexts;
    f.extreme = ext / n_contexts;
    f.comparison = comp / n_contexts;
    return f;
}

namespace {

struct PaperTermVectors {
    text::TermVector title;
    text::TermVector abstract;
    text::TermVector intro;
    text::TermVector conclusion;
    text::TermVector rest; ///< everything outside abstract/intro/conclusion
};

PaperTermVectors paper_term_vectors(const corpus::Paper& paper) {
    PaperTermVectors v;
    text::add_terms(v.title, paper.title);
    for (const corpus::Section& s : paper.sections) {
        const corpus::SectionCategory cat = corpus::map_section_heading(s.heading);
        text::TermVector* target = &v.rest;
        if (cat == corpus::SectionCategory::Abstract) target = &v.abstract;
        else if (cat == corpus::SectionCategory::Introduction) target = &v.intro;
        else if (cat == corpus::SectionCategory::Conclusion) target = &v.conclusion;
        for (const std::string& sentence : s.sentences) text::add_terms(*target, sentence);
    }
    return v;
}

} // namespace

SimilarityFeatures similarity_features(const corpus::Paper& paper,
                                       const corpus::Reference& ref,
                                       const std::vector<corpus::ReferenceContext>& contexts) {
    const PaperTermVectors parts = paper_term_vectors(paper);

    const text::TermVector title_vec = text::term_vector(ref.target_title);
    text::TermVector rc_vec;
    for (const corpus::ReferenceContext& ctx : contexts)
        for (int idx : ctx.window) text::add_terms(rc_vec, paper.sentence(idx));

    SimilarityFeatures f;
    f.t_title = text::cosine_similarity(title_vec, parts.title);
    f.t_abstract = text::cosine_similarity(title_vec, parts.abstract);
    f.t_intro = text::cosine_similarity(title_vec, parts.intro);
    f.t_conclusion = text::cosine_similarity(title_vec, parts.conclusion);
    f.t_rest = text::cosine_similarity(title_vec, parts.rest);
    f.rc_title = text::cosine_similarity(rc_vec, parts.title);
    f.rc_abstract = text::cosine_similarity(rc_vec, parts.abstract);
    f.rc_intro = text::cosine_similarity(rc_vec, parts.intro);
    f.rc_conclusion = text::cosine_similarity(rc_vec, parts.conclusion);
    f.rc_rest = text::cosine_similarity(rc_vec, parts.rest);
    return f;
}

FrequencyFeatures frequency_features(const corpus::Paper& paper, const corpus::Reference& ref) {
    FrequencyFeatures f;
    const int total = paper.sentence_count();
    if (total == 0 || ref.mentions.empty()) return f;

    int intro = 0, related = 0, rest = 0;
    std::set<corpus::SectionCategory> seen;
    for (const corpus::Mention& m : ref.mentions) {
        const corpus::SectionCategory cat = paper.category_of_sentence(m.sentence);
        seen.insert(cat);
        if (cat == corpus::SectionCategory::Introduction) ++intro;
        else if (cat == corpus::SectionCategory::RelatedWork) ++related;
        else ++rest;
    }
    const double n = static_cast<double>(total);
    f.whole = ref.mentions.size() / n;
    f.intro = intro / n;
    f.related = related / n;
    f.rest = rest / n;
    f.sections = static_cast<double>(seen.size()) / corpus::kSectionCategoryCount;
    return f;
}

PositionFeatures position_features(const corpus::Paper& paper, const corpus::Reference& ref) {
    PositionFeatures f;
    const int total = paper.sentence_count();
    if (total == 0 || ref.mentions.empty()) return f;

    int begin = 0;
    double sum = 0.0;
    for (const corpus::Mention& m : ref.mentions) {
        if (2 * m.sentence < total) ++begin;
        sum += m.sentence;
    }
    const double n = static_cast<double>(ref.mentions.size());
    f.begin = begin / n;
    f.end = 1.0 - f.begin;
    const double mean = sum / n;
    double var = 0.0;
    for (const corpus::Mention& m : ref.mentions) var += (m.sentence - mean) * (m.sentence - mean);
    var /= n;
    f.mean = mean / total;
    f.stddev = std::sqrt(var) / total;
    return f;
}

namespace {

const std::array<std::regex, 7>& posp_patterns() {
    static const std::array<std::regex, 7> patterns = {
        std::regex(".*\\(\\) VV[DPZN].*"),
        std::regex(".*(VHP|VHZ) VV.*"),
        std::regex(".*VH(D|G|N|P|Z) (RB )*VBN.*"),
        std::regex(".*MD (RB )*VB(RB )* VVN.*"),
        std::regex("[^IW.]*VB(D|P|Z) (RB )*VV[ND].*"),
        std::regex("(RB )*PP (RB )*V.*"),
        std::regex(".*VVG (NP )*(CC )*(NP ).*"),
    };
    return patterns;
}

const std::unordered_set<std::string>& modal_verbs() {
    static const std::unordered_set<std::string> modals = {
        "can", "could", "may", "might", "must", "shall", "should", "will", "would"};
    return modals;
}

void add_ngram_evidence(std::set<std::string>& out, const std::vector<std::string>& stems) {
    for (std::size_t i = 0; i < stems.size(); ++i) {
        out.insert("lf:1g:" + stems[i]);
        if (i + 1 < stems.size()) out.insert("lf:2g:" + stems[i] + "_" + stems[i + 1]);
        if (i + 2 < stems.size())
            out.insert("lf:3g:" + stems[i] + "_" + stems[i + 1] + "_" + stems[i + 2]);
    }
}

} // namespace

std::set<std::string> linguistic_features(const corpus::Paper& paper,
                                          const corpus::Reference& ref,
                                          const std::vector<corpus::ReferenceContext>& contexts,
                                          const annotations::AnnotationSet* annotations) {
    std::set<std::string> evidence;

    for (const corpus::ReferenceContext& ctx : contexts) {
        // n-grams over the stemmed tokens of each window sentence.
        for (int idx : ctx.window)
            add_ngram_evidence(evidence, text::tokenize_and_stem(paper.sentence(idx)));

        // Word-level cues from the reference sentence itself.
        const std::vector<std::string> ref_tokens =
            text::tokenize(paper.sentence(ctx.sentence_index));
        for (const std::string& tok : ref_tokens) {
            if (tok == "but") evidence.insert("lf:hasbut");
            if (modal_verbs().contains(tok)) evidence.insert("lf:modal");
        }

        if (annotations == nullptr) continue;

        const annotations::SentenceAnnotations* ref_ann =
            annotations->find(paper.id, ctx.sentence_index);
        if (ref_ann != nullptr) {
            if (ref_ann->pos_tags.size() != ref_ann->tokens.size())
                throw ValidationError("pos_tags/tokens misaligned for paper '" + paper.id +
                                      "' sentence " + std::to_string(ctx.sentence_index));
            for (const std::string& tag : ref_ann->pos_tags) evidence.insert("lf:pos:" + tag);
            if (ref_ann->main_verb) {
                evidence.insert("lf:mainv:" + *ref_ann->main_verb);
                for (std::size_t i = 0; i < ref_ann->tokens.size(); ++i) {
                    if (ref_ann->tokens[i] == *ref_ann->main_verb) {
                        evidence.insert("lf:tense:" + ref_ann->pos_tags[i]);
                        break;
                    }
                }
            }
            const std::string joined = ref_ann->joined_tags();
            for (std::size_t p = 0; p < posp_patterns().size(); ++p)
                if (std::regex_match(joined, posp_patterns()[p]))
                    evidence.insert("lf:posp:" + std::to_string(p + 1));
        }

        // Dependencies come from the whole context window.
        for (int idx : ctx.window) {
            const annotations::SentenceAnnotations* ann = annotations->find(paper.id, idx);
            if (ann == nullptr) continue;
            for (const auto& dep : ann->dependencies)
                evidence.insert("lf:dep:" + dep[0] + "(" + dep[1] + "," + dep[2] + ")");
        }
    }
    return evidence;
}

CiterIndex build_citer_index(const corpus::CitationGraph& graph) {
    CiterIndex citers(graph.nodes.size());
    for (const corpus::CitationEdge& e : graph.edges)
        citers[static_cast<std::size_t>(e.cited)].insert(e.citing);
    return citers;
}

MiscFeatures misc_features(const corpus::Corpus& corpus_, const corpus::Paper& paper,
                           const corpus::Reference& ref, const corpus::CitationGraph& graph) {
    return misc_features(corpus_, paper, ref, graph, build_citer_index(graph));
}

MiscFeatures misc_features(const corpus::Corpus& corpus_, const corpus::Paper& paper,
                           const corpus::Reference& ref, const corpus::CitationGraph& graph,
                           const CiterIndex& citers) {
    MiscFeatures f;
    if (!ref.target_id) return f;
    const corpus::Paper* target = corpus_.find(*ref.target_id);
    if (target == nullptr) return f;

    auto citing_idx = graph.index.find(paper.id);
    auto cited_idx = graph.index.find(target->id);
    if (citing_idx != graph.index.end() && cited_idx != graph.index.end()) {
        const std::set<int>& all = citers[static_cast<std::size_t>(cited_idx->second)];
        f.global_count =
            static_cast<double>(all.size() - (all.contains(citing_idx->second) ? 1 : 0));
    }

    const std::set<std::string> authors(paper.authors.begin(), paper.authors.end());
    for (const std::string& a : target->authors) {
        if (authors.contains(a)) {
            f.self_citation = 1.0;
            break;
        }
    }

    // Negative gaps (citing an in-press later paper) are clamped so the
    // max-normalized column stays inside [0,1].
    f.year_gap = std::max(0.0, static_cast<double>(paper.year - target->year));

    auto resolved_targets = [](const corpus::Paper& p) {
        std::set<std::string> ids;
        for (const corpus::Reference& r : p.references)
            if (r.target_id) ids.insert(*r.target_id);
        return ids;
    };
    // The cited paper is excluded from the citing side's set: it can never
    // appear on the cited side (no self-citations), so keeping it would put
    // a ceiling below 1 on the overlap.
    std::set<std::string> r_i = resolved_targets(paper);
    r_i.erase(target->id);
    const std::set<std::string> r_j = resolved_targets(*target);
    std::size_t intersection = 0;
    for (const std::string& id : r_i)
        if (r_j.contains(id)) ++intersection;
    const std::size_t unions = r_i.size() + r_j.size() - intersection;
    f.co_citation = unions == 0 ? 0.0
                                : static_cast<double>(intersection) / static_cast<double>(unions);
    return f;
}

Extraction extract_pair_features(const corpus::Corpus& corpus_,
                                 const corpus::CitationGraph& graph,
                                 const annotations::AnnotationSet* annotations,
                                 const GroupToggles& toggles) {
    if (!toggles.any()) throw ValidationError("at least one feature group must be enabled");

    Extraction out;
    out.toggles = toggles;
    out.annotated = annotations != nullptr && !annotations->empty();

    const CiterIndex citers = toggles.ms ? build_citer_index(graph) : CiterIndex{};
    for (const corpus::Paper& paper : corpus_.papers()) {
        for (const corpus::Reference& ref : paper.references) {
            PairFeatures pf;
            pf.id = {paper.id, ref.key};

            std::vector<corpus::ReferenceContext> contexts;
            if (toggles.cf || toggles.sf || toggles.lf)
                contexts = corpus::extract_contexts(paper, ref);

            if (toggles.cf) pf.cf = context_features(paper, ref, contexts);
            if (toggles.sf) pf.sf = similarity_features(paper, ref, contexts);
            if (toggles.ff) pf.ff = frequency_features(paper, ref);
            if (toggles.pf) pf.pf = position_features(paper, ref);
            if (toggles.lf)
                pf.lf = linguistic_features(paper, ref, contexts,
                                            out.annotated ? annotations : nullptr);
            if (toggles.ms) pf.ms = misc_features(corpus_, paper, ref, graph, citers);

            out.pairs.push_back(std::move(pf));
        }
    }
    return out;
}

std::vector<std::string> dense_column_names(const GroupToggles& toggles) {
    std::vector<std::string> names;
    if (toggles.cf)
        names.insert(names.end(), {"cf:alone", "cf:first", "cf:relevant", "cf:recent",
                                   "cf:extreme", "cf:comp"});
    if (toggles.sf)
        names.insert(names.end(),
                     {"sf:t_title", "sf:t_abs", "sf:t_intro", "sf:t_concl", "sf:t_rest",
                      "sf:rc_title", "sf:rc_abs", "sf:rc_intro", "sf:rc_concl", "sf:rc_rest"});
    if (toggles.ff)
        names.insert(names.end(), {"ff:whole", "ff:intro", "ff:rel", "ff:rest", "ff:sec"});
    if (toggles.pf)
        names.insert(names.end(), {"pf:begin", "pf:end", "pf:mean", "pf:std"});
    if (toggles.ms)
        names.insert(names.end(), {"ms:gcount", "ms:selfc", "ms:time", "ms:cocite"});
    return names;
}

namespace {

std::vector<double> dense_values(const PairFeatures& p, const GroupToggles& toggles) {
    std::vector<double> v;
    if (toggles.cf) {
        const ContextFeatures& f = *p.cf;
        v.insert(v.end(), {f.alone, f.first, f.relevant, f.recent, f.extreme, f.comparison});
    }
    if (toggles.sf) {
        const SimilarityFeatures& f = *p.sf;
        v.insert(v.end(), {f.t_title, f.t_abstract, f.t_intro, f.t_conclusion, f.t_rest,
                           f.rc_title, f.rc_abstract, f.rc_intro, f.rc_conclusion, f.rc_rest});
    }
    if (toggles.ff) {
        const FrequencyFeatures& f = *p.ff;
        v.insert(v.end(), {f.whole, f.intro, f.related, f.rest, f.sections});
    }
    if (toggles.pf) {
        const PositionFeatures& f = *p.pf;
        v.insert(v.end(), {f.begin, f.end, f.mean, f.stddev});
    }
    if (toggles.ms) {
        const MiscFeatures& f = *p.ms;
        v.insert(v.end(), {f.global_count, f.self_citation, f.year_gap, f.co_citation});
    }
    return v;
}

bool is_ngram(const std::string& name) {
    return name.starts_with("lf:1g:") || name.starts_with("lf:2g:") ||
           name.starts_with("lf:3g:");
}

} // namespace

FeatureMatrix assemble_feature_matrix(const Extraction& extraction) {
    if (extraction.pairs.empty())
        throw ValidationError("cannot assemble a feature matrix from zero pairs");

    const GroupToggles& toggles = extraction.toggles;
    FeatureMatrix matrix;
    matrix.columns = dense_column_names(toggles);

    std::set<std::string> boolean_columns;
    if (toggles.lf) {
        std::map<std::string, int> pair_counts;
        for (const PairFeatures& p : extraction.pairs)
            for (const std::string& name : p.lf) ++pair_counts[name];

        // n-grams: seen in >= kNgramMinPairs pairs, capped by pair frequency.
        std::vector<std::pair<int, std::string>> ngrams;
        for (const auto& [name, count] : pair_counts) {
            if (is_ngram(name)) {
                if (count >= kNgramMinPairs) ngrams.emplace_back(-count, name);
            } else {
                boolean_columns.insert(name);
            }
        }
        std::sort(ngrams.begin(), ngrams.end());
        if (static_cast<int>(ngrams.size()) > kNgramMaxColumns)
            ngrams.resize(kNgramMaxColumns);
        for (const auto& [neg_count, name] : ngrams) boolean_columns.insert(name);

        boolean_columns.insert("lf:modal");
        boolean_columns.insert("lf:hasbut");
        if (extraction.annotated)
            for (int p = 1; p <= 7; ++p) boolean_columns.insert("lf:posp:" + std::to_string(p));
    }
    for (const std::string& name : boolean_columns) matrix.columns.push_back(name);

    std::map<std::string, std::size_t> column_index;
    for (std::size_t c = 0; c < matrix.columns.size(); ++c)
        column_index.emplace(matrix.columns[c], c);

    matrix.pairs.reserve(extraction.pairs.size());
    matrix.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(extraction.pairs.size()),
                                          static_cast<Eigen::Index>(matrix.columns.size()));
    for (std::size_t r = 0; r < extraction.pairs.size(); ++r) {
        const PairFeatures& p = extraction.pairs[r];
        matrix.pairs.push_back(p.id);
        const std::vector<double> dense = dense_values(p, toggles);
        for (std::size_t c = 0; c < dense.size(); ++c)
            matrix.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = dense[c];
        for (const std::string& name : p.lf) {
            auto it = column_index.find(name);
            if (it != column_index.end())
                matrix.values(static_cast<Eigen::Index>(r),
                              static_cast<Eigen::Index>(it->second)) = 1.0;
        }
    }

    for (Eigen::Index c = 0; c < matrix.values.cols(); ++c) {
        const double max = matrix.values.col(c).maxCoeff();
        if (max > 0.0) matrix.values.col(c) /= max;
    }
    return matrix;
}

} // namespace gralap::features
