#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gralap/errors.hpp"

namespace gralap::corpus {

enum class SectionCategory { Abstract, Introduction, RelatedWork, Conclusion, Rest };

inline constexpr int kSectionCategoryCount = 5;

std::string_view to_string(SectionCategory category);

/// Maps a raw section heading onto its broad category using
/// case-insensitive keyword rules. Total: anything unmatched is Rest.
SectionCategory map_section_heading(std::string_view heading);

/// One occurrence of a reference marker inside the citing paper.
struct Mention {
    int sentence = 0;    ///< global sentence index within the citing paper
    bool alone = false;  ///< sole reference in its citing group
    bool first = false;  ///< first of a bracketed group, e.g. [2] in [2,4,6]
    auto operator<=>(const Mention&) const = default;
};

struct Reference {
    std::string key;                      ///< local marker, unique per paper
    std::optional<std::string> target_id; ///< set only when resolved in-corpus
    std::string target_title;
    std::vector<Mention> mentions;
    auto operator<=>(const Reference&) const = default;
};

struct Section {
    std::string heading;
    std::vector<std::string> sentences;
    auto operator<=>(const Section&) const = default;
};

/// One article. Sentences carry global 0-based indices in document order,
/// contiguous across sections.
struct Paper {
    std::string id;
    std::string title;
    int year = 0;
    std::vector<std::string> authors;
    std::optional<std::string> venue;
    std::vector<Section> sections;
    std::vector<Reference> references;

    auto operator<=>(const Paper&) const = default;

    int sentence_count() const;
    const std::string& sentence(int global_index) const;
    SectionCategory category_of_sentence(int global_index) const;
};

/// Three-sentence window around one mention, clipped at document edges.
struct ReferenceContext {
    int sentence_index = 0;
    std::vector<int> window; ///< global indices, ascending, contains sentence_index
    SectionCategory section = SectionCategory::Rest;
};

class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<Paper> papers);

    const std::vector<Paper>& papers() const { return papers_; }
    std::size_t size() const { return papers_.size(); }

    const Paper* find(std::string_view id) const;
    std::optional<int> index_of(std::string_view id) const;

    bool operator==(const Corpus& other) const { return papers_ == other.papers_; }

private:
    std::vector<Paper> papers_;
    std::map<std::string, int, std::less<>> index_;
};

/// Parses the JSON-Lines corpus format. References whose target_id does
/// not resolve within the corpus are kept with target_id cleared.
/// Throws ParseError (malformed record, with line number) or
/// ValidationError (duplicate id, bad mention index, self-reference).
Corpus parse_corpus(std::istream& input);

/// Inverse of parse_corpus up to key ordering; parse(serialize(c)) == c.
void serialize_corpus(const Corpus& corpus, std::ostream& out);

/// One context per mention, in mention order.
std::vector<ReferenceContext> extract_contexts(const Paper& paper, const Reference& ref);

struct CitationEdge {
    int citing = 0;
    int cited = 0;
    std::optional<double> weight; ///< intensity in [1,5] when present
};

/// Directed paper-level citation graph. Parallel edges are possible when a
/// paper lists the same target under two reference keys. No self-loops.
struct CitationGraph {
    std::vector<std::string> nodes; ///< paper ids, corpus order
    std::vector<CitationEdge> edges;
    std::map<std::string, int, std::less<>> index;

    bool weighted() const;
};

using EdgeWeights = std::map<std::pair<std::string, std::string>, double>;

/// Nodes = all papers; one edge per resolved reference. When `weights` is
/// given it must cover every resolved edge, with values in [1,5].
CitationGraph build_citation_graph(const Corpus& corpus, const EdgeWeights* weights = nullptr);

} // namespace gralap::corpus
