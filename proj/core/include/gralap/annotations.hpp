#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gralap::annotations {

/// Pre-computed tagger/parser output for one sentence, supplied via the
/// sidecar file. pos_tags is aligned 1:1 with tokens.
struct SentenceAnnotations {
    std::vector<std::string> tokens;
    std::vector<std::string> pos_tags;
    std::optional<std::string> main_verb;
    std::vector<std::array<std::string, 3>> dependencies; ///< relation, head, dependent

    std::string joined_tags() const; ///< tags joined by single spaces
};

class AnnotationSet {
public:
    const SentenceAnnotations* find(const std::string& paper_id, int sentence) const;
    void insert(std::string paper_id, int sentence, SentenceAnnotations ann);
    bool empty() const { return sentences_.empty(); }
    std::size_t size() const { return sentences_.size(); }

private:
    std::map<std::pair<std::string, int>, SentenceAnnotations> sentences_;
};

/// Parses the annotations sidecar (JSON Lines keyed by paper id and global
/// sentence index). Throws ParseError on malformed records and
/// ValidationError on tag/token misalignment or duplicate keys.
AnnotationSet parse_annotations(std::istream& input);

} // namespace gralap::annotations
