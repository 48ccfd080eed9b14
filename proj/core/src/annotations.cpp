#include "gralap/annotations.hpp"

#include <istream>

#include <json.hpp>

#include "gralap/errors.hpp"

namespace gralap::annotations {

using nlohmann::json;

std::string SentenceAnnotations::joined_tags() const {
    std::string joined;
    for (std::size_t i = 0; i < pos_tags.size(); ++i) {
        if (i > 0) joined += ' ';
        joined += pos_tags[i];
    }
    return joined;
}

const SentenceAnnotations* AnnotationSet::find(const std::string& paper_id,
                                               int sentence) const {
    auto it = sentences_.find({paper_id, sentence});
    return it == sentences_.end() ? nullptr : &it->second;
}

void AnnotationSet::insert(std::string paper_id, int sentence, SentenceAnnotations ann) {
    if (ann.pos_tags.size() != ann.tokens.size())
        throw gralap::ValidationError("pos_tags/tokens misaligned for paper '" + paper_id +
                                      "' sentence " + std::to_string(sentence));
    auto [it, inserted] = sentences_.emplace(std::make_pair(std::move(paper_id), sentence),
                                             std::move(ann));
    if (!inserted)
        throw gralap::ValidationError("duplicate annotation for paper '" + it->first.first +
                                      "' sentence " + std::to_string(sentence));
}

AnnotationSet parse_annotations(std::istream& input) {
    AnnotationSet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(input, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            json record = json::parse(line);
            SentenceAnnotations ann;
            for (const json& t : record.at("tokens")) ann.tokens.push_back(t.get<std::string>());
            for (const json& t : record.at("pos_tags"))
                ann.pos_tags.push_back(t.get<std::string>());
            if (auto it = record.find("main_verb"); it != record.end() && !it->is_null())
                ann.main_verb = it->get<std::string>();
            if (auto it = record.find("dependencies"); it != record.end()) {
                for (const json& d : *it) {
                    if (d.size() != 3)
                        throw gralap::ParseError("dependency is not a triple", lineno);
                    ann.dependencies.push_back({d[0].get<std::string>(),
                                                d[1].get<std::string>(),
                                                d[2].get<std::string>()});
                }
            }
            set.insert(record.at("paper").get<std::string>(),
                       record.at("sentence").get<int>(), std::move(ann));
        } catch (const json::exception& e) {
            throw gralap::ParseError(e.what(), lineno);
        }
    }
    return set;
}

} // namespace gralap::annotations
