#include "gralap/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

namespace gralap::corpus {

using nlohmann::json;

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool contains_word(const std::string& haystack, std::string_view needle) {
    return haystack.find(needle) != std::string::npos;
}

} // namespace

std::string_view to_string(SectionCategory category) {
    switch (category) {
        case SectionCategory::Abstract: return "abstract";
        case SectionCategory::Introduction: return "introduction";
        case SectionCategory::RelatedWork: return "related_work";
        case SectionCategory::Conclusion: return "conclusion";
        case SectionCategory::Rest: return "rest";
    }
    return "rest";
}

SectionCategory map_section_heading(std::string_view heading) {
    const std::string h = lowercase(heading);
    if (contains_word(h, "abstract")) return SectionCategory::Abstract;
    if (contains_word(h, "introduction")) return SectionCategory::Introduction;
    if (contains_word(h, "related") || contains_word(h, "previous work") ||
        contains_word(h, "background"))
        return SectionCategory::RelatedWork;
    if (contains_word(h, "conclusion") || contains_word(h, "summary") ||
        contains_word(h, "future work"))
        return SectionCategory::Conclusion;
    return SectionCategory::Rest;
}

int Paper::sentence_count() const {
    int n = 0;
    for (const Section& s : sections) n += static_cast<int>(s.sentences.size());
    return n;
}

const std::string& Paper::sentence(int global_index) const {
    int offset = global_index;
    for (const Section& s : sections) {
        if (offset < static_cast<int>(s.sentences.size())) return s.sentences[offset];
        offset -= static_cast<int>(s.sentences.size());
    }
    throw ValidationError("sentence index " + std::to_string(global_index) +
                          " out of range in paper '" + id + "'");
}

SectionCategory Paper::category_of_sentence(int global_index) const {
    int offset = global_index;
    for (const Section& s : sections) {
        if (offset < static_cast<int>(s.sentences.size()))
            return map_section_heading(s.heading);
        offset -= static_cast<int>(s.sentences.size());
    }
    throw ValidationError("sentence index " + std::to_string(global_index) +
                          " out of range in paper '" + id + "'");
}

Corpus::Corpus(std::vector<Paper> papers) : papers_(std::move(papers)) {
    for (int i = 0; i < static_cast<int>(papers_.size()); ++i) {
        auto [it, inserted] = index_.emplace(papers_[i].id, i);
        if (!inserted)
            throw ValidationError("duplicate paper id '" + papers_[i].id + "'");
    }
}

const Paper* Corpus::find(std::string_view id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &papers_[it->second];
}

std::optional<int> Corpus::index_of(std::string_view id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

namespace {

Paper paper_from_json(const json& record, std::size_t line) {
    auto require = [&](const char* field) -> const json& {
        auto it = record.find(field);
        if (it == record.end())
            throw ParseError(std::string("missing field '") + field + "'", line);
        return *it;
    };

    Paper p;
    p.id = require("id").get<std::string>();
    if (p.id.empty()) throw ParseError("empty paper id", line);
    p.title = require("title").get<std::string>();
    p.year = require("year").get<int>();
    for (const json& a : require("authors")) p.authors.push_back(a.get<std::string>());
    if (auto it = record.find("venue"); it != record.end() && !it->is_null())
        p.venue = it->get<std::string>();

    for (const json& s : require("sections")) {
        Section sec;
        sec.heading = s.at("heading").get<std::string>();
        for (const json& sent : s.at("sentences"))
            sec.sentences.push_back(sent.get<std::string>());
        p.sections.push_back(std::move(sec));
    }

    const int total = p.sentence_count();
    for (const json& r : require("references")) {
        Reference ref;
        ref.key = r.at("key").get<std::string>();
        if (auto it = r.find("target_id"); it != r.end() && !it->is_null())
            ref.target_id = it->get<std::string>();
        ref.target_title = r.at("target_title").get<std::string>();
        int prev = -1;
        for (const json& m : r.at("mentions")) {
            Mention mention;
            mention.sentence = m.at("sentence").get<int>();
            mention.alone = m.at("alone").get<bool>();
            mention.first = m.at("first").get<bool>();
            if (mention.sentence < 0 || mention.sentence >= total)
                throw ValidationError("mention sentence " + std::to_string(mention.sentence) +
                                      " out of range in paper '" + p.id + "', reference '" +
                                      ref.key + "'");
            if (mention.sentence < prev)
                throw ValidationError("mention sentences not ascending in paper '" + p.id +
                                      "', reference '" + ref.key + "'");
            prev = mention.sentence;
            ref.mentions.push_back(mention);
        }
        p.references.push_back(std::move(ref));
    }
    return p;
}

} // namespace

Corpus parse_corpus(std::istream& input) {
    std::vector<Paper> papers;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(input, line)) {
        ++lineno;
        if (line.empty()) continue;
        json record;
        try {
            record = json::parse(line);
            if (!record.is_object()) throw ParseError("record is not a JSON object", lineno);
            papers.push_back(paper_from_json(record, lineno));
        } catch (const json::exception& e) {
            throw ParseError(e.what(), lineno);
        }
    }

    Corpus corpus(std::move(papers));

    // Resolve cross-references; targets outside the corpus lose their id but
    // keep the title. A reference resolving to its own paper would put a
    // self-loop in the citation graph, which the graph forbids.
    std::vector<Paper> resolved = corpus.papers();
    for (Paper& p : resolved) {
        for (Reference& r : p.references) {
            if (!r.target_id) continue;
            if (*r.target_id == p.id)
                throw ValidationError("paper '" + p.id + "' references itself via '" +
                                      r.key + "'");
            if (!corpus.find(*r.target_id)) r.target_id.reset();
        }
    }
    return Corpus(std::move(resolved));
}

void serialize_corpus(const Corpus& corpus, std::ostream& out) {
    for (const Paper& p : corpus.papers()) {
        json record;
        record["id"] = p.id;
        record["title"] = p.title;
        record["year"] = p.year;
        record["authors"] = p.authors;
        if (p.venue) record["venue"] = *p.venue;
        json sections = json::array();
        for (const Section& s : p.sections)
            sections.push_back({{"heading", s.heading}, {"sentences", s.sentences}});
        record["sections"] = std::move(sections);
        json references = json::array();
        for (const Reference& r : p.references) {
            json ref;
            ref["key"] = r.key;
            if (r.target_id) ref["target_id"] = *r.target_id;
            ref["target_title"] = r.target_title;
            json mentions = json::array();
            for (const Mention& m : r.mentions)
                mentions.push_back(
                    {{"sentence", m.sentence}, {"alone", m.alone}, {"first", m.first}});
            ref["mentions"] = std::move(mentions);
            references.push_back(std::move(ref));
        }
        record["references"] = std::move(references);
        out << record.dump() << '\n';
    }
}

std::vector<ReferenceContext> extract_contexts(const Paper& paper, const Reference& ref) {
    const int total = paper.sentence_count();
    std::vector<ReferenceContext> contexts;
    contexts.reserve(ref.mentions.size());
    for (const Mention& m : ref.mentions) {
        if (m.sentence < 0 || m.sentence >= total)
            throw ValidationError("mention sentence " + std::to_string(m.sentence) +
                                  " out of range in paper '" + paper.id + "'");
        ReferenceContext ctx;
        ctx.sentence_index = m.sentence;
        for (int i = m.sentence - 1; i <= m.sentence + 1; ++i)
            if (i >= 0 && i < total) ctx.window.push_back(i);
        ctx.section = paper.category_of_sentence(m.sentence);
        contexts.push_back(std::move(ctx));
    }
    return contexts;
}

bool CitationGraph::weighted() const {
    return !edges.empty() &&
           std::all_of(edges.begin(), edges.end(),
                       [](const CitationEdge& e) { return e.weight.has_value(); });
}

CitationGraph build_citation_graph(const Corpus& corpus, const EdgeWeights* weights) {
    CitationGraph g;
    g.nodes.reserve(corpus.size());
    for (const Paper& p : corpus.papers()) {
        g.index.emplace(p.id, static_cast<int>(g.nodes.size()));
        g.nodes.push_back(p.id);
    }

    std::size_t used_weights = 0;
    for (const Paper& p : corpus.papers()) {
        const int citing = g.index.at(p.id);
        for (const Reference& r : p.references) {
            if (!r.target_id) continue;
            auto it = g.index.find(*r.target_id);
            if (it == g.index.end())
                throw ValidationError("reference target '" + *r.target_id +
                                      "' not in corpus");
            CitationEdge e{citing, it->second, std::nullopt};
            if (e.citing == e.cited)
                throw ValidationError("self-loop citation on paper '" + p.id + "'");
            if (weights != nullptr) {
                auto w = weights->find({p.id, *r.target_id});
                if (w == weights->end())
                    throw ValidationError("no weight for edge " + p.id + " -> " +
                                          *r.target_id);
                if (!(w->second >= 1.0 && w->second <= 5.0))
                    throw ValidationError("weight " + std::to_string(w->second) +
                                          " outside [1,5] for edge " + p.id + " -> " +
                                          *r.target_id);
                e.weight = w->second;
                ++used_weights;
            }
            g.edges.push_back(e);
        }
    }

    if (weights != nullptr) {
        // Every supplied key must correspond to at least one resolved edge.
        std::set<std::pair<int, int>> present;
        for (const CitationEdge& e : g.edges) present.emplace(e.citing, e.cited);
        for (const auto& [key, value] : *weights) {
            const auto& [citing, cited] = key;
            auto ci = g.index.find(citing);
            auto ti = g.index.find(cited);
            if (ci == g.index.end() || ti == g.index.end() ||
                !present.contains({ci->second, ti->second}))
                throw ValidationError("weight supplied for nonexistent edge " + citing +
                                      " -> " + cited);
        }
    }
    return g;
}

} // namespace gralap::corpus
