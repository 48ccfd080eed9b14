#include "gralap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace gralap::metrics {

namespace {

ScoreTable table_from(const corpus::CitationGraph& graph, std::string measure,
                      const std::vector<double>& values) {
    ScoreTable t;
    t.measure = std::move(measure);
    t.scores.reserve(graph.nodes.size());
    for (std::size_t i = 0; i < graph.nodes.size(); ++i)
        t.scores.emplace_back(graph.nodes[i], values[i]);
    return t;
}

void require_weighted(const corpus::CitationGraph& graph, const char* what) {
    for (const corpus::CitationEdge& e : graph.edges)
        if (!e.weight)
            throw ValidationError(std::string(what) + " requires a fully weighted graph");
}

} // namespace

ScoreTable raw_cite(const corpus::CitationGraph& graph) {
    std::vector<double> in_degree(graph.nodes.size(), 0.0);
    for (const corpus::CitationEdge& e : graph.edges) in_degree[e.cited] += 1.0;
    return table_from(graph, "rawcite", in_degree);
}

ScoreTable inf_cite(const corpus::CitationGraph& graph) {
    require_weighted(graph, "inf_cite");
    std::vector<double> in_weight(graph.nodes.size(), 0.0);
    for (const corpus::CitationEdge& e : graph.edges) in_weight[e.cited] += *e.weight;
    return table_from(graph, "infcite", in_weight);
}

ScoreTable pagerank(const corpus::CitationGraph& graph, const PageRankOptions& options) {
    const std::size_t n = graph.nodes.size();
    if (n == 0) throw ValidationError("pagerank requires a non-empty graph");
    if (options.weighted) require_weighted(graph, "weighted pagerank");

    // Out-mass per node: edge count, or total outgoing intensity.
    std::vector<double> out_mass(n, 0.0);
    for (const corpus::CitationEdge& e : graph.edges)
        out_mass[e.citing] += options.weighted ? *e.weight : 1.0;

    const double q = options.damping;
    std::vector<double> rank(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n, 0.0);

    ScoreTable t;
    t.measure = options.weighted ? "infpr" : "rawpr";
    t.converged = false;
    for (int it = 0; it < options.max_iterations; ++it) {
        double dangling = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (out_mass[i] == 0.0) dangling += rank[i];
        const double base = (1.0 - q) / static_cast<double>(n) +
                            q * dangling / static_cast<double>(n);
        std::fill(next.begin(), next.end(), base);
        for (const corpus::CitationEdge& e : graph.edges) {
            const double share = options.weighted ? *e.weight : 1.0;
            next[e.cited] += q * rank[e.citing] * share / out_mass[e.citing];
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::abs(next[i] - rank[i]));
        rank.swap(next);
        if (delta < options.tolerance) {
            t.converged = true;
            break;
        }
    }

    t.scores.reserve(n);
    for (std::size_t i = 0; i < n; ++i) t.scores.emplace_back(graph.nodes[i], rank[i]);
    return t;
}

int h_index(const std::vector<long long>& citation_counts) {
    std::vector<long long> sorted = citation_counts;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    int h = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] >= static_cast<long long>(i) + 1) h = static_cast<int>(i) + 1;
    return h;
}

int hif_index(const AuthorProfile& profile) {
    std::vector<long long> rounded;
    rounded.reserve(profile.influence.size());
    for (double inf : profile.influence) rounded.push_back(std::llround(inf));
    return h_index(rounded);
}

std::vector<AuthorProfile> author_profiles(const corpus::Corpus& corpus,
                                           const corpus::CitationGraph& graph) {
    std::vector<double> in_degree(graph.nodes.size(), 0.0);
    std::vector<double> in_weight(graph.nodes.size(), 0.0);
    const bool weighted = graph.weighted();
    for (const corpus::CitationEdge& e : graph.edges) {
        in_degree[e.cited] += 1.0;
        if (weighted) in_weight[e.cited] += *e.weight;
    }

    std::map<std::string, AuthorProfile> by_author;
    for (const corpus::Paper& p : corpus.papers()) {
        auto node = graph.index.find(p.id);
        if (node == graph.index.end()) continue;
        for (const std::string& author : p.authors) {
            AuthorProfile& profile = by_author[author];
            profile.author = author;
            profile.papers.push_back(p.id);
            profile.citation_counts.push_back(
                static_cast<long long>(in_degree[node->second]));
            profile.influence.push_back(weighted ? in_weight[node->second] : 0.0);
        }
    }

    std::vector<AuthorProfile> profiles;
    profiles.reserve(by_author.size());
    for (auto& [author, profile] : by_author) profiles.push_back(std::move(profile));
    return profiles;
}

JournalYearStats journal_year_stats(const corpus::Corpus& corpus,
                                    const corpus::CitationGraph& graph,
                                    const std::string& journal, int year) {
    JournalYearStats stats;
    stats.journal = journal;
    stats.year = year;

    auto in_window = [&](const corpus::Paper& p) {
        return p.venue == journal && (p.year == year - 1 || p.year == year - 2);
    };

    for (const corpus::Paper& p : corpus.papers())
        if (in_window(p)) ++stats.citable_items;

    for (const corpus::CitationEdge& e : graph.edges) {
        const corpus::Paper& citing = corpus.papers()[e.citing];
        const corpus::Paper& cited = corpus.papers()[e.cited];
        if (citing.year != year || !in_window(cited)) continue;
        ++stats.citations_received;
        if (e.weight) stats.weighted_citations += *e.weight;
        if (citing.venue == journal) ++stats.self_journal_citations;
    }
    return stats;
}

std::optional<double> impact_factor(const JournalYearStats& stats, bool weighted) {
    if (stats.citable_items == 0) return std::nullopt;
    const double numerator = weighted ? stats.weighted_citations
                                      : static_cast<double>(stats.citations_received);
    return numerator / static_cast<double>(stats.citable_items);
}

double self_journal_fraction(const corpus::Corpus& corpus,
                             const corpus::CitationGraph& graph,
                             const std::string& journal) {
    long long received = 0;
    long long internal = 0;
    for (const corpus::CitationEdge& e : graph.edges) {
        const corpus::Paper& cited = corpus.papers()[e.cited];
        if (cited.venue != journal) continue;
        ++received;
        if (corpus.papers()[e.citing].venue == journal) ++internal;
    }
    if (received == 0) return 0.0;
    return static_cast<double>(internal) / static_cast<double>(received);
}

std::vector<StackingEntry> detect_stacking(const std::vector<JournalImpact>& journals) {
    if (journals.size() < 3)
        throw ValidationError("stacking detection needs at least 3 journals");

    std::vector<double> diffs;
    diffs.reserve(journals.size());
    for (const JournalImpact& j : journals)
        diffs.push_back(j.weighted_impact_factor - j.impact_factor);

    const double n = static_cast<double>(diffs.size());
    double mean = 0.0;
    for (double d : diffs) mean += d;
    mean /= n;
    double variance = 0.0;
    for (double d : diffs) variance += (d - mean) * (d - mean);
    variance /= n;
    const double stddev = std::sqrt(variance);

    std::vector<StackingEntry> entries;
    entries.reserve(journals.size());
    for (std::size_t i = 0; i < journals.size(); ++i) {
        StackingEntry e;
        e.journal = journals[i].journal;
        e.impact_factor = journals[i].impact_factor;
        e.weighted_impact_factor = journals[i].weighted_impact_factor;
        e.deviation = diffs[i] - mean;
        e.self_fraction = journals[i].self_fraction;
        e.flagged = stddev > 0.0 && std::abs(e.deviation) > 3.0 * stddev;
        entries.push_back(std::move(e));
    }
    return entries;
}

} // namespace gralap::metrics
