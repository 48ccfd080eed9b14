#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gralap/eval.hpp"
#include "gralap/metrics.hpp"
#include "support/synthetic.hpp"

using namespace gralap;
using namespace gralap::metrics;
using gralap::corpus::CitationEdge;
using gralap::corpus::CitationGraph;
using gralap::testsupport::Rng;

namespace {

CitationGraph make_graph(int n, std::vector<CitationEdge> edges) {
    CitationGraph g;
    for (int i = 0; i < n; ++i) {
        g.index.emplace("n" + std::to_string(i), i);
        g.nodes.push_back("n" + std::to_string(i));
    }
    g.edges = std::move(edges);
    return g;
}

// Straight-line power iteration, kept independent of metrics::pagerank.
std::vector<double> pagerank_oracle(int n, const std::vector<CitationEdge>& edges,
                                    bool weighted, double q, int iterations) {
    std::vector<double> rank(static_cast<std::size_t>(n), 1.0 / n);
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (const CitationEdge& e : edges)
        out[static_cast<std::size_t>(e.citing)] += weighted ? *e.weight : 1.0;
    for (int it = 0; it < iterations; ++it) {
        std::vector<double> next(static_cast<std::size_t>(n), 0.0);
        double dangling = 0.0;
        for (int i = 0; i < n; ++i)
            if (out[static_cast<std::size_t>(i)] == 0.0)
                dangling += rank[static_cast<std::size_t>(i)];
        for (int i = 0; i < n; ++i)
            next[static_cast<std::size_t>(i)] = (1.0 - q) / n + q * dangling / n;
        for (const CitationEdge& e : edges) {
            const double share = weighted ? *e.weight : 1.0;
            next[static_cast<std::size_t>(e.cited)] +=
                q * rank[static_cast<std::size_t>(e.citing)] * share /
                out[static_cast<std::size_t>(e.citing)];
        }
        rank.swap(next);
    }
    return rank;
}

} // namespace

TEST_CASE("citation counts") {
    SUBCASE("node without in-edges scores 0") {
        CitationGraph g = make_graph(2, {{0, 1, std::nullopt}});
        ScoreTable t = raw_cite(g);
        CHECK(t.scores[0].second == 0.0);
        CHECK(t.scores[1].second == 1.0);
    }
    SUBCASE("uniform unit weights make inf_cite equal raw_cite") {
        CitationGraph g =
            make_graph(3, {{0, 2, 1.0}, {1, 2, 1.0}, {0, 1, 1.0}});
        ScoreTable raw = raw_cite(g);
        ScoreTable inf = inf_cite(g);
        for (std::size_t i = 0; i < raw.scores.size(); ++i)
            CHECK(raw.scores[i].second == inf.scores[i].second);
    }
    SUBCASE("in-weights {2,5,3} sum to 10") {
        CitationGraph g =
            make_graph(4, {{0, 3, 2.0}, {1, 3, 5.0}, {2, 3, 3.0}});
        ScoreTable inf = inf_cite(g);
        CHECK(inf.scores[3].second == 10.0);
    }
    SUBCASE("inf_cite on an unweighted edge is an error") {
        CitationGraph g = make_graph(2, {{0, 1, std::nullopt}});
        CHECK_THROWS_AS(inf_cite(g), ValidationError);
    }
    SUBCASE("scaling intensities scales inf_cite linearly") {
        CitationGraph g = make_graph(3, {{0, 2, 1.5}, {1, 2, 2.0}});
        CitationGraph g2 = make_graph(3, {{0, 2, 3.0}, {1, 2, 4.0}});
        ScoreTable a = inf_cite(g);
        ScoreTable b = inf_cite(g2);
        CHECK(b.scores[2].second == doctest::Approx(2.0 * a.scores[2].second));
    }
}

TEST_CASE("pagerank") {
    SUBCASE("single node without edges gets rank 1") {
        CitationGraph g = make_graph(1, {});
        ScoreTable t = pagerank(g);
        CHECK(t.scores[0].second == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(t.converged);
    }
    SUBCASE("two-node cycle splits evenly") {
        CitationGraph g = make_graph(2, {{0, 1, std::nullopt}, {1, 0, std::nullopt}});
        ScoreTable t = pagerank(g);
        CHECK(t.scores[0].second == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(t.scores[1].second == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("weighted three-node fixture matches the power-iteration oracle") {
        CitationGraph g =
            make_graph(3, {{0, 1, 1.0}, {0, 2, 5.0}, {1, 2, 2.0}});
        PageRankOptions opts;
        opts.weighted = true;
        ScoreTable t = pagerank(g, opts);
        std::vector<double> oracle = pagerank_oracle(3, g.edges, true, 0.85, 500);
        for (int i = 0; i < 3; ++i)
            CHECK(t.scores[static_cast<std::size_t>(i)].second ==
                  doctest::Approx(oracle[static_cast<std::size_t>(i)]).epsilon(1e-8));
    }
    SUBCASE("scores sum to 1") {
        Rng rng(61);
        std::vector<CitationEdge> edges;
        for (int i = 0; i < 40; ++i) {
            int a = rng.uniform_int(0, 19);
            int b = rng.uniform_int(0, 19);
            if (a != b) edges.push_back({a, b, std::nullopt});
        }
        CitationGraph g = make_graph(20, std::move(edges));
        ScoreTable t = pagerank(g);
        double sum = 0.0;
        for (const auto& [id, score] : t.scores) sum += score;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("uniform weights reduce to the unweighted variant") {
        Rng rng(67);
        std::vector<CitationEdge> unweighted, weighted;
        for (int i = 0; i < 30; ++i) {
            int a = rng.uniform_int(0, 11);
            int b = rng.uniform_int(0, 11);
            if (a == b) continue;
            unweighted.push_back({a, b, std::nullopt});
            weighted.push_back({a, b, 3.0});
        }
        CitationGraph gu = make_graph(12, std::move(unweighted));
        CitationGraph gw = make_graph(12, std::move(weighted));
        ScoreTable tu = pagerank(gu);
        PageRankOptions w;
        w.weighted = true;
        ScoreTable tw = pagerank(gw, w);
        for (std::size_t i = 0; i < tu.scores.size(); ++i)
            CHECK(std::abs(tu.scores[i].second - tw.scores[i].second) < 1e-9);
    }
    SUBCASE("rescaling every intensity leaves the weighted ranking unchanged") {
        CitationGraph g1 = make_graph(4, {{0, 1, 1.0}, {0, 2, 2.5}, {3, 1, 1.5}});
        CitationGraph g2 = make_graph(4, {{0, 1, 2.0}, {0, 2, 5.0}, {3, 1, 3.0}});
        PageRankOptions w;
        w.weighted = true;
        ScoreTable a = pagerank(g1, w);
        ScoreTable b = pagerank(g2, w);
        for (std::size_t i = 0; i < a.scores.size(); ++i)
            CHECK(std::abs(a.scores[i].second - b.scores[i].second) < 1e-12);
    }
    SUBCASE("empty graph is an error") {
        CitationGraph g;
        CHECK_THROWS_AS(pagerank(g), ValidationError);
    }
}

TEST_CASE("h-index") {
    CHECK(h_index({}) == 0);
    CHECK(h_index({0, 0}) == 0);
    CHECK(h_index({10}) == 1);
    CHECK(h_index({3, 3, 3, 3}) == 3);
    CHECK(h_index({5, 4, 3, 2, 1}) == 3);
}

TEST_CASE("hif-index") {
    SUBCASE("no papers gives 0") {
        AuthorProfile p;
        CHECK(hif_index(p) == 0);
    }
    SUBCASE("fractional influences {5.0, 3.2, 2.9, 0.5} give 3") {
        AuthorProfile p;
        p.influence = {5.0, 3.2, 2.9, 0.5};
        CHECK(hif_index(p) == 3);
    }
    SUBCASE("all-ones weights collapse hif to h") {
        Rng rng(71);
        for (int trial = 0; trial < 50; ++trial) {
            AuthorProfile p;
            const int papers = rng.uniform_int(1, 12);
            for (int i = 0; i < papers; ++i) {
                const int cites = rng.uniform_int(0, 15);
                p.citation_counts.push_back(cites);
                p.influence.push_back(static_cast<double>(cites)); // weight 1 per citation
            }
            CHECK(hif_index(p) == h_index(p.citation_counts));
        }
    }
    SUBCASE("raising an influence never lowers the index") {
        Rng rng(73);
        for (int trial = 0; trial < 30; ++trial) {
            AuthorProfile p;
            const int papers = rng.uniform_int(1, 10);
            for (int i = 0; i < papers; ++i) p.influence.push_back(rng.uniform(0.0, 12.0));
            const int before = hif_index(p);
            p.influence[static_cast<std::size_t>(rng.uniform_int(0, papers - 1))] += 2.0;
            CHECK(hif_index(p) >= before);
        }
    }
}

namespace {

corpus::Corpus journal_fixture() {
    using corpus::Mention;
    using corpus::Paper;
    using corpus::Reference;
    std::vector<Paper> papers;
    auto add_paper = [&](const std::string& id, const std::string& venue, int year,
                         std::vector<std::pair<std::string, double>> cites = {}) {
        Paper p;
        p.id = id;
        p.title = id;
        p.year = year;
        p.venue = venue;
        p.sections.push_back({"Body", {"text."}});
        for (const auto& [target, weight] : cites) {
            Reference r;
            r.key = "[" + target + "]";
            r.target_id = target;
            r.target_title = target;
            p.references.push_back(std::move(r));
        }
        papers.push_back(std::move(p));
    };
    // Journal J items inside the 2020 window: A1 (2019), A2 (2018), A3 (2019).
    add_paper("A1", "J", 2019);
    add_paper("A2", "J", 2018);
    add_paper("A3", "J", 2019);
    add_paper("A4", "J", 2015);
    add_paper("A5", "J", 2020);
    add_paper("C1", "K", 2020, {{"A1", 5.0}, {"A2", 2.0}});
    add_paper("C2", "J", 2020, {{"A1", 3.0}});
    add_paper("C3", "K", 2019, {{"A3", 1.0}});
    add_paper("C4", "K", 2020, {{"A4", 4.0}});
    return corpus::Corpus(std::move(papers));
}

corpus::CitationGraph journal_graph(const corpus::Corpus& c) {
    corpus::EdgeWeights w{{{"C1", "A1"}, 5.0},
                          {{"C1", "A2"}, 2.0},
                          {{"C2", "A1"}, 3.0},
                          {{"C3", "A3"}, 1.0},
                          {{"C4", "A4"}, 4.0}};
    return corpus::build_citation_graph(c, &w);
}

} // namespace

TEST_CASE("impact factor over a two-year window") {
    corpus::Corpus c = journal_fixture();
    corpus::CitationGraph g = journal_graph(c);
    JournalYearStats stats = journal_year_stats(c, g, "J", 2020);
    CHECK(stats.citable_items == 3);
    CHECK(stats.citations_received == 3);
    CHECK(stats.weighted_citations == 10.0);
    CHECK(stats.self_journal_citations == 1);

    CHECK(*impact_factor(stats, false) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*impact_factor(stats, true) == doctest::Approx(10.0 / 3.0).epsilon(1e-12));

    SUBCASE("uniform intensities scale the weighted factor uniformly") {
        JournalYearStats s2 = stats;
        s2.weighted_citations = 2.0 * stats.citations_received;
        CHECK(*impact_factor(s2, true) ==
              doctest::Approx(2.0 * *impact_factor(s2, false)).epsilon(1e-12));
    }
    SUBCASE("zero citable items reports absent") {
        JournalYearStats empty;
        empty.citable_items = 0;
        CHECK_FALSE(impact_factor(empty, false).has_value());
    }
    SUBCASE("simple ratio") {
        JournalYearStats s;
        s.citable_items = 5;
        s.citations_received = 10;
        CHECK(*impact_factor(s, false) == 2.0);
    }
}

TEST_CASE("self-journal fraction") {
    SUBCASE("fixture: 1 internal of 3 received") {
        corpus::Corpus c = journal_fixture();
        corpus::CitationGraph g = journal_graph(c);
        // All-time: A1 received from C1, C2; A2 from C1; A3 from C3; A4 from C4.
        // Journal J receives 5 citations, 1 internal (C2->A1).
        CHECK(self_journal_fraction(c, g, "J") == doctest::Approx(0.2).epsilon(1e-12));
    }
    SUBCASE("no incoming citations gives 0") {
        corpus::Corpus c = journal_fixture();
        corpus::CitationGraph g = journal_graph(c);
        CHECK(self_journal_fraction(c, g, "K") == 0.0);
    }
    SUBCASE("3 internal of 12 received gives 0.25, all internal gives 1") {
        using corpus::Paper;
        using corpus::Reference;
        std::vector<Paper> papers;
        Paper target;
        target.id = "T";
        target.title = "T";
        target.year = 2010;
        target.venue = "J";
        target.sections.push_back({"Body", {"text."}});
        papers.push_back(std::move(target));
        for (int i = 0; i < 12; ++i) {
            Paper p;
            p.id = "C" + std::to_string(i);
            p.title = p.id;
            p.year = 2020;
            p.venue = i < 3 ? "J" : "K";
            p.sections.push_back({"Body", {"text."}});
            Reference r;
            r.key = "[1]";
            r.target_id = "T";
            r.target_title = "T";
            p.references.push_back(std::move(r));
            papers.push_back(std::move(p));
        }
        corpus::Corpus c(papers);
        corpus::CitationGraph g = corpus::build_citation_graph(c);
        CHECK(self_journal_fraction(c, g, "J") == doctest::Approx(0.25).epsilon(1e-12));

        // Re-house all the citing papers inside J: every citation is internal.
        std::vector<Paper> internal = papers;
        for (Paper& p : internal) p.venue = "J";
        corpus::Corpus c2(internal);
        corpus::CitationGraph g2 = corpus::build_citation_graph(c2);
        CHECK(self_journal_fraction(c2, g2, "J") == 1.0);
    }
}

TEST_CASE("stacking detector") {
    SUBCASE("identical differences flag nothing") {
        std::vector<JournalImpact> rows;
        for (int i = 0; i < 10; ++i)
            rows.push_back({"J" + std::to_string(i), 2.0, 2.5, 0.1});
        for (const StackingEntry& e : detect_stacking(rows)) CHECK_FALSE(e.flagged);
    }
    SUBCASE("one planted outlier among 50 journals is exactly what gets flagged") {
        Rng rng(79);
        std::vector<JournalImpact> rows;
        const double half_width = 0.3; // base std = half_width / sqrt(3)
        for (int i = 0; i < 49; ++i) {
            const double base_if = rng.uniform(1.0, 3.0);
            rows.push_back(
                {"J" + std::to_string(i), base_if,
                 base_if + rng.uniform(-half_width, half_width), 0.05});
        }
        const double sigma_base = half_width / std::sqrt(3.0);
        rows.push_back({"CARTEL", 2.0, 2.0 + 5.0 * sigma_base, 0.9});

        std::vector<StackingEntry> entries = detect_stacking(rows);
        int flagged = 0;
        for (const StackingEntry& e : entries) {
            if (e.flagged) {
                ++flagged;
                CHECK(e.journal == "CARTEL");
                CHECK(e.self_fraction == 0.9);
            }
        }
        CHECK(flagged == 1);
    }
    SUBCASE("fewer than three journals is an error") {
        std::vector<JournalImpact> rows{{"A", 1.0, 1.0, 0.0}, {"B", 2.0, 2.0, 0.0}};
        CHECK_THROWS_AS(detect_stacking(rows), ValidationError);
    }
}

TEST_CASE("rawcite and rawpr rank similarly on a preferential-attachment graph") {
    Rng rng(83);
    const int n = 60;
    std::vector<CitationEdge> edges;
    std::vector<int> targets; // attachment proportional to in-degree
    for (int i = 1; i < n; ++i) {
        const int cites = std::min(i, 1 + rng.uniform_int(0, 2));
        for (int c = 0; c < cites; ++c) {
            int target = targets.empty() || rng.uniform() < 0.3
                             ? rng.uniform_int(0, i - 1)
                             : targets[static_cast<std::size_t>(
                                   rng.uniform_int(0, static_cast<int>(targets.size()) - 1))];
            if (target == i) continue;
            edges.push_back({i, target, std::nullopt});
            targets.push_back(target);
        }
    }
    CitationGraph g = make_graph(n, std::move(edges));
    ScoreTable cites = raw_cite(g);
    ScoreTable pr = pagerank(g);
    std::map<std::string, double> a, b;
    for (const auto& [id, score] : cites.scores) a[id] = score;
    for (const auto& [id, score] : pr.scores) b[id] = score;
    eval::RankCorrelation corr = eval::rank_metrics(a, b);
    CHECK(corr.spearman > 0.0);
}
