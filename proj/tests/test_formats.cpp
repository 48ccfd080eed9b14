#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "gralap/formats.hpp"

using namespace gralap;
using namespace gralap::formats;

TEST_CASE("labels TSV parsing") {
    SUBCASE("fractional labels within [1,5] parse") {
        std::istringstream in("P1\t[1]\t3.5\nP2\t[2]\t1\n");
        auto records = parse_labels_tsv(in);
        REQUIRE(records.size() == 2);
        CHECK(records[0].citing == "P1");
        CHECK(records[0].key == "[1]");
        CHECK(records[0].value == 3.5);
        CHECK(records[1].value == 1.0);
    }
    SUBCASE("labels outside [1,5] are rejected") {
        std::istringstream in("P1\t[1]\t0.5\n");
        CHECK_THROWS_AS(parse_labels_tsv(in), ValidationError);
    }
    SUBCASE("wrong field count carries the line number") {
        std::istringstream in("P1\t[1]\t3\nP2\t2\n");
        try {
            parse_labels_tsv(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("non-numeric label is a parse error") {
        std::istringstream in("P1\t[1]\tthree\n");
        CHECK_THROWS_AS(parse_labels_tsv(in), ParseError);
    }
}

TEST_CASE("predictions TSV round-trip") {
    std::vector<PredictionRow> rows;
    rows.push_back({"P1", "[1]", 2, {0.1, 0.6, 0.1, 0.1, 0.1}});
    rows.push_back({"P2", "[a]", 5, {0.0, 0.0, 0.0, 0.25, 0.75}});
    std::ostringstream out;
    write_predictions_tsv(rows, out);

    std::istringstream in(out.str());
    auto parsed = parse_predictions_tsv(in);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].citing == "P1");
    CHECK(parsed[0].hard_label == 2);
    CHECK(parsed[1].distribution[4] == 0.75);

    // The format is the contract: tab-separated, LF endings, 8 fields.
    CHECK(out.str() == "P1\t[1]\t2\t0.1\t0.6\t0.1\t0.1\t0.1\n"
                       "P2\t[a]\t5\t0\t0\t0\t0.25\t0.75\n");
}

TEST_CASE("feature matrix TSV carries the column header") {
    features::FeatureMatrix m;
    m.pairs = {{"P1", "[1]"}, {"P2", "[2]"}};
    m.columns = {"ff:whole", "ff:intro"};
    m.values.resize(2, 2);
    m.values << 0.5, 1.0, 1.0, 0.0;
    std::ostringstream out;
    write_feature_matrix_tsv(m, out);
    CHECK(out.str() ==
          "citing_id\treference_key\tff:whole\tff:intro\n"
          "P1\t[1]\t0.5\t1\n"
          "P2\t[2]\t1\t0\n");
}

TEST_CASE("ranking TSV sorts by score then id") {
    metrics::ScoreTable t;
    t.measure = "rawcite";
    t.scores = {{"b", 2.0}, {"a", 2.0}, {"c", 5.0}};
    std::ostringstream out;
    write_ranking_tsv(t, out);
    CHECK(out.str() == "c\t5\t1\na\t2\t2\nb\t2\t3\n");
}

TEST_CASE("edge list export requires weights") {
    corpus::CitationGraph g;
    g.nodes = {"A", "B"};
    g.index = {{"A", 0}, {"B", 1}};
    g.edges = {{0, 1, 4.0}};
    std::ostringstream out;
    write_edge_list_tsv(g, out);
    CHECK(out.str() == "A\tB\t4\n");

    g.edges[0].weight.reset();
    std::ostringstream out2;
    CHECK_THROWS_AS(write_edge_list_tsv(g, out2), ValidationError);
}

TEST_CASE("run metadata JSON is stable") {
    RunMetadata meta;
    meta.sigma = 0.5;
    meta.sigma_method = "mst_gap";
    meta.iterations = 12;
    meta.residual = 1e-7;
    meta.converged = true;
    meta.mass_normalized = true;
    meta.proportions = {0.2, 0.2, 0.2, 0.2, 0.2};
    meta.seed = 42;
    std::ostringstream a, b;
    write_run_metadata_json(meta, a);
    write_run_metadata_json(meta, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("\"sigma_fallback\": false") != std::string::npos);

    meta.sigma_method = "mean_distance_fallback";
    std::ostringstream c;
    write_run_metadata_json(meta, c);
    CHECK(c.str().find("\"sigma_fallback\": true") != std::string::npos);
}
