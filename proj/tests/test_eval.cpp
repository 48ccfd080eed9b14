#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gralap/eval.hpp"
#include "support/synthetic.hpp"

using namespace gralap;
using namespace gralap::eval;
using gralap::testsupport::Rng;

namespace {

std::vector<PredictionRecord> records_from(const std::vector<double>& pred,
                                           const std::vector<double>& truth) {
    std::vector<PredictionRecord> out;
    for (std::size_t i = 0; i < pred.size(); ++i)
        out.push_back({"p" + std::to_string(i), "[1]", pred[i], truth[i]});
    return out;
}

} // namespace

TEST_CASE("regression metrics") {
    SUBCASE("perfect predictions") {
        auto r = regression_metrics(records_from({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}));
        CHECK(r.rmse == 0.0);
        CHECK(*r.pearson == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(*r.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("constant offset keeps correlation at 1") {
        auto r = regression_metrics(records_from({2, 3, 4, 5}, {1, 2, 3, 4}));
        CHECK(r.rmse == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(*r.pearson == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("five-record fixture against a spreadsheet-style recomputation") {
        auto r = regression_metrics(
            records_from({1.0, 2.5, 3.0, 4.5, 5.0}, {1.5, 2.0, 3.5, 4.0, 4.5}));
        CHECK(r.rmse == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(*r.pearson == doctest::Approx(0.9509793303285148).epsilon(1e-12));
        CHECK(*r.r_squared == doctest::Approx(0.8134328358208955).epsilon(1e-12));
    }
    SUBCASE("degenerate variance reports absent correlations") {
        auto r = regression_metrics(records_from({3, 3, 3}, {1, 2, 3}));
        CHECK_FALSE(r.pearson.has_value()); // constant predictions
        auto r2 = regression_metrics(records_from({1, 2, 3}, {3, 3, 3}));
        CHECK_FALSE(r2.pearson.has_value()); // constant truths
        CHECK_FALSE(r2.r_squared.has_value());
    }
    SUBCASE("fewer than two records is an error") {
        CHECK_THROWS_AS(regression_metrics(records_from({3}, {3})), ValidationError);
    }
    SUBCASE("rmse is zero only for perfect predictions") {
        auto r = regression_metrics(records_from({1, 2.1}, {1, 2}));
        CHECK(r.rmse > 0.0);
    }
}

TEST_CASE("rank metrics") {
    auto as_map = [](const std::vector<double>& v) {
        std::map<std::string, double> m;
        for (std::size_t i = 0; i < v.size(); ++i) m["p" + std::to_string(i)] = v[i];
        return m;
    };
    SUBCASE("identical rankings") {
        auto m = as_map({5, 4, 3, 2, 1});
        RankCorrelation c = rank_metrics(m, m);
        CHECK(c.spearman == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(c.kendall_tau == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("exactly reversed rankings") {
        RankCorrelation c = rank_metrics(as_map({1, 2, 3, 4, 5}), as_map({5, 4, 3, 2, 1}));
        CHECK(c.spearman == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(c.kendall_tau == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("five items with one adjacent swap") {
        RankCorrelation c = rank_metrics(as_map({1, 2, 3, 4, 5}), as_map({1, 2, 3, 5, 4}));
        CHECK(c.kendall_tau == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(c.spearman == doctest::Approx(0.9).epsilon(1e-12));
    }
    SUBCASE("ties are handled with average ranks (frozen scipy fixture)") {
        RankCorrelation c =
            rank_metrics(as_map({10.0, 8.0, 8.0, 5.0, 1.0}), as_map({3.0, 9.0, 6.0, 6.0, 2.0}));
        CHECK(c.spearman == doctest::Approx(0.2894736842105264).epsilon(1e-12));
        CHECK(c.kendall_tau == doctest::Approx(0.2222222222222222).epsilon(1e-12));
    }
    SUBCASE("mismatched id sets are an error") {
        std::map<std::string, double> a{{"x", 1.0}, {"y", 2.0}};
        std::map<std::string, double> b{{"x", 1.0}, {"z", 2.0}};
        CHECK_THROWS_AS(rank_metrics(a, b), ValidationError);
    }
    SUBCASE("fewer than two items is an error") {
        std::map<std::string, double> a{{"x", 1.0}};
        CHECK_THROWS_AS(rank_metrics(a, a), ValidationError);
    }
}

TEST_CASE("correlations are invariant under monotone rescaling") {
    Rng rng(113);
    std::vector<double> x, y;
    for (int i = 0; i < 25; ++i) {
        x.push_back(rng.uniform(1.0, 5.0));
        y.push_back(rng.uniform(1.0, 5.0));
    }
    auto as_records = [&](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<PredictionRecord> r;
        for (std::size_t i = 0; i < a.size(); ++i)
            r.push_back({"p" + std::to_string(i), "[1]", a[i], b[i]});
        return r;
    };
    auto as_map = [&](const std::vector<double>& v) {
        std::map<std::string, double> m;
        for (std::size_t i = 0; i < v.size(); ++i) m["p" + std::to_string(i)] = v[i];
        return m;
    };

    // Positive affine transform of one argument: Pearson and Spearman fixed.
    std::vector<double> scaled = x;
    for (double& v : scaled) v = 2.5 * v + 0.75;
    const auto base = regression_metrics(as_records(x, y));
    const auto transformed = regression_metrics(as_records(scaled, y));
    CHECK(*base.pearson == doctest::Approx(*transformed.pearson).epsilon(1e-12));

    const RankCorrelation rank_base = rank_metrics(as_map(x), as_map(y));
    const RankCorrelation rank_affine = rank_metrics(as_map(scaled), as_map(y));
    CHECK(rank_base.spearman == doctest::Approx(rank_affine.spearman).epsilon(1e-12));

    // Any strictly monotone transform: Kendall tau fixed.
    std::vector<double> monotone = x;
    for (double& v : monotone) v = std::exp(v);
    const RankCorrelation rank_monotone = rank_metrics(as_map(monotone), as_map(y));
    CHECK(rank_base.kendall_tau ==
          doctest::Approx(rank_monotone.kendall_tau).epsilon(1e-12));
    CHECK(rank_base.spearman == doctest::Approx(rank_monotone.spearman).epsilon(1e-12));
}

TEST_CASE("cohen's kappa") {
    SUBCASE("perfect agreement with varied labels") {
        std::vector<int> a{1, 2, 3, 1, 2};
        CHECK(*cohen_kappa(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("agreement at chance level gives 0") {
        std::vector<int> a{1, 1, 2, 2};
        std::vector<int> b{1, 2, 1, 2}; // p_o = p_e = 0.5
        CHECK(*cohen_kappa(a, b) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("two-class fixture with p_o=0.8, p_e=0.5") {
        std::vector<int> a{1, 1, 1, 1, 1, 2, 2, 2, 2, 2};
        std::vector<int> b{1, 1, 1, 1, 2, 1, 2, 2, 2, 2};
        CHECK(*cohen_kappa(a, b) == doctest::Approx(0.6).epsilon(1e-12));
    }
    SUBCASE("identical constant labels are all chance") {
        std::vector<int> a{1, 1, 1};
        CHECK_FALSE(cohen_kappa(a, a).has_value()); // p_e = 1
    }
}

TEST_CASE("precision at k") {
    std::vector<std::string> ranking{"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
    SUBCASE("all of the top k relevant") {
        auto p = precision_at_k(ranking, {"a", "b", "c"}, 3);
        CHECK(p.value == 1.0);
        CHECK_FALSE(p.truncated);
    }
    SUBCASE("none relevant") {
        auto p = precision_at_k(ranking, {"zz"}, 5);
        CHECK(p.value == 0.0);
    }
    SUBCASE("seven of the top ten") {
        auto p = precision_at_k(ranking, {"a", "b", "c", "d", "e", "f", "g"}, 10);
        CHECK(p.value == doctest::Approx(0.7).epsilon(1e-12));
    }
    SUBCASE("k beyond the list length is flagged") {
        auto p = precision_at_k({"a", "b"}, {"a"}, 5);
        CHECK(p.truncated);
        CHECK(p.value == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("k below 1 is an error") {
        CHECK_THROWS_AS(precision_at_k(ranking, {"a"}, 0), ValidationError);
    }
    SUBCASE("precision never increases once the relevant prefix is exhausted") {
        const std::set<std::string> relevant{"a", "b", "c"};
        double prev = 1.0;
        for (int k = 3; k <= 10; ++k) {
            const double v = precision_at_k(ranking, relevant, k).value;
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("stratified folds") {
    SUBCASE("assignment partitions the items with near-equal sizes") {
        std::vector<int> classes{1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3};
        FoldPlan plan = stratified_folds(classes, 3, 9);
        REQUIRE(plan.fold_of.size() == classes.size());
        std::vector<int> sizes(3, 0);
        for (int f : plan.fold_of) {
            REQUIRE(f >= 0);
            REQUIRE(f < 3);
            ++sizes[static_cast<std::size_t>(f)];
        }
        const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
        CHECK(*hi - *lo <= 1);
    }
    SUBCASE("every training split covers every class") {
        std::vector<int> classes{1, 1, 2, 2, 3, 3, 4, 4, 5, 5};
        FoldPlan plan = stratified_folds(classes, 5, 123);
        for (int fold = 0; fold < 5; ++fold) {
            std::set<int> train_classes;
            for (std::size_t i = 0; i < classes.size(); ++i)
                if (plan.fold_of[i] != fold) train_classes.insert(classes[i]);
            CHECK(train_classes == std::set<int>{1, 2, 3, 4, 5});
        }
    }
    SUBCASE("single-instance classes are rejected by name") {
        std::vector<int> classes{1, 1, 2};
        try {
            stratified_folds(classes, 2, 0);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("class 2") != std::string::npos);
        }
    }
    SUBCASE("k outside [2, n] is rejected") {
        std::vector<int> classes{1, 1, 2, 2};
        CHECK_THROWS_AS(stratified_folds(classes, 1, 0), ValidationError);
        CHECK_THROWS_AS(stratified_folds(classes, 5, 0), ValidationError);
    }
}

TEST_CASE("cross-validation") {
    SUBCASE("k equal to the pair count behaves like leave-one-out") {
        Rng rng(91);
        auto instance = testsupport::make_clusters(rng, 2, 3, 2, 10.0, 0.5);
        LabeledPoints data;
        data.points = instance.dataset.points;
        for (int t : instance.truth) data.truths.push_back(static_cast<double>(t));
        CrossValidationOptions opts;
        opts.folds = static_cast<int>(data.truths.size());
        CrossValidationReport report = cross_validate(data, opts);
        CHECK(report.per_fold.size() == data.truths.size());
        for (const FoldOutcome& f : report.per_fold) CHECK(f.size == 1);
    }
    SUBCASE("same seed gives identical reports") {
        Rng rng(97);
        auto instance = testsupport::make_clusters(rng, 2, 10, 2, 10.0, 0.7);
        LabeledPoints data;
        data.points = instance.dataset.points;
        for (int t : instance.truth) data.truths.push_back(static_cast<double>(t));
        CrossValidationOptions opts;
        opts.folds = 4;
        opts.seed = 2024;
        CrossValidationReport a = cross_validate(data, opts);
        CrossValidationReport b = cross_validate(data, opts);
        CHECK(a.mean_rmse == b.mean_rmse);
        REQUIRE(a.per_fold.size() == b.per_fold.size());
        for (std::size_t i = 0; i < a.per_fold.size(); ++i) {
            CHECK(a.per_fold[i].rmse == b.per_fold[i].rmse);
            CHECK(a.per_fold[i].pearson == b.per_fold[i].pearson);
        }
    }
    SUBCASE("different seeds shuffle the folds") {
        Rng rng(101);
        auto instance = testsupport::make_clusters(rng, 2, 10, 2, 10.0, 0.7);
        std::vector<int> classes(instance.truth.begin(), instance.truth.end());
        FoldPlan a = stratified_folds(classes, 4, 1);
        FoldPlan b = stratified_folds(classes, 4, 2);
        CHECK(a.fold_of != b.fold_of);
    }
    SUBCASE("separable clusters cross-validate almost perfectly") {
        Rng rng(103);
        auto instance = testsupport::make_clusters(rng, 5, 20, 2, 30.0, 0.6,
                                                   /*seeds_per_class=*/20);
        LabeledPoints data;
        data.points = instance.dataset.points;
        for (int t : instance.truth) data.truths.push_back(static_cast<double>(t));
        CrossValidationOptions opts;
        opts.folds = 10;
        opts.seed = 7;
        CrossValidationReport report = cross_validate(data, opts);
        REQUIRE(report.mean_pearson.has_value());
        CHECK(*report.mean_pearson > 0.95);
    }
    SUBCASE("truths outside [1,5] are rejected") {
        LabeledPoints data;
        data.points = Eigen::MatrixXd::Zero(2, 1);
        data.truths = {1.0, 6.0};
        CHECK_THROWS_AS(cross_validate(data, {}), ValidationError);
    }
}

TEST_CASE("uniform baseline") {
    SUBCASE("predicts 3 everywhere") {
        auto records = uniform_baseline(records_from({0, 0, 0}, {3, 3, 3}));
        for (const PredictionRecord& r : records) CHECK(r.predicted == 3.0);
        auto metrics = regression_metrics(records);
        CHECK(metrics.rmse == 0.0);
    }
    SUBCASE("truth all 5 gives rmse 2") {
        auto metrics =
            regression_metrics(uniform_baseline(records_from({0, 0}, {5, 5})));
        CHECK(metrics.rmse == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("reported label shares give the analytic rmse") {
        std::vector<double> truth;
        auto push = [&](int label, int count) {
            for (int i = 0; i < count; ++i) truth.push_back(label);
        };
        push(1, 9);
        push(2, 74);
        push(3, 9);
        push(4, 3);
        push(5, 4);
        std::vector<double> pred(truth.size(), 0.0);
        auto metrics = regression_metrics(uniform_baseline(records_from(pred, truth)));
        // sum of squared gaps: 9*4 + 74*1 + 0 + 3*1 + 4*4 = 129 over 99 labels
        CHECK(metrics.rmse == doctest::Approx(std::sqrt(129.0 / 99.0)).epsilon(1e-12));
    }
}
