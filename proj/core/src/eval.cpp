#include "gralap/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace gralap::eval {

namespace {

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

} // namespace

RegressionMetrics regression_metrics(const std::vector<PredictionRecord>& records) {
    if (records.size() < 2)
        throw ValidationError("regression metrics need at least 2 records");

    RegressionMetrics m;
    std::vector<double> pred, truth;
    pred.reserve(records.size());
    truth.reserve(records.size());
    double sq = 0.0;
    for (const PredictionRecord& r : records) {
        pred.push_back(r.predicted);
        truth.push_back(r.truth);
        sq += (r.predicted - r.truth) * (r.predicted - r.truth);
    }
    m.rmse = std::sqrt(sq / static_cast<double>(records.size()));
    m.pearson = pearson(pred, truth);

    const double mean_truth =
        std::accumulate(truth.begin(), truth.end(), 0.0) / static_cast<double>(truth.size());
    double ss_tot = 0.0;
    for (double t : truth) ss_tot += (t - mean_truth) * (t - mean_truth);
    if (ss_tot > 0.0) m.r_squared = 1.0 - sq / ss_tot;
    return m;
}

RankCorrelation rank_metrics(const std::map<std::string, double>& a,
                             const std::map<std::string, double>& b) {
    if (a.size() != b.size())
        throw ValidationError("rank metrics need identical id sets");
    std::vector<double> va, vb;
    va.reserve(a.size());
    vb.reserve(a.size());
    for (const auto& [id, score] : a) {
        auto it = b.find(id);
        if (it == b.end())
            throw ValidationError("id '" + id + "' missing from second ranking");
        va.push_back(score);
        vb.push_back(it->second);
    }
    if (va.size() < 2) throw ValidationError("rank metrics need at least 2 common items");

    RankCorrelation out;
    const std::vector<double> ra = average_ranks(va);
    const std::vector<double> rb = average_ranks(vb);
    out.spearman = pearson(ra, rb).value_or(0.0);

    // Kendall tau-b over all pairs. tied_a/tied_b include pairs tied in both.
    const std::size_t n = va.size();
    long long concordant = 0, discordant = 0, tied_a = 0, tied_b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double da = va[i] - va[j];
            const double db = vb[i] - vb[j];
            if (da == 0.0) ++tied_a;
            if (db == 0.0) ++tied_b;
            if (da == 0.0 || db == 0.0) continue;
            if ((da > 0.0) == (db > 0.0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const double n0 = static_cast<double>(n) * (n - 1) / 2.0;
    const double denom = std::sqrt((n0 - static_cast<double>(tied_a)) *
                                   (n0 - static_cast<double>(tied_b)));
    out.kendall_tau =
        denom > 0.0 ? static_cast<double>(concordant - discordant) / denom : 0.0;
    return out;
}

std::optional<double> cohen_kappa(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size() || a.empty())
        throw ValidationError("kappa needs two aligned non-empty label lists");
    const double n = static_cast<double>(a.size());
    double agree = 0.0;
    std::map<int, double> ma, mb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) ++agree;
        ++ma[a[i]];
        ++mb[b[i]];
    }
    const double po = agree / n;
    double pe = 0.0;
    for (const auto& [label, count] : ma) {
        auto it = mb.find(label);
        if (it != mb.end()) pe += (count / n) * (it->second / n);
    }
    if (pe >= 1.0) return std::nullopt;
    return (po - pe) / (1.0 - pe);
}

PrecisionAtK precision_at_k(const std::vector<std::string>& ranking,
                            const std::set<std::string>& relevant, int k) {
    if (k < 1) throw ValidationError("k must be >= 1");
    PrecisionAtK out;
    const std::size_t prefix = std::min<std::size_t>(ranking.size(), static_cast<std::size_t>(k));
    out.truncated = prefix < static_cast<std::size_t>(k);
    if (prefix == 0) return out;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < prefix; ++i)
        if (relevant.contains(ranking[i])) ++hits;
    out.value = static_cast<double>(hits) / static_cast<double>(prefix);
    return out;
}

FoldPlan stratified_folds(const std::vector<int>& classes, int k, std::uint64_t seed) {
    const int n = static_cast<int>(classes.size());
    if (k < 2) throw ValidationError("fold count must be >= 2");
    if (k > n) throw ValidationError("fold count exceeds the number of labeled pairs");

    std::map<int, std::vector<int>> by_class;
    for (int i = 0; i < n; ++i) by_class[classes[i]].push_back(i);

    // A class with a single instance cannot appear in every training split.
    for (const auto& [label, items] : by_class)
        if (items.size() < 2)
            throw ValidationError("class " + std::to_string(label) +
                                  " has a single labeled instance; it cannot be "
                                  "covered by every training split");

    std::mt19937_64 rng(seed);
    FoldPlan plan;
    plan.k = k;
    plan.fold_of.assign(classes.size(), 0);
    // Deal class by class, continuing the fold cursor across classes: sizes
    // stay within one of each other and each class spans adjacent folds.
    int cursor = 0;
    for (auto& [label, items] : by_class) {
        std::shuffle(items.begin(), items.end(), rng);
        for (int item : items) {
            plan.fold_of[static_cast<std::size_t>(item)] = cursor;
            cursor = (cursor + 1) % k;
        }
    }
    return plan;
}

namespace {

struct FoldScores {
    double rmse = 0.0;
    std::optional<double> pearson_v;
    std::optional<double> r_squared;
};

FoldScores score_predictions(const std::vector<double>& pred,
                             const std::vector<double>& truth) {
    FoldScores s;
    double sq = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        sq += (pred[i] - truth[i]) * (pred[i] - truth[i]);
    s.rmse = std::sqrt(sq / static_cast<double>(pred.size()));
    if (pred.size() >= 2) {
        s.pearson_v = pearson(pred, truth);
        const double mean_truth =
            std::accumulate(truth.begin(), truth.end(), 0.0) /
            static_cast<double>(truth.size());
        double ss_tot = 0.0;
        for (double t : truth) ss_tot += (t - mean_truth) * (t - mean_truth);
        if (ss_tot > 0.0) s.r_squared = 1.0 - sq / ss_tot;
    }
    return s;
}

} // namespace

CrossValidationReport cross_validate(const LabeledPoints& data,
                                     const CrossValidationOptions& options) {
    const int n = static_cast<int>(data.points.rows());
    if (static_cast<int>(data.truths.size()) != n)
        throw ValidationError("truths are not aligned with the points");
    for (double t : data.truths)
        if (!(t >= 1.0 && t <= 5.0))
            throw ValidationError("truth value outside [1,5]");

    std::vector<int> classes;
    classes.reserve(data.truths.size());
    for (double t : data.truths) classes.push_back(lp::round_label(t));

    const FoldPlan plan = stratified_folds(classes, options.folds, options.seed);

    CrossValidationReport report;
    report.folds = options.folds;
    report.seed = options.seed;

    std::vector<double> pooled_pred, pooled_truth;
    pooled_pred.reserve(data.truths.size());
    pooled_truth.reserve(data.truths.size());

    for (int fold = 0; fold < options.folds; ++fold) {
        lp::LabeledDataset ds;
        ds.points = data.points;
        for (int i = 0; i < n; ++i)
            if (plan.fold_of[static_cast<std::size_t>(i)] != fold)
                ds.labels[i] = classes[static_cast<std::size_t>(i)];

        const lp::FitResult fitted = lp::fit(ds, options.fit);

        std::vector<double> pred, truth;
        for (int i = 0; i < n; ++i) {
            if (plan.fold_of[static_cast<std::size_t>(i)] != fold) continue;
            const double p = options.expected_intensity
                                 ? fitted.expected_intensity(i)
                                 : static_cast<double>(
                                       fitted.hard_labels[static_cast<std::size_t>(i)]);
            pred.push_back(p);
            truth.push_back(data.truths[static_cast<std::size_t>(i)]);
            pooled_pred.push_back(p);
            pooled_truth.push_back(data.truths[static_cast<std::size_t>(i)]);
        }

        const FoldScores scores = score_predictions(pred, truth);
        FoldOutcome outcome;
        outcome.fold = fold;
        outcome.size = static_cast<int>(pred.size());
        outcome.rmse = scores.rmse;
        outcome.pearson = scores.pearson_v;
        outcome.r_squared = scores.r_squared;
        report.per_fold.push_back(outcome);
    }

    double rmse_sum = 0.0, pearson_sum = 0.0, r2_sum = 0.0;
    int pearson_count = 0, r2_count = 0;
    for (const FoldOutcome& f : report.per_fold) {
        rmse_sum += f.rmse;
        if (f.pearson) {
            pearson_sum += *f.pearson;
            ++pearson_count;
        }
        if (f.r_squared) {
            r2_sum += *f.r_squared;
            ++r2_count;
        }
    }
    report.mean_rmse = rmse_sum / static_cast<double>(options.folds);
    if (pearson_count > 0) report.mean_pearson = pearson_sum / pearson_count;
    if (r2_count > 0) report.mean_r_squared = r2_sum / r2_count;

    const FoldScores pooled = score_predictions(pooled_pred, pooled_truth);
    report.pooled.rmse = pooled.rmse;
    report.pooled.pearson = pooled.pearson_v;
    report.pooled.r_squared = pooled.r_squared;
    return report;
}

std::vector<PredictionRecord> uniform_baseline(std::vector<PredictionRecord> records) {
    for (PredictionRecord& r : records) r.predicted = 3.0;
    return records;
}

} // namespace gralap::eval
