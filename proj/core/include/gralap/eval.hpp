#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gralap/label_propagation.hpp"

namespace gralap::eval {

struct PredictionRecord {
    std::string citing;
    std::string key;
    double predicted = 0.0; ///< hard label or expected intensity, in [1,5]
    double truth = 0.0;     ///< possibly fractional annotator average, in [1,5]
};

struct RegressionMetrics {
    double rmse = 0.0;
    std::optional<double> pearson;   ///< absent under degenerate variance
    std::optional<double> r_squared; ///< absent when the truths are constant
};

/// RMSE, Pearson's rho, and R^2 = 1 - SS_res/SS_tot. Needs >= 2 records.
RegressionMetrics regression_metrics(const std::vector<PredictionRecord>& records);

struct RankCorrelation {
    double spearman = 0.0;
    double kendall_tau = 0.0; ///< tau-b (average-rank tie handling)
};

/// Correlation between two score tables over the same id set.
RankCorrelation rank_metrics(const std::map<std::string, double>& a,
                             const std::map<std::string, double>& b);

/// (p_o - p_e) / (1 - p_e); absent when p_e = 1.
std::optional<double> cohen_kappa(const std::vector<int>& a, const std::vector<int>& b);

struct PrecisionAtK {
    double value = 0.0;
    bool truncated = false; ///< k exceeded the ranking length
};

/// |top-k ∩ relevant| / k. When k exceeds the list, the available prefix is
/// scored (denominator = prefix length) and the result is flagged.
PrecisionAtK precision_at_k(const std::vector<std::string>& ranking,
                            const std::set<std::string>& relevant, int k);

/// Stratified k-fold assignment. fold_of[i] is the fold of item i. Sizes
/// differ by at most one and every training split covers every class.
struct FoldPlan {
    int k = 0;
    std::vector<int> fold_of;
};

FoldPlan stratified_folds(const std::vector<int>& classes, int k, std::uint64_t seed);

/// All rows are labeled pairs; truths may be fractional.
struct LabeledPoints {
    Eigen::MatrixXd points;
    std::vector<double> truths; ///< aligned with rows
};

struct CrossValidationOptions {
    int folds = 10;
    std::uint64_t seed = 0;
    bool expected_intensity = false; ///< score E[l] instead of the hard label
    lp::FitOptions fit;
};

struct FoldOutcome {
    int fold = 0;
    int size = 0;
    double rmse = 0.0;
    std::optional<double> pearson;
    std::optional<double> r_squared;
};

struct CrossValidationReport {
    int folds = 0;
    std::uint64_t seed = 0;
    std::vector<FoldOutcome> per_fold;
    double mean_rmse = 0.0;
    std::optional<double> mean_pearson;   ///< over folds where defined
    std::optional<double> mean_r_squared; ///< over folds where defined
    RegressionMetrics pooled;             ///< over all held-out predictions
};

/// Transductive k-fold cross-validation: per fold, the fold's labels are
/// hidden, the model is fit on all points, and the hidden pairs are scored
/// against their (possibly fractional) truths. Deterministic per seed.
CrossValidationReport cross_validate(const LabeledPoints& data,
                                     const CrossValidationOptions& options = {});

/// Predicts intensity 3 for every record.
std::vector<PredictionRecord> uniform_baseline(std::vector<PredictionRecord> records);

} // namespace gralap::eval
