#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include <Eigen/Core>

#include "gralap/errors.hpp"

namespace gralap::lp {

inline constexpr int kNumClasses = 5;

/// Per-class prior proportions c_1..c_5. Treated as a ratio: any positive
/// vector is accepted and normalized to unit sum internally.
using Proportions = std::array<double, kNumClasses>;

/// Label shares reported for the annotated data (classes 1..5). They are
/// printed as whole percentages and sum to 0.99; the ratio semantics above
/// absorbs that.
inline constexpr Proportions kReportedLabelProportions{0.09, 0.74, 0.09, 0.03, 0.04};

/// Transductive problem instance: one feature row per point, integer class
/// labels on a subset of rows.
struct LabeledDataset {
    Eigen::MatrixXd points;               ///< |X| x D
    std::map<Eigen::Index, int> labels;   ///< row -> class in 1..5

    /// Checks index bounds, label range, and finiteness of the points.
    void validate() const;
    std::vector<Eigen::Index> unlabeled_rows() const;
    std::set<int> classes_present() const;
};

/// Rounds a fractional annotator average (in [1,5]) half-up to its class.
int round_label(double value);

/// Observed class shares of a training label set. Falls back to
/// kReportedLabelProportions when any class is missing.
Proportions proportions_from_labels(const std::map<Eigen::Index, int>& labels);

struct SigmaSelection {
    enum class Method {
        MstGap,               ///< first differing-label component merge in Kruskal order
        MeanDistanceFallback, ///< no usable gap edge; mean pairwise distance / 3
        Degenerate,           ///< all points coincide; sigma = 1
    };
    double sigma = 0.0;
    Method method = Method::MstGap;
    double critical_distance = 0.0; ///< d_f when method == MstGap
};

const char* to_string(SigmaSelection::Method method);

/// RBF bandwidth heuristic: run Kruskal on the complete Euclidean graph and
/// take d_f/3, where d_f is the weight of the first inserted edge that
/// merges two components holding differently-labeled points.
SigmaSelection select_sigma(const LabeledDataset& dataset);

/// W(i,j) = exp(-|x_i - x_j|^2 / sigma^2). Symmetric, unit diagonal.
/// A positive cutoff sparsifies the otherwise fully connected graph by
/// zeroing off-diagonal weights below it (self-loops always stay). Off by
/// default; the model is defined on the complete graph.
Eigen::MatrixXd build_weight_matrix(const Eigen::MatrixXd& points, double sigma,
                                    double weight_cutoff = 0.0);

/// Column-normalizes W into jump probabilities T(i,j) = W(i,j)/sum_k W(k,j),
/// then row-normalizes T. The result is row-stochastic.
Eigen::MatrixXd build_transition_matrix(const Eigen::MatrixXd& weights);

struct PropagationOptions {
    double tolerance = 1e-6;  ///< on max |dY| over unlabeled rows
    int max_iterations = 1000;
    bool clamp_labels = true; ///< false: plain label propagation (labels fade)
};

/// Called after each completed iteration with the current label matrix.
using IterationObserver = std::function<void(int iteration, const Eigen::MatrixXd& labels)>;

struct PropagationResult {
    Eigen::MatrixXd Y; ///< |X| x 5; labeled rows one-hot when clamping
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    std::vector<double> residual_history; ///< residual after each iteration
};

/// Iterates Y <- T̂Y, row-normalizes, reassigns the original labels, until
/// the residual drops below tolerance. Non-convergence is reported through
/// the `converged` flag, not an exception.
PropagationResult propagate(const Eigen::MatrixXd& transition, const LabeledDataset& dataset,
                            const PropagationOptions& options = {},
                            const IterationObserver& observer = {});

/// Exact fixed point Y_U = (I - T̂_uu)^(-1) T̂_ul Y_L, one row per unlabeled
/// point in ascending row order. Serves as the oracle for propagate().
Eigen::MatrixXd solve_closed_form(const Eigen::MatrixXd& transition,
                                  const LabeledDataset& dataset);

struct MassNormalization {
    Eigen::MatrixXd values; ///< scaled unlabeled block
    std::array<bool, kNumClasses> zero_mass{}; ///< columns left untouched
};

/// Scales column l of the unlabeled block by c_l / mass_l so the column
/// masses match the supplied proportions. Zero-mass columns are left as
/// zero and flagged.
MassNormalization class_mass_normalize(const Eigen::MatrixXd& unlabeled,
                                       const Proportions& proportions);

/// Per-row argmax labels; ties go to the lowest class. Labeled rows keep
/// their clamped label.
std::vector<int> assign_labels(const Eigen::MatrixXd& Y, const LabeledDataset& dataset);

struct FitOptions {
    std::optional<double> sigma; ///< overrides select_sigma
    double weight_cutoff = 0.0;  ///< see build_weight_matrix
    PropagationOptions propagation;
    bool mass_normalize = true;  ///< false together with clamp_labels=false: plain LP
    std::optional<Proportions> proportions; ///< overrides proportions_from_labels
};

struct FitResult {
    Eigen::MatrixXd distributions; ///< |X| x 5, rows renormalized to sum 1
    std::vector<int> hard_labels;  ///< class per row
    double sigma = 0.0;
    SigmaSelection::Method sigma_method = SigmaSelection::Method::MstGap;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    Proportions proportions{}; ///< normalized proportions used (when mass_normalize)
    std::array<bool, kNumClasses> zero_mass{};

    double expected_intensity(Eigen::Index row) const; ///< sum_l l * p_l
};

/// Full pipeline: sigma -> weights -> transition -> propagate ->
/// class-mass normalization -> hard labels.
FitResult fit(const LabeledDataset& dataset, const FitOptions& options = {});

} // namespace gralap::lp
