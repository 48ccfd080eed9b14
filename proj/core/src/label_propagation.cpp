#include "gralap/label_propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace gralap::lp {

void LabeledDataset::validate() const {
    if (!points.allFinite())
        throw ValidationError("dataset contains non-finite feature values");
    for (const auto& [row, label] : labels) {
        if (row < 0 || row >= points.rows())
            throw ValidationError("labeled row " + std::to_string(row) + " out of range");
        if (label < 1 || label > kNumClasses)
            throw ValidationError("label " + std::to_string(label) + " outside 1..5");
    }
}

std::vector<Eigen::Index> LabeledDataset::unlabeled_rows() const {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        if (!labels.contains(i)) rows.push_back(i);
    return rows;
}

std::set<int> LabeledDataset::classes_present() const {
    std::set<int> classes;
    for (const auto& [row, label] : labels) classes.insert(label);
    return classes;
}

int round_label(double value) {
    int rounded = static_cast<int>(std::llround(value));
    return std::clamp(rounded, 1, kNumClasses);
}

Proportions proportions_from_labels(const std::map<Eigen::Index, int>& labels) {
    std::array<int, kNumClasses> counts{};
    for (const auto& [row, label] : labels) ++counts[label - 1];
    if (std::any_of(counts.begin(), counts.end(), [](int c) { return c == 0; }))
        return kReportedLabelProportions;
    Proportions p{};
    const double total = static_cast<double>(labels.size());
    for (int l = 0; l < kNumClasses; ++l) p[l] = counts[l] / total;
    return p;
}

const char* to_string(SigmaSelection::Method method) {
    switch (method) {
        case SigmaSelection::Method::MstGap: return "mst_gap";
        case SigmaSelection::Method::MeanDistanceFallback: return "mean_distance_fallback";
        case SigmaSelection::Method::Degenerate: return "degenerate";
    }
    return "unknown";
}

namespace {

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

double mean_pairwise_distance(const Eigen::MatrixXd& points) {
    const Eigen::Index n = points.rows();
    if (n < 2) return 0.0;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            sum += (points.row(i) - points.row(j)).norm();
    return sum / (static_cast<double>(n) * (n - 1) / 2.0);
}

} // namespace

SigmaSelection select_sigma(const LabeledDataset& dataset) {
    dataset.validate();
    const Eigen::Index n = dataset.points.rows();

    auto fallback = [&]() -> SigmaSelection {
        const double mean = mean_pairwise_distance(dataset.points);
        if (mean > 0.0)
            return {mean / 3.0, SigmaSelection::Method::MeanDistanceFallback, 0.0};
        return {1.0, SigmaSelection::Method::Degenerate, 0.0};
    };

    if (dataset.classes_present().size() < 2) return fallback();

    struct WeightedEdge {
        double distance;
        int a;
        int b;
    };
    std::vector<WeightedEdge> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            edges.push_back({(dataset.points.row(i) - dataset.points.row(j)).norm(), i, j});
    std::sort(edges.begin(), edges.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
        return std::tie(x.distance, x.a, x.b) < std::tie(y.distance, y.a, y.b);
    });

    DisjointSets sets(static_cast<int>(n));
    // Class of the labeled points in each component. Until the gap edge is
    // found every component is single-class by induction.
    std::vector<int> component_class(n, 0);
    for (const auto& [row, label] : dataset.labels) component_class[row] = label;

    for (const WeightedEdge& e : edges) {
        int ra = sets.find(e.a);
        int rb = sets.find(e.b);
        if (ra == rb) continue; // would close a cycle; Kruskal skips it
        int ca = component_class[ra];
        int cb = component_class[rb];
        if (ca != 0 && cb != 0 && ca != cb) {
            if (e.distance <= 0.0) return fallback();
            return {e.distance / 3.0, SigmaSelection::Method::MstGap, e.distance};
        }
        sets.unite(ra, rb);
        component_class[sets.find(ra)] = ca != 0 ? ca : cb;
    }
    return fallback();
}

Eigen::MatrixXd build_weight_matrix(const Eigen::MatrixXd& points, double sigma,
                                    double weight_cutoff) {
    if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
    if (!points.allFinite())
        throw ValidationError("points contain non-finite feature values");
    if (weight_cutoff < 0.0 || weight_cutoff >= 1.0)
        throw ValidationError("weight cutoff must lie in [0,1)");
    const Eigen::Index n = points.rows();
    Eigen::MatrixXd w(n, n);
    const double inv_sigma_sq = 1.0 / (sigma * sigma);
    for (Eigen::Index i = 0; i < n; ++i) {
        w(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d2 = (points.row(i) - points.row(j)).squaredNorm();
            double value = std::exp(-d2 * inv_sigma_sq);
            if (value < weight_cutoff) value = 0.0;
            w(i, j) = value;
            w(j, i) = value;
        }
    }
    return w;
}

Eigen::MatrixXd build_transition_matrix(const Eigen::MatrixXd& weights) {
    Eigen::MatrixXd t = weights.array().rowwise() /
                        weights.colwise().sum().array(); // T(i,j) = w(i,j)/sum_k w(k,j)
    t.array().colwise() /= t.rowwise().sum().array();    // T̂: row-stochastic
    return t;
}

namespace {

Eigen::MatrixXd initial_label_matrix(const LabeledDataset& dataset) {
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(dataset.points.rows(), kNumClasses);
    for (const auto& [row, label] : dataset.labels) y(row, label - 1) = 1.0;
    return y;
}

} // namespace

PropagationResult propagate(const Eigen::MatrixXd& transition, const LabeledDataset& dataset,
                            const PropagationOptions& options,
                            const IterationObserver& observer) {
    dataset.validate();
    if (!(options.tolerance > 0.0)) throw ValidationError("tolerance must be positive");
    if (dataset.labels.empty()) throw ValidationError("no labeled points");
    if (transition.rows() != dataset.points.rows() ||
        transition.cols() != dataset.points.rows())
        throw ValidationError("transition matrix size does not match dataset");

    const std::vector<Eigen::Index> unlabeled = dataset.unlabeled_rows();

    PropagationResult result;
    result.Y = initial_label_matrix(dataset);

    Eigen::MatrixXd next;
    for (int it = 1; it <= options.max_iterations; ++it) {
        next.noalias() = transition * result.Y;
        for (Eigen::Index i = 0; i < next.rows(); ++i) {
            const double row_sum = next.row(i).sum();
            if (row_sum > 0.0) next.row(i) /= row_sum;
        }
        if (options.clamp_labels) {
            for (const auto& [row, label] : dataset.labels) {
                next.row(row).setZero();
                next(row, label - 1) = 1.0;
            }
        }

        double residual = 0.0;
        if (options.clamp_labels) {
            for (Eigen::Index i : unlabeled)
                residual =
                    std::max(residual, (next.row(i) - result.Y.row(i)).cwiseAbs().maxCoeff());
        } else {
            residual = (next - result.Y).cwiseAbs().maxCoeff();
        }

        result.Y.swap(next);
        result.iterations = it;
        result.residual = residual;
        result.residual_history.push_back(residual);
        if (observer) observer(it, result.Y);
        if (residual < options.tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

Eigen::MatrixXd solve_closed_form(const Eigen::MatrixXd& transition,
                                  const LabeledDataset& dataset) {
    dataset.validate();
    if (dataset.labels.empty()) throw ValidationError("no labeled points");
    const std::vector<Eigen::Index> unlabeled = dataset.unlabeled_rows();
    const Eigen::Index u = static_cast<Eigen::Index>(unlabeled.size());
    if (u == 0) return Eigen::MatrixXd(0, kNumClasses);

    std::vector<Eigen::Index> labeled;
    for (const auto& [row, label] : dataset.labels) labeled.push_back(row);

    Eigen::MatrixXd t_uu(u, u);
    Eigen::MatrixXd t_ul(u, static_cast<Eigen::Index>(labeled.size()));
    for (Eigen::Index r = 0; r < u; ++r) {
        for (Eigen::Index c = 0; c < u; ++c) t_uu(r, c) = transition(unlabeled[r], unlabeled[c]);
        for (std::size_t c = 0; c < labeled.size(); ++c)
            t_ul(r, static_cast<Eigen::Index>(c)) = transition(unlabeled[r], labeled[c]);
    }

    Eigen::MatrixXd y_l(static_cast<Eigen::Index>(labeled.size()), kNumClasses);
    y_l.setZero();
    for (std::size_t r = 0; r < labeled.size(); ++r)
        y_l(static_cast<Eigen::Index>(r), dataset.labels.at(labeled[r]) - 1) = 1.0;

    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(u, u) - t_uu;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible())
        throw NumericalError("I - T_uu is singular; the spectral precondition fails");
    return lu.solve(t_ul * y_l);
}

MassNormalization class_mass_normalize(const Eigen::MatrixXd& unlabeled,
                                       const Proportions& proportions) {
    if (unlabeled.cols() != kNumClasses)
        throw ValidationError("label matrix must have 5 columns");
    double total = 0.0;
    for (double c : proportions) {
        if (!(c > 0.0)) throw ValidationError("proportions must be positive");
        total += c;
    }

    MassNormalization out;
    out.values = unlabeled;
    for (int l = 0; l < kNumClasses; ++l) {
        const double mass = unlabeled.col(l).sum();
        if (mass <= 0.0) {
            out.zero_mass[static_cast<std::size_t>(l)] = true;
            continue;
        }
        out.values.col(l) *= (proportions[static_cast<std::size_t>(l)] / total) / mass;
    }
    return out;
}

std::vector<int> assign_labels(const Eigen::MatrixXd& Y, const LabeledDataset& dataset) {
    std::vector<int> labels(static_cast<std::size_t>(Y.rows()), 1);
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
        auto it = dataset.labels.find(i);
        if (it != dataset.labels.end()) {
            labels[static_cast<std::size_t>(i)] = it->second;
            continue;
        }
        int best = 0;
        for (int l = 1; l < kNumClasses; ++l)
            if (Y(i, l) > Y(i, best)) best = l; // ties keep the lowest class
        labels[static_cast<std::size_t>(i)] = best + 1;
    }
    return labels;
}

double FitResult::expected_intensity(Eigen::Index row) const {
    double value = 0.0;
    for (int l = 0; l < kNumClasses; ++l)
        value += (l + 1) * distributions(row, l);
    return value;
}

FitResult fit(const LabeledDataset& dataset, const FitOptions& options) {
    dataset.validate();
    if (dataset.labels.empty()) throw ValidationError("no labeled points");

    FitResult result;
    if (options.sigma) {
        if (!(*options.sigma > 0.0)) throw ValidationError("sigma must be positive");
        result.sigma = *options.sigma;
        result.sigma_method = SigmaSelection::Method::MstGap;
    } else {
        SigmaSelection sel = select_sigma(dataset);
        result.sigma = sel.sigma;
        result.sigma_method = sel.method;
    }

    const Eigen::MatrixXd weights =
        build_weight_matrix(dataset.points, result.sigma, options.weight_cutoff);
    const Eigen::MatrixXd transition = build_transition_matrix(weights);

    PropagationResult prop = propagate(transition, dataset, options.propagation);
    result.iterations = prop.iterations;
    result.residual = prop.residual;
    result.converged = prop.converged;

    Eigen::MatrixXd y = prop.Y;
    if (options.mass_normalize) {
        Proportions raw = options.proportions ? *options.proportions
                                              : proportions_from_labels(dataset.labels);
        double total = 0.0;
        for (double c : raw) total += c;
        for (int l = 0; l < kNumClasses; ++l)
            result.proportions[static_cast<std::size_t>(l)] =
                raw[static_cast<std::size_t>(l)] / total;

        const std::vector<Eigen::Index> unlabeled = dataset.unlabeled_rows();
        if (!unlabeled.empty()) {
            Eigen::MatrixXd block(static_cast<Eigen::Index>(unlabeled.size()), kNumClasses);
            for (std::size_t r = 0; r < unlabeled.size(); ++r)
                block.row(static_cast<Eigen::Index>(r)) = y.row(unlabeled[r]);
            MassNormalization normalized = class_mass_normalize(block, raw);
            result.zero_mass = normalized.zero_mass;
            for (std::size_t r = 0; r < unlabeled.size(); ++r)
                y.row(unlabeled[r]) = normalized.values.row(static_cast<Eigen::Index>(r));
        }
    }

    result.hard_labels = assign_labels(y, dataset);

    // Rows are renormalized for reporting; per-row positive scaling does not
    // move the argmax.
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        const double row_sum = y.row(i).sum();
        if (row_sum > 0.0) y.row(i) /= row_sum;
    }
    result.distributions = std::move(y);
    return result;
}

} // namespace gralap::lp
