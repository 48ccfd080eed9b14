#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gralap/corpus.hpp"
#include "gralap/eval.hpp"
#include "gralap/features.hpp"
#include "gralap/label_propagation.hpp"
#include "gralap/metrics.hpp"

namespace gralap::formats {

/// One line of the labels file: citing_id <TAB> reference_key <TAB> label,
/// label in [1,5], fractional values allowed.
struct LabelRecord {
    std::string citing;
    std::string key;
    double value = 0.0;
};

std::vector<LabelRecord> parse_labels_tsv(std::istream& input);

/// Header: citing_id, reference_key, then every feature column in matrix
/// order. The column order is part of the format contract.
void write_feature_matrix_tsv(const features::FeatureMatrix& matrix, std::ostream& out);

struct PredictionRow {
    std::string citing;
    std::string key;
    int hard_label = 0;
    std::array<double, lp::kNumClasses> distribution{};
};

/// citing_id <TAB> reference_key <TAB> hard_label <TAB> p1..p5
void write_predictions_tsv(const std::vector<PredictionRow>& rows, std::ostream& out);
std::vector<PredictionRow> parse_predictions_tsv(std::istream& input);

/// Run metadata sidecar written next to the predictions.
struct RunMetadata {
    double sigma = 0.0;
    std::string sigma_method;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    bool mass_normalized = false;
    std::array<double, lp::kNumClasses> proportions{};
    std::array<bool, lp::kNumClasses> zero_mass{};
    std::uint64_t seed = 0;
};

void write_run_metadata_json(const RunMetadata& meta, std::ostream& out);

/// Cross-validation report; one entry per greedy step when `greedy` ran.
struct EvaluationStep {
    std::string added_group; ///< empty for a plain (non-greedy) run
    std::vector<std::string> groups;
    eval::CrossValidationReport report;
};

void write_evaluation_json(const std::vector<EvaluationStep>& steps, std::uint64_t seed,
                           std::ostream& out);

/// id <TAB> score <TAB> rank, sorted by descending score, ties by id.
void write_ranking_tsv(const metrics::ScoreTable& table, std::ostream& out);

struct StackingReport {
    int year = 0;
    std::vector<metrics::StackingEntry> entries;
    std::vector<std::string> skipped; ///< journals without citable items
};

void write_stacking_report_json(const StackingReport& report, std::ostream& out);

/// citing <TAB> cited <TAB> intensity, one line per resolved edge.
void write_edge_list_tsv(const corpus::CitationGraph& graph, std::ostream& out);

} // namespace gralap::formats
