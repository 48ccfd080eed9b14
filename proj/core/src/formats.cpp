#include "gralap/formats.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace gralap::formats {

using nlohmann::json;

namespace {

// Fixed-width-free, deterministic float formatting with round-trip fidelity.
std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    double parsed = 0.0;
    std::sscanf(buf, "%lf", &parsed);
    if (parsed == value) {
        // Prefer the shortest representation that round-trips.
        for (int precision = 1; precision < 17; ++precision) {
            char shorter[32];
            std::snprintf(shorter, sizeof(shorter), "%.*g", precision, value);
            std::sscanf(shorter, "%lf", &parsed);
            if (parsed == value) return shorter;
        }
    }
    return buf;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

double parse_double_field(const std::string& field, std::size_t lineno) {
    try {
        std::size_t consumed = 0;
        const double value = std::stod(field, &consumed);
        if (consumed != field.size()) throw std::invalid_argument(field);
        return value;
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + field + "'", lineno);
    }
}

} // namespace

std::vector<LabelRecord> parse_labels_tsv(std::istream& input) {
    std::vector<LabelRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(input, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != 3)
            throw ParseError("expected 3 tab-separated fields, got " +
                                 std::to_string(fields.size()),
                             lineno);
        LabelRecord r;
        r.citing = fields[0];
        r.key = fields[1];
        r.value = parse_double_field(fields[2], lineno);
        if (!(r.value >= 1.0 && r.value <= 5.0))
            throw ValidationError("label " + fields[2] + " outside [1,5] at line " +
                                  std::to_string(lineno));
        records.push_back(std::move(r));
    }
    return records;
}

void write_feature_matrix_tsv(const features::FeatureMatrix& matrix, std::ostream& out) {
    out << "citing_id\treference_key";
    for (const std::string& c : matrix.columns) out << '\t' << c;
    out << '\n';
    for (std::size_t r = 0; r < matrix.pairs.size(); ++r) {
        out << matrix.pairs[r].citing << '\t' << matrix.pairs[r].key;
        for (Eigen::Index c = 0; c < matrix.values.cols(); ++c)
            out << '\t' << format_double(matrix.values(static_cast<Eigen::Index>(r), c));
        out << '\n';
    }
}

void write_predictions_tsv(const std::vector<PredictionRow>& rows, std::ostream& out) {
    for (const PredictionRow& row : rows) {
        out << row.citing << '\t' << row.key << '\t' << row.hard_label;
        for (double p : row.distribution) out << '\t' << format_double(p);
        out << '\n';
    }
}

std::vector<PredictionRow> parse_predictions_tsv(std::istream& input) {
    std::vector<PredictionRow> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(input, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != 8)
            throw ParseError("expected 8 tab-separated fields, got " +
                                 std::to_string(fields.size()),
                             lineno);
        PredictionRow row;
        row.citing = fields[0];
        row.key = fields[1];
        row.hard_label = static_cast<int>(parse_double_field(fields[2], lineno));
        if (row.hard_label < 1 || row.hard_label > lp::kNumClasses)
            throw ValidationError("hard label outside 1..5 at line " + std::to_string(lineno));
        for (int l = 0; l < lp::kNumClasses; ++l)
            row.distribution[static_cast<std::size_t>(l)] =
                parse_double_field(fields[static_cast<std::size_t>(3 + l)], lineno);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_run_metadata_json(const RunMetadata& meta, std::ostream& out) {
    json j;
    j["sigma"] = meta.sigma;
    j["sigma_method"] = meta.sigma_method;
    j["sigma_fallback"] = meta.sigma_method != "mst_gap" && meta.sigma_method != "override";
    j["iterations"] = meta.iterations;
    j["residual"] = meta.residual;
    j["converged"] = meta.converged;
    j["mass_normalized"] = meta.mass_normalized;
    j["proportions"] = meta.proportions;
    j["zero_mass_classes"] = meta.zero_mass;
    j["seed"] = meta.seed;
    out << j.dump(2) << '\n';
}

namespace {

json metrics_to_json(const eval::RegressionMetrics& m) {
    json j;
    j["rmse"] = m.rmse;
    j["pearson"] = m.pearson ? json(*m.pearson) : json(nullptr);
    j["r_squared"] = m.r_squared ? json(*m.r_squared) : json(nullptr);
    return j;
}

json report_to_json(const eval::CrossValidationReport& report) {
    json j;
    j["folds"] = report.folds;
    j["seed"] = report.seed;
    j["mean"] = {
        {"rmse", report.mean_rmse},
        {"pearson", report.mean_pearson ? json(*report.mean_pearson) : json(nullptr)},
        {"r_squared", report.mean_r_squared ? json(*report.mean_r_squared) : json(nullptr)},
    };
    j["pooled"] = metrics_to_json(report.pooled);
    json folds = json::array();
    for (const eval::FoldOutcome& f : report.per_fold) {
        json fj;
        fj["fold"] = f.fold;
        fj["size"] = f.size;
        fj["rmse"] = f.rmse;
        fj["pearson"] = f.pearson ? json(*f.pearson) : json(nullptr);
        fj["r_squared"] = f.r_squared ? json(*f.r_squared) : json(nullptr);
        folds.push_back(std::move(fj));
    }
    j["per_fold"] = std::move(folds);
    return j;
}

} // namespace

void write_evaluation_json(const std::vector<EvaluationStep>& steps, std::uint64_t seed,
                           std::ostream& out) {
    json j;
    j["seed"] = seed;
    json rows = json::array();
    for (const EvaluationStep& step : steps) {
        json row;
        if (!step.added_group.empty()) row["added_group"] = step.added_group;
        row["groups"] = step.groups;
        row["metrics"] = report_to_json(step.report);
        rows.push_back(std::move(row));
    }
    j["steps"] = std::move(rows);
    out << j.dump(2) << '\n';
}

void write_ranking_tsv(const metrics::ScoreTable& table, std::ostream& out) {
    std::vector<std::pair<std::string, double>> sorted = table.scores;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    int rank = 1;
    for (const auto& [id, score] : sorted)
        out << id << '\t' << format_double(score) << '\t' << rank++ << '\n';
}

void write_stacking_report_json(const StackingReport& report, std::ostream& out) {
    json j;
    j["year"] = report.year;
    json journals = json::array();
    for (const metrics::StackingEntry& e : report.entries) {
        journals.push_back({
            {"journal", e.journal},
            {"impact_factor", e.impact_factor},
            {"weighted_impact_factor", e.weighted_impact_factor},
            {"deviation", e.deviation},
            {"self_fraction", e.self_fraction},
            {"flagged", e.flagged},
        });
    }
    j["journals"] = std::move(journals);
    j["skipped"] = report.skipped;
    out << j.dump(2) << '\n';
}

void write_edge_list_tsv(const corpus::CitationGraph& graph, std::ostream& out) {
    for (const corpus::CitationEdge& e : graph.edges) {
        if (!e.weight)
            throw ValidationError("edge list export requires a weighted graph");
        out << graph.nodes[static_cast<std::size_t>(e.citing)] << '\t'
            << graph.nodes[static_cast<std::size_t>(e.cited)] << '\t'
            << format_double(*e.weight) << '\n';
    }
}

} // namespace gralap::formats
