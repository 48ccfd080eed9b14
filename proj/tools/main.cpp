// gralap: label the intensity of paper-reference pairs with graph-based
// label propagation and compute intensity-weighted bibliometrics.
//
// Subcommands: features, predict, evaluate, rank, stacking, export-graph.
// Exit codes: 0 success, 1 runtime/validation failure, 2 usage error.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gralap/annotations.hpp"
#include "gralap/corpus.hpp"
#include "gralap/errors.hpp"
#include "gralap/eval.hpp"
#include "gralap/features.hpp"
#include "gralap/formats.hpp"
#include "gralap/label_propagation.hpp"
#include "gralap/metrics.hpp"

namespace fs = std::filesystem;
using namespace gralap;

namespace {

corpus::Corpus load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open corpus file: " + path);
    return corpus::parse_corpus(in);
}

std::optional<annotations::AnnotationSet> load_annotations(const std::string& path) {
    if (path.empty()) return std::nullopt;
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open annotations file: " + path);
    return annotations::parse_annotations(in);
}

std::vector<formats::LabelRecord> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open labels file: " + path);
    return formats::parse_labels_tsv(in);
}

std::vector<formats::PredictionRow> load_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open predictions file: " + path);
    return formats::parse_predictions_tsv(in);
}

features::GroupToggles parse_toggles(const std::string& spec) {
    features::GroupToggles t{.cf = false, .sf = false, .ff = false,
                             .pf = false, .lf = false, .ms = false};
    std::string token;
    std::istringstream in(spec);
    while (std::getline(in, token, ',')) {
        if (token == "cf") t.cf = true;
        else if (token == "sf") t.sf = true;
        else if (token == "ff") t.ff = true;
        else if (token == "pf") t.pf = true;
        else if (token == "lf") t.lf = true;
        else if (token == "ms") t.ms = true;
        else throw CLI::ValidationError("--features", "unknown feature group '" + token + "'");
    }
    if (!t.any())
        throw CLI::ValidationError("--features", "no feature groups selected");
    return t;
}

lp::Proportions parse_proportions(const std::string& spec) {
    lp::Proportions p{};
    std::istringstream in(spec);
    std::string token;
    int i = 0;
    while (std::getline(in, token, ',')) {
        if (i >= lp::kNumClasses)
            throw CLI::ValidationError("--proportions", "expected 5 comma-separated values");
        try {
            p[static_cast<std::size_t>(i++)] = std::stod(token);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--proportions", "not a number: '" + token + "'");
        }
    }
    if (i != lp::kNumClasses)
        throw CLI::ValidationError("--proportions", "expected 5 comma-separated values");
    return p;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // keep LF endings everywhere
    if (!out) throw ValidationError("cannot open output file: " + path);
    return out;
}

struct PipelineOptions {
    std::string corpus_path;
    std::string annotations_path;
    std::string features_spec = "cf,sf,ff,pf,lf,ms";
};

struct Pipeline {
    corpus::Corpus corpus;
    corpus::CitationGraph graph;
    features::FeatureMatrix matrix;
    std::map<features::PairId, Eigen::Index> pair_rows;
};

Pipeline run_feature_pipeline(const PipelineOptions& opts) {
    Pipeline p;
    p.corpus = load_corpus(opts.corpus_path);
    p.graph = corpus::build_citation_graph(p.corpus);
    std::optional<annotations::AnnotationSet> ann = load_annotations(opts.annotations_path);
    features::Extraction extraction = features::extract_pair_features(
        p.corpus, p.graph, ann ? &*ann : nullptr, parse_toggles(opts.features_spec));
    p.matrix = features::assemble_feature_matrix(extraction);
    for (std::size_t r = 0; r < p.matrix.pairs.size(); ++r)
        p.pair_rows.emplace(p.matrix.pairs[r], static_cast<Eigen::Index>(r));
    return p;
}

/// Maps each labels-file line onto its matrix row. Unknown or repeated
/// pairs are rejected.
std::map<Eigen::Index, double> truth_by_row(const Pipeline& p,
                                            const std::vector<formats::LabelRecord>& labels) {
    std::map<Eigen::Index, double> truths;
    for (const formats::LabelRecord& r : labels) {
        auto it = p.pair_rows.find({r.citing, r.key});
        if (it == p.pair_rows.end())
            throw ValidationError("label for unknown pair (" + r.citing + ", " + r.key + ")");
        if (!truths.emplace(it->second, r.value).second)
            throw ValidationError("duplicate label for pair (" + r.citing + ", " + r.key + ")");
    }
    return truths;
}

double intensity_of(const formats::PredictionRow& row, bool expected_intensity) {
    if (!expected_intensity) return static_cast<double>(row.hard_label);
    double value = 0.0;
    double mass = 0.0;
    for (int l = 0; l < lp::kNumClasses; ++l) {
        value += (l + 1) * row.distribution[static_cast<std::size_t>(l)];
        mass += row.distribution[static_cast<std::size_t>(l)];
    }
    if (mass <= 0.0) return static_cast<double>(row.hard_label);
    return value / mass;
}

/// Intensities per resolved edge. Parallel references onto the same target
/// are averaged into the single per-edge weight.
corpus::EdgeWeights weights_from_predictions(const corpus::Corpus& corpus_,
                                             const std::vector<formats::PredictionRow>& rows,
                                             bool expected_intensity) {
    std::map<std::pair<std::string, std::string>, std::pair<double, int>> sums;
    for (const formats::PredictionRow& row : rows) {
        const corpus::Paper* paper = corpus_.find(row.citing);
        if (paper == nullptr)
            throw ValidationError("prediction for unknown paper '" + row.citing + "'");
        const corpus::Reference* ref = nullptr;
        for (const corpus::Reference& r : paper->references)
            if (r.key == row.key) ref = &r;
        if (ref == nullptr)
            throw ValidationError("prediction for unknown reference (" + row.citing + ", " +
                                  row.key + ")");
        if (!ref->target_id) continue; // outside the corpus; no edge to weight
        auto& slot = sums[{row.citing, *ref->target_id}];
        slot.first += intensity_of(row, expected_intensity);
        slot.second += 1;
    }
    corpus::EdgeWeights weights;
    for (const auto& [key, sum] : sums) weights[key] = sum.first / sum.second;
    return weights;
}

// ---------------------------------------------------------------------------

struct FitFlags {
    std::optional<double> sigma;
    double weight_cutoff = 0.0;
    double tolerance = 1e-6;
    int max_iterations = 1000;
    bool plain_lp = false;
    std::optional<lp::Proportions> proportions;

    lp::FitOptions to_options() const {
        lp::FitOptions o;
        o.sigma = sigma;
        o.weight_cutoff = weight_cutoff;
        o.propagation.tolerance = tolerance;
        o.propagation.max_iterations = max_iterations;
        if (plain_lp) {
            o.propagation.clamp_labels = false;
            o.mass_normalize = false;
        }
        o.proportions = proportions;
        return o;
    }
};

int cmd_features(const PipelineOptions& pipeline_opts, const std::string& out_path) {
    Pipeline p = run_feature_pipeline(pipeline_opts);
    std::ofstream out = open_output(out_path);
    formats::write_feature_matrix_tsv(p.matrix, out);
    return 0;
}

int cmd_predict(const PipelineOptions& pipeline_opts, const std::string& labels_path,
                const std::string& out_dir, const FitFlags& flags, std::uint64_t seed) {
    Pipeline p = run_feature_pipeline(pipeline_opts);
    const std::map<Eigen::Index, double> truths = truth_by_row(p, load_labels(labels_path));
    if (truths.empty()) throw ValidationError("labels file covers no pairs");

    lp::LabeledDataset ds;
    ds.points = p.matrix.values;
    for (const auto& [row, value] : truths) ds.labels[row] = lp::round_label(value);

    if (!flags.proportions && !flags.plain_lp) {
        std::set<int> classes;
        for (const auto& [row, label] : ds.labels) classes.insert(label);
        std::string missing;
        for (int c = 1; c <= lp::kNumClasses; ++c) {
            if (!classes.contains(c)) missing += (missing.empty() ? "" : ", ") + std::to_string(c);
        }
        if (!missing.empty())
            throw ValidationError("labels cover no instance of class " + missing +
                                  "; label more pairs or pass --proportions");
    }

    const lp::FitResult fitted = lp::fit(ds, flags.to_options());

    fs::create_directories(out_dir);
    std::vector<formats::PredictionRow> rows;
    rows.reserve(p.matrix.pairs.size());
    for (std::size_t r = 0; r < p.matrix.pairs.size(); ++r) {
        formats::PredictionRow row;
        row.citing = p.matrix.pairs[r].citing;
        row.key = p.matrix.pairs[r].key;
        row.hard_label = fitted.hard_labels[r];
        for (int l = 0; l < lp::kNumClasses; ++l)
            row.distribution[static_cast<std::size_t>(l)] =
                fitted.distributions(static_cast<Eigen::Index>(r), l);
        rows.push_back(std::move(row));
    }
    {
        std::ofstream out = open_output((fs::path(out_dir) / "predictions.tsv").string());
        formats::write_predictions_tsv(rows, out);
    }
    {
        formats::RunMetadata meta;
        meta.sigma = fitted.sigma;
        meta.sigma_method = flags.sigma ? "override" : lp::to_string(fitted.sigma_method);
        meta.iterations = fitted.iterations;
        meta.residual = fitted.residual;
        meta.converged = fitted.converged;
        meta.mass_normalized = !flags.plain_lp;
        meta.proportions = fitted.proportions;
        meta.zero_mass = fitted.zero_mass;
        meta.seed = seed;
        std::ofstream out = open_output((fs::path(out_dir) / "run.json").string());
        formats::write_run_metadata_json(meta, out);
    }
    if (!fitted.converged)
        std::cerr << "warning: propagation stopped at " << fitted.iterations
                  << " iterations with residual " << fitted.residual << "\n";
    return 0;
}

int cmd_evaluate(const PipelineOptions& pipeline_opts, const std::string& labels_path,
                 const std::string& out_path, const FitFlags& flags, int folds,
                 std::uint64_t seed, bool greedy, bool expected_intensity) {
    Pipeline p = run_feature_pipeline(pipeline_opts);
    const std::map<Eigen::Index, double> truths = truth_by_row(p, load_labels(labels_path));
    if (truths.size() < 2) throw ValidationError("evaluation needs at least 2 labeled pairs");

    std::vector<Eigen::Index> labeled_rows;
    labeled_rows.reserve(truths.size());
    for (const auto& [row, value] : truths) labeled_rows.push_back(row);

    auto submatrix = [&](const std::vector<std::string>& columns) {
        std::vector<Eigen::Index> cols;
        for (std::size_t c = 0; c < p.matrix.columns.size(); ++c) {
            for (const std::string& wanted : columns)
                if (p.matrix.columns[c].starts_with(wanted)) {
                    cols.push_back(static_cast<Eigen::Index>(c));
                    break;
                }
        }
        Eigen::MatrixXd sub(static_cast<Eigen::Index>(labeled_rows.size()),
                            static_cast<Eigen::Index>(cols.size()));
        for (std::size_t r = 0; r < labeled_rows.size(); ++r)
            for (std::size_t c = 0; c < cols.size(); ++c)
                sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    p.matrix.values(labeled_rows[r], cols[c]);
        return sub;
    };

    eval::CrossValidationOptions cv;
    cv.folds = folds;
    cv.seed = seed;
    cv.expected_intensity = expected_intensity;
    cv.fit = flags.to_options();

    std::vector<double> truth_values;
    truth_values.reserve(labeled_rows.size());
    for (Eigen::Index row : labeled_rows) truth_values.push_back(truths.at(row));

    const features::GroupToggles toggles = parse_toggles(pipeline_opts.features_spec);
    std::vector<std::string> enabled;
    if (toggles.cf) enabled.push_back("cf:");
    if (toggles.sf) enabled.push_back("sf:");
    if (toggles.ff) enabled.push_back("ff:");
    if (toggles.pf) enabled.push_back("pf:");
    if (toggles.lf) enabled.push_back("lf:");
    if (toggles.ms) enabled.push_back("ms:");

    std::vector<formats::EvaluationStep> steps;
    if (!greedy) {
        eval::LabeledPoints data{submatrix(enabled), truth_values};
        formats::EvaluationStep step;
        for (const std::string& g : enabled) step.groups.push_back(g.substr(0, 2));
        step.report = eval::cross_validate(data, cv);
        steps.push_back(std::move(step));
    } else {
        // Rank the groups by the average |Pearson| of their columns against
        // the training labels, then evaluate cumulative prefixes.
        auto group_score = [&](const std::string& prefix) {
            double total = 0.0;
            int count = 0;
            for (std::size_t c = 0; c < p.matrix.columns.size(); ++c) {
                if (!p.matrix.columns[c].starts_with(prefix)) continue;
                std::vector<eval::PredictionRecord> records;
                records.reserve(labeled_rows.size());
                for (std::size_t r = 0; r < labeled_rows.size(); ++r)
                    records.push_back({"", "",
                                       p.matrix.values(labeled_rows[r],
                                                       static_cast<Eigen::Index>(c)),
                                       truth_values[r]});
                const eval::RegressionMetrics m = eval::regression_metrics(records);
                total += m.pearson ? std::abs(*m.pearson) : 0.0;
                ++count;
            }
            return count > 0 ? total / count : 0.0;
        };

        std::vector<std::pair<double, std::string>> ranked;
        for (const std::string& g : enabled) ranked.emplace_back(-group_score(g), g);
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });

        std::vector<std::string> cumulative;
        for (const auto& [neg_score, group] : ranked) {
            cumulative.push_back(group);
            eval::LabeledPoints data{submatrix(cumulative), truth_values};
            formats::EvaluationStep step;
            step.added_group = group.substr(0, 2);
            for (const std::string& g : cumulative) step.groups.push_back(g.substr(0, 2));
            step.report = eval::cross_validate(data, cv);
            steps.push_back(std::move(step));
        }
    }

    std::ofstream out = open_output(out_path);
    formats::write_evaluation_json(steps, seed, out);
    return 0;
}

int cmd_rank(const std::string& corpus_path, const std::string& predictions_path,
             const std::string& measure, const std::string& out_path, double damping,
             bool expected_intensity) {
    const corpus::Corpus corpus_ = load_corpus(corpus_path);
    if (corpus_.size() == 0) {
        open_output(out_path); // empty ranking is valid output
        return 0;
    }

    const bool needs_weights =
        measure == "infcite" || measure == "infpr" || measure == "hifindex";
    if (needs_weights && predictions_path.empty())
        throw ValidationError("measure '" + measure +
                              "' needs intensities; run `gralap predict` and pass "
                              "--predictions");

    corpus::CitationGraph graph;
    if (needs_weights) {
        const corpus::EdgeWeights weights = weights_from_predictions(
            corpus_, load_predictions(predictions_path), expected_intensity);
        graph = corpus::build_citation_graph(corpus_, &weights);
    } else {
        graph = corpus::build_citation_graph(corpus_);
    }

    metrics::ScoreTable table;
    if (measure == "rawcite") {
        table = metrics::raw_cite(graph);
    } else if (measure == "infcite") {
        table = metrics::inf_cite(graph);
    } else if (measure == "rawpr" || measure == "infpr") {
        metrics::PageRankOptions opts;
        opts.damping = damping;
        opts.weighted = measure == "infpr";
        table = metrics::pagerank(graph, opts);
        if (!table.converged) std::cerr << "warning: pagerank did not converge\n";
    } else { // hindex, hifindex
        table.measure = measure;
        for (const metrics::AuthorProfile& profile :
             metrics::author_profiles(corpus_, graph)) {
            const int value = measure == "hindex" ? metrics::h_index(profile.citation_counts)
                                                  : metrics::hif_index(profile);
            table.scores.emplace_back(profile.author, static_cast<double>(value));
        }
    }

    std::ofstream out = open_output(out_path);
    formats::write_ranking_tsv(table, out);
    return 0;
}

int cmd_stacking(const std::string& corpus_path, const std::string& predictions_path,
                 const std::string& out_path, std::optional<int> year,
                 bool expected_intensity) {
    const corpus::Corpus corpus_ = load_corpus(corpus_path);
    const corpus::EdgeWeights weights = weights_from_predictions(
        corpus_, load_predictions(predictions_path), expected_intensity);
    const corpus::CitationGraph graph = corpus::build_citation_graph(corpus_, &weights);

    std::set<std::string> journals;
    int max_year = std::numeric_limits<int>::min();
    for (const corpus::Paper& p : corpus_.papers()) {
        if (p.venue) journals.insert(*p.venue);
        max_year = std::max(max_year, p.year);
    }
    if (journals.empty()) throw ValidationError("no venue metadata in the corpus");
    const int census_year = year.value_or(max_year);

    formats::StackingReport report;
    report.year = census_year;
    std::vector<metrics::JournalImpact> rows;
    for (const std::string& journal : journals) {
        const metrics::JournalYearStats stats =
            metrics::journal_year_stats(corpus_, graph, journal, census_year);
        const std::optional<double> raw = metrics::impact_factor(stats, false);
        const std::optional<double> weighted = metrics::impact_factor(stats, true);
        if (!raw || !weighted) {
            report.skipped.push_back(journal);
            continue;
        }
        rows.push_back({journal, *raw, *weighted,
                        metrics::self_journal_fraction(corpus_, graph, journal)});
    }
    report.entries = metrics::detect_stacking(rows);

    std::ofstream out = open_output(out_path);
    formats::write_stacking_report_json(report, out);
    return 0;
}

int cmd_export_graph(const std::string& corpus_path, const std::string& predictions_path,
                     const std::string& out_path, bool expected_intensity) {
    const corpus::Corpus corpus_ = load_corpus(corpus_path);
    const corpus::EdgeWeights weights = weights_from_predictions(
        corpus_, load_predictions(predictions_path), expected_intensity);
    const corpus::CitationGraph graph = corpus::build_citation_graph(corpus_, &weights);
    std::ofstream out = open_output(out_path);
    formats::write_edge_list_tsv(graph, out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reference-intensity labeling and intensity-weighted bibliometrics"};
    app.require_subcommand(1);
    app.fallthrough(); // lets --config follow the subcommand name
    app.set_config("--config", "", "Read options from a TOML-style config file");

    PipelineOptions pipeline;
    FitFlags fit_flags;
    std::string labels_path, predictions_path, out_path, out_dir;
    std::string measure, sigma_spec, proportions_spec;
    std::uint64_t seed = 0;
    int folds = 10;
    bool greedy = false;
    bool expected_intensity = false;
    std::optional<int> census_year;
    double damping = 0.85;

    auto add_pipeline_options = [&](CLI::App* cmd) {
        cmd->add_option("--corpus", pipeline.corpus_path, "Corpus JSONL file")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--annotations", pipeline.annotations_path,
                        "Linguistic annotations sidecar (JSONL)")
            ->check(CLI::ExistingFile);
        cmd->add_option("--features", pipeline.features_spec,
                        "Comma-separated feature groups (cf,sf,ff,pf,lf,ms)");
    };
    auto add_fit_options = [&](CLI::App* cmd) {
        cmd->add_option("--sigma", sigma_spec, "RBF bandwidth override (positive real)");
        cmd->add_option("--weight-cutoff", fit_flags.weight_cutoff,
                        "Zero graph weights below this value (default 0: fully "
                        "connected, as the model defines)")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--tol", fit_flags.tolerance, "Convergence tolerance")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--max-iter", fit_flags.max_iterations, "Iteration cap")
            ->check(CLI::PositiveNumber);
        cmd->add_flag("--plain-lp", fit_flags.plain_lp,
                      "Plain label propagation: no clamping, no mass normalization");
        cmd->add_option("--proportions", proportions_spec,
                        "Class proportions c1,c2,c3,c4,c5 (ratio; overrides the "
                        "training-label shares)");
    };

    CLI::App* features_cmd =
        app.add_subcommand("features", "Extract the pair feature matrix");
    add_pipeline_options(features_cmd);
    features_cmd->add_option("--out", out_path, "Output TSV path")->required();

    CLI::App* predict_cmd =
        app.add_subcommand("predict", "Label every pair via label propagation");
    add_pipeline_options(predict_cmd);
    add_fit_options(predict_cmd);
    predict_cmd->add_option("--labels", labels_path, "Training labels TSV")
        ->required()
        ->check(CLI::ExistingFile);
    predict_cmd->add_option("--out-dir", out_dir, "Output directory")->required();
    predict_cmd->add_option("--seed", seed, "Run seed (recorded in run.json)");

    CLI::App* evaluate_cmd =
        app.add_subcommand("evaluate", "Cross-validate against the labeled pairs");
    add_pipeline_options(evaluate_cmd);
    add_fit_options(evaluate_cmd);
    evaluate_cmd->add_option("--labels", labels_path, "Training labels TSV")
        ->required()
        ->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--out", out_path, "Metrics report JSON path")->required();
    evaluate_cmd->add_option("--k", folds, "Fold count")->check(CLI::PositiveNumber);
    evaluate_cmd->add_option("--seed", seed, "Fold-shuffling seed");
    evaluate_cmd->add_flag("--greedy", greedy,
                           "Add feature groups greedily, one metrics row per step");
    evaluate_cmd->add_flag("--expected-intensity", expected_intensity,
                           "Score the expected intensity instead of the hard label");

    CLI::App* rank_cmd = app.add_subcommand("rank", "Rank papers or authors");
    rank_cmd->add_option("--corpus", pipeline.corpus_path, "Corpus JSONL file")
        ->required()
        ->check(CLI::ExistingFile);
    rank_cmd
        ->add_option("--measure", measure,
                     "rawcite | rawpr | infcite | infpr | hindex | hifindex")
        ->required()
        ->check(CLI::IsMember(
            {"rawcite", "rawpr", "infcite", "infpr", "hindex", "hifindex"}));
    rank_cmd->add_option("--predictions", predictions_path, "Predictions TSV")
        ->check(CLI::ExistingFile);
    rank_cmd->add_option("--out", out_path, "Ranking TSV path")->required();
    rank_cmd->add_option("--damping", damping, "PageRank damping factor")
        ->check(CLI::Range(0.0, 1.0));
    rank_cmd->add_flag("--expected-intensity", expected_intensity,
                       "Use the expected intensity of each prediction");

    CLI::App* stacking_cmd =
        app.add_subcommand("stacking", "Flag journals with anomalous weighted impact");
    stacking_cmd->add_option("--corpus", pipeline.corpus_path, "Corpus JSONL file")
        ->required()
        ->check(CLI::ExistingFile);
    stacking_cmd->add_option("--predictions", predictions_path, "Predictions TSV")
        ->required()
        ->check(CLI::ExistingFile);
    stacking_cmd->add_option("--out", out_path, "Stacking report JSON path")->required();
    int census_year_value = 0;
    CLI::Option* year_opt =
        stacking_cmd->add_option("--year", census_year_value, "Census year");
    stacking_cmd->add_flag("--expected-intensity", expected_intensity,
                           "Use the expected intensity of each prediction");

    CLI::App* export_cmd =
        app.add_subcommand("export-graph", "Export the weighted citation edge list");
    export_cmd->add_option("--corpus", pipeline.corpus_path, "Corpus JSONL file")
        ->required()
        ->check(CLI::ExistingFile);
    export_cmd->add_option("--predictions", predictions_path, "Predictions TSV")
        ->required()
        ->check(CLI::ExistingFile);
    export_cmd->add_option("--out", out_path, "Edge list TSV path")->required();
    export_cmd->add_flag("--expected-intensity", expected_intensity,
                         "Use the expected intensity of each prediction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!sigma_spec.empty()) {
            double sigma = 0.0;
            try {
                sigma = std::stod(sigma_spec);
            } catch (const std::exception&) {
                throw CLI::ValidationError("--sigma", "not a number: '" + sigma_spec + "'");
            }
            if (!(sigma > 0.0))
                throw CLI::ValidationError("--sigma", "must be positive");
            fit_flags.sigma = sigma;
        }
        if (!proportions_spec.empty()) fit_flags.proportions = parse_proportions(proportions_spec);
        if (year_opt->count() > 0) census_year = census_year_value;

        if (features_cmd->parsed()) return cmd_features(pipeline, out_path);
        if (predict_cmd->parsed())
            return cmd_predict(pipeline, labels_path, out_dir, fit_flags, seed);
        if (evaluate_cmd->parsed())
            return cmd_evaluate(pipeline, labels_path, out_path, fit_flags, folds, seed,
                                greedy, expected_intensity);
        if (rank_cmd->parsed())
            return cmd_rank(pipeline.corpus_path, predictions_path, measure, out_path,
                            damping, expected_intensity);
        if (stacking_cmd->parsed())
            return cmd_stacking(pipeline.corpus_path, predictions_path, out_path,
                                census_year, expected_intensity);
        if (export_cmd->parsed())
            return cmd_export_graph(pipeline.corpus_path, predictions_path, out_path,
                                    expected_intensity);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
