#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gralap/corpus.hpp"

namespace gralap::metrics {

/// Per-paper (or per-author) scores under one measure, in node order.
struct ScoreTable {
    std::string measure;
    std::vector<std::pair<std::string, double>> scores;
    bool converged = true; ///< false only for non-converged PageRank
};

/// In-degree per node.
ScoreTable raw_cite(const corpus::CitationGraph& graph);

/// Sum of incoming edge intensities per node. Requires a weighted graph.
ScoreTable inf_cite(const corpus::CitationGraph& graph);

struct PageRankOptions {
    double damping = 0.85;
    bool weighted = false;
    double tolerance = 1e-10;
    int max_iterations = 200;
};

/// PageRank with uniform dangling-mass redistribution. The weighted variant
/// splits a node's rank over its out-edges in proportion to intensity.
ScoreTable pagerank(const corpus::CitationGraph& graph, const PageRankOptions& options = {});

/// Largest h such that at least h entries are >= h.
int h_index(const std::vector<long long>& citation_counts);

struct AuthorProfile {
    std::string author;
    std::vector<std::string> papers;
    std::vector<long long> citation_counts; ///< aligned with papers
    std::vector<double> influence;          ///< Inf(p): summed in-edge intensity
};

/// h over per-paper influence, with Inf(p) rounded half-up to whole
/// citations before applying the threshold.
int hif_index(const AuthorProfile& profile);

/// One profile per distinct author id, ordered by author id. Influence is
/// filled only when the graph is weighted.
std::vector<AuthorProfile> author_profiles(const corpus::Corpus& corpus,
                                           const corpus::CitationGraph& graph);

struct JournalYearStats {
    std::string journal;
    int year = 0;
    long long citable_items = 0;       ///< items published in year-1, year-2
    long long citations_received = 0;  ///< from papers of `year` to those items
    double weighted_citations = 0.0;
    long long self_journal_citations = 0;
};

/// Two-year-window census for one journal. Requires a weighted graph for
/// weighted_citations (zero otherwise).
JournalYearStats journal_year_stats(const corpus::Corpus& corpus,
                                    const corpus::CitationGraph& graph,
                                    const std::string& journal, int year);

/// citations / citable items; absent when there are no citable items.
std::optional<double> impact_factor(const JournalYearStats& stats, bool weighted);

/// Fraction of all citations received by a journal's papers that originate
/// within the same journal. 0 when the journal receives no citations.
double self_journal_fraction(const corpus::Corpus& corpus,
                             const corpus::CitationGraph& graph,
                             const std::string& journal);

struct JournalImpact {
    std::string journal;
    double impact_factor = 0.0;
    double weighted_impact_factor = 0.0;
    double self_fraction = 0.0;
};

struct StackingEntry {
    std::string journal;
    double impact_factor = 0.0;
    double weighted_impact_factor = 0.0;
    double deviation = 0.0; ///< d_J - mean(d), d_J = IF_if - IF
    double self_fraction = 0.0;
    bool flagged = false;
};

/// Flags journals whose IF_if - IF difference deviates from the mean by
/// more than three population standard deviations. Requires >= 3 journals;
/// zero variance flags nothing.
std::vector<StackingEntry> detect_stacking(const std::vector<JournalImpact>& journals);

} // namespace gralap::metrics
