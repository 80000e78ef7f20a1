#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hypercomp/composer.hpp"
#include "hypercomp/dsm.hpp"
#include "hypercomp/hyperbolic.hpp"
#include "hypercomp/pair_rank.hpp"
#include "hypercomp/stats.hpp"

// Dataset loading, evaluation and hyperparameter sweeps tying the modules together.
namespace hypercomp::pipeline {

enum class DatasetFormat { Reddy, Farahmand };

DatasetFormat parse_format(std::string_view name);

/// Zero-based column positions. Defaults: reddy `phrase, score`;
/// farahmand `phrase, j1, j2, j3, j4`.
struct ColumnMap {
    std::size_t phrase = 0;
    std::vector<std::size_t> scores;

    static ColumnMap defaults(DatasetFormat format);
    /// Parses "0,1" or "0,1,2,3,4".
    static ColumnMap parse(std::string_view spec);
};

struct DatasetReport {
    std::size_t rows = 0;
    std::size_t loaded = 0;
    std::vector<std::string> errors;  // "line N: reason"
};

/// Reddy gold is the score in [0, 5]; Farahmand gold is the sum of four binary
/// judgments. Phrases are lowercased and must split into exactly two tokens.
/// Bad rows are reported and skipped; throws if nothing loads.
std::vector<compose::CompoundEntry> load_dataset(std::istream& in, const std::string& source_name,
                                                 DatasetFormat format, const std::string& label = {},
                                                 const std::optional<ColumnMap>& columns = std::nullopt,
                                                 DatasetReport* report = nullptr);
std::vector<compose::CompoundEntry> load_dataset(const std::string& path, DatasetFormat format,
                                                 const std::string& label = {},
                                                 const std::optional<ColumnMap>& columns = std::nullopt,
                                                 DatasetReport* report = nullptr);

/// Phrases and constituents, first-seen order, no duplicates.
std::vector<std::string> dataset_targets(const std::vector<compose::CompoundEntry>& entries);

struct Evaluation {
    std::size_t n = 0;
    double rho = 0.0;
    double abs_rho = 0.0;
};

/// Spearman over the entries that received a score.
Evaluation evaluate(const std::vector<compose::ScoredEntry>& scored);
Evaluation evaluate(const std::vector<compose::PredictionRow>& rows);

struct Comparison {
    Evaluation first;
    Evaluation second;
    std::size_t paired = 0;
    stats::WilcoxonResult wilcoxon;
    std::optional<stats::ZTestResult> z;  // absent when both samples are constant
};

/// Pairs two prediction files by phrase (rows scored in both) and tests whether
/// their predictions differ.
Comparison compare(const std::vector<compose::PredictionRow>& a, const std::vector<compose::PredictionRow>& b);

/// Training list -> Poincare embedding for one (k, m) setting.
hyperbolic::TrainResult train_for(const rank::RankedPairList& ranked, const std::vector<std::string>& targets,
                                  int k, double m_percent, const hyperbolic::TrainConfig& cfg);

struct GridCell {
    int k = 0;
    double m = 0.0;
    double alpha = 0.0;
    Evaluation eval;
    compose::CoverageReport coverage;
    std::string error;  // non-empty when the cell failed
};

struct GridResult {
    std::vector<GridCell> cells;
    std::size_t trainings = 0;
};

/// One evaluation per (k, m, alpha); embeddings are trained once per (k, m) and
/// reused across alphas. A failing cell records its error and the sweep goes on.
GridResult grid_search(const std::vector<compose::CompoundEntry>& entries, const dsm::DenseEmbedding& dsm,
                       const rank::RankedPairList& ranked, const std::vector<int>& ks,
                       const std::vector<double>& ms, const std::vector<double>& alphas,
                       const hyperbolic::TrainConfig& train_cfg, bool fallback_enabled);

/// `k<TAB>m<TAB>alpha<TAB>abs_rho<TAB>n<TAB>combined<TAB>fallback<TAB>uncovered<TAB>error`
void write_grid(std::ostream& out, const GridResult& grid);

}  // namespace hypercomp::pipeline
