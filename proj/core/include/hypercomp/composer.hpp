#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hypercomp/dsm.hpp"
#include "hypercomp/hyperbolic.hpp"
#include "hypercomp/pair_rank.hpp"

// Unsupervised compositionality score: distributional similarity interpolated with
// the best Poincare similarity between a phrase hypernym and the sum of two
// constituent hypernyms.
namespace hypercomp::compose {

struct CompoundEntry {
    std::string w1;
    std::string w2;
    std::string phrase;  // "w1 w2", lowercased
    double gold = 0.0;
    std::string dataset;  // RD, RD++, FD or a user label
};

struct ScoreParams {
    double alpha = 0.4;
    int k = 5;
    bool fallback_enabled = true;

    void validate() const;
};

enum class ScoreSource { Combined, FallbackDistributional, Uncovered };

std::string_view to_string(ScoreSource s);
ScoreSource parse_source(std::string_view s);

struct ScoredEntry {
    CompoundEntry entry;
    double score = 0.0;    // NaN when uncovered
    double score_d = 0.0;  // distributional part, NaN when the DSM misses a surface
    ScoreSource source = ScoreSource::Uncovered;
};

struct HypernymSets {
    std::vector<std::string> phrase;
    std::vector<std::string> w1;
    std::vector<std::string> w2;
};

/// Top-k hypernyms of the phrase and of each constituent.
HypernymSets hypernym_sets(const CompoundEntry& entry, const rank::HypernymIndex& index, int k);
HypernymSets hypernym_sets(const CompoundEntry& entry, const rank::RankedPairList& ranked, int k);

/// Drops hypernyms that have no Poincare vector.
HypernymSets filter_to_vocab(const HypernymSets& sets, const hyperbolic::PoincareEmbedding& poin);

/// max over (a, b, c) of Score_P(v(a), project(v(b) + v(c))). All three sets must
/// be non-empty and fully covered by `poin`.
double max_poincare_term(const HypernymSets& sets, const hyperbolic::PoincareEmbedding& poin);

/// (1 - alpha) * Score_D + alpha * max term, with fallback/uncovered marking.
/// A fallback entry carries its raw Score_D; score_dataset rescales it.
ScoredEntry combined_score(const CompoundEntry& entry, const dsm::DenseEmbedding& dsm,
                           const hyperbolic::PoincareEmbedding& poin, const rank::HypernymIndex& index,
                           const ScoreParams& params);

/// Multiplies each uncovered Score_D by mean(covered combined) / mean(covered Score_D).
std::vector<double> fallback_scale(const std::vector<double>& covered_combined,
                                   const std::vector<double>& covered_distributional,
                                   const std::vector<double>& uncovered_distributional);

struct CoverageReport {
    std::size_t combined = 0;
    std::size_t fallback = 0;
    std::size_t uncovered = 0;
    double scale_factor = 1.0;
    bool scaled = false;  // false when no combined entry exists to calibrate against
    std::vector<std::string> uncovered_phrases;
};

struct DatasetScores {
    std::vector<ScoredEntry> entries;
    CoverageReport coverage;
};

DatasetScores score_dataset(const std::vector<CompoundEntry>& entries, const dsm::DenseEmbedding& dsm,
                            const hyperbolic::PoincareEmbedding& poin, const rank::HypernymIndex& index,
                            const ScoreParams& params);

struct PredictionRow {
    std::string phrase;
    double gold = 0.0;
    double score = 0.0;
    ScoreSource source = ScoreSource::Uncovered;
};

// `phrase<TAB>gold<TAB>score<TAB>source`
void write_predictions(std::ostream& out, const std::vector<ScoredEntry>& scored);
std::vector<PredictionRow> read_predictions(std::istream& in, const std::string& source_name);

}  // namespace hypercomp::compose
