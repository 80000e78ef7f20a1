#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hypercomp/corpus_extract.hpp"

// Counting, log-frequency weighting and selection of hyponym-hypernym pairs.
namespace hypercomp::rank {

using PairKey = std::pair<std::string, std::string>;  // (hyponym, hypernym)
using PairCounts = std::map<PairKey, std::uint64_t>;

struct WeightedPair {
    std::string hyponym;
    std::string hypernym;
    std::uint64_t count = 0;
    double weight = 0.0;
};

/// Pairs sorted by weight descending, ties by (hyponym, hypernym) ascending.
using RankedPairList = std::vector<WeightedPair>;

/// The composite sort key used everywhere in this module.
bool ranks_before(const WeightedPair& a, const WeightedPair& b);

PairCounts aggregate(const std::vector<extract::PairOccurrence>& occurrences);

/// Adds `other` into `into`.
void merge_counts(PairCounts& into, const PairCounts& other);

/// weight = count / max(ln(global hypernym frequency), 1), where the global frequency
/// of a hypernym is the number of list entries (distinct hyponyms) it heads.
RankedPairList normalize(const PairCounts& counts);

/// Removes the first floor(p/100 * N) entries.
RankedPairList drop_top_percent(const RankedPairList& list, double percent);

struct TrainingList {
    std::vector<PairKey> pairs;
    std::vector<std::string> uncovered_targets;  // targets that contributed nothing
};

/// Per target: its top-k pairs as hyponym and its top-k pairs as hypernym; then the
/// top floor(m/100 * N) pairs of the full list. Deduplicated, first occurrence wins.
TrainingList build_training_list(const RankedPairList& list, const std::vector<std::string>& targets,
                                 int k, double m_percent);

/// Hypernyms of `surface` by descending weight, deduplicated, at most k.
std::vector<std::string> top_hypernyms(const RankedPairList& list, std::string_view surface, int k);

/// Lookup table for repeated top_hypernyms queries over the same list.
class HypernymIndex {
public:
    explicit HypernymIndex(const RankedPairList& list);
    std::vector<std::string> top(std::string_view surface, int k) const;

private:
    std::unordered_map<std::string, std::vector<std::string>> by_hyponym_;
};

/// The spellings under which a dataset surface is looked up in pair lists:
/// lowercased as given, then with underscores turned into spaces.
std::vector<std::string> surface_variants(std::string_view surface);

// `hyponym<TAB>hypernym<TAB>count<TAB>weight`
void write_ranked(std::ostream& out, const RankedPairList& list);
RankedPairList read_ranked(std::istream& in, const std::string& source_name);

// `hyponym<TAB>hypernym`
void write_training_list(std::ostream& out, const std::vector<PairKey>& pairs);
std::vector<PairKey> read_training_list(std::istream& in, const std::string& source_name);

}  // namespace hypercomp::rank
