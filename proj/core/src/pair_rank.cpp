#include "hypercomp/pair_rank.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include "hypercomp/error.hpp"
#include "hypercomp/text.hpp"

namespace hypercomp::rank {

bool ranks_before(const WeightedPair& a, const WeightedPair& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.hyponym != b.hyponym) return a.hyponym < b.hyponym;
    return a.hypernym < b.hypernym;
}

PairCounts aggregate(const std::vector<extract::PairOccurrence>& occurrences) {
    PairCounts counts;
    for (const auto& o : occurrences) ++counts[{o.hyponym, o.hypernym}];
    return counts;
}

void merge_counts(PairCounts& into, const PairCounts& other) {
    for (const auto& [key, c] : other) into[key] += c;
}

RankedPairList normalize(const PairCounts& counts) {
    // Number of list entries (distinct hyponyms) per hypernym.
    std::unordered_map<std::string, std::uint64_t> hypernym_total;
    for (const auto& [key, c] : counts) {
        if (c == 0) throw InvalidArgument("pair count must be >= 1");
        ++hypernym_total[key.second];
    }
    RankedPairList out;
    out.reserve(counts.size());
    for (const auto& [key, c] : counts) {
        const double denom = std::max(std::log(static_cast<double>(hypernym_total[key.second])), 1.0);
        out.push_back({key.first, key.second, c, static_cast<double>(c) / denom});
    }
    std::sort(out.begin(), out.end(), ranks_before);
    return out;
}

namespace {

std::size_t percent_of(double percent, std::size_t n) {
    if (!(percent >= 0.0 && percent <= 100.0)) throw InvalidArgument("percent must lie in [0, 100]");
    auto cut = static_cast<std::size_t>(std::floor(percent * static_cast<double>(n) / 100.0));
    return std::min(cut, n);
}

}  // namespace

RankedPairList drop_top_percent(const RankedPairList& list, double percent) {
    const auto cut = percent_of(percent, list.size());
    return RankedPairList(list.begin() + static_cast<std::ptrdiff_t>(cut), list.end());
}

std::vector<std::string> surface_variants(std::string_view surface) {
    std::vector<std::string> out{text::to_lower(surface)};
    auto spaced = text::replace_all(out.front(), '_', ' ');
    if (spaced != out.front()) out.push_back(std::move(spaced));
    return out;
}

TrainingList build_training_list(const RankedPairList& list, const std::vector<std::string>& targets, int k,
                                 double m_percent) {
    if (k < 1) throw InvalidArgument("k must be >= 1");
    const auto top_n = percent_of(m_percent, list.size());

    // Positions of each surface on either side, in list (weight) order.
    std::unordered_map<std::string_view, std::vector<std::size_t>> as_hypo, as_hyper;
    for (std::size_t i = 0; i < list.size(); ++i) {
        as_hypo[list[i].hyponym].push_back(i);
        as_hyper[list[i].hypernym].push_back(i);
    }

    TrainingList result;
    std::set<PairKey> seen;
    auto add = [&](const WeightedPair& p) {
        PairKey key{p.hyponym, p.hypernym};
        if (seen.insert(key).second) result.pairs.push_back(std::move(key));
    };

    const auto cap = static_cast<std::size_t>(k);
    for (const auto& target : targets) {
        bool contributed = false;
        for (const auto& variant : surface_variants(target)) {
            for (auto* side : {&as_hypo, &as_hyper}) {
                auto it = side->find(variant);
                if (it == side->end()) continue;
                const auto& idx = it->second;
                for (std::size_t j = 0; j < std::min(cap, idx.size()); ++j) add(list[idx[j]]);
                contributed = true;
            }
            if (contributed) break;
        }
        if (!contributed) result.uncovered_targets.push_back(target);
    }
    for (std::size_t i = 0; i < top_n; ++i) add(list[i]);
    return result;
}

std::vector<std::string> top_hypernyms(const RankedPairList& list, std::string_view surface, int k) {
    if (k < 1) throw InvalidArgument("k must be >= 1");
    std::vector<std::string> out;
    for (const auto& p : list) {
        if (out.size() >= static_cast<std::size_t>(k)) break;
        if (p.hyponym != surface) continue;
        if (std::find(out.begin(), out.end(), p.hypernym) == out.end()) out.push_back(p.hypernym);
    }
    return out;
}

HypernymIndex::HypernymIndex(const RankedPairList& list) {
    for (const auto& p : list) {
        auto& v = by_hyponym_[p.hyponym];
        if (std::find(v.begin(), v.end(), p.hypernym) == v.end()) v.push_back(p.hypernym);
    }
}

std::vector<std::string> HypernymIndex::top(std::string_view surface, int k) const {
    if (k < 1) throw InvalidArgument("k must be >= 1");
    auto it = by_hyponym_.find(std::string(surface));
    if (it == by_hyponym_.end()) return {};
    const auto n = std::min(it->second.size(), static_cast<std::size_t>(k));
    return {it->second.begin(), it->second.begin() + static_cast<std::ptrdiff_t>(n)};
}

void write_ranked(std::ostream& out, const RankedPairList& list) {
    for (const auto& p : list)
        out << p.hyponym << '\t' << p.hypernym << '\t' << p.count << '\t' << text::format_double(p.weight) << '\n';
}

RankedPairList read_ranked(std::istream& in, const std::string& source_name) {
    RankedPairList out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cols = text::split(line, '\t');
        if (cols.size() != 4) throw ParseError(source_name, lineno, "expected 4 tab-separated columns");
        auto count = text::parse_int(cols[2]);
        auto weight = text::parse_double(cols[3]);
        if (!count || *count < 1) throw ParseError(source_name, lineno, "count must be a positive integer");
        if (!weight || !std::isfinite(*weight) || *weight < 0.0)
            throw ParseError(source_name, lineno, "weight must be a finite nonnegative number");
        WeightedPair p{std::string(cols[0]), std::string(cols[1]), static_cast<std::uint64_t>(*count), *weight};
        if (!out.empty() && !ranks_before(out.back(), p))
            throw ParseError(source_name, lineno, "list is not sorted by (weight desc, hyponym, hypernym)");
        out.push_back(std::move(p));
    }
    return out;
}

void write_training_list(std::ostream& out, const std::vector<PairKey>& pairs) {
    for (const auto& [hypo, hyper] : pairs) out << hypo << '\t' << hyper << '\n';
}

std::vector<PairKey> read_training_list(std::istream& in, const std::string& source_name) {
    std::vector<PairKey> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cols = text::split(line, '\t');
        if (cols.size() < 2) throw ParseError(source_name, lineno, "expected hyponym<TAB>hypernym");
        if (cols[0].empty() || cols[1].empty()) throw ParseError(source_name, lineno, "empty surface");
        out.emplace_back(std::string(cols[0]), std::string(cols[1]));
    }
    return out;
}

}  // namespace hypercomp::rank
