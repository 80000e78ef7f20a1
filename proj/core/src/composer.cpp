#include "hypercomp/composer.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include "hypercomp/error.hpp"
#include "hypercomp/text.hpp"

namespace hypercomp::compose {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }
}  // namespace

void ScoreParams::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0, 1]");
    if (k < 1) throw InvalidArgument("k must be >= 1");
}

std::string_view to_string(ScoreSource s) {
    switch (s) {
        case ScoreSource::Combined: return "combined";
        case ScoreSource::FallbackDistributional: return "fallback-distributional";
        case ScoreSource::Uncovered: return "uncovered";
    }
    return "uncovered";
}

ScoreSource parse_source(std::string_view s) {
    if (s == "combined") return ScoreSource::Combined;
    if (s == "fallback-distributional") return ScoreSource::FallbackDistributional;
    if (s == "uncovered") return ScoreSource::Uncovered;
    throw InvalidArgument("unknown score source '" + std::string(s) + "'");
}

namespace {

template <typename Lookup>
std::vector<std::string> first_nonempty(std::string_view surface, Lookup&& lookup) {
    for (const auto& variant : rank::surface_variants(surface)) {
        auto hs = lookup(variant);
        if (!hs.empty()) return hs;
    }
    return {};
}

template <typename Lookup>
HypernymSets sets_via(const CompoundEntry& e, Lookup&& lookup) {
    return {first_nonempty(e.phrase, lookup), first_nonempty(e.w1, lookup), first_nonempty(e.w2, lookup)};
}

}  // namespace

HypernymSets hypernym_sets(const CompoundEntry& entry, const rank::HypernymIndex& index, int k) {
    return sets_via(entry, [&](const std::string& s) { return index.top(s, k); });
}

HypernymSets hypernym_sets(const CompoundEntry& entry, const rank::RankedPairList& ranked, int k) {
    return sets_via(entry, [&](const std::string& s) { return rank::top_hypernyms(ranked, s, k); });
}

HypernymSets filter_to_vocab(const HypernymSets& sets, const hyperbolic::PoincareEmbedding& poin) {
    auto keep = [&](const std::vector<std::string>& in) {
        std::vector<std::string> out;
        for (const auto& s : in)
            if (poin.index_of(s)) out.push_back(s);
        return out;
    };
    return {keep(sets.phrase), keep(sets.w1), keep(sets.w2)};
}

double max_poincare_term(const HypernymSets& sets, const hyperbolic::PoincareEmbedding& poin) {
    if (sets.phrase.empty() || sets.w1.empty() || sets.w2.empty())
        throw InvalidArgument("max_poincare_term needs three non-empty hypernym sets");
    auto vec = [&](const std::string& s) {
        auto v = poin.find(s);
        if (!v) throw UncoveredError({s});
        return *v;
    };
    const auto dim = static_cast<std::size_t>(poin.dim());
    std::vector<double> sum(dim);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& b : sets.w1) {
        const auto vb = vec(b);
        for (const auto& c : sets.w2) {
            const auto vc = vec(c);
            for (std::size_t i = 0; i < dim; ++i) sum[i] = vb[i] + vc[i];
            hyperbolic::project_in_place(sum);
            for (const auto& a : sets.phrase) best = std::max(best, hyperbolic::poincare_similarity(vec(a), sum));
        }
    }
    return best;
}

ScoredEntry combined_score(const CompoundEntry& entry, const dsm::DenseEmbedding& dsm,
                           const hyperbolic::PoincareEmbedding& poin, const rank::HypernymIndex& index,
                           const ScoreParams& params) {
    params.validate();
    ScoredEntry out{entry, kNaN, kNaN, ScoreSource::Uncovered};
    try {
        out.score_d = dsm::score_d(entry.phrase, entry.w1, entry.w2, dsm);
    } catch (const UncoveredError&) {
        return out;
    } catch (const DomainError&) {
        return out;
    }

    const auto sets = filter_to_vocab(hypernym_sets(entry, index, params.k), poin);
    if (sets.phrase.empty() || sets.w1.empty() || sets.w2.empty()) {
        if (params.fallback_enabled) {
            out.source = ScoreSource::FallbackDistributional;
            out.score = out.score_d;
        }
        return out;
    }

    out.source = ScoreSource::Combined;
    if (params.alpha == 0.0) {
        out.score = out.score_d;
        return out;
    }
    const double p = max_poincare_term(sets, poin);
    out.score = params.alpha == 1.0 ? p : (1.0 - params.alpha) * out.score_d + params.alpha * p;
    return out;
}

std::vector<double> fallback_scale(const std::vector<double>& covered_combined,
                                   const std::vector<double>& covered_distributional,
                                   const std::vector<double>& uncovered_distributional) {
    if (covered_combined.empty() || covered_distributional.empty())
        throw InvalidArgument("fallback scaling needs at least one covered score");
    auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!finite(covered_combined) || !finite(covered_distributional) || !finite(uncovered_distributional))
        throw InvalidArgument("fallback scaling inputs must be finite");
    const double denom = mean(covered_distributional);
    if (denom == 0.0) throw DomainError("mean covered distributional score is zero");
    const double factor = mean(covered_combined) / denom;
    std::vector<double> out(uncovered_distributional);
    for (double& x : out) x *= factor;
    return out;
}

DatasetScores score_dataset(const std::vector<CompoundEntry>& entries, const dsm::DenseEmbedding& dsm,
                            const hyperbolic::PoincareEmbedding& poin, const rank::HypernymIndex& index,
                            const ScoreParams& params) {
    DatasetScores result;
    result.entries.reserve(entries.size());
    std::vector<double> comb, comb_d, fb_d;
    for (const auto& e : entries) {
        auto s = combined_score(e, dsm, poin, index, params);
        switch (s.source) {
            case ScoreSource::Combined:
                ++result.coverage.combined;
                comb.push_back(s.score);
                comb_d.push_back(s.score_d);
                break;
            case ScoreSource::FallbackDistributional:
                ++result.coverage.fallback;
                fb_d.push_back(s.score_d);
                break;
            case ScoreSource::Uncovered:
                ++result.coverage.uncovered;
                result.coverage.uncovered_phrases.push_back(e.phrase);
                break;
        }
        result.entries.push_back(std::move(s));
    }

    if (!fb_d.empty() && !comb.empty()) {
        try {
            const auto scaled = fallback_scale(comb, comb_d, fb_d);
            result.coverage.scale_factor = mean(comb) / mean(comb_d);
            result.coverage.scaled = true;
            std::size_t j = 0;
            for (auto& s : result.entries)
                if (s.source == ScoreSource::FallbackDistributional) s.score = scaled[j++];
        } catch (const DomainError&) {
            // Zero mean Score_D on covered items: leave fallback scores unscaled.
        }
    }
    return result;
}

void write_predictions(std::ostream& out, const std::vector<ScoredEntry>& scored) {
    for (const auto& s : scored)
        out << s.entry.phrase << '\t' << text::format_double(s.entry.gold) << '\t' << text::format_double(s.score)
            << '\t' << to_string(s.source) << '\n';
}

std::vector<PredictionRow> read_predictions(std::istream& in, const std::string& source_name) {
    std::vector<PredictionRow> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cols = text::split(line, '\t');
        if (cols.size() != 4) throw ParseError(source_name, lineno, "expected 4 tab-separated columns");
        auto gold = text::parse_double(cols[1]);
        auto score = text::parse_double(cols[2]);
        if (!gold || !score) throw ParseError(source_name, lineno, "bad numeric column");
        PredictionRow row{std::string(cols[0]), *gold, *score, ScoreSource::Uncovered};
        try {
            row.source = parse_source(cols[3]);
        } catch (const InvalidArgument& e) {
            throw ParseError(source_name, lineno, e.what());
        }
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace hypercomp::compose
