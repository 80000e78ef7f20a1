#include "hypercomp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hypercomp/error.hpp"

namespace hypercomp::stats {

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t) ranks[order[t]] = avg;
        i = j;
    }
    return ranks;
}

double mean(std::span<const double> v) {
    if (v.empty()) throw InvalidArgument("mean of an empty sample");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_stddev(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double spearman(std::span<const double> pred, std::span<const double> gold) {
    if (pred.size() != gold.size()) throw InvalidArgument("spearman: length mismatch");
    if (pred.size() < 2) throw InvalidArgument("spearman: need at least two items");
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (std::isnan(pred[i]) || std::isnan(gold[i])) throw InvalidArgument("spearman: NaN input");

    const auto rp = average_ranks(pred);
    const auto rg = average_ranks(gold);
    const double mp = mean(rp);
    const double mg = mean(rg);
    double spg = 0.0, spp = 0.0, sgg = 0.0;
    for (std::size_t i = 0; i < rp.size(); ++i) {
        const double dp = rp[i] - mp;
        const double dg = rg[i] - mg;
        spg += dp * dg;
        spp += dp * dp;
        sgg += dg * dg;
    }
    if (sgg == 0.0) throw InvalidArgument("spearman: gold scores are constant");
    if (spp == 0.0) return 0.0;
    return std::clamp(spg / std::sqrt(spp * sgg), -1.0, 1.0);
}

double abs_rho(std::span<const double> pred, std::span<const double> gold) { return std::abs(spearman(pred, gold)); }

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("wilcoxon: samples must be paired");
    std::vector<double> diff;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (std::isnan(d)) throw InvalidArgument("wilcoxon: NaN input");
        if (d != 0.0) diff.push_back(d);
    }
    WilcoxonResult r;
    r.n = diff.size();
    if (r.n == 0) {
        r.degenerate = true;
        r.p = 1.0;
        return r;
    }

    std::vector<double> mag(diff.size());
    for (std::size_t i = 0; i < diff.size(); ++i) mag[i] = std::abs(diff[i]);
    const auto ranks = average_ranks(mag);
    for (std::size_t i = 0; i < diff.size(); ++i) (diff[i] > 0 ? r.w_plus : r.w_minus) += ranks[i];
    r.w = std::min(r.w_plus, r.w_minus);

    if (r.n <= kWilcoxonExactMaxN) {
        // Doubled ranks are integers even with ties; count sign assignments by W+ sum.
        std::vector<std::size_t> r2(r.n);
        std::size_t total = 0;
        for (std::size_t i = 0; i < r.n; ++i) {
            r2[i] = static_cast<std::size_t>(std::llround(2.0 * ranks[i]));
            total += r2[i];
        }
        std::vector<double> count(total + 1, 0.0);
        count[0] = 1.0;
        for (auto w : r2)
            for (std::size_t s = total; s >= w; --s) {
                count[s] += count[s - w];
                if (s == w) break;
            }
        const auto w2 = static_cast<std::size_t>(std::llround(2.0 * r.w));
        double tail = 0.0;
        for (std::size_t s = 0; s <= w2; ++s) tail += count[s];
        r.p = std::min(1.0, 2.0 * tail / std::ldexp(1.0, static_cast<int>(r.n)));
        r.exact = true;
        return r;
    }

    const double n = static_cast<double>(r.n);
    double tie_term = 0.0;
    {
        auto sorted = ranks;
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i + 1;
            while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i);
            tie_term += t * t * t - t;
            i = j;
        }
    }
    const double mu = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    const double z = (r.w - mu) / std::sqrt(var);
    r.p = std::min(1.0, normal_two_sided_p(z));
    return r;
}

ZTestResult z_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw InvalidArgument("z-test: each sample needs at least two values");
    const double va = sample_stddev(a);
    const double vb = sample_stddev(b);
    const double se2 = va * va / static_cast<double>(a.size()) + vb * vb / static_cast<double>(b.size());
    if (se2 == 0.0) throw DomainError("z-test: both samples have zero variance");
    ZTestResult r;
    r.z = (mean(a) - mean(b)) / std::sqrt(se2);
    r.p = normal_two_sided_p(r.z);
    return r;
}

}  // namespace hypercomp::stats
