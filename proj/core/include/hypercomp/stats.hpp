#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Rank correlation and paired/unpaired significance tests.
namespace hypercomp::stats {

/// 1-based ranks; tied values share the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_stddev(std::span<const double> v);

/// Pearson correlation of the average-rank vectors. Throws InvalidArgument on a
/// length mismatch, fewer than two items or constant gold scores. A constant
/// prediction vector has no rank information and yields 0.
double spearman(std::span<const double> pred, std::span<const double> gold);

/// |spearman(pred, gold)|; the sign convention of the gold scale does not matter.
double abs_rho(std::span<const double> pred, std::span<const double> gold);

struct WilcoxonResult {
    double w = 0.0;        // min(W+, W-)
    double w_plus = 0.0;
    double w_minus = 0.0;
    double p = 1.0;        // two-sided
    std::size_t n = 0;     // pairs left after dropping zero differences
    bool exact = false;
    bool degenerate = false;  // every difference was zero
};

/// Signed-rank test on paired samples. Exact null distribution for n <= 20,
/// tie-corrected normal approximation above.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

inline constexpr std::size_t kWilcoxonExactMaxN = 20;

struct ZTestResult {
    double z = 0.0;
    double p = 1.0;  // two-sided
};

/// Two-sample z = (mean a - mean b) / sqrt(var a / n_a + var b / n_b).
ZTestResult z_test(std::span<const double> a, std::span<const double> b);

/// Two-sided standard normal tail probability.
double normal_two_sided_p(double z);

}  // namespace hypercomp::stats
