#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "hypercomp/composer.hpp"
#include "hypercomp/dsm.hpp"
#include "hypercomp/hyperbolic.hpp"

// Supervised compositionality prediction over concatenated phrase/constituent vectors.
namespace hypercomp::supervise {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Rows are concat(v(phrase), v(w1), v(w2)); `entry_index` maps rows back to the dataset.
struct FeatureSet {
    Matrix x;
    Vector y;
    std::vector<std::size_t> entry_index;
};

/// Distributional features. Entries missing any of the three vectors are left out.
FeatureSet dsm_features(const std::vector<compose::CompoundEntry>& entries, const dsm::DenseEmbedding& emb);

/// Poincare features for the given entries; a missing vector becomes a zero block.
Matrix poincare_features(const std::vector<compose::CompoundEntry>& entries,
                         const std::vector<std::size_t>& entry_index, const hyperbolic::PoincareEmbedding& emb);

/// RBF kernel ridge regression: alpha = (K + lambda I)^-1 y, k(x, x') = exp(-gamma |x - x'|^2).
class KernelRidge {
public:
    /// `gamma` defaults to 1 / feature count.
    KernelRidge(double lambda, std::optional<double> gamma = std::nullopt);
    void fit(const Matrix& x, const Vector& y);
    Vector predict(const Matrix& x) const;
    double gamma() const noexcept { return gamma_; }

private:
    Matrix kernel(const Matrix& a, const Matrix& b) const;

    double lambda_;
    std::optional<double> gamma_opt_;
    double gamma_ = 0.0;
    Matrix train_x_;
    Vector dual_;
};

/// PLS1 by NIPALS deflation on centered features and target.
class Pls {
public:
    explicit Pls(int components);
    void fit(const Matrix& x, const Vector& y);
    Vector predict(const Matrix& x) const;
    int fitted_components() const noexcept { return fitted_; }
    const Vector& coefficients() const noexcept { return coef_; }

private:
    int components_;
    int fitted_ = 0;
    Eigen::RowVectorXd x_mean_;
    double y_mean_ = 0.0;
    Vector coef_;
};

/// Mean target of the k nearest rows (Euclidean); equal distances go to the lower row index.
double knn_predict(const Matrix& x, const Vector& y, const Eigen::Ref<const Eigen::RowVectorXd>& query, int k);
Vector knn_predict_batch(const Matrix& x, const Vector& y, const Matrix& queries, int k);

enum class ModelKind { KernelRidge, Pls, Knn };

ModelKind parse_model(std::string_view name);
std::string_view to_string(ModelKind kind);

struct RegressorSpec {
    ModelKind kind = ModelKind::KernelRidge;
    double lambda = 1.0;
    std::optional<double> gamma;
    int pls_components = 10;
    int knn_k = 5;
};

Vector fit_predict(const RegressorSpec& spec, const Matrix& train_x, const Vector& train_y, const Matrix& test_x);

/// (1 - alpha) * d_pred + alpha * p_pred.
double mixed_score(double d_pred, double p_pred, double alpha);

struct SplitPlan {
    std::uint64_t seed = 0;
    int n_splits = 25;
    double train_fraction = 0.75;
};

struct Split {
    std::vector<std::size_t> train;  // ascending
    std::vector<std::size_t> test;   // ascending
};

/// floor(n * train_fraction) training rows per split, the rest for testing.
std::vector<Split> make_splits(std::size_t n, const SplitPlan& plan);

struct SplitResult {
    int split_id = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double rho_dsm = 0.0;
    double rho_poincare = 0.0;
    double rho_mixed = 0.0;
};

struct ProtocolReport {
    std::vector<SplitResult> splits;
    double mean_dsm = 0.0, std_dsm = 0.0;
    double mean_poincare = 0.0, std_poincare = 0.0;
    double mean_mixed = 0.0, std_mixed = 0.0;
    std::size_t rows = 0;
    std::size_t dropped = 0;  // entries without distributional coverage
};

/// Per split: fit on distributional and Poincare features separately, mix the two
/// predictions with alpha and take |rho| against the test gold scores.
ProtocolReport run_protocol(const Matrix& dsm_x, const Matrix& poincare_x, const Vector& y,
                            const RegressorSpec& spec, double alpha, const SplitPlan& plan);

ProtocolReport run_protocol(const std::vector<compose::CompoundEntry>& entries, const dsm::DenseEmbedding& dsm,
                            const hyperbolic::PoincareEmbedding& poin, const RegressorSpec& spec, double alpha,
                            const SplitPlan& plan);

/// `split_id<TAB>rho_dsm<TAB>rho_poincare<TAB>rho_mixed` rows, then `mean` and `std` rows.
void write_report(std::ostream& out, const ProtocolReport& report);

}  // namespace hypercomp::supervise
