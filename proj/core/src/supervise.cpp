#include "hypercomp/supervise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "hypercomp/error.hpp"
#include "hypercomp/stats.hpp"
#include "hypercomp/text.hpp"

namespace hypercomp::supervise {

namespace {

void require_finite(const Matrix& x, const char* what) {
    if (!x.allFinite()) throw InvalidArgument(std::string(what) + " contains non-finite values");
}

void copy_into(Matrix& x, Eigen::Index row, Eigen::Index col, std::span<const double> v) {
    for (std::size_t i = 0; i < v.size(); ++i) x(row, col + static_cast<Eigen::Index>(i)) = v[i];
}

}  // namespace

FeatureSet dsm_features(const std::vector<compose::CompoundEntry>& entries, const dsm::DenseEmbedding& emb) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (dsm::find_phrase(emb, e.phrase, e.w1, e.w2) && emb.find(e.w1) && emb.find(e.w2)) keep.push_back(i);
    }
    const auto d = static_cast<Eigen::Index>(emb.dim());
    FeatureSet fs;
    fs.x.resize(static_cast<Eigen::Index>(keep.size()), 3 * d);
    fs.y.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t r = 0; r < keep.size(); ++r) {
        const auto& e = entries[keep[r]];
        const auto row = static_cast<Eigen::Index>(r);
        copy_into(fs.x, row, 0, *dsm::find_phrase(emb, e.phrase, e.w1, e.w2));
        copy_into(fs.x, row, d, *emb.find(e.w1));
        copy_into(fs.x, row, 2 * d, *emb.find(e.w2));
        fs.y(row) = e.gold;
    }
    fs.entry_index = std::move(keep);
    return fs;
}

Matrix poincare_features(const std::vector<compose::CompoundEntry>& entries,
                         const std::vector<std::size_t>& entry_index, const hyperbolic::PoincareEmbedding& emb) {
    const auto d = static_cast<Eigen::Index>(emb.dim());
    Matrix x = Matrix::Zero(static_cast<Eigen::Index>(entry_index.size()), 3 * d);
    for (std::size_t r = 0; r < entry_index.size(); ++r) {
        const auto& e = entries.at(entry_index[r]);
        const auto row = static_cast<Eigen::Index>(r);
        if (auto v = emb.find(e.phrase)) copy_into(x, row, 0, *v);
        if (auto v = emb.find(e.w1)) copy_into(x, row, d, *v);
        if (auto v = emb.find(e.w2)) copy_into(x, row, 2 * d, *v);
    }
    return x;
}

// --- Kernel ridge ------------------------------------------------------------

KernelRidge::KernelRidge(double lambda, std::optional<double> gamma) : lambda_(lambda), gamma_opt_(gamma) {
    if (!(lambda > 0.0)) throw InvalidArgument("kernel ridge: lambda must be positive");
    if (gamma && !(*gamma > 0.0)) throw InvalidArgument("kernel ridge: gamma must be positive");
}

Matrix KernelRidge::kernel(const Matrix& a, const Matrix& b) const {
    const Vector na = a.rowwise().squaredNorm();
    const Vector nb = b.rowwise().squaredNorm();
    Matrix sq = (-2.0 * a * b.transpose()).colwise() + na;
    sq.rowwise() += nb.transpose();
    return (-gamma_ * sq.array().max(0.0)).exp().matrix();
}

void KernelRidge::fit(const Matrix& x, const Vector& y) {
    if (x.rows() < 1 || x.rows() != y.size()) throw InvalidArgument("kernel ridge: bad training shape");
    require_finite(x, "kernel ridge features");
    require_finite(y, "kernel ridge targets");
    gamma_ = gamma_opt_.value_or(1.0 / static_cast<double>(std::max<Eigen::Index>(x.cols(), 1)));
    train_x_ = x;
    Matrix k = kernel(x, x);
    k.diagonal().array() += lambda_;
    dual_ = k.ldlt().solve(y);
}

Vector KernelRidge::predict(const Matrix& x) const {
    if (train_x_.rows() == 0) throw InvalidArgument("kernel ridge: predict before fit");
    if (x.cols() != train_x_.cols()) throw InvalidArgument("kernel ridge: feature count mismatch");
    require_finite(x, "kernel ridge query");
    return kernel(x, train_x_) * dual_;
}

// --- PLS ------------------------------------------------------------------------

Pls::Pls(int components) : components_(components) {
    if (components < 1) throw InvalidArgument("pls: need at least one component");
}

void Pls::fit(const Matrix& x, const Vector& y) {
    const auto n = x.rows();
    const auto p = x.cols();
    if (n != y.size()) throw InvalidArgument("pls: bad training shape");
    if (components_ > std::min<Eigen::Index>(n - 1, p))
        throw InvalidArgument("pls: components must not exceed min(rows - 1, features)");
    require_finite(x, "pls features");
    require_finite(y, "pls targets");

    x_mean_ = x.colwise().mean();
    y_mean_ = y.mean();
    Matrix xr = x.rowwise() - x_mean_;
    Vector yr = y.array() - y_mean_;
    if (yr.squaredNorm() == 0.0) throw InvalidArgument("pls: target has zero variance");

    Matrix w(p, components_), loadings(p, components_);
    Vector q(components_);
    const double scale = std::max(1.0, xr.norm() * yr.norm());
    fitted_ = 0;
    for (int a = 0; a < components_; ++a) {
        Vector wa = xr.transpose() * yr;
        const double wn = wa.norm();
        if (wn <= 1e-13 * scale) break;  // target fully explained
        wa /= wn;
        const Vector t = xr * wa;
        const double tt = t.squaredNorm();
        const Vector pa = xr.transpose() * t / tt;
        const double qa = yr.dot(t) / tt;
        xr -= t * pa.transpose();
        yr -= qa * t;
        w.col(a) = wa;
        loadings.col(a) = pa;
        q(a) = qa;
        ++fitted_;
    }
    if (fitted_ == 0) {
        coef_ = Vector::Zero(p);
        return;
    }
    const auto wf = w.leftCols(fitted_);
    const Matrix ptw = loadings.leftCols(fitted_).transpose() * wf;
    coef_ = wf * ptw.partialPivLu().solve(q.head(fitted_));
}

Vector Pls::predict(const Matrix& x) const {
    if (coef_.size() == 0) throw InvalidArgument("pls: predict before fit");
    if (x.cols() != coef_.size()) throw InvalidArgument("pls: feature count mismatch");
    return ((x.rowwise() - x_mean_) * coef_).array() + y_mean_;
}

// --- kNN --------------------------------------------------------------------------

double knn_predict(const Matrix& x, const Vector& y, const Eigen::Ref<const Eigen::RowVectorXd>& query, int k) {
    if (k < 1 || k > x.rows()) throw InvalidArgument("knn: k must lie in [1, rows]");
    if (query.size() != x.cols()) throw InvalidArgument("knn: feature count mismatch");
    std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) dist[static_cast<std::size_t>(i)] = {(x.row(i) - query).squaredNorm(), i};
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    double sum = 0.0;
    for (int i = 0; i < k; ++i) sum += y(dist[static_cast<std::size_t>(i)].second);
    return sum / static_cast<double>(k);
}

Vector knn_predict_batch(const Matrix& x, const Vector& y, const Matrix& queries, int k) {
    Vector out(queries.rows());
    for (Eigen::Index i = 0; i < queries.rows(); ++i) out(i) = knn_predict(x, y, queries.row(i), k);
    return out;
}

// --- Protocol ---------------------------------------------------------------------

ModelKind parse_model(std::string_view name) {
    if (name == "kernel-ridge") return ModelKind::KernelRidge;
    if (name == "pls") return ModelKind::Pls;
    if (name == "knn") return ModelKind::Knn;
    throw InvalidArgument("unknown model '" + std::string(name) + "' (kernel-ridge, pls, knn)");
}

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::KernelRidge: return "kernel-ridge";
        case ModelKind::Pls: return "pls";
        case ModelKind::Knn: return "knn";
    }
    return "kernel-ridge";
}

Vector fit_predict(const RegressorSpec& spec, const Matrix& train_x, const Vector& train_y, const Matrix& test_x) {
    switch (spec.kind) {
        case ModelKind::KernelRidge: {
            KernelRidge m(spec.lambda, spec.gamma);
            m.fit(train_x, train_y);
            return m.predict(test_x);
        }
        case ModelKind::Pls: {
            Pls m(spec.pls_components);
            m.fit(train_x, train_y);
            return m.predict(test_x);
        }
        case ModelKind::Knn:
            return knn_predict_batch(train_x, train_y, test_x, spec.knn_k);
    }
    throw InvalidArgument("unknown model kind");
}

double mixed_score(double d_pred, double p_pred, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0, 1]");
    if (alpha == 0.0) return d_pred;
    if (alpha == 1.0) return p_pred;
    return (1.0 - alpha) * d_pred + alpha * p_pred;
}

std::vector<Split> make_splits(std::size_t n, const SplitPlan& plan) {
    if (plan.n_splits < 1) throw InvalidArgument("need at least one split");
    if (!(plan.train_fraction > 0.0 && plan.train_fraction < 1.0))
        throw InvalidArgument("train fraction must lie in (0, 1)");
    const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * plan.train_fraction));
    if (n_train < 2 || n - n_train < 2) throw InvalidArgument("dataset too small for a train/test split");

    std::mt19937_64 rng(plan.seed);
    auto below = [&](std::uint64_t m) {
        const std::uint64_t threshold = (0 - m) % m;
        std::uint64_t x;
        do x = rng();
        while (x < threshold);
        return x % m;
    };
    std::vector<Split> splits;
    std::vector<std::size_t> perm(n);
    for (int s = 0; s < plan.n_splits; ++s) {
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[below(i)]);
        Split sp;
        sp.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
        sp.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
        std::sort(sp.train.begin(), sp.train.end());
        std::sort(sp.test.begin(), sp.test.end());
        splits.push_back(std::move(sp));
    }
    return splits;
}

namespace {

Matrix take_rows(const Matrix& x, const std::vector<std::size_t>& idx) {
    Matrix out(static_cast<Eigen::Index>(idx.size()), x.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(idx[r]));
    return out;
}

Vector take(const Vector& v, const std::vector<std::size_t>& idx) {
    Vector out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r) out(static_cast<Eigen::Index>(r)) = v(static_cast<Eigen::Index>(idx[r]));
    return out;
}

std::span<const double> as_span(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

ProtocolReport run_protocol(const Matrix& dsm_x, const Matrix& poincare_x, const Vector& y,
                            const RegressorSpec& spec, double alpha, const SplitPlan& plan) {
    if (dsm_x.rows() != y.size() || poincare_x.rows() != y.size())
        throw InvalidArgument("feature matrices and targets disagree on row count");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0, 1]");

    ProtocolReport rep;
    rep.rows = static_cast<std::size_t>(y.size());
    const auto splits = make_splits(rep.rows, plan);
    for (std::size_t s = 0; s < splits.size(); ++s) {
        const auto& sp = splits[s];
        const Vector y_train = take(y, sp.train);
        const Vector y_test = take(y, sp.test);
        const Vector pd = fit_predict(spec, take_rows(dsm_x, sp.train), y_train, take_rows(dsm_x, sp.test));
        const Vector pp = fit_predict(spec, take_rows(poincare_x, sp.train), y_train, take_rows(poincare_x, sp.test));
        Vector mixed(pd.size());
        for (Eigen::Index i = 0; i < pd.size(); ++i) mixed(i) = mixed_score(pd(i), pp(i), alpha);

        SplitResult r;
        r.split_id = static_cast<int>(s);
        r.n_train = sp.train.size();
        r.n_test = sp.test.size();
        r.rho_dsm = stats::abs_rho(as_span(pd), as_span(y_test));
        r.rho_poincare = stats::abs_rho(as_span(pp), as_span(y_test));
        r.rho_mixed = stats::abs_rho(as_span(mixed), as_span(y_test));
        rep.splits.push_back(r);
    }

    auto summarize = [&](auto field, double& m, double& sd) {
        std::vector<double> v;
        for (const auto& r : rep.splits) v.push_back(r.*field);
        m = stats::mean(v);
        sd = stats::sample_stddev(v);
    };
    summarize(&SplitResult::rho_dsm, rep.mean_dsm, rep.std_dsm);
    summarize(&SplitResult::rho_poincare, rep.mean_poincare, rep.std_poincare);
    summarize(&SplitResult::rho_mixed, rep.mean_mixed, rep.std_mixed);
    return rep;
}

ProtocolReport run_protocol(const std::vector<compose::CompoundEntry>& entries, const dsm::DenseEmbedding& dsm,
                            const hyperbolic::PoincareEmbedding& poin, const RegressorSpec& spec, double alpha,
                            const SplitPlan& plan) {
    const auto fs = dsm_features(entries, dsm);
    const Matrix px = poincare_features(entries, fs.entry_index, poin);
    auto rep = run_protocol(fs.x, px, fs.y, spec, alpha, plan);
    rep.dropped = entries.size() - fs.entry_index.size();
    return rep;
}

void write_report(std::ostream& out, const ProtocolReport& report) {
    out << "split_id\trho_dsm\trho_poincare\trho_mixed\n";
    for (const auto& r : report.splits)
        out << r.split_id << '\t' << text::format_double(r.rho_dsm) << '\t' << text::format_double(r.rho_poincare)
            << '\t' << text::format_double(r.rho_mixed) << '\n';
    out << "mean\t" << text::format_double(report.mean_dsm) << '\t' << text::format_double(report.mean_poincare)
        << '\t' << text::format_double(report.mean_mixed) << '\n';
    out << "std\t" << text::format_double(report.std_dsm) << '\t' << text::format_double(report.std_poincare) << '\t'
        << text::format_double(report.std_mixed) << '\n';
}

}  // namespace hypercomp::supervise
