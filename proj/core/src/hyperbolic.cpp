#include "hypercomp/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "hypercomp/error.hpp"
#include "hypercomp/text.hpp"

namespace hypercomp::hyperbolic {

namespace {

// Lower bound on the arccosh argument minus one inside the gradient, so that
// sqrt(gamma^2 - 1) never vanishes.
constexpr double kMinArgExcess = 1e-15;

void check_same_dim(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InvalidArgument("points have different dimensions");
}

double one_minus_sq_norm(std::span<const double> x) {
    const double s = squared_norm(x);
    if (!(s < 1.0)) throw DomainError("point is not strictly inside the unit ball");
    return 1.0 - s;
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

// arccosh(1 + q), accurate for small q.
double acosh1p(double q) { return std::log1p(q + std::sqrt(q * (q + 2.0))); }

}  // namespace

double squared_norm(std::span<const double> x) { return dot(x, x); }

double poincare_distance(std::span<const double> x, std::span<const double> y) {
    check_same_dim(x, y);
    const double a = one_minus_sq_norm(x);
    const double b = one_minus_sq_norm(y);
    const double q = 2.0 * squared_distance(x, y) / (a * b);
    return acosh1p(std::max(q, 0.0));
}

double poincare_similarity(std::span<const double> x, std::span<const double> y) {
    return 1.0 / (1.0 + poincare_distance(x, y));
}

double distance_with_gradient(std::span<const double> x, std::span<const double> y, std::span<double> grad_x,
                              std::span<double> grad_y) {
    check_same_dim(x, y);
    if (grad_x.size() != x.size() || grad_y.size() != y.size())
        throw InvalidArgument("gradient buffers have the wrong dimension");
    const double xx = squared_norm(x);
    const double yy = squared_norm(y);
    const double a = one_minus_sq_norm(x);
    const double b = one_minus_sq_norm(y);
    const double xy = dot(x, y);
    const double q = std::max(2.0 * squared_distance(x, y) / (a * b), 0.0);
    const double dist = acosh1p(q);

    const double qc = std::max(q, kMinArgExcess);
    const double root = std::sqrt(qc * (qc + 2.0));  // sqrt(gamma^2 - 1)
    const double cx = 4.0 / (b * a * a * root);
    const double cy = 4.0 / (a * b * b * root);
    const double kx = 1.0 - 2.0 * xy + yy;
    const double ky = 1.0 - 2.0 * xy + xx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        grad_x[i] = cx * (kx * x[i] - a * y[i]);
        grad_y[i] = cy * (ky * y[i] - b * x[i]);
    }
    return dist;
}

void project_in_place(std::span<double> p, double eps) {
    for (double c : p)
        if (!std::isfinite(c)) throw DomainError("cannot project a non-finite vector");
    const double limit = 1.0 - eps;
    double n = std::sqrt(squared_norm(p));
    if (n <= limit) return;
    const double scale = limit / n;
    for (double& c : p) c *= scale;
    // Rounding can leave the norm one ulp above the limit.
    while (std::sqrt(squared_norm(p)) > limit)
        for (double& c : p) c *= 1.0 - std::numeric_limits<double>::epsilon();
}

std::vector<double> project(std::span<const double> p, double eps) {
    std::vector<double> out(p.begin(), p.end());
    project_in_place(out, eps);
    return out;
}

double riemannian_scale(std::span<const double> theta) {
    const double a = 1.0 - squared_norm(theta);
    return a * a / 4.0;
}

// --- PoincareEmbedding -------------------------------------------------------

PoincareEmbedding::PoincareEmbedding(int dim) : dim_(dim) {
    if (dim < 2) throw InvalidArgument("Poincare embedding dimension must be >= 2");
}

std::size_t PoincareEmbedding::add(std::string surface, std::span<const double> coords) {
    if (surface.empty()) throw InvalidArgument("empty surface");
    if (coords.size() != static_cast<std::size_t>(dim_)) throw InvalidArgument("coordinate count != dim");
    for (double c : coords)
        if (!std::isfinite(c)) throw DomainError("non-finite coordinate for '" + surface + "'");
    if (!(squared_norm(coords) < 1.0)) throw DomainError("point for '" + surface + "' is outside the unit ball");
    if (index_.count(surface)) throw InvalidArgument("duplicate surface '" + surface + "'");
    const std::size_t idx = surfaces_.size();
    index_.emplace(surface, idx);
    surfaces_.push_back(std::move(surface));
    coords_.insert(coords_.end(), coords.begin(), coords.end());
    return idx;
}

std::optional<std::size_t> PoincareEmbedding::index_of(std::string_view surface) const {
    auto it = index_.find(std::string(surface));
    if (it != index_.end()) return it->second;
    if (surface.find('_') != std::string_view::npos) {
        it = index_.find(text::replace_all(surface, '_', ' '));
        if (it != index_.end()) return it->second;
    }
    return std::nullopt;
}

std::optional<std::span<const double>> PoincareEmbedding::find(std::string_view surface) const {
    auto idx = index_of(surface);
    if (!idx) return std::nullopt;
    return point(*idx);
}

std::span<const double> PoincareEmbedding::point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
}

std::span<double> PoincareEmbedding::mutable_point(std::size_t i) {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
}

// --- Training -----------------------------------------------------------------

void TrainConfig::validate() const {
    if (dim < 2) throw InvalidArgument("dim must be >= 2");
    if (negatives < 1) throw InvalidArgument("negatives must be >= 1");
    if (!(lr > 0.0)) throw InvalidArgument("learning rate must be positive");
    if (!(l2_coeff >= 0.0)) throw InvalidArgument("l2 coefficient must be nonnegative");
    if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
    if (burn_in_epochs < 0 || burn_in_epochs > epochs) throw InvalidArgument("burn-in must lie in [0, epochs]");
    if (!(burn_in_lr_divisor > 0.0)) throw InvalidArgument("burn-in divisor must be positive");
    if (!(init_range > 0.0 && init_range < 1.0)) throw InvalidArgument("init range must lie in (0, 1)");
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0, 1)");
}

namespace {

struct SoftmaxTerms {
    double loss;
    std::vector<double> coef;  // dLoss/d distance_j
};

SoftmaxTerms softmax_terms(const std::vector<double>& dist) {
    const double m = *std::min_element(dist.begin(), dist.end());
    double z = 0.0;
    std::vector<double> e(dist.size());
    for (std::size_t j = 0; j < dist.size(); ++j) {
        e[j] = std::exp(-(dist[j] - m));
        z += e[j];
    }
    SoftmaxTerms t;
    t.loss = dist[0] - m + std::log(z);
    t.coef.resize(dist.size());
    for (std::size_t j = 0; j < dist.size(); ++j) t.coef[j] = -e[j] / z;
    t.coef[0] += 1.0;
    return t;
}

}  // namespace

double update_loss(const PoincareEmbedding& emb, std::size_t u, std::size_t v,
                   std::span<const std::size_t> negatives, double l2_coeff) {
    const auto pu = emb.point(u);
    std::vector<double> dist{poincare_distance(pu, emb.point(v))};
    for (auto n : negatives) dist.push_back(poincare_distance(pu, emb.point(n)));
    return softmax_terms(dist).loss + l2_coeff * squared_norm(pu);
}

UpdateGradient update_gradient(const PoincareEmbedding& emb, std::size_t u, std::size_t v,
                               std::span<const std::size_t> negatives, double l2_coeff) {
    const auto dim = static_cast<std::size_t>(emb.dim());
    const auto pu = emb.point(u);

    std::vector<std::size_t> others{v};
    others.insert(others.end(), negatives.begin(), negatives.end());

    std::vector<double> dist(others.size());
    std::vector<std::vector<double>> gu(others.size(), std::vector<double>(dim));
    std::vector<std::vector<double>> gw(others.size(), std::vector<double>(dim));
    for (std::size_t j = 0; j < others.size(); ++j)
        dist[j] = distance_with_gradient(pu, emb.point(others[j]), gu[j], gw[j]);

    const auto terms = softmax_terms(dist);

    UpdateGradient out;
    out.loss = terms.loss + l2_coeff * squared_norm(pu);
    out.indices.push_back(u);
    out.grads.emplace_back(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) out.grads[0][i] = 2.0 * l2_coeff * pu[i];

    for (std::size_t j = 0; j < others.size(); ++j) {
        for (std::size_t i = 0; i < dim; ++i) out.grads[0][i] += terms.coef[j] * gu[j][i];
        auto slot = std::find(out.indices.begin(), out.indices.end(), others[j]) - out.indices.begin();
        if (static_cast<std::size_t>(slot) == out.indices.size()) {
            out.indices.push_back(others[j]);
            out.grads.emplace_back(dim, 0.0);
        }
        for (std::size_t i = 0; i < dim; ++i) out.grads[slot][i] += terms.coef[j] * gw[j][i];
    }
    return out;
}

Trainer::Trainer(const std::vector<std::pair<std::string, std::string>>& pairs, TrainConfig cfg,
                 const std::vector<std::string>& extra_vocab)
    : cfg_(cfg), emb_(cfg.dim), rng_(cfg.seed) {
    cfg_.validate();
    if (pairs.empty()) throw InvalidArgument("cannot train on an empty pair list");

    std::vector<std::string> vocab;
    std::unordered_map<std::string, std::size_t> index;
    auto intern = [&](const std::string& s) {
        auto [it, inserted] = index.emplace(s, vocab.size());
        if (inserted) vocab.push_back(s);
        return it->second;
    };
    for (const auto& [hypo, hyper] : pairs) {
        if (hypo == hyper) throw InvalidArgument("pair with identical hyponym and hypernym: '" + hypo + "'");
        const auto u = intern(hypo);
        pairs_.emplace_back(u, intern(hyper));
    }
    for (const auto& s : extra_vocab) intern(s);

    std::vector<double> coords(static_cast<std::size_t>(cfg_.dim));
    for (auto& s : vocab) {
        for (double& c : coords) {
            const double unit = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
            c = (2.0 * unit - 1.0) * cfg_.init_range;
        }
        emb_.add(std::move(s), coords);
    }
    order_.resize(pairs_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
}

std::uint64_t Trainer::next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    std::uint64_t x;
    do x = rng_();
    while (x < threshold);
    return x % n;
}

std::size_t Trainer::sample_negative(std::size_t u, std::size_t v) {
    auto [lo, hi] = std::minmax(u, v);
    std::size_t r = next_below(emb_.size() - 2);
    if (r >= lo) ++r;
    if (r >= hi) ++r;
    return r;
}

double Trainer::step(std::size_t pair_index, double lr) {
    const auto [u, v] = pairs_.at(pair_index);
    std::vector<std::size_t> negs;
    if (emb_.size() > 2)
        for (int i = 0; i < cfg_.negatives; ++i) negs.push_back(sample_negative(u, v));

    const auto g = update_gradient(emb_, u, v, negs, cfg_.l2_coeff);
    for (std::size_t j = 0; j < g.indices.size(); ++j) {
        auto theta = emb_.mutable_point(g.indices[j]);
        const double scale = lr * riemannian_scale(theta);
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= scale * g.grads[j][i];
        project_in_place(theta, cfg_.eps);
    }
    touched_ = g.indices;
    ++steps_;
    return g.loss;
}

double Trainer::epoch_lr(int epoch) const {
    return epoch < cfg_.burn_in_epochs ? cfg_.lr / cfg_.burn_in_lr_divisor : cfg_.lr;
}

double Trainer::run_epoch(int epoch, const StepObserver& observer) {
    for (std::size_t i = order_.size(); i > 1; --i) std::swap(order_[i - 1], order_[next_below(i)]);
    const double lr = epoch_lr(epoch);
    double total = 0.0;
    for (auto idx : order_) {
        total += step(idx, lr);
        if (observer) observer(StepEvent{epoch, steps_, touched_, &emb_});
    }
    return total / static_cast<double>(order_.size());
}

TrainResult Trainer::run(const StepObserver& observer) {
    std::vector<double> losses;
    losses.reserve(static_cast<std::size_t>(cfg_.epochs));
    for (int e = 0; e < cfg_.epochs; ++e) losses.push_back(run_epoch(e, observer));
    return {emb_, std::move(losses)};
}

TrainResult train(const std::vector<std::pair<std::string, std::string>>& pairs, const TrainConfig& cfg,
                  const StepObserver& observer) {
    Trainer trainer(pairs, cfg);
    return trainer.run(observer);
}

// --- Serialization ---------------------------------------------------------------

void save(std::ostream& out, const PoincareEmbedding& emb) {
    out << emb.size() << ' ' << emb.dim() << '\n';
    for (std::size_t i = 0; i < emb.size(); ++i) {
        out << text::replace_all(emb.surface(i), ' ', '_');
        for (double c : emb.point(i)) out << ' ' << text::format_double(c);
        out << '\n';
    }
}

PoincareEmbedding load(std::istream& in, const std::string& source_name) {
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (!text::trim(line).empty()) return true;
        }
        return false;
    };
    if (!next_line()) throw ParseError(source_name, 1, "empty embedding file");
    auto header = text::split_ws(line);
    if (header.size() != 2) throw ParseError(source_name, lineno, "header must be `vocab_size dim`");
    auto n = text::parse_int(header[0]);
    auto dim = text::parse_int(header[1]);
    if (!n || *n < 1) throw ParseError(source_name, lineno, "vocab_size must be >= 1");
    if (!dim || *dim < 2) throw ParseError(source_name, lineno, "dim must be >= 2");

    PoincareEmbedding emb(static_cast<int>(*dim));
    std::vector<double> coords(static_cast<std::size_t>(*dim));
    for (std::int64_t row = 0; row < *n; ++row) {
        if (!next_line()) throw ParseError(source_name, lineno + 1, "fewer rows than the header announces");
        auto fields = text::split_ws(line);
        if (fields.size() != coords.size() + 1)
            throw ParseError(source_name, lineno,
                             "expected " + std::to_string(coords.size()) + " coordinates, got " +
                                 std::to_string(fields.size() - 1));
        for (std::size_t i = 0; i < coords.size(); ++i) {
            auto v = text::parse_double(fields[i + 1]);
            if (!v) throw ParseError(source_name, lineno, "bad coordinate '" + std::string(fields[i + 1]) + "'");
            coords[i] = *v;
        }
        try {
            emb.add(text::replace_all(fields[0], '_', ' '), coords);
        } catch (const Error& e) {
            throw ParseError(source_name, lineno, e.what());
        }
    }
    if (next_line()) throw ParseError(source_name, lineno, "more rows than the header announces");
    return emb;
}

}  // namespace hypercomp::hyperbolic
