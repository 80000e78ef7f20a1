#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

// Poincare-ball geometry and Riemannian SGD training of hierarchy embeddings.
namespace hypercomp::hyperbolic {

/// Points are kept at norm <= 1 - kBoundaryEps.
inline constexpr double kBoundaryEps = 1e-5;

double squared_norm(std::span<const double> x);

/// arccosh(1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2))). Throws DomainError if either
/// point is not strictly inside the unit ball.
double poincare_distance(std::span<const double> x, std::span<const double> y);

/// 1 / (1 + poincare_distance(x, y)), in (0, 1].
double poincare_similarity(std::span<const double> x, std::span<const double> y);

/// Distance plus its Euclidean gradient with respect to both arguments.
/// `grad_x` and `grad_y` must have the points' dimension.
double distance_with_gradient(std::span<const double> x, std::span<const double> y,
                              std::span<double> grad_x, std::span<double> grad_y);

/// Retraction onto the closed ball of radius 1 - eps: unchanged if already inside,
/// otherwise rescaled onto that sphere. Throws DomainError on non-finite input.
std::vector<double> project(std::span<const double> p, double eps = kBoundaryEps);
void project_in_place(std::span<double> p, double eps = kBoundaryEps);

/// Inverse metric factor (1 - |theta|^2)^2 / 4 applied to Euclidean gradients.
double riemannian_scale(std::span<const double> theta);

class PoincareEmbedding {
public:
    explicit PoincareEmbedding(int dim);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return surfaces_.size(); }

    /// Appends a point; throws on duplicate surface, wrong length or a point outside the ball.
    std::size_t add(std::string surface, std::span<const double> coords);

    std::optional<std::size_t> index_of(std::string_view surface) const;

    /// Looks the surface up as given, then with underscores read as spaces.
    std::optional<std::span<const double>> find(std::string_view surface) const;

    const std::string& surface(std::size_t i) const { return surfaces_[i]; }
    std::span<const double> point(std::size_t i) const;
    std::span<double> mutable_point(std::size_t i);

private:
    int dim_;
    std::vector<std::string> surfaces_;
    std::vector<double> coords_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct TrainConfig {
    int dim = 50;
    int negatives = 2;
    double lr = 0.1;
    double l2_coeff = 1.0;
    int burn_in_epochs = 10;
    int epochs = 200;
    double burn_in_lr_divisor = 10.0;
    std::uint64_t seed = 0;
    double init_range = 0.001;
    double eps = kBoundaryEps;

    /// Throws InvalidArgument when a field is out of range.
    void validate() const;
};

/// Loss and Euclidean gradients of one positive update (u, v) with negatives:
///   -log( e^{-d(u,v)} / sum_{w in {v} + negatives} e^{-d(u,w)} ) + l2 * |u|^2
struct UpdateGradient {
    double loss = 0.0;
    std::vector<std::size_t> indices;        // u, v, then distinct negatives
    std::vector<std::vector<double>> grads;  // parallel to indices
};

double update_loss(const PoincareEmbedding& emb, std::size_t u, std::size_t v,
                   std::span<const std::size_t> negatives, double l2_coeff);

UpdateGradient update_gradient(const PoincareEmbedding& emb, std::size_t u, std::size_t v,
                               std::span<const std::size_t> negatives, double l2_coeff);

struct StepEvent {
    int epoch = 0;
    std::size_t step = 0;
    std::span<const std::size_t> touched;
    const PoincareEmbedding* embedding = nullptr;
};
using StepObserver = std::function<void(const StepEvent&)>;

struct TrainResult {
    PoincareEmbedding embedding;
    std::vector<double> epoch_loss;  // mean pre-update loss per epoch
};

/// Single-threaded, seed-deterministic trainer over (hyponym, hypernym) pairs.
class Trainer {
public:
    /// The vocabulary is every surface in `pairs` (first-seen order) followed by
    /// any `extra_vocab` entries not already present.
    Trainer(const std::vector<std::pair<std::string, std::string>>& pairs, TrainConfig cfg,
            const std::vector<std::string>& extra_vocab = {});

    const PoincareEmbedding& embedding() const noexcept { return emb_; }
    std::size_t num_pairs() const noexcept { return pairs_.size(); }

    /// One Riemannian SGD update on pair `pair_index` with freshly sampled negatives.
    /// Returns the update's loss before the step.
    double step(std::size_t pair_index, double lr);

    /// Learning rate in effect for `epoch` (burn-in aware).
    double epoch_lr(int epoch) const;

    /// Shuffles the pairs and updates each once. Returns the mean pre-update loss.
    double run_epoch(int epoch, const StepObserver& observer = {});

    TrainResult run(const StepObserver& observer = {});

private:
    std::size_t sample_negative(std::size_t u, std::size_t v);
    std::uint64_t next_below(std::uint64_t n);

    TrainConfig cfg_;
    PoincareEmbedding emb_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> touched_;
    std::size_t steps_ = 0;
    std::mt19937_64 rng_;
};

TrainResult train(const std::vector<std::pair<std::string, std::string>>& pairs, const TrainConfig& cfg,
                  const StepObserver& observer = {});

/// Text format: `vocab_size dim`, then `surface c1 ... cd` per line; spaces in
/// surfaces are written as underscores.
void save(std::ostream& out, const PoincareEmbedding& emb);
PoincareEmbedding load(std::istream& in, const std::string& source_name);

}  // namespace hypercomp::hyperbolic
