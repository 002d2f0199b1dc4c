#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lingcurr/corpus_store.hpp"
#include "lingcurr/matrix.hpp"

namespace lingcurr {

inline constexpr std::size_t kDefaultHashDim = 2048;

// Sorted, duplicate-free feature positions with their values.
struct SparseVector {
    std::vector<std::uint32_t> index;
    std::vector<double> value;

    friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

// Hashed bag of tokens over [0, hash_dim), plus (when concat indices are
// given) the sample's standardized index row at [hash_dim, hash_dim + k).
// Token counts are scaled by 1/sqrt(token count) per text; first and second
// texts hash into separate namespaces.
class Featurizer {
public:
    explicit Featurizer(std::size_t hash_dim = kDefaultHashDim, const IndexMatrix* concat_indices = nullptr);

    std::size_t dim() const noexcept { return hash_dim_ + index_dim_; }
    std::size_t hash_dim() const noexcept { return hash_dim_; }
    bool concat() const noexcept { return indices_ != nullptr; }

    // Throws CoverageError when concatenating and the sample has no index row.
    SparseVector featurize(const Sample& sample) const;
    std::vector<SparseVector> featurize(const Dataset& d, std::span<const std::size_t> positions) const;

private:
    std::size_t hash_dim_;
    std::size_t index_dim_ = 0;
    const IndexMatrix* indices_;
    std::unordered_map<std::string, std::size_t> rows_;
};

struct ModelParams {
    Matrix weights;             // classes x features
    std::vector<double> bias;   // per class

    std::size_t classes() const noexcept { return bias.size(); }
    std::size_t features() const noexcept { return weights.cols(); }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Weights ~ N(0, init_scale^2), bias 0.
ModelParams init_params(std::size_t classes, std::size_t features, std::mt19937_64& rng, double init_scale = 0.01);

std::vector<double> logits(const ModelParams& p, const SparseVector& x);
std::vector<double> softmax(std::span<const double> z);
// -log softmax(z)[label], computed with log-sum-exp.
double cross_entropy(const ModelParams& p, const SparseVector& x, int label);
int predict(const ModelParams& p, const SparseVector& x);

struct Gradient {
    Matrix weights;
    std::vector<double> bias;
};

// Value and gradient of sum_i w_i l_i / sum_i w_i. Returns nullopt-like NaN
// loss and leaves `grad` untouched when the weights do not sum to a positive
// finite number.
double weighted_loss_and_gradient(const ModelParams& p, std::span<const SparseVector> xs, std::span<const int> labels,
                                  std::span<const double> weights, Gradient& grad);

// Decoupled weight decay on the weight matrix (bias not decayed):
// W <- W - lr * g - lr * decay * W.
void apply_update(ModelParams& p, const Gradient& grad, double learning_rate, double weight_decay);

}  // namespace lingcurr
