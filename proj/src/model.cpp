#include "lingcurr/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "lingcurr/error.hpp"
#include "lingcurr/lexical_metrics.hpp"

namespace lingcurr {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Featurizer::Featurizer(std::size_t hash_dim, const IndexMatrix* concat_indices)
    : hash_dim_(hash_dim), indices_(concat_indices) {
    if (hash_dim_ == 0) throw ArgumentError("hash dimension must be positive");
    if (indices_) {
        index_dim_ = indices_->cols();
        for (std::size_t r = 0; r < indices_->rows(); ++r) rows_.emplace(indices_->sample_ids()[r], r);
    }
}

namespace {

void add_text(std::map<std::uint32_t, double>& acc, std::string_view text, std::string_view ns, std::size_t dim) {
    const auto tokens = tokenize(text).tokens;
    if (tokens.empty()) return;
    const double scale = 1.0 / std::sqrt(static_cast<double>(tokens.size()));
    const std::uint64_t seed = fnv1a(ns);
    for (const auto& tok : tokens) {
        const auto slot = static_cast<std::uint32_t>(fnv1a(tok, seed) % dim);
        acc[slot] += scale;
    }
}

}  // namespace

SparseVector Featurizer::featurize(const Sample& sample) const {
    std::map<std::uint32_t, double> acc;
    add_text(acc, sample.text, "first:", hash_dim_);
    if (sample.text_pair) add_text(acc, *sample.text_pair, "second:", hash_dim_);

    SparseVector out;
    out.index.reserve(acc.size() + index_dim_);
    out.value.reserve(acc.size() + index_dim_);
    for (const auto& [slot, v] : acc) {
        out.index.push_back(slot);
        out.value.push_back(v);
    }
    if (indices_) {
        auto it = rows_.find(sample.id);
        if (it == rows_.end()) throw CoverageError("no index row for sample \"" + sample.id + "\"");
        const auto row = indices_->values().row(it->second);
        for (std::size_t j = 0; j < index_dim_; ++j) {
            out.index.push_back(static_cast<std::uint32_t>(hash_dim_ + j));
            out.value.push_back(row[j]);
        }
    }
    return out;
}

std::vector<SparseVector> Featurizer::featurize(const Dataset& d, std::span<const std::size_t> positions) const {
    std::vector<SparseVector> out;
    out.reserve(positions.size());
    for (std::size_t p : positions) out.push_back(featurize(d[p]));
    return out;
}

ModelParams init_params(std::size_t classes, std::size_t features, std::mt19937_64& rng, double init_scale) {
    ModelParams p;
    p.weights = Matrix(classes, features);
    p.bias.assign(classes, 0.0);
    std::normal_distribution<double> normal(0.0, init_scale);
    for (double& w : p.weights.data()) w = normal(rng);
    return p;
}

std::vector<double> logits(const ModelParams& p, const SparseVector& x) {
    std::vector<double> z(p.bias);
    for (std::size_t c = 0; c < z.size(); ++c) {
        const auto row = p.weights.row(c);
        for (std::size_t e = 0; e < x.index.size(); ++e) z[c] += row[x.index[e]] * x.value[e];
    }
    return z;
}

std::vector<double> softmax(std::span<const double> z) {
    const double zmax = *std::max_element(z.begin(), z.end());
    std::vector<double> p(z.size());
    double sum = 0.0;
    for (std::size_t c = 0; c < z.size(); ++c) {
        p[c] = std::exp(z[c] - zmax);
        sum += p[c];
    }
    for (double& v : p) v /= sum;
    return p;
}

double cross_entropy(const ModelParams& p, const SparseVector& x, int label) {
    const auto z = logits(p, x);
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - zmax);
    return std::log(sum) + zmax - z.at(static_cast<std::size_t>(label));
}

int predict(const ModelParams& p, const SparseVector& x) {
    const auto z = logits(p, x);
    return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

double weighted_loss_and_gradient(const ModelParams& p, std::span<const SparseVector> xs, std::span<const int> labels,
                                  std::span<const double> weights, Gradient& grad) {
    if (xs.size() != labels.size() || xs.size() != weights.size())
        throw ArgumentError("weighted_loss_and_gradient: batch lengths differ");
    double weight_sum = 0.0;
    for (double w : weights) weight_sum += w;
    if (!(weight_sum > 0.0) || !std::isfinite(weight_sum)) return std::numeric_limits<double>::quiet_NaN();

    const std::size_t classes = p.classes();
    grad.weights = Matrix(classes, p.features());
    grad.bias.assign(classes, 0.0);

    double loss_sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto z = logits(p, xs[i]);
        const auto prob = softmax(z);
        const auto y = static_cast<std::size_t>(labels[i]);
        loss_sum += weights[i] * -std::log(std::max(prob[y], std::numeric_limits<double>::min()));
        for (std::size_t c = 0; c < classes; ++c) {
            const double coef = weights[i] * (prob[c] - (c == y ? 1.0 : 0.0));
            auto row = grad.weights.row(c);
            for (std::size_t e = 0; e < xs[i].index.size(); ++e) row[xs[i].index[e]] += coef * xs[i].value[e];
            grad.bias[c] += coef;
        }
    }
    for (double& g : grad.weights.data()) g /= weight_sum;
    for (double& g : grad.bias) g /= weight_sum;
    return loss_sum / weight_sum;
}

void apply_update(ModelParams& p, const Gradient& grad, double learning_rate, double weight_decay) {
    auto w = p.weights.data();
    const auto g = grad.weights.data();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = w[i] - learning_rate * g[i] - learning_rate * weight_decay * w[i];
    for (std::size_t c = 0; c < p.bias.size(); ++c) p.bias[c] -= learning_rate * grad.bias[c];
}

}  // namespace lingcurr
