#include "reference_training.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace lingcurr::testing {

ModelParams reference_training(const Dataset& d, const TrainConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    const Featurizer featurizer(cfg.hash_dim);
    const auto positions = d.positions(Split::train);
    const auto xs = featurizer.featurize(d, positions);
    std::vector<int> ys;
    for (std::size_t p : positions) ys.push_back(d[p].label);

    ModelParams params = init_params(static_cast<std::size_t>(d.num_classes()), featurizer.dim(), rng);
    const std::size_t n = xs.size();
    const std::size_t classes = params.classes();
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t end = std::min(n, start + cfg.batch_size);
            Matrix gw(classes, params.features());
            std::vector<double> gb(classes, 0.0);
            for (std::size_t b = start; b < end; ++b) {
                const auto& x = xs[order[b]];
                const auto prob = softmax(logits(params, x));
                const auto y = static_cast<std::size_t>(ys[order[b]]);
                for (std::size_t c = 0; c < classes; ++c) {
                    const double coef = prob[c] - (c == y ? 1.0 : 0.0);
                    for (std::size_t e = 0; e < x.index.size(); ++e) gw(c, x.index[e]) += coef * x.value[e];
                    gb[c] += coef;
                }
            }
            const double count = static_cast<double>(end - start);
            auto w = params.weights.data();
            const auto g = gw.data();
            for (std::size_t i = 0; i < w.size(); ++i) {
                const double grad = g[i] / count;
                w[i] = w[i] - cfg.learning_rate * grad - cfg.learning_rate * cfg.weight_decay * w[i];
            }
            for (std::size_t c = 0; c < classes; ++c) params.bias[c] -= cfg.learning_rate * (gb[c] / count);
        }
    }
    return params;
}

}  // namespace lingcurr::testing
