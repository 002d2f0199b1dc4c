#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "generators.hpp"
#include "lingcurr/error.hpp"
#include "lingcurr/model.hpp"

using namespace lingcurr;
using lingcurr::testing::Rng;

namespace {

Sample sample(std::string id, std::string text) {
    Sample s;
    s.id = std::move(id);
    s.text = std::move(text);
    return s;
}

SparseVector random_sparse(Rng& rng, std::size_t dim, std::size_t nnz) {
    std::map<std::uint32_t, double> acc;
    while (acc.size() < nnz) acc[static_cast<std::uint32_t>(testing::uniform_size(rng, 0, dim - 1))] = testing::normal(rng);
    SparseVector x;
    for (auto [i, v] : acc) {
        x.index.push_back(i);
        x.value.push_back(v);
    }
    return x;
}

}  // namespace

TEST_CASE("featurizer dimensions") {
    const Featurizer plain;
    CHECK(plain.dim() == 2048);
    const auto x = plain.featurize(sample("a", "the cat sat"));
    for (auto i : x.index) CHECK(i < 2048);
    CHECK(std::is_sorted(x.index.begin(), x.index.end()));

    std::vector<std::string> names;
    for (int j = 0; j < 16; ++j) names.push_back("k" + std::to_string(j));
    Matrix v(1, 16, 0.25);
    const IndexMatrix im({"a"}, names, v);
    const Featurizer concat(2048, &im);
    CHECK(concat.dim() == 2048 + 16);
    const auto xc = concat.featurize(sample("a", "the cat sat"));
    CHECK(xc.index.back() == 2048 + 15);
    CHECK(xc.value.back() == 0.25);
    CHECK_THROWS_AS(concat.featurize(sample("missing", "x")), CoverageError);
}

TEST_CASE("identical texts give identical vectors; first and second texts hash apart") {
    const Featurizer f;
    CHECK(f.featurize(sample("a", "Some words here")) == f.featurize(sample("b", "some words here")));
    Sample p = sample("p", "alpha");
    p.text_pair = "alpha";
    const auto x = f.featurize(p);
    CHECK(x.index.size() == 2);
}

TEST_CASE("token counts are scaled by 1/sqrt(N)") {
    const Featurizer f;
    const auto x = f.featurize(sample("a", "dog dog dog dog"));
    REQUIRE(x.value.size() == 1);
    CHECK(x.value[0] == doctest::Approx(4.0 / 2.0));
}

TEST_CASE("fnv1a reference values") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("cross entropy is zero when the true class has probability one") {
    ModelParams p;
    p.weights = Matrix(2, 1);
    p.bias = {800.0, 0.0};
    CHECK(cross_entropy(p, SparseVector{}, 0) == 0.0);
    CHECK(cross_entropy(p, SparseVector{}, 1) == doctest::Approx(800.0));
}

TEST_CASE("softmax sums to one and survives large logits") {
    const std::vector<double> z{1000.0, 999.0, -1000.0};
    const auto p = softmax(z);
    CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0));
    CHECK(p[0] > p[1]);
}

TEST_CASE("property: analytic weighted gradient matches central differences") {
    Rng rng(51);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t classes = testing::uniform_size(rng, 2, 4), dim = testing::uniform_size(rng, 3, 8);
        ModelParams p = init_params(classes, dim, rng, 0.5);
        for (double& b : p.bias) b = testing::normal(rng);
        const std::size_t n = testing::uniform_size(rng, 1, 6);
        std::vector<SparseVector> xs;
        std::vector<int> ys;
        std::vector<double> ws;
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(random_sparse(rng, dim, testing::uniform_size(rng, 1, dim)));
            ys.push_back(static_cast<int>(testing::uniform_size(rng, 0, classes - 1)));
            ws.push_back(testing::uniform(rng, 0.05, 1.0));
        }
        Gradient g;
        weighted_loss_and_gradient(p, xs, ys, ws, g);

        auto loss_at = [&](const ModelParams& q) {
            Gradient scratch;
            return weighted_loss_and_gradient(q, xs, ys, ws, scratch);
        };
        const double h = 1e-6;
        double diff2 = 0, norm_a = 0, norm_n = 0;
        auto probe = [&](double& slot, double analytic) {
            const double saved = slot;
            slot = saved + h;
            const double up = loss_at(p);
            slot = saved - h;
            const double down = loss_at(p);
            slot = saved;
            const double numeric = (up - down) / (2 * h);
            diff2 += (analytic - numeric) * (analytic - numeric);
            norm_a += analytic * analytic;
            norm_n += numeric * numeric;
        };
        for (std::size_t i = 0; i < p.weights.data().size(); ++i) probe(p.weights.data()[i], g.weights.data()[i]);
        for (std::size_t c = 0; c < classes; ++c) probe(p.bias[c], g.bias[c]);
        CHECK(std::sqrt(diff2) / (std::sqrt(norm_a) + std::sqrt(norm_n)) < 1e-5);
    }
}

TEST_CASE("zero or non-finite weight sums leave the gradient untouched") {
    Rng rng(52);
    const ModelParams p = init_params(2, 4, rng);
    const std::vector<SparseVector> xs{SparseVector{{1}, {1.0}}};
    const std::vector<int> ys{0};
    Gradient g;
    g.bias = {7.0, 7.0};
    CHECK(std::isnan(weighted_loss_and_gradient(p, xs, ys, std::vector<double>{0.0}, g)));
    CHECK(g.bias == std::vector<double>{7.0, 7.0});
}

TEST_CASE("update applies decoupled decay to weights only") {
    ModelParams p;
    p.weights = Matrix(1, 1, 2.0);
    p.bias = {1.0};
    Gradient g;
    g.weights = Matrix(1, 1, 0.5);
    g.bias = {0.5};
    apply_update(p, g, 0.1, 0.01);
    CHECK(p.weights(0, 0) == doctest::Approx(2.0 - 0.05 - 0.002));
    CHECK(p.bias[0] == doctest::Approx(0.95));
}
