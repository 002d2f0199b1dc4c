#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "generators.hpp"
#include "lingcurr/error.hpp"
#include "lingcurr/index_filtering.hpp"
#include "planted_task.hpp"

using namespace lingcurr;
using namespace lingcurr::testing;

namespace {

double max_within(const std::vector<std::size_t>& labels, const Matrix& d) {
    double worst = 0;
    for (std::size_t a = 0; a < labels.size(); ++a)
        for (std::size_t b = 0; b < labels.size(); ++b)
            if (labels[a] == labels[b]) worst = std::max(worst, d(a, b));
    return worst;
}

}  // namespace

TEST_CASE("kept count is the ceiling of the fraction") {
    CHECK(kept_count(0.3, 482) == 145);  // 0.3 * 482 = 144.6
    CHECK(kept_count(0.3, 10) == 3);     // 0.3 * 10 must not round up to 4
    CHECK(kept_count(0.3, 1) == 1);
    CHECK(kept_count(1.0, 7) == 7);
    CHECK(kept_count(0.5, 0) == 0);
}

TEST_CASE("trend ranking puts the planted index first on a trained baseline") {
    PlantedTaskOptions o;
    o.indices = 10;
    o.planted = 4;
    const auto task = make_planted_task(71, o);
    TrainConfig cfg;
    const auto rec = train(task.dataset, task.standardized, cfg);
    const auto kept = filter_by_trend(task.dataset, task.standardized, rec);
    REQUIRE(kept.size() == 3);
    CHECK(kept[0].index == "idx4");
    CHECK(kept[0].slope < 0);
    for (std::size_t i = 1; i < kept.size(); ++i) CHECK(std::abs(kept[i - 1].slope) >= std::abs(kept[i].slope));
    const auto all = filter_by_trend(task.dataset, task.standardized, rec, 10, 1.0);
    CHECK(all.size() == 10);

    const auto ckpt = make_checkpoint_file(rec);
    const auto from_ckpt = filter_by_trend(task.dataset, task.standardized, ckpt);
    CHECK(from_ckpt.size() == kept.size());

    auto untrained = ckpt;
    untrained.total_steps = 0;
    CHECK_THROWS_AS(filter_by_trend(task.dataset, task.standardized, untrained), ArgumentError);
    auto curriculum = ckpt;
    curriculum.curriculum = CurriculumKind::gaussian;
    CHECK_THROWS_AS(filter_by_trend(task.dataset, task.standardized, curriculum), ArgumentError);
}

TEST_CASE("correlation matrix") {
    Rng rng(72);
    Matrix v(50, 3);
    for (std::size_t r = 0; r < 50; ++r) {
        v(r, 0) = normal(rng);
        v(r, 1) = 2 * v(r, 0) + 1;
        v(r, 2) = -v(r, 0);
    }
    const auto c = correlation_matrix(v);
    CHECK(c(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c(0, 2) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(c(1, 1) == 1.0);
    const auto d = correlation_distance(c);
    CHECK(d(0, 2) == doctest::Approx(0.0).epsilon(1e-12));

    for (int trial = 0; trial < 50; ++trial) {
        const auto m = normal_matrix(rng, uniform_size(rng, 3, 40), uniform_size(rng, 1, 8));
        const auto r = correlation_matrix(m);
        for (std::size_t a = 0; a < r.rows(); ++a) {
            CHECK(r(a, a) == 1.0);
            for (std::size_t b = 0; b < r.cols(); ++b) {
                CHECK(r(a, b) == r(b, a));
                CHECK(std::abs(r(a, b)) <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("complete linkage on hand-built matrices") {
    CHECK(complete_linkage_clusters(Matrix(4, 4, 0.0), 0.3) == std::vector<std::size_t>{0, 0, 0, 0});

    Matrix block(4, 4, 0.9);
    for (std::size_t i = 0; i < 4; ++i) block(i, i) = 0;
    block(0, 2) = block(2, 0) = 0.1;
    block(1, 3) = block(3, 1) = 0.2;
    CHECK(complete_linkage_clusters(block, 0.3) == std::vector<std::size_t>{0, 1, 0, 1});

    Rng rng(73);
    const auto d = random_distance_matrix(rng, 6);
    CHECK(complete_linkage_clusters(d, 0.0) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("complete linkage rejects malformed matrices") {
    CHECK_THROWS_AS(complete_linkage_clusters(Matrix(2, 3), 0.3), ArgumentError);
    Matrix m(2, 2);
    m(0, 1) = 0.5;
    m(1, 0) = 0.4;
    CHECK_THROWS_AS(complete_linkage_clusters(m, 0.3), ArgumentError);
    m(1, 0) = 0.5;
    m(0, 0) = 0.1;
    CHECK_THROWS_AS(complete_linkage_clusters(m, 0.3), ArgumentError);
    m(0, 0) = 0;
    m(0, 1) = m(1, 0) = -0.1;
    CHECK_THROWS_AS(complete_linkage_clusters(m, 0.3), ArgumentError);
    m(0, 1) = m(1, 0) = NAN;
    CHECK_THROWS_AS(complete_linkage_clusters(m, 0.3), ArgumentError);
}

TEST_CASE("property: every within-cluster distance is within the threshold") {
    Rng rng(74);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = uniform_size(rng, 1, 25);
        const auto d = random_distance_matrix(rng, k);
        const double tau = uniform(rng, 0.0, 1.0);
        const auto labels = complete_linkage_clusters(d, tau);
        CHECK(max_within(labels, d) <= tau);
        // Labels are numbered by first appearance.
        std::size_t next = 0;
        for (std::size_t l : labels) {
            CHECK(l <= next);
            if (l == next) ++next;
        }
    }
}

TEST_CASE("property: relabelling the inputs permutes the partition") {
    Rng rng(75);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = uniform_size(rng, 2, 15);
        const auto d = random_distance_matrix(rng, k);
        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        Matrix dp(k, k);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) dp(a, b) = d(perm[a], perm[b]);
        const auto l = complete_linkage_clusters(d, 0.4);
        const auto lp = complete_linkage_clusters(dp, 0.4);
        // Random continuous distances have no ties, so the partition matches.
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) CHECK((lp[a] == lp[b]) == (l[perm[a]] == l[perm[b]]));
    }
}

TEST_CASE("representatives") {
    Matrix r(4, 4, 0.0);
    for (std::size_t i = 0; i < 4; ++i) r(i, i) = 1;
    auto set = [&](std::size_t a, std::size_t b, double v) { r(a, b) = r(b, a) = v; };
    set(0, 1, 0.9);
    set(0, 2, 0.7);
    set(1, 2, 0.95);
    const std::vector<std::size_t> labels{0, 0, 0, 1};
    // Mean |r| to the rest: 0 -> 0.8, 1 -> 0.925, 2 -> 0.825.
    CHECK(select_representatives(labels, r) == std::vector<std::size_t>{1, 3});
    const std::vector<double> hint{0.1, 0.2, 0.9, 0.0};
    CHECK(select_representatives(labels, r, std::span<const double>(hint)) == std::vector<std::size_t>{2, 3});
}

TEST_CASE("writers") {
    const std::vector<std::string> names{"a", "b"};
    CHECK(format_name_list(names) == "a\nb\n");
    CHECK(format_cluster_csv(names, std::vector<std::size_t>{0, 1}) == "index,cluster\na,0\nb,1\n");
}
