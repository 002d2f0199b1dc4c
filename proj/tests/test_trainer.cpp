#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "generators.hpp"
#include "lingcurr/error.hpp"
#include "lingcurr/trainer.hpp"
#include "planted_task.hpp"
#include "reference_training.hpp"

using namespace lingcurr;
using namespace lingcurr::testing;

namespace {

PlantedTask small_task(std::uint64_t seed) {
    PlantedTaskOptions o;
    o.train = 160;
    o.validation = 60;
    o.test = 40;
    o.indices = 5;
    o.planted = 2;
    return make_planted_task(seed, o);
}

// Two classes with disjoint vocabularies.
Dataset separable(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<Sample> samples;
    for (std::size_t i = 0; i < n; ++i) {
        Sample s;
        s.id = "q" + std::to_string(i);
        s.label = static_cast<int>(i % 2);
        for (int t = 0; t < 6; ++t)
            s.text += (s.label ? " b" : " a") + std::to_string(uniform_size(rng, 0, 4));
        s.split = i < n * 3 / 5 ? Split::train : Split::validation;
        samples.push_back(s);
    }
    return Dataset(std::move(samples));
}

IndexMatrix flat_indices(const Dataset& d) {
    Rng rng(1);
    return standardize_on_train(IndexMatrix(d.ids(), {"x"}, normal_matrix(rng, d.size(), 1)), d);
}

}  // namespace

TEST_CASE("zero epochs leave the seeded initialisation untouched") {
    const auto task = small_task(1);
    TrainConfig cfg;
    cfg.epochs = 0;
    const auto rec = train(task.dataset, task.standardized, cfg);
    CHECK(rec.final_params == rec.initial_params);
    CHECK(rec.rho_trajectory.empty());
    CHECK(rec.total_steps == 0);
    std::mt19937_64 rng(cfg.seed);
    CHECK(rec.initial_params == init_params(2, cfg.hash_dim, rng));
}

TEST_CASE("same seed twice gives identical records") {
    const auto task = small_task(2);
    TrainConfig cfg;
    cfg.curriculum.kind = CurriculumKind::gaussian;
    const auto a = train(task.dataset, task.standardized, cfg);
    const auto b = train(task.dataset, task.standardized, cfg);
    CHECK(a.final_params == b.final_params);
    CHECK(format_rho_trajectory(a) == format_rho_trajectory(b));
    CHECK(format_loss_traces(a) == format_loss_traces(b));
    CHECK(format_metric_history(a) == format_metric_history(b));
    cfg.seed = 3;
    CHECK_FALSE(train(task.dataset, task.standardized, cfg).final_params == a.final_params);
}

TEST_CASE("record shape: trajectory length, strictly increasing steps, two snapshots per epoch") {
    const auto task = small_task(3);
    for (std::size_t epochs : {1, 2, 4}) {
        TrainConfig cfg;
        cfg.epochs = epochs;
        const auto rec = train(task.dataset, task.standardized, cfg);
        CHECK(rec.rho_trajectory.size() == epochs * 2);
        CHECK(rec.loss_traces.size() == epochs * 2);
        for (std::size_t s = 1; s < rec.rho_trajectory.size(); ++s)
            CHECK(rec.rho_trajectory[s].step > rec.rho_trajectory[s - 1].step);
        for (std::size_t s = 0; s < rec.loss_traces.size(); ++s) {
            CHECK(rec.loss_traces[s].step == rec.rho_trajectory[s].step);
            CHECK(rec.loss_traces[s].losses.size() == task.dataset.positions(Split::train).size());
        }
        const auto traces = to_loss_traces(rec);
        CHECK(traces.size() == task.dataset.positions(Split::train).size());
        for (const auto& [id, v] : traces) CHECK(v.size() == epochs * 2);
        CHECK(rec.rho_trajectory.back().step == rec.total_steps);
    }
}

TEST_CASE("uncurriculated training equals the weight-free reference loop bit for bit") {
    const auto task = small_task(4);
    TrainConfig cfg;
    cfg.batch_size = 16;  // 160 train samples: full batches
    CHECK(train(task.dataset, task.standardized, cfg).final_params == reference_training(task.dataset, cfg));
    cfg.batch_size = 7;  // a partial last batch every epoch
    cfg.seed = 9;
    CHECK(train(task.dataset, task.standardized, cfg).final_params == reference_training(task.dataset, cfg));
}

TEST_CASE("weights are 1 until the first importance estimate") {
    // One validation point at the very end: every update precedes it, so a
    // weighting curriculum cannot differ from no curriculum.
    const auto task = small_task(5);
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.validation_steps_per_epoch = 1;
    const auto plain = train(task.dataset, task.standardized, cfg);
    for (auto kind : {CurriculumKind::sigmoid, CurriculumKind::neg_sigmoid, CurriculumKind::gaussian,
                      CurriculumKind::sampling, CurriculumKind::competence, CurriculumKind::data_selection}) {
        cfg.curriculum.kind = kind;
        CHECK(train(task.dataset, task.standardized, cfg).final_params == plain.final_params);
    }
}

TEST_CASE("every curriculum and difficulty source runs") {
    const auto task = small_task(6);
    TrainConfig base;
    const auto proxy_rec = train(task.dataset, task.standardized, base);
    const auto proxy = to_loss_traces(proxy_rec);
    for (auto kind : {CurriculumKind::sigmoid, CurriculumKind::neg_sigmoid, CurriculumKind::gaussian,
                      CurriculumKind::sampling, CurriculumKind::competence, CurriculumKind::data_selection}) {
        for (auto source : {DifficultyInput::ling, DifficultyInput::loss, DifficultyInput::online_loss}) {
            TrainConfig cfg;
            cfg.curriculum.kind = kind;
            cfg.difficulty = source;
            cfg.aggregation = kind == CurriculumKind::gaussian ? AggregationMethod::weighted : AggregationMethod::max;
            const auto rec = train(task.dataset, task.standardized, cfg, TrainInputs{&proxy});
            CHECK(rec.rho_trajectory.size() == 6);
            CHECK(rec.skipped_updates == 0);
            for (double v : rec.final_params.weights.data()) REQUIRE(std::isfinite(v));
        }
    }
}

TEST_CASE("loss difficulty without proxy losses is a usage error") {
    const auto task = small_task(7);
    TrainConfig cfg;
    cfg.curriculum.kind = CurriculumKind::sampling;
    cfg.difficulty = DifficultyInput::loss;
    CHECK_THROWS_AS(train(task.dataset, task.standardized, cfg), UsageError);
}

TEST_CASE("input contract") {
    const auto task = small_task(8);
    TrainConfig cfg;
    CHECK_THROWS_AS(train(task.dataset, task.raw, cfg), ArgumentError);
    cfg.batch_size = 0;
    CHECK_THROWS_AS(train(task.dataset, task.standardized, cfg), UsageError);
    cfg = {};
    cfg.batch_size = 100;
    cfg.validation_steps_per_epoch = 3;  // 2 steps per epoch
    CHECK_THROWS_AS(train(task.dataset, task.standardized, cfg), UsageError);
}

TEST_CASE("best checkpoint is the earliest step with the highest validation accuracy") {
    const auto task = small_task(9);
    TrainConfig cfg;
    cfg.epochs = 5;
    const auto rec = train(task.dataset, task.standardized, cfg);
    double best = rec.best.validation_accuracy;
    for (const auto& m : rec.metric_history) CHECK(m.validation_accuracy <= best);
    for (const auto& m : rec.metric_history)
        if (m.validation_accuracy == best) {
            CHECK(rec.best.step <= m.step);
            break;
        }
    const auto val = validate(rec.best.params, Featurizer(cfg.hash_dim), task.dataset, Split::validation);
    CHECK(val.accuracy == rec.best.validation_accuracy);
}

TEST_CASE("separable toy set is learned perfectly") {
    const Dataset d = separable(10, 200);
    TrainConfig cfg;
    cfg.epochs = 60;
    cfg.learning_rate = 1.0;
    cfg.weight_decay = 0.0;
    const auto rec = train(d, flat_indices(d), cfg);
    const auto val = validate(rec.final_params, Featurizer(cfg.hash_dim), d, Split::validation);
    CHECK(val.accuracy == 1.0);
    for (double l : val.losses) CHECK(l < 0.01);
}

TEST_CASE("random initialisations sit near chance on a balanced set") {
    const Dataset d = separable(11, 400);
    double mean = 0;
    const int seeds = 30;
    for (int s = 0; s < seeds; ++s) {
        std::mt19937_64 rng(s);
        const auto p = init_params(2, kDefaultHashDim, rng);
        mean += validate(p, Featurizer(), d, Split::validation).accuracy / seeds;
    }
    CHECK(std::abs(mean - 0.5) <= 0.1);
}

TEST_CASE("checkpoint round trip") {
    const auto task = small_task(12);
    TrainConfig cfg;
    cfg.concat_indices = true;
    const auto rec = train(task.dataset, task.standardized, cfg);
    const auto ckpt = make_checkpoint_file(rec);
    const auto back = parse_checkpoint(format_checkpoint(ckpt));
    CHECK(back.params == ckpt.params);
    CHECK(back.step == ckpt.step);
    CHECK(back.total_steps == rec.total_steps);
    CHECK(back.config_hash == cfg.hash());
    CHECK(back.index_names == task.standardized.index_names());
    CHECK(back.concat_indices);
    const auto eval = evaluate_checkpoint(back, task.dataset, task.standardized, Split::validation);
    CHECK(eval.accuracy == rec.best.validation_accuracy);
    CHECK_THROWS_AS(parse_checkpoint("garbage\n"), ParseError);
}

TEST_CASE("config hash changes with any setting") {
    TrainConfig a, b;
    CHECK(a.hash() == b.hash());
    b.curriculum.gamma = 7.5;
    CHECK(a.hash() != b.hash());
}

TEST_CASE("csv writers") {
    const auto task = small_task(13);
    TrainConfig cfg;
    cfg.epochs = 1;
    const auto rec = train(task.dataset, task.standardized, cfg);
    const auto rho = format_rho_trajectory(rec);
    CHECK(rho.rfind("step,index_name,rho\n", 0) == 0);
    CHECK(std::count(rho.begin(), rho.end(), '\n') == 1 + 2 * 5);
    const auto traces = format_loss_traces(rec);
    CHECK(std::count(traces.begin(), traces.end(), '\n') == 1 + 2 * 160);
}
