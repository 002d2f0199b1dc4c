#pragma once

#include <cstddef>
#include <cstdint>

#include "lingcurr/corpus_store.hpp"

namespace lingcurr::testing {

// Binary task whose per-sample difficulty is driven by one index.
//
// Every sample carries `indices` independent N(0,1) index values. With
// h = x[planted] + 0.25 * noise, each of the 16 tokens is neutral with
// probability 0.25 and otherwise a class token that names the true class with
// probability 0.5 + 0.48 / (1 + exp(2h)): low h is easy, high h near chance.
struct PlantedTaskOptions {
    std::size_t train = 1200;
    std::size_t validation = 400;
    std::size_t test = 400;
    std::size_t indices = 20;
    std::size_t planted = 7;
    std::size_t tokens_per_text = 16;
    // Fraction of train labels flipped, taken from the largest |x[planted]|.
    double label_noise = 0.0;
};

struct PlantedTask {
    Dataset dataset;
    IndexMatrix raw;           // unstandardized, dataset order
    IndexMatrix standardized;  // fitted on train
};

PlantedTask make_planted_task(std::uint64_t seed, const PlantedTaskOptions& opts = {});

}  // namespace lingcurr::testing
