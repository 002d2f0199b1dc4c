#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lingcurr {

inline constexpr std::size_t kDefaultBinCount = 10;
inline constexpr std::size_t kDefaultMinBinCount = 5;

struct Bin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
};

struct BinReport {
    std::vector<double> edges;             // equal-width edges before merging
    std::vector<std::size_t> raw_counts;   // members per edge interval
    std::vector<Bin> bins;                 // after merging small bins
    std::size_t n = 0;
    double plain_accuracy = 0.0;
    double balanced_accuracy = 0.0;
    std::optional<double> trend_slope;     // absent with fewer than two bins
};

// m equal-width bins over [min, max]; returns m + 1 edges. Constant values
// give one bin. Throws ArgumentError on m == 0, empty or non-finite input.
std::vector<double> bin_edges(std::span<const double> values, std::size_t m);

// Interval holding `v`: [e_b, e_{b+1}), the last one closed. Values outside
// the edges clamp to the first or last bin.
std::size_t bin_index(double v, std::span<const double> edges);

// Per-bin accuracy of predictions grouped by difficulty. Bins with fewer than
// `min_count` members are merged into the neighbour with the nearest centre
// (ties to the smaller neighbour, then the left one), smallest bin first.
BinReport binned_balanced_accuracy(std::span<const int> predictions, std::span<const int> labels,
                                   std::span<const double> difficulty, std::size_t m = kDefaultBinCount,
                                   std::size_t min_count = kDefaultMinBinCount);

// Least-squares slope of y against 0, 1, ..., y.size() - 1.
double ols_slope(std::span<const double> y);

// Slope of per-bin accuracy against bin position. Throws DegenerateInputError
// with fewer than two bins.
double accuracy_trend_slope(const BinReport& report);

// `bin_lo,bin_hi,count,accuracy` rows followed by a `# n=...` summary line.
std::string format_bin_report(const BinReport& report);

}  // namespace lingcurr
