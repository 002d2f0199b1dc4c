#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lingcurr/corpus_store.hpp"
#include "lingcurr/evaluation.hpp"
#include "lingcurr/matrix.hpp"
#include "lingcurr/trainer.hpp"

namespace lingcurr {

inline constexpr double kDefaultKeepFraction = 0.30;
inline constexpr double kDefaultClusterThreshold = 0.30;

struct TrendScore {
    std::size_t column = 0;
    std::string index;
    double slope = 0.0;  // 0 when every value falls in one bin
};

// Per column of `values` (rows aligned with predictions), the accuracy trend
// over equal-width bins of that column. Sorted by |slope| descending, ties to
// the lower column.
std::vector<TrendScore> rank_by_trend(const Matrix& values, std::span<const std::string> names,
                                      std::span<const int> predictions, std::span<const int> labels,
                                      std::size_t m = kDefaultBinCount, std::size_t min_count = kDefaultMinBinCount);

// Number of names kept for a fraction of k: ceil(fraction * k).
std::size_t kept_count(double keep_fraction, std::size_t k);

// Ranks every index by the baseline's accuracy trend on the validation split
// and keeps the first ceil(keep_fraction * k). The baseline must be a trained
// run without a curriculum; otherwise ArgumentError.
std::vector<TrendScore> filter_by_trend(const Dataset& d, const IndexMatrix& indices, const CheckpointFile& baseline,
                                        std::size_t m = kDefaultBinCount, double keep_fraction = kDefaultKeepFraction,
                                        std::size_t min_count = kDefaultMinBinCount);
std::vector<TrendScore> filter_by_trend(const Dataset& d, const IndexMatrix& indices, const TrainRecord& baseline,
                                        std::size_t m = kDefaultBinCount, double keep_fraction = kDefaultKeepFraction,
                                        std::size_t min_count = kDefaultMinBinCount);

// Pearson r between every pair of columns; unit diagonal, exactly symmetric.
Matrix correlation_matrix(const Matrix& values);

// 1 - |r| elementwise.
Matrix correlation_distance(const Matrix& correlation);

// Agglomerative complete linkage, merging while the closest pair of clusters
// is within `threshold`. Ties go to the pair with the lowest members. Labels
// are numbered by first appearance. Throws ArgumentError unless `distance` is
// square, finite, symmetric, non-negative and zero on the diagonal.
std::vector<std::size_t> complete_linkage_clusters(const Matrix& distance, double threshold);

// One column per cluster, in label order: the highest `rank_hint` when given,
// otherwise the member with the highest mean |r| to the rest of its cluster.
// Ties go to the lower column.
std::vector<std::size_t> select_representatives(std::span<const std::size_t> labels, const Matrix& correlation,
                                                std::optional<std::span<const double>> rank_hint = std::nullopt);

std::string format_name_list(std::span<const std::string> names);
// `index,slope`
std::string format_trend_csv(std::span<const TrendScore> scores);
// `index,cluster`
std::string format_cluster_csv(std::span<const std::string> names, std::span<const std::size_t> labels);

}  // namespace lingcurr
