#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lingcurr/importance.hpp"
#include "lingcurr/matrix.hpp"

namespace lingcurr {

enum class DifficultySource { ling_max, ling_weighted, loss };

struct DifficultyScore {
    std::vector<double> values;
    DifficultySource source = DifficultySource::ling_max;
};

enum class AggregationMethod { max, weighted };

std::string_view to_string(AggregationMethod m);
std::optional<AggregationMethod> parse_aggregation_method(std::string_view text);

enum class ArgmaxMode {
    signed_rho,    // argmax_j rho_j, exactly as the scoring rule is written
    absolute_rho,  // extension: argmax_j |rho_j|, column sign-flipped when rho_j < 0
};

// S_i = z(i, j*) with j* = argmax over non-flagged columns, ties to the lowest
// column. `flagged` may be empty (no column flagged). Throws
// DegenerateInputError if every column is flagged.
DifficultyScore aggregate_max(const Matrix& z, const ImportanceVector& rho, const std::vector<bool>& flagged = {},
                              ArgmaxMode mode = ArgmaxMode::signed_rho);

// The column aggregate_max would pick.
std::size_t select_max_column(const ImportanceVector& rho, const std::vector<bool>& flagged = {},
                              ArgmaxMode mode = ArgmaxMode::signed_rho);

// S_i = sum_j rho_j z_ij / sqrt(sum_j rho_j^2); all zero when rho is zero.
DifficultyScore aggregate_weighted(const Matrix& z, const ImportanceVector& rho);

DifficultyScore aggregate(AggregationMethod method, const Matrix& z, const ImportanceVector& rho,
                          const std::vector<bool>& flagged = {}, ArgmaxMode mode = ArgmaxMode::signed_rho);

// Recorded per-sample loss snapshots keyed by sample id.
using LossTraces = std::map<std::string, std::vector<double>, std::less<>>;

// Mean recorded loss per id, in the order of `ids`. Throws CoverageError when
// an id has no snapshot.
DifficultyScore loss_difficulty(const LossTraces& traces, std::span<const std::string> ids);

// `sample_id,step,loss` rows (the trainer's loss-trace file).
LossTraces load_loss_traces(const std::filesystem::path& path);

// `sample_id,score`.
std::string format_difficulty_csv(std::span<const std::string> ids, const DifficultyScore& score);

}  // namespace lingcurr
