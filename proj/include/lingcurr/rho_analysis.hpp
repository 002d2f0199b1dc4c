#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lingcurr/matrix.hpp"
#include "lingcurr/trainer.hpp"

namespace lingcurr {

struct RhoTrajectory {
    std::vector<std::int64_t> steps;
    Matrix values;  // steps x indices
    std::vector<std::string> index_names;

    // Throws ValidationError on shape mismatch, non-increasing steps or
    // non-finite values.
    void validate() const;
};

RhoTrajectory trajectory_from_record(const TrainRecord& record);

// Reads `step,index_name,rho`. Every step must list the same indices in the
// same order as the first.
RhoTrajectory parse_rho_trajectory(std::string_view csv, const std::string& source = "<memory>");
RhoTrajectory load_rho_trajectory(const std::filesystem::path& path);

enum class Stage { early, middle, late };
std::string_view to_string(Stage s);

struct StageMeans {
    Matrix means;  // 3 x indices
    std::array<std::size_t, 3> sizes{};
    std::vector<std::string> index_names;
};

// Mean rho over thirds of the snapshots (floor(n/3), floor(n/3), rest).
// Throws ArgumentError with fewer than three snapshots.
StageMeans stage_means(const RhoTrajectory& traj);

struct RankedIndex {
    std::string index;
    double mean_rho = 0.0;
};

// Per stage, the k_top indices with the highest mean rho; ties by name.
std::array<std::vector<RankedIndex>, 3> top_k_per_stage(const StageMeans& means, std::size_t k_top = 3);

enum class StagePair { early_middle, early_late, middle_late };
std::string_view to_string(StagePair p);

struct IndexChange {
    std::string index;
    StagePair pair = StagePair::early_middle;
    double change = 0.0;           // later minus earlier
    double relative_change = 0.0;  // change / max(|earlier|, 1e-6)
};

// Largest |change| per index over the three stage pairs (first pair wins a
// tie), sorted by |change| descending, ties by name.
std::vector<IndexChange> max_change_indices(const StageMeans& means);

// Mean over snapshots of |rho_a - rho_b|.
double trajectory_distance(const RhoTrajectory& traj, std::size_t a, std::size_t b);
Matrix trajectory_distances(const RhoTrajectory& traj);

// Complete-linkage clusters of the index trajectories. Throws ArgumentError
// with fewer than two indices.
std::vector<std::size_t> cluster_trajectories(const RhoTrajectory& traj, double threshold);

// Tab-separated `stage rank index mean_rho` (rank from 1).
std::string format_stage_table(const std::array<std::vector<RankedIndex>, 3>& table);
// Tab-separated `index stage_pair change relative_change`.
std::string format_change_table(const std::vector<IndexChange>& changes);

}  // namespace lingcurr
