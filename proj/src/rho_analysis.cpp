#include "lingcurr/rho_analysis.hpp"

#include <algorithm>
#include <cmath>

#include "lingcurr/error.hpp"
#include "lingcurr/index_filtering.hpp"
#include "lingcurr/text_io.hpp"

namespace lingcurr {

void RhoTrajectory::validate() const {
    if (values.rows() != steps.size() || values.cols() != index_names.size())
        throw ValidationError("rho trajectory shape does not match its steps and names");
    for (std::size_t s = 1; s < steps.size(); ++s)
        if (steps[s] <= steps[s - 1]) throw ValidationError("rho trajectory steps must be strictly increasing");
    for (double v : values.data())
        if (!std::isfinite(v)) throw ValidationError("rho trajectory holds a non-finite value");
}

RhoTrajectory trajectory_from_record(const TrainRecord& record) {
    RhoTrajectory traj;
    traj.index_names = record.index_names;
    traj.values = Matrix(record.rho_trajectory.size(), record.index_names.size());
    for (std::size_t s = 0; s < record.rho_trajectory.size(); ++s) {
        const auto& snap = record.rho_trajectory[s];
        traj.steps.push_back(snap.step);
        std::copy(snap.rho.begin(), snap.rho.end(), traj.values.row(s).begin());
    }
    traj.validate();
    return traj;
}

RhoTrajectory parse_rho_trajectory(std::string_view csv, const std::string& source) {
    std::vector<std::string> lines;
    {
        std::size_t start = 0;
        while (start <= csv.size()) {
            auto end = csv.find('\n', start);
            if (end == std::string_view::npos) end = csv.size();
            std::string line(csv.substr(start, end - start));
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.push_back(std::move(line));
            start = end + 1;
        }
    }
    if (lines.empty() || io::trim(lines[0]) != "step,index_name,rho")
        throw ParseError(source, 1, "expected header \"step,index_name,rho\"");

    std::vector<std::int64_t> steps;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> names;
    std::size_t cursor = 0;  // position within the current step's names
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (io::trim(lines[i]).empty()) continue;
        const auto fields = io::split_csv_line(lines[i]);
        if (fields.size() != 3) throw ParseError(source, i + 1, "expected 3 fields");
        const auto step = io::parse_integer(fields[0]);
        const auto rho = io::parse_double(fields[2]);
        if (!step) throw ParseError(source, i + 1, "bad step \"" + fields[0] + "\"");
        if (!rho || !std::isfinite(*rho)) throw ParseError(source, i + 1, "bad rho \"" + fields[2] + "\"");

        if (steps.empty() || *step != steps.back()) {
            if (!steps.empty() && cursor != names.size())
                throw ParseError(source, i + 1, "step " + std::to_string(steps.back()) + " lists too few indices");
            if (!steps.empty() && *step <= steps.back())
                throw ParseError(source, i + 1, "steps must be strictly increasing");
            steps.push_back(*step);
            rows.emplace_back();
            cursor = 0;
        }
        if (steps.size() == 1) {
            names.push_back(fields[1]);
        } else if (cursor >= names.size() || names[cursor] != fields[1]) {
            throw ParseError(source, i + 1, "index \"" + fields[1] + "\" out of order with the first step");
        }
        rows.back().push_back(*rho);
        ++cursor;
    }
    if (!steps.empty() && cursor != names.size())
        throw ParseError(source, lines.size(), "last step lists too few indices");

    RhoTrajectory traj;
    traj.steps = std::move(steps);
    traj.index_names = std::move(names);
    traj.values = Matrix(rows.size(), traj.index_names.size());
    for (std::size_t s = 0; s < rows.size(); ++s) std::copy(rows[s].begin(), rows[s].end(), traj.values.row(s).begin());
    return traj;
}

RhoTrajectory load_rho_trajectory(const std::filesystem::path& path) {
    std::string content;
    for (const auto& line : io::read_lines(path)) {
        content += line;
        content.push_back('\n');
    }
    return parse_rho_trajectory(content, path.string());
}

std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::early: return "early";
        case Stage::middle: return "middle";
        case Stage::late: return "late";
    }
    return "early";
}

std::string_view to_string(StagePair p) {
    switch (p) {
        case StagePair::early_middle: return "early-middle";
        case StagePair::early_late: return "early-late";
        case StagePair::middle_late: return "middle-late";
    }
    return "early-middle";
}

StageMeans stage_means(const RhoTrajectory& traj) {
    const std::size_t n = traj.steps.size();
    if (n < 3) throw ArgumentError("stage means need at least 3 snapshots, got " + std::to_string(n));
    const std::size_t k = traj.index_names.size();
    StageMeans out;
    out.index_names = traj.index_names;
    out.sizes = {n / 3, n / 3, n - 2 * (n / 3)};
    out.means = Matrix(3, k);
    std::size_t begin = 0;
    for (std::size_t stage = 0; stage < 3; ++stage) {
        const std::size_t end = begin + out.sizes[stage];
        for (std::size_t j = 0; j < k; ++j) {
            double sum = 0.0;
            for (std::size_t s = begin; s < end; ++s) sum += traj.values(s, j);
            out.means(stage, j) = sum / static_cast<double>(out.sizes[stage]);
        }
        begin = end;
    }
    return out;
}

std::array<std::vector<RankedIndex>, 3> top_k_per_stage(const StageMeans& means, std::size_t k_top) {
    std::array<std::vector<RankedIndex>, 3> out;
    const std::size_t k = means.index_names.size();
    for (std::size_t stage = 0; stage < 3; ++stage) {
        std::vector<RankedIndex> ranked;
        ranked.reserve(k);
        for (std::size_t j = 0; j < k; ++j) ranked.push_back({means.index_names[j], means.means(stage, j)});
        std::sort(ranked.begin(), ranked.end(), [](const RankedIndex& a, const RankedIndex& b) {
            if (a.mean_rho != b.mean_rho) return a.mean_rho > b.mean_rho;
            return a.index < b.index;
        });
        ranked.resize(std::min(k_top, k));
        out[stage] = std::move(ranked);
    }
    return out;
}

std::vector<IndexChange> max_change_indices(const StageMeans& means) {
    constexpr double kEps = 1e-6;
    constexpr std::array<std::pair<std::size_t, std::size_t>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};
    std::vector<IndexChange> out;
    for (std::size_t j = 0; j < means.index_names.size(); ++j) {
        IndexChange best{means.index_names[j], StagePair::early_middle, 0.0, 0.0};
        bool first = true;
        for (std::size_t p = 0; p < kPairs.size(); ++p) {
            const double earlier = means.means(kPairs[p].first, j);
            const double delta = means.means(kPairs[p].second, j) - earlier;
            if (first || std::abs(delta) > std::abs(best.change)) {
                best.pair = static_cast<StagePair>(p);
                best.change = delta;
                best.relative_change = delta / std::max(std::abs(earlier), kEps);
                first = false;
            }
        }
        out.push_back(std::move(best));
    }
    std::sort(out.begin(), out.end(), [](const IndexChange& a, const IndexChange& b) {
        if (std::abs(a.change) != std::abs(b.change)) return std::abs(a.change) > std::abs(b.change);
        return a.index < b.index;
    });
    return out;
}

double trajectory_distance(const RhoTrajectory& traj, std::size_t a, std::size_t b) {
    const std::size_t n = traj.steps.size();
    if (n == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t s = 0; s < n; ++s) sum += std::abs(traj.values(s, a) - traj.values(s, b));
    return sum / static_cast<double>(n);
}

Matrix trajectory_distances(const RhoTrajectory& traj) {
    const std::size_t k = traj.index_names.size();
    Matrix d(k, k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) d(a, b) = d(b, a) = trajectory_distance(traj, a, b);
    return d;
}

std::vector<std::size_t> cluster_trajectories(const RhoTrajectory& traj, double threshold) {
    if (traj.index_names.size() < 2) throw ArgumentError("trajectory clustering needs at least two indices");
    return complete_linkage_clusters(trajectory_distances(traj), threshold);
}

std::string format_stage_table(const std::array<std::vector<RankedIndex>, 3>& table) {
    std::string out = "stage\trank\tindex\tmean_rho\n";
    for (std::size_t stage = 0; stage < 3; ++stage)
        for (std::size_t r = 0; r < table[stage].size(); ++r)
            out += std::string(to_string(static_cast<Stage>(stage))) + "\t" + std::to_string(r + 1) + "\t" +
                   table[stage][r].index + "\t" + io::format_double(table[stage][r].mean_rho) + "\n";
    return out;
}

std::string format_change_table(const std::vector<IndexChange>& changes) {
    std::string out = "index\tstage_pair\tchange\trelative_change\n";
    for (const auto& c : changes)
        out += c.index + "\t" + std::string(to_string(c.pair)) + "\t" + io::format_double(c.change) + "\t" +
               io::format_double(c.relative_change) + "\n";
    return out;
}

}  // namespace lingcurr
