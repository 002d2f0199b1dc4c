#include "lingcurr/difficulty.hpp"

#include <cmath>

#include "lingcurr/error.hpp"
#include "lingcurr/text_io.hpp"

namespace lingcurr {

std::string_view to_string(AggregationMethod m) { return m == AggregationMethod::max ? "max" : "weighted"; }

std::optional<AggregationMethod> parse_aggregation_method(std::string_view text) {
    if (text == "max") return AggregationMethod::max;
    if (text == "weighted") return AggregationMethod::weighted;
    return std::nullopt;
}

std::size_t select_max_column(const ImportanceVector& rho, const std::vector<bool>& flagged, ArgmaxMode mode) {
    if (!flagged.empty() && flagged.size() != rho.rho.size())
        throw ArgumentError("aggregate_max: flag vector length does not match rho");
    std::optional<std::size_t> best;
    double best_value = 0.0;
    for (std::size_t j = 0; j < rho.rho.size(); ++j) {
        if (!flagged.empty() && flagged[j]) continue;
        const double v = mode == ArgmaxMode::absolute_rho ? std::abs(rho.rho[j]) : rho.rho[j];
        if (!best || v > best_value) {
            best = j;
            best_value = v;
        }
    }
    if (!best) throw DegenerateInputError("aggregate_max: every index column is flagged as zero-variance");
    return *best;
}

DifficultyScore aggregate_max(const Matrix& z, const ImportanceVector& rho, const std::vector<bool>& flagged,
                              ArgmaxMode mode) {
    if (z.cols() != rho.rho.size()) throw ArgumentError("aggregate_max: rho length does not match column count");
    const std::size_t col = select_max_column(rho, flagged, mode);
    const double sign = mode == ArgmaxMode::absolute_rho && rho.rho[col] < 0.0 ? -1.0 : 1.0;
    DifficultyScore out;
    out.source = DifficultySource::ling_max;
    out.values.resize(z.rows());
    for (std::size_t i = 0; i < z.rows(); ++i) out.values[i] = sign * z(i, col);
    return out;
}

DifficultyScore aggregate_weighted(const Matrix& z, const ImportanceVector& rho) {
    if (z.cols() != rho.rho.size()) throw ArgumentError("aggregate_weighted: rho length does not match column count");
    double norm_sq = 0.0;
    for (double r : rho.rho) norm_sq += r * r;
    DifficultyScore out;
    out.source = DifficultySource::ling_weighted;
    out.values.assign(z.rows(), 0.0);
    if (norm_sq == 0.0) return out;
    const double norm = std::sqrt(norm_sq);
    for (std::size_t i = 0; i < z.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < z.cols(); ++j) s += rho.rho[j] * z(i, j);
        out.values[i] = s / norm;
    }
    return out;
}

DifficultyScore aggregate(AggregationMethod method, const Matrix& z, const ImportanceVector& rho,
                          const std::vector<bool>& flagged, ArgmaxMode mode) {
    return method == AggregationMethod::max ? aggregate_max(z, rho, flagged, mode) : aggregate_weighted(z, rho);
}

DifficultyScore loss_difficulty(const LossTraces& traces, std::span<const std::string> ids) {
    DifficultyScore out;
    out.source = DifficultySource::loss;
    out.values.reserve(ids.size());
    for (const auto& id : ids) {
        auto it = traces.find(id);
        if (it == traces.end() || it->second.empty())
            throw CoverageError("no recorded loss for sample \"" + id + "\"");
        double sum = 0.0;
        for (double l : it->second) sum += l;
        out.values.push_back(sum / static_cast<double>(it->second.size()));
    }
    return out;
}

LossTraces load_loss_traces(const std::filesystem::path& path) {
    const auto lines = io::read_lines(path);
    LossTraces traces;
    bool header_seen = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (io::trim(lines[i]).empty()) continue;
        auto fields = io::split_csv_line(lines[i]);
        if (!header_seen) {
            header_seen = true;
            if (fields.size() != 3 || io::trim(fields[0]) != "sample_id" || io::trim(fields[2]) != "loss")
                throw ParseError(path.string(), i + 1, "expected header sample_id,step,loss");
            continue;
        }
        if (fields.size() != 3) throw ParseError(path.string(), i + 1, "expected 3 fields");
        auto loss = io::parse_double(fields[2]);
        if (!loss || !std::isfinite(*loss)) throw ParseError(path.string(), i + 1, "bad loss value \"" + fields[2] + "\"");
        traces[io::trim(fields[0])].push_back(*loss);
    }
    return traces;
}

std::string format_difficulty_csv(std::span<const std::string> ids, const DifficultyScore& score) {
    std::string out = "sample_id,score\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out += io::quote_csv_field(ids[i]);
        out.push_back(',');
        out += io::format_double(score.values.at(i));
        out.push_back('\n');
    }
    return out;
}

}  // namespace lingcurr
