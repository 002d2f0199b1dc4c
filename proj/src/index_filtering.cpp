#include "lingcurr/index_filtering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lingcurr/error.hpp"
#include "lingcurr/importance.hpp"
#include "lingcurr/text_io.hpp"

namespace lingcurr {

std::vector<TrendScore> rank_by_trend(const Matrix& values, std::span<const std::string> names,
                                      std::span<const int> predictions, std::span<const int> labels, std::size_t m,
                                      std::size_t min_count) {
    if (names.size() != values.cols()) throw ArgumentError("rank_by_trend: one name per column expected");
    if (values.rows() != predictions.size()) throw ArgumentError("rank_by_trend: rows and predictions differ");
    std::vector<TrendScore> out;
    out.reserve(values.cols());
    for (std::size_t j = 0; j < values.cols(); ++j) {
        const auto column = values.column(j);
        const auto report = binned_balanced_accuracy(predictions, labels, column, m, min_count);
        out.push_back({j, names[j], report.trend_slope.value_or(0.0)});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const TrendScore& a, const TrendScore& b) { return std::abs(a.slope) > std::abs(b.slope); });
    return out;
}

std::size_t kept_count(double keep_fraction, std::size_t k) {
    if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) throw ArgumentError("keep fraction must lie in (0, 1]");
    // 0.3 * 10 is 3.0000000000000004; the slack keeps exact products exact.
    const auto n = static_cast<std::size_t>(std::ceil(keep_fraction * static_cast<double>(k) - 1e-9));
    return std::min(n, k);
}

std::vector<TrendScore> filter_by_trend(const Dataset& d, const IndexMatrix& indices, const CheckpointFile& baseline,
                                        std::size_t m, double keep_fraction, std::size_t min_count) {
    const std::size_t keep = kept_count(keep_fraction, indices.cols());
    if (baseline.curriculum != CurriculumKind::none)
        throw ArgumentError("trend filtering needs a baseline trained without a curriculum, got \"" +
                            std::string(to_string(baseline.curriculum)) + "\"");
    if (baseline.total_steps <= 0) throw ArgumentError("trend filtering needs a trained baseline (it ran 0 steps)");
    if (indices.sample_ids() != d.ids()) throw AlignmentError("index matrix rows are not in dataset order");

    const auto result = evaluate_checkpoint(baseline, d, indices, Split::validation);
    const auto positions = d.positions(Split::validation);
    std::vector<int> labels;
    labels.reserve(positions.size());
    for (std::size_t p : positions) labels.push_back(d[p].label);
    auto ranked = rank_by_trend(indices.values().select_rows(positions), indices.index_names(), result.predictions,
                                labels, m, min_count);
    ranked.resize(keep);
    return ranked;
}

std::vector<TrendScore> filter_by_trend(const Dataset& d, const IndexMatrix& indices, const TrainRecord& baseline,
                                        std::size_t m, double keep_fraction, std::size_t min_count) {
    return filter_by_trend(d, indices, make_checkpoint_file(baseline), m, keep_fraction, min_count);
}

Matrix correlation_matrix(const Matrix& values) {
    const std::size_t k = values.cols();
    std::vector<std::vector<double>> columns;
    columns.reserve(k);
    for (std::size_t j = 0; j < k; ++j) columns.push_back(values.column(j));
    Matrix r(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        r(a, a) = 1.0;
        for (std::size_t b = a + 1; b < k; ++b) r(a, b) = r(b, a) = pearson(columns[a], columns[b]);
    }
    return r;
}

Matrix correlation_distance(const Matrix& correlation) {
    Matrix d(correlation.rows(), correlation.cols());
    for (std::size_t a = 0; a < d.rows(); ++a)
        for (std::size_t b = 0; b < d.cols(); ++b) d(a, b) = a == b ? 0.0 : 1.0 - std::abs(correlation(a, b));
    return d;
}

std::vector<std::size_t> complete_linkage_clusters(const Matrix& distance, double threshold) {
    const std::size_t k = distance.rows();
    if (distance.cols() != k) throw ArgumentError("distance matrix must be square");
    if (std::isnan(threshold)) throw ArgumentError("threshold must be a number");
    for (std::size_t a = 0; a < k; ++a) {
        if (distance(a, a) != 0.0) throw ArgumentError("distance matrix diagonal must be zero");
        for (std::size_t b = 0; b < k; ++b) {
            const double v = distance(a, b);
            if (!std::isfinite(v) || v < 0.0)
                throw ArgumentError("distance matrix entries must be finite and non-negative");
            if (v != distance(b, a)) throw ArgumentError("distance matrix must be symmetric");
        }
    }

    // Clusters are kept in order of their lowest member, so scanning pairs in
    // that order realises the lowest-member tie rule.
    Matrix link = distance;
    std::vector<std::size_t> owner(k);
    for (std::size_t i = 0; i < k; ++i) owner[i] = i;
    std::vector<std::size_t> alive(k);
    for (std::size_t i = 0; i < k; ++i) alive[i] = i;

    while (alive.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t ba = 0, bb = 0;
        for (std::size_t x = 0; x < alive.size(); ++x)
            for (std::size_t y = x + 1; y < alive.size(); ++y)
                if (link(alive[x], alive[y]) < best) {
                    best = link(alive[x], alive[y]);
                    ba = x;
                    bb = y;
                }
        if (best > threshold) break;
        const std::size_t keep = alive[ba], gone = alive[bb];
        for (std::size_t other : alive) {
            if (other == keep || other == gone) continue;
            const double v = std::max(link(keep, other), link(gone, other));
            link(keep, other) = link(other, keep) = v;
        }
        for (auto& o : owner)
            if (o == gone) o = keep;
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(bb));
    }

    std::vector<std::size_t> labels(k);
    std::vector<std::size_t> label_of_owner(k, k);
    std::size_t next = 0;
    for (std::size_t i = 0; i < k; ++i) {
        auto& l = label_of_owner[owner[i]];
        if (l == k) l = next++;
        labels[i] = l;
    }
    return labels;
}

std::vector<std::size_t> select_representatives(std::span<const std::size_t> labels, const Matrix& correlation,
                                                std::optional<std::span<const double>> rank_hint) {
    const std::size_t k = labels.size();
    if (correlation.rows() != k || correlation.cols() != k)
        throw ArgumentError("correlation matrix does not match the cluster labels");
    if (rank_hint && rank_hint->size() != k) throw ArgumentError("rank hint needs one score per index");
    std::size_t clusters = 0;
    for (std::size_t l : labels) clusters = std::max(clusters, l + 1);

    std::vector<std::vector<std::size_t>> members(clusters);
    for (std::size_t i = 0; i < k; ++i) members[labels[i]].push_back(i);

    std::vector<std::size_t> out;
    out.reserve(clusters);
    for (const auto& group : members) {
        if (group.empty()) throw ArgumentError("cluster labels must be contiguous");
        std::size_t best = group.front();
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t i : group) {
            double score;
            if (rank_hint) {
                score = (*rank_hint)[i];
            } else if (group.size() == 1) {
                score = 0.0;
            } else {
                double s = 0.0;
                for (std::size_t o : group)
                    if (o != i) s += std::abs(correlation(i, o));
                score = s / static_cast<double>(group.size() - 1);
            }
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        out.push_back(best);
    }
    return out;
}

std::string format_name_list(std::span<const std::string> names) {
    std::string out;
    for (const auto& n : names) out += n + "\n";
    return out;
}

std::string format_trend_csv(std::span<const TrendScore> scores) {
    std::string out = "index,slope\n";
    for (const auto& s : scores) out += io::quote_csv_field(s.index) + "," + io::format_double(s.slope) + "\n";
    return out;
}

std::string format_cluster_csv(std::span<const std::string> names, std::span<const std::size_t> labels) {
    std::string out = "index,cluster\n";
    for (std::size_t i = 0; i < names.size(); ++i)
        out += io::quote_csv_field(names[i]) + "," + std::to_string(labels[i]) + "\n";
    return out;
}

}  // namespace lingcurr
