#include "lingcurr/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "lingcurr/error.hpp"
#include "lingcurr/text_io.hpp"

namespace lingcurr {

std::vector<double> bin_edges(std::span<const double> values, std::size_t m) {
    if (m == 0) throw ArgumentError("bin count must be at least 1");
    if (values.empty()) throw ArgumentError("cannot bin an empty value list");
    for (double v : values)
        if (!std::isfinite(v)) throw ArgumentError("cannot bin non-finite values");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (lo == hi) return {lo, hi};
    std::vector<double> edges(m + 1);
    const double width = (hi - lo) / static_cast<double>(m);
    for (std::size_t b = 0; b < m; ++b) edges[b] = lo + width * static_cast<double>(b);
    edges[m] = hi;
    return edges;
}

std::size_t bin_index(double v, std::span<const double> edges) {
    const std::size_t m = edges.size() - 1;
    if (m <= 1 || v <= edges.front()) return 0;
    if (v >= edges.back()) return m - 1;
    const double width = (edges.back() - edges.front()) / static_cast<double>(m);
    auto b = static_cast<std::size_t>(std::clamp((v - edges.front()) / width, 0.0, static_cast<double>(m - 1)));
    // The division can land one bin off near an edge; settle against the
    // stored edges so membership agrees with them exactly.
    while (b > 0 && v < edges[b]) --b;
    while (b + 1 < m && v >= edges[b + 1]) ++b;
    return b;
}

namespace {

void merge_small_bins(std::vector<Bin>& bins, std::size_t min_count) {
    const std::size_t floor_count = std::max<std::size_t>(min_count, 1);
    while (bins.size() > 1) {
        std::size_t victim = bins.size();
        for (std::size_t b = 0; b < bins.size(); ++b)
            if (bins[b].count < floor_count && (victim == bins.size() || bins[b].count < bins[victim].count)) victim = b;
        if (victim == bins.size()) break;

        auto centre = [&](std::size_t b) { return 0.5 * (bins[b].lo + bins[b].hi); };
        std::size_t target;
        if (victim == 0) {
            target = 1;
        } else if (victim + 1 == bins.size()) {
            target = victim - 1;
        } else {
            const double dl = centre(victim) - centre(victim - 1);
            const double dr = centre(victim + 1) - centre(victim);
            if (dl != dr) target = dl < dr ? victim - 1 : victim + 1;
            else target = bins[victim + 1].count < bins[victim - 1].count ? victim + 1 : victim - 1;
        }
        Bin& into = bins[target];
        const Bin& from = bins[victim];
        into.lo = std::min(into.lo, from.lo);
        into.hi = std::max(into.hi, from.hi);
        into.count += from.count;
        into.correct += from.correct;
        bins.erase(bins.begin() + static_cast<std::ptrdiff_t>(victim));
    }
}

}  // namespace

BinReport binned_balanced_accuracy(std::span<const int> predictions, std::span<const int> labels,
                                   std::span<const double> difficulty, std::size_t m, std::size_t min_count) {
    if (predictions.size() != labels.size() || labels.size() != difficulty.size())
        throw ArgumentError("predictions, labels and difficulty differ in length");
    if (predictions.empty()) throw ArgumentError("cannot evaluate an empty split");

    BinReport report;
    report.n = predictions.size();
    report.edges = bin_edges(difficulty, m);
    const std::size_t bins = report.edges.size() - 1;
    report.raw_counts.assign(bins, 0);
    std::vector<Bin> work(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        work[b].lo = report.edges[b];
        work[b].hi = report.edges[b + 1];
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const std::size_t b = bin_index(difficulty[i], report.edges);
        ++report.raw_counts[b];
        ++work[b].count;
        if (predictions[i] == labels[i]) {
            ++work[b].correct;
            ++correct;
        }
    }
    report.plain_accuracy = static_cast<double>(correct) / static_cast<double>(report.n);

    merge_small_bins(work, min_count);
    double sum = 0.0;
    for (auto& b : work) {
        b.accuracy = static_cast<double>(b.correct) / static_cast<double>(b.count);
        sum += b.accuracy;
    }
    report.bins = std::move(work);
    report.balanced_accuracy = sum / static_cast<double>(report.bins.size());
    if (report.bins.size() >= 2) report.trend_slope = accuracy_trend_slope(report);
    return report;
}

double ols_slope(std::span<const double> y) {
    if (y.size() < 2) throw DegenerateInputError("a trend needs at least two points");
    const double n = static_cast<double>(y.size());
    const double xbar = (n - 1.0) / 2.0;
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double dx = static_cast<double>(i) - xbar;
        sxy += dx * (y[i] - ybar);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

double accuracy_trend_slope(const BinReport& report) {
    if (report.bins.size() < 2)
        throw DegenerateInputError("accuracy trend undefined: " + std::to_string(report.bins.size()) +
                                   " bin(s) after merging");
    std::vector<double> acc;
    acc.reserve(report.bins.size());
    for (const auto& b : report.bins) acc.push_back(b.accuracy);
    return ols_slope(acc);
}

std::string format_bin_report(const BinReport& report) {
    std::string out = "bin_lo,bin_hi,count,accuracy\n";
    for (const auto& b : report.bins)
        out += io::format_double(b.lo) + "," + io::format_double(b.hi) + "," + std::to_string(b.count) + "," +
               io::format_double(b.accuracy) + "\n";
    out += "# n=" + std::to_string(report.n) + " bins=" + std::to_string(report.bins.size()) +
           " plain_accuracy=" + io::format_double(report.plain_accuracy) +
           " balanced_accuracy=" + io::format_double(report.balanced_accuracy) +
           " trend_slope=" + (report.trend_slope ? io::format_double(*report.trend_slope) : std::string("nan")) + "\n";
    return out;
}

}  // namespace lingcurr
