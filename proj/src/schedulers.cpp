#include "lingcurr/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lingcurr/error.hpp"

namespace lingcurr {

namespace {

// Guards ceil/floor of t*n against representation error (0.3 * 10 is
// 3.0000000000000004).
constexpr double kCountSlack = 1e-9;

struct Named {
    CurriculumKind kind;
    std::string_view name;
};

constexpr Named kKinds[] = {
    {CurriculumKind::sigmoid, "sigmoid"},       {CurriculumKind::neg_sigmoid, "neg_sigmoid"},
    {CurriculumKind::gaussian, "gaussian"},     {CurriculumKind::sampling, "sampling"},
    {CurriculumKind::competence, "competence"}, {CurriculumKind::data_selection, "data_selection"},
    {CurriculumKind::none, "none"},
};

std::vector<std::size_t> sorted_positions(std::vector<std::size_t> positions) {
    std::sort(positions.begin(), positions.end());
    return positions;
}

std::vector<std::size_t> easiest(std::span<const double> difficulty, std::span<const std::string> ids,
                                 std::size_t count) {
    auto order = difficulty_order(difficulty, ids);
    order.resize(std::min(count, order.size()));
    return sorted_positions(std::move(order));
}

}  // namespace

std::string_view to_string(CurriculumKind k) {
    for (const auto& n : kKinds)
        if (n.kind == k) return n.name;
    return "none";
}

std::optional<CurriculumKind> parse_curriculum_kind(std::string_view text) {
    for (const auto& n : kKinds)
        if (n.name == text) return n.kind;
    return std::nullopt;
}

std::string_view to_string(CompetenceShape s) { return s == CompetenceShape::linear ? "linear" : "sqrt"; }

std::optional<CompetenceShape> parse_competence_shape(std::string_view text) {
    if (text == "linear") return CompetenceShape::linear;
    if (text == "sqrt") return CompetenceShape::sqrt;
    return std::nullopt;
}

bool is_weighting(CurriculumKind k) {
    return k == CurriculumKind::sigmoid || k == CurriculumKind::neg_sigmoid || k == CurriculumKind::gaussian;
}

bool is_subset(CurriculumKind k) {
    return k == CurriculumKind::sampling || k == CurriculumKind::competence || k == CurriculumKind::data_selection;
}

void CurriculumConfig::validate() const {
    if (!(beta >= 1.0) || !std::isfinite(beta)) throw UsageError("beta must be >= 1");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw UsageError("gamma must be > 0");
    if (!(competence_c0 > 0.0 && competence_c0 <= 1.0)) throw UsageError("competence c0 must lie in (0, 1]");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) throw UsageError("warmup fraction must lie in [0, 1)");
    if (!(selection_drop_low >= 0.0 && selection_drop_high >= 0.0 && selection_drop_low + selection_drop_high < 1.0))
        throw UsageError("data selection drop fractions must be non-negative and sum below 1");
}

double weight_sigmoid(double s, double t, double beta) { return 1.0 / (1.0 + std::exp(-s - t * beta)); }

double weight_neg_sigmoid(double s, double t, double beta) { return 1.0 / (1.0 + std::exp(s - t * beta)); }

double weight_gaussian(double s, double t, double gamma) { return std::exp(-(s * s) / (2.0 * (1.0 + t * gamma))); }

double curriculum_weight(const CurriculumConfig& cfg, double s, double t) {
    switch (cfg.kind) {
        case CurriculumKind::sigmoid: return weight_sigmoid(s, t, cfg.beta);
        case CurriculumKind::neg_sigmoid: return weight_neg_sigmoid(s, t, cfg.beta);
        case CurriculumKind::gaussian: return weight_gaussian(s, t, cfg.gamma);
        default: return 1.0;
    }
}

double weighted_mean_loss(std::span<const double> losses, std::span<const double> weights) {
    if (losses.size() != weights.size()) throw ArgumentError("weighted_mean_loss: length mismatch");
    if (losses.empty()) throw ArgumentError("weighted_mean_loss: empty batch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < losses.size(); ++i) {
        num += weights[i] * losses[i];
        den += weights[i];
    }
    if (!(den > 0.0)) throw DegenerateInputError("weighted_mean_loss: weights sum to zero");
    return num / den;
}

std::vector<std::size_t> difficulty_order(std::span<const double> difficulty, std::span<const std::string> ids) {
    if (difficulty.size() != ids.size()) throw ArgumentError("difficulty and id lists differ in length");
    std::vector<std::size_t> order(difficulty.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (difficulty[a] != difficulty[b]) return difficulty[a] < difficulty[b];
        return ids[a] < ids[b];
    });
    return order;
}

std::vector<std::size_t> subset_sampling(std::span<const double> difficulty, std::span<const std::string> ids,
                                         double t) {
    const std::size_t n = difficulty.size();
    if (n == 0) return {};
    const double clamped = std::clamp(t, 0.0, 1.0);
    auto count = static_cast<std::size_t>(std::ceil(clamped * static_cast<double>(n) - kCountSlack));
    return easiest(difficulty, ids, std::clamp<std::size_t>(count, 1, n));
}

double competence(const CurriculumConfig& cfg, double t) {
    const double clamped = std::clamp(t, 0.0, 1.0);
    const double c0 = cfg.competence_c0;
    const double growth = cfg.competence_shape == CompetenceShape::linear ? clamped : std::sqrt(clamped);
    return std::min(1.0, c0 + (1.0 - c0) * growth);
}

std::vector<std::size_t> subset_competence(std::span<const double> difficulty, std::span<const std::string> ids,
                                           double t, const CurriculumConfig& cfg) {
    const std::size_t n = difficulty.size();
    if (n == 0) return {};
    const double c = competence(cfg, t);
    auto count = static_cast<std::size_t>(std::floor(c * static_cast<double>(n) + kCountSlack));
    return easiest(difficulty, ids, std::clamp<std::size_t>(count, 1, n));
}

std::vector<std::size_t> subset_data_selection(std::span<const double> difficulty, std::span<const std::string> ids,
                                               double t, const CurriculumConfig& cfg) {
    const std::size_t n = difficulty.size();
    if (n < 3 || t < cfg.warmup_fraction) {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        if (difficulty.size() != ids.size()) throw ArgumentError("difficulty and id lists differ in length");
        return all;
    }
    const auto nn = static_cast<double>(n);
    const auto low = static_cast<std::size_t>(std::floor(cfg.selection_drop_low * nn + kCountSlack));
    const auto high = static_cast<std::size_t>(std::floor(cfg.selection_drop_high * nn + kCountSlack));
    auto order = difficulty_order(difficulty, ids);
    std::vector<std::size_t> middle(order.begin() + static_cast<std::ptrdiff_t>(low),
                                    order.end() - static_cast<std::ptrdiff_t>(high));
    return sorted_positions(std::move(middle));
}

}  // namespace lingcurr
