#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lingcurr {

enum class CurriculumKind { sigmoid, neg_sigmoid, gaussian, sampling, competence, data_selection, none };
enum class CompetenceShape { linear, sqrt };

std::string_view to_string(CurriculumKind k);
std::optional<CurriculumKind> parse_curriculum_kind(std::string_view text);
std::string_view to_string(CompetenceShape s);
std::optional<CompetenceShape> parse_competence_shape(std::string_view text);

// Weight-style kinds rescale losses; subset-style kinds restrict the pool of
// samples a batch is drawn from.
bool is_weighting(CurriculumKind k);
bool is_subset(CurriculumKind k);

struct CurriculumConfig {
    CurriculumKind kind = CurriculumKind::none;
    double beta = 10.0;   // sigmoid growth rate, >= 1
    double gamma = 8.0;   // gaussian variance growth, > 0
    double competence_c0 = 0.1;
    CompetenceShape competence_shape = CompetenceShape::linear;
    double warmup_fraction = 0.2;
    // Fractions dropped from each end by data_selection.
    double selection_drop_low = 0.3;
    double selection_drop_high = 0.3;

    // Throws UsageError describing the first out-of-range parameter.
    void validate() const;
};

// 1 / (1 + exp(-S - t beta)); rising in S: harder samples weigh more early.
double weight_sigmoid(double s, double t, double beta);
// 1 / (1 + exp(S - t beta)); falling in S: easy samples first.
double weight_neg_sigmoid(double s, double t, double beta);
// exp(-S^2 / (2 (1 + t gamma))); medium samples first.
double weight_gaussian(double s, double t, double gamma);

// Dispatch for weight-style kinds; 1 for every other kind.
double curriculum_weight(const CurriculumConfig& cfg, double s, double t);

// sum w_i l_i / sum w_i. Throws DegenerateInputError when sum w is not
// positive, ArgumentError on length mismatch or empty input.
double weighted_mean_loss(std::span<const double> losses, std::span<const double> weights);

// Subset selections return positions into `difficulty` (ascending position
// order). Ranking is by difficulty, ties broken by id.
std::vector<std::size_t> difficulty_order(std::span<const double> difficulty, std::span<const std::string> ids);

// The ceil(t n) easiest samples (at least one when n > 0).
std::vector<std::size_t> subset_sampling(std::span<const double> difficulty, std::span<const std::string> ids,
                                         double t);

double competence(const CurriculumConfig& cfg, double t);

// Samples whose empirical difficulty CDF rank (i/n for the i-th easiest) is
// within competence(t); at least one.
std::vector<std::size_t> subset_competence(std::span<const double> difficulty, std::span<const std::string> ids,
                                           double t, const CurriculumConfig& cfg);

// Everything during warmup, then the middle band after dropping the easiest
// and hardest fractions. Fewer than three samples: everything.
std::vector<std::size_t> subset_data_selection(std::span<const double> difficulty, std::span<const std::string> ids,
                                               double t, const CurriculumConfig& cfg);

}  // namespace lingcurr
