#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <optional>
#include <vector>

#include "lingcurr/matrix.hpp"

namespace lingcurr {

enum class ImportanceMethod { correlation, optimization };

std::string_view to_string(ImportanceMethod m);
std::optional<ImportanceMethod> parse_importance_method(std::string_view text);

struct ImportanceVector {
    std::vector<double> rho;
    ImportanceMethod method = ImportanceMethod::correlation;
    std::int64_t step = 0;
    double lambda = 0.0;  // optimization only
};

// Sample Pearson r. Zero variance in either argument yields 0.
// Throws ArgumentError on length mismatch or fewer than two points.
double pearson(std::span<const double> x, std::span<const double> y);

// rho_j = pearson(loss, column j) for each column of z.
ImportanceVector estimate_rho_correlation(const Matrix& z, std::span<const double> loss);

struct LassoOptions {
    double tolerance = 1e-8;       // max |coordinate change| in a sweep
    std::size_t max_sweeps = 10'000;
};

inline constexpr double kDefaultLassoLambda = 0.01;

// Minimizes ||loss - z rho||^2 + lambda ||rho||_1 (no 1/n factor) by cyclic
// coordinate descent with soft thresholding, starting from rho = 0.
ImportanceVector estimate_rho_lasso(const Matrix& z, std::span<const double> loss, double lambda,
                                    const LassoOptions& opts = {});

// The objective above, for diagnostics and tests.
double lasso_objective(const Matrix& z, std::span<const double> loss, std::span<const double> rho, double lambda);

// argmin_i ||loss - z_{*i} rho_i||^2, ties to the lowest column.
std::size_t best_single_index(const Matrix& z, std::span<const double> loss, const ImportanceVector& rho);

}  // namespace lingcurr
