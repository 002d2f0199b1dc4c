#include "lingcurr/importance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lingcurr/error.hpp"

namespace lingcurr {

std::string_view to_string(ImportanceMethod m) {
    return m == ImportanceMethod::correlation ? "correlation" : "optimization";
}

std::optional<ImportanceMethod> parse_importance_method(std::string_view text) {
    if (text == "correlation") return ImportanceMethod::correlation;
    if (text == "optimization") return ImportanceMethod::optimization;
    return std::nullopt;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ArgumentError("pearson: length mismatch (" + std::to_string(x.size()) + " vs " +
                            std::to_string(y.size()) + ")");
    if (x.size() < 2) throw ArgumentError("pearson: need at least two points");

    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

namespace {

void check_shapes(const Matrix& z, std::span<const double> loss) {
    if (z.rows() != loss.size())
        throw ArgumentError("importance: matrix has " + std::to_string(z.rows()) + " rows, loss vector " +
                            std::to_string(loss.size()));
}

}  // namespace

ImportanceVector estimate_rho_correlation(const Matrix& z, std::span<const double> loss) {
    check_shapes(z, loss);
    ImportanceVector out;
    out.method = ImportanceMethod::correlation;
    out.rho.resize(z.cols());
    for (std::size_t j = 0; j < z.cols(); ++j) {
        const auto col = z.column(j);
        out.rho[j] = pearson(loss, col);
    }
    return out;
}

double lasso_objective(const Matrix& z, std::span<const double> loss, std::span<const double> rho, double lambda) {
    double rss = 0.0;
    for (std::size_t i = 0; i < z.rows(); ++i) {
        double fit = 0.0;
        for (std::size_t j = 0; j < z.cols(); ++j) fit += z(i, j) * rho[j];
        const double r = loss[i] - fit;
        rss += r * r;
    }
    double l1 = 0.0;
    for (double v : rho) l1 += std::abs(v);
    return rss + lambda * l1;
}

ImportanceVector estimate_rho_lasso(const Matrix& z, std::span<const double> loss, double lambda,
                                    const LassoOptions& opts) {
    check_shapes(z, loss);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ArgumentError("lasso: lambda must be a finite non-negative number");
    for (double v : z.data())
        if (!std::isfinite(v)) throw ArgumentError("lasso: non-finite design value");
    for (double v : loss)
        if (!std::isfinite(v)) throw ArgumentError("lasso: non-finite loss value");

    const std::size_t n = z.rows();
    const std::size_t k = z.cols();

    // d/d rho_j of ||l - z rho||^2 is -2 z_j' r; coordinate minimizer is
    // soft(2 z_j' r_{-j}, lambda) / (2 ||z_j||^2).
    std::vector<double> col_sq(k, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) col_sq[j] += z(i, j) * z(i, j);

    std::vector<double> rho(k, 0.0);
    std::vector<double> residual(loss.begin(), loss.end());

    for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (col_sq[j] == 0.0) continue;
            const double old = rho[j];
            double corr = 0.0;
            for (std::size_t i = 0; i < n; ++i) corr += z(i, j) * residual[i];
            const double c = 2.0 * (corr + col_sq[j] * old);
            double updated = 0.0;
            if (c > lambda)
                updated = (c - lambda) / (2.0 * col_sq[j]);
            else if (c < -lambda)
                updated = (c + lambda) / (2.0 * col_sq[j]);
            const double delta = updated - old;
            if (delta != 0.0) {
                for (std::size_t i = 0; i < n; ++i) residual[i] -= z(i, j) * delta;
                rho[j] = updated;
            }
            max_change = std::max(max_change, std::abs(delta));
        }
        if (max_change < opts.tolerance) break;
    }

    ImportanceVector out;
    out.method = ImportanceMethod::optimization;
    out.lambda = lambda;
    out.rho = std::move(rho);
    return out;
}

std::size_t best_single_index(const Matrix& z, std::span<const double> loss, const ImportanceVector& rho) {
    if (z.cols() == 0 || z.rows() == 0) throw ArgumentError("best_single_index: empty matrix");
    check_shapes(z, loss);
    if (rho.rho.size() != z.cols()) throw ArgumentError("best_single_index: rho length does not match column count");

    std::size_t best = 0;
    double best_rss = 0.0;
    for (std::size_t j = 0; j < z.cols(); ++j) {
        double rss = 0.0;
        for (std::size_t i = 0; i < z.rows(); ++i) {
            const double r = loss[i] - z(i, j) * rho.rho[j];
            rss += r * r;
        }
        if (j == 0 || rss < best_rss) {
            best = j;
            best_rss = rss;
        }
    }
    return best;
}

}  // namespace lingcurr
