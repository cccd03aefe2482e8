#pragma once

#include <spe/dataset.hpp>
#include <spe/error.hpp>

#include <cassert>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

namespace spe {

/// Hyperparameters of the penalized least-squares fit.
///
/// The objective minimized over (w, b) is
///
///     1/(2n) ||y - Xw - b||^2 + alpha * l1_ratio * ||w||_1
///                             + alpha * (1 - l1_ratio) / 2 * ||w||^2
///
/// An unscaled LASSO objective ||y - Xw||^2 + delta * ||w||_1 has the same
/// minimizer when delta = 2 * n * alpha (l1_ratio = 1).
struct ModelConfig
{
    double alpha = 1.0;
    double l1_ratio = 0.5;
    int max_iter = 1000;
    double tol = 1e-4;
    // Kept for parity with the published parameter table. The cyclic solver
    // never reads it.
    std::uint64_t seed = 0;

    void validate() const
    {
        if (!(alpha >= 0.0) || !std::isfinite(alpha)) fail(ErrorKind::usage, fmt::format("alpha must be >= 0, got {}", alpha));
        if (!(l1_ratio >= 0.0 && l1_ratio <= 1.0)) fail(ErrorKind::usage, fmt::format("l1_ratio must lie in [0,1], got {}", l1_ratio));
        if (max_iter < 1) fail(ErrorKind::usage, fmt::format("max_iter must be >= 1, got {}", max_iter));
        if (!(tol > 0.0)) fail(ErrorKind::usage, fmt::format("tol must be > 0, got {}", tol));
    }

    bool operator==(const ModelConfig&) const = default;
};

enum class ModelKind { lasso, elastic_net };

inline constexpr std::string_view model_kind_name(ModelKind k) noexcept
{
    return k == ModelKind::lasso ? "lasso" : "elastic_net";
}

/// The configuration actually optimized for a model kind (LASSO pins l1_ratio to 1).
inline ModelConfig effective_config(ModelKind kind, ModelConfig cfg) noexcept
{
    if (kind == ModelKind::lasso) cfg.l1_ratio = 1.0;
    return cfg;
}

/// Row-major feature matrix with its target vector.
struct DesignMatrix
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> x;
    std::vector<double> y;

    DesignMatrix() = default;
    DesignMatrix(std::size_t n, std::size_t p) : rows(n), cols(p), x(n * p, 0.0), y(n, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return x[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return x[i * cols + j]; }

    std::span<const double> row(std::size_t i) const { return {x.data() + i * cols, cols}; }

    void validate() const
    {
        if (rows < 1) fail(ErrorKind::data, "design matrix has no rows");
        if (x.size() != rows * cols || y.size() != rows) fail(ErrorKind::data, "design matrix storage does not match its shape");
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (!std::isfinite(x[k])) fail(ErrorKind::data, fmt::format("non-finite feature at row {}, column {}", k / cols, k % cols));
        }
        for (std::size_t i = 0; i < rows; ++i) {
            if (!std::isfinite(y[i])) fail(ErrorKind::data, fmt::format("non-finite target at row {}", i));
        }
    }

    /// Rows picked by index, in the given order.
    DesignMatrix subset(std::span<const std::size_t> idx) const
    {
        DesignMatrix out(idx.size(), cols);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            for (std::size_t j = 0; j < cols; ++j) out(r, j) = (*this)(idx[r], j);
            out.y[r] = y[idx[r]];
        }
        return out;
    }
};

/// Features (story_points, velocity), target actual_effort.
inline DesignMatrix to_design_matrix(const Dataset& ds)
{
    DesignMatrix m(ds.size(), 2);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        m(i, 0) = ds.records[i].story_points;
        m(i, 1) = ds.records[i].velocity;
        m.y[i] = ds.records[i].actual_effort;
    }
    return m;
}

struct Coefficients
{
    std::vector<double> weights;
    double intercept = 0.0;
    int n_sweeps_used = 0;
    bool converged = false;

    bool operator==(const Coefficients&) const = default;
};

inline double soft_threshold(double z, double gamma) noexcept
{
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

namespace detail {

// Objective on centered data; used for the per-sweep monotonicity assertion.
inline double centered_objective(const std::vector<double>& resid, const std::vector<double>& w,
                                 std::size_t n, const ModelConfig& cfg)
{
    double rss = 0.0;
    for (double r : resid) rss += r * r;
    double l1 = 0.0, l2 = 0.0;
    for (double v : w) {
        l1 += std::abs(v);
        l2 += v * v;
    }
    return rss / (2.0 * static_cast<double>(n)) + cfg.alpha * cfg.l1_ratio * l1 +
           0.5 * cfg.alpha * (1.0 - cfg.l1_ratio) * l2;
}

} // namespace detail

/// Cyclic coordinate descent for the elastic-net objective documented on ModelConfig.
///
/// X and y are centered up front so the intercept drops out of the descent; it is
/// recovered afterwards as mean(y) - mean(X) . w. A sweep visits the features in
/// index order. Stops when the largest absolute coefficient change within a sweep
/// is below cfg.tol, or after cfg.max_iter sweeps. A fit that runs out of sweeps is
/// still returned, with converged = false and a warning on `warn` (if non-null).
inline Coefficients fit_elastic_net(const DesignMatrix& data, const ModelConfig& cfg,
                                    std::ostream* warn = &std::cerr)
{
    data.validate();
    cfg.validate();

    const std::size_t n = data.rows;
    const std::size_t p = data.cols;
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<double> x_mean(p, 0.0);
    double y_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) x_mean[j] += data(i, j);
        y_mean += data.y[i];
    }
    for (double& m : x_mean) m *= inv_n;
    y_mean *= inv_n;

    // Column-major centered features for contiguous per-coordinate passes.
    std::vector<double> xc(n * p);
    std::vector<double> col_sq(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double v = data(i, j) - x_mean[j];
            xc[j * n + i] = v;
            col_sq[j] += v * v;
        }
        col_sq[j] *= inv_n;
    }

    std::vector<double> resid(n);
    for (std::size_t i = 0; i < n; ++i) resid[i] = data.y[i] - y_mean;

    const double l1_pen = cfg.alpha * cfg.l1_ratio;
    const double l2_pen = cfg.alpha * (1.0 - cfg.l1_ratio);

    Coefficients out;
    out.weights.assign(p, 0.0);
    std::vector<double>& w = out.weights;

#ifndef NDEBUG
    double prev_obj = detail::centered_objective(resid, w, n, cfg);
#endif

    for (int sweep = 1; sweep <= cfg.max_iter; ++sweep) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            const double denom = col_sq[j] + l2_pen;
            const double* xj = &xc[j * n];
            const double w_old = w[j];
            double w_new = 0.0;
            if (denom > 0.0) {
                double rho = 0.0;
                for (std::size_t i = 0; i < n; ++i) rho += xj[i] * resid[i];
                rho = rho * inv_n + col_sq[j] * w_old;
                w_new = soft_threshold(rho, l1_pen) / denom;
            }
            const double delta = w_new - w_old;
            if (delta != 0.0) {
                for (std::size_t i = 0; i < n; ++i) resid[i] -= delta * xj[i];
                w[j] = w_new;
            }
            max_change = std::max(max_change, std::abs(delta));
        }
        out.n_sweeps_used = sweep;

#ifndef NDEBUG
        const double obj = detail::centered_objective(resid, w, n, cfg);
        assert(obj <= prev_obj + 1e-12 * (1.0 + std::abs(prev_obj)));
        prev_obj = obj;
#endif

        if (max_change < cfg.tol) {
            out.converged = true;
            break;
        }
    }

    out.intercept = y_mean;
    for (std::size_t j = 0; j < p; ++j) out.intercept -= x_mean[j] * w[j];

    if (!out.converged && warn != nullptr) {
        *warn << fmt::format("warning: coordinate descent stopped after {} sweeps without reaching tol {}\n",
                                 cfg.max_iter, cfg.tol);
    }
    return out;
}

/// Pure L1 penalty: fit_elastic_net with l1_ratio forced to 1.
inline Coefficients fit_lasso(const DesignMatrix& data, ModelConfig cfg,
                              std::ostream* warn = &std::cerr)
{
    cfg.l1_ratio = 1.0;
    return fit_elastic_net(data, cfg, warn);
}

inline Coefficients fit(ModelKind kind, const DesignMatrix& data, const ModelConfig& cfg,
                        std::ostream* warn = &std::cerr)
{
    return kind == ModelKind::lasso ? fit_lasso(data, cfg, warn) : fit_elastic_net(data, cfg, warn);
}

inline std::vector<double> predict(const Coefficients& coeffs, const DesignMatrix& data)
{
    if (coeffs.weights.size() != data.cols) {
        fail(ErrorKind::usage, fmt::format("model has {} weights but data has {} features",
                                           coeffs.weights.size(), data.cols));
    }
    std::vector<double> out(data.rows);
    for (std::size_t i = 0; i < data.rows; ++i) {
        double v = coeffs.intercept;
        for (std::size_t j = 0; j < data.cols; ++j) v += data(i, j) * coeffs.weights[j];
        out[i] = v;
    }
    return out;
}

struct KktReport
{
    bool pass = false;
    std::vector<double> residuals;  // per-coefficient stationarity violation
    double intercept_residual = 0.0;
};

/// Subgradient optimality check of a fitted model against the elastic-net objective.
inline KktReport verify_kkt(const Coefficients& coeffs, const DesignMatrix& data,
                            const ModelConfig& cfg, double tol_kkt)
{
    const auto pred = predict(coeffs, data);
    const std::size_t n = data.rows;
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<double> resid(n);
    double mean_resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        resid[i] = data.y[i] - pred[i];
        mean_resid += resid[i];
    }
    mean_resid *= inv_n;

    const double l1_pen = cfg.alpha * cfg.l1_ratio;
    const double l2_pen = cfg.alpha * (1.0 - cfg.l1_ratio);

    KktReport rep;
    rep.pass = true;
    rep.residuals.resize(data.cols);
    for (std::size_t j = 0; j < data.cols; ++j) {
        double g = 0.0;
        for (std::size_t i = 0; i < n; ++i) g += data(i, j) * resid[i];
        g = -g * inv_n + l2_pen * coeffs.weights[j];
        const double wj = coeffs.weights[j];
        double violation;
        if (wj != 0.0) {
            violation = std::abs(g + l1_pen * (wj > 0.0 ? 1.0 : -1.0));
        } else {
            violation = std::max(0.0, std::abs(g) - l1_pen);
        }
        rep.residuals[j] = violation;
        if (violation > tol_kkt) rep.pass = false;
    }
    rep.intercept_residual = std::abs(mean_resid);
    if (rep.intercept_residual > tol_kkt) rep.pass = false;
    return rep;
}

} // namespace spe
