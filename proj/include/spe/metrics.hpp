#pragma once

#include <spe/error.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

namespace spe {

// AE = actual effort, EE = estimated effort throughout.

enum class MetricScale { normalized, original };

inline constexpr std::string_view scale_name(MetricScale s) noexcept
{
    return s == MetricScale::normalized ? "normalized" : "original";
}

struct EvaluationReport
{
    double mse = 0.0;
    double rmse = 0.0;
    double mmre = 0.0;
    double mmer = 0.0;
    double mdmre = 0.0;
    double mdmer = 0.0;
    double pred8 = 0.0;
    double pred25 = 0.0;
    double r_squared = 0.0;
    std::size_t n = 0;
    MetricScale scale = MetricScale::normalized;

    bool operator==(const EvaluationReport&) const = default;
};

namespace detail {

inline void check_pair(std::span<const double> actual, std::span<const double> estimated)
{
    if (actual.size() != estimated.size()) {
        fail(ErrorKind::usage, fmt::format("length mismatch: {} actual vs {} estimated",
                                           actual.size(), estimated.size()));
    }
    if (actual.empty()) fail(ErrorKind::usage, "empty input");
}

inline double mean(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace detail

inline double mse(std::span<const double> actual, std::span<const double> estimated)
{
    detail::check_pair(actual, estimated);
    double s = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double d = actual[i] - estimated[i];
        s += d * d;
    }
    return s / static_cast<double>(actual.size());
}

inline double rmse(std::span<const double> actual, std::span<const double> estimated)
{
    return std::sqrt(mse(actual, estimated));
}

/// |AE_i - EE_i| / |AE_i|
inline std::vector<double> mre_each(std::span<const double> actual, std::span<const double> estimated)
{
    detail::check_pair(actual, estimated);
    std::vector<double> out(actual.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == 0.0) fail(ErrorKind::numeric, fmt::format("MRE undefined at index {}", i));
        out[i] = std::abs(actual[i] - estimated[i]) / std::abs(actual[i]);
    }
    return out;
}

/// |AE_i - EE_i| / |EE_i|, the error relative to the estimate.
inline std::vector<double> mer_each(std::span<const double> actual, std::span<const double> estimated)
{
    detail::check_pair(actual, estimated);
    std::vector<double> out(actual.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (estimated[i] == 0.0) fail(ErrorKind::numeric, fmt::format("MER undefined at index {}", i));
        out[i] = std::abs(actual[i] - estimated[i]) / std::abs(estimated[i]);
    }
    return out;
}

/// Median; the mean of the two middle order statistics for even lengths.
inline double median(std::span<const double> values)
{
    if (values.empty()) fail(ErrorKind::usage, "empty input");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline double mmre(std::span<const double> actual, std::span<const double> estimated)
{
    const auto m = mre_each(actual, estimated);
    return detail::mean(m);
}

inline double mmer(std::span<const double> actual, std::span<const double> estimated)
{
    const auto m = mer_each(actual, estimated);
    return detail::mean(m);
}

inline double mdmre(std::span<const double> mres) { return median(mres); }

inline double mdmer(std::span<const double> actual, std::span<const double> estimated)
{
    const auto m = mer_each(actual, estimated);
    return median(m);
}

/// Percentage of observations whose relative error is at most n_pct percent.
inline double pred(int n_pct, std::span<const double> mres)
{
    if (mres.empty()) fail(ErrorKind::usage, "empty input");
    if (n_pct <= 0) fail(ErrorKind::usage, fmt::format("PRED level must be positive, got {}", n_pct));
    const double threshold = static_cast<double>(n_pct) / 100.0;
    const auto hits = std::count_if(mres.begin(), mres.end(), [&](double m) { return m <= threshold; });
    return 100.0 * static_cast<double>(hits) / static_cast<double>(mres.size());
}

inline double r_squared(std::span<const double> actual, std::span<const double> estimated)
{
    detail::check_pair(actual, estimated);
    if (actual.size() < 2) fail(ErrorKind::usage, "R² needs at least 2 observations");
    const double mu = detail::mean(actual);
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double e = actual[i] - estimated[i];
        const double d = actual[i] - mu;
        ss_res += e * e;
        ss_tot += d * d;
    }
    if (ss_tot == 0.0) fail(ErrorKind::numeric, "R² undefined: actual values are constant");
    return 1.0 - ss_res / ss_tot;
}

/// Every metric at once. Failures of individual metrics are collected and
/// reported together in a single error.
inline EvaluationReport evaluate_all(std::span<const double> actual, std::span<const double> estimated,
                                     MetricScale scale)
{
    detail::check_pair(actual, estimated);

    EvaluationReport rep;
    rep.n = actual.size();
    rep.scale = scale;
    std::vector<std::string> problems;
    auto attempt = [&](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            problems.emplace_back(e.what());
        }
    };

    rep.mse = mse(actual, estimated);
    rep.rmse = std::sqrt(rep.mse);
    attempt([&] {
        const auto mres = mre_each(actual, estimated);
        rep.mmre = detail::mean(mres);
        rep.mdmre = median(mres);
        rep.pred8 = pred(8, mres);
        rep.pred25 = pred(25, mres);
    });
    attempt([&] {
        const auto mers = mer_each(actual, estimated);
        rep.mmer = detail::mean(mers);
        rep.mdmer = median(mers);
    });
    attempt([&] { rep.r_squared = r_squared(actual, estimated); });

    if (!problems.empty()) {
        std::string msg = "evaluation failed:";
        for (const auto& p : problems) msg += " " + p + ";";
        msg.pop_back();
        fail(ErrorKind::numeric, msg);
    }
    return rep;
}

} // namespace spe
