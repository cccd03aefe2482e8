#pragma once

#include <spe/dataset.hpp>
#include <spe/error.hpp>
#include <spe/linear_model.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

namespace spe {

using ordered_json = nlohmann::ordered_json;

/// A fitted model together with the scaling it was trained under.
struct SavedModel
{
    ModelKind kind = ModelKind::lasso;
    ModelConfig config;
    Coefficients coeffs;
    NormalizationParams normalization;

    bool operator==(const SavedModel&) const = default;
};

inline ordered_json to_json(const ModelConfig& c)
{
    return ordered_json{{"alpha", c.alpha}, {"l1_ratio", c.l1_ratio}, {"max_iter", c.max_iter},
                        {"tol", c.tol}, {"seed", c.seed}};
}

inline ordered_json to_json(const NormalizationParams& p)
{
    ordered_json out = ordered_json::object();
    for (Column c : all_columns) {
        const auto& r = p.range(c);
        out[std::string(column_name(c))] = ordered_json{{"min", r.min}, {"max", r.max}};
    }
    return out;
}

inline ordered_json to_json(const SavedModel& m)
{
    return ordered_json{
        {"model_kind", model_kind_name(m.kind)},
        {"weights", m.coeffs.weights},
        {"intercept", m.coeffs.intercept},
        {"config", to_json(m.config)},
        {"converged", m.coeffs.converged},
        {"n_sweeps_used", m.coeffs.n_sweeps_used},
        {"normalization", to_json(m.normalization)},
    };
}

inline SavedModel saved_model_from_json(const nlohmann::json& j)
{
    try {
        SavedModel m;
        const auto kind = j.at("model_kind").get<std::string>();
        if (kind == "lasso") m.kind = ModelKind::lasso;
        else if (kind == "elastic_net") m.kind = ModelKind::elastic_net;
        else fail(ErrorKind::data, fmt::format("unknown model_kind '{}'", kind));

        m.coeffs.weights = j.at("weights").get<std::vector<double>>();
        m.coeffs.intercept = j.at("intercept").get<double>();
        m.coeffs.converged = j.at("converged").get<bool>();
        m.coeffs.n_sweeps_used = j.at("n_sweeps_used").get<int>();
        const auto& c = j.at("config");
        m.config.alpha = c.at("alpha").get<double>();
        m.config.l1_ratio = c.at("l1_ratio").get<double>();
        m.config.max_iter = c.at("max_iter").get<int>();
        m.config.tol = c.at("tol").get<double>();
        m.config.seed = c.at("seed").get<std::uint64_t>();
        const auto& n = j.at("normalization");
        for (Column col : all_columns) {
            const auto& r = n.at(std::string(column_name(col)));
            auto& dst = m.normalization.range(col);
            dst.min = r.at("min").get<double>();
            dst.max = r.at("max").get<double>();
            if (!(dst.max > dst.min)) fail(ErrorKind::data, fmt::format("degenerate column {}", column_name(col)));
        }
        if (m.coeffs.weights.size() != 2) {
            fail(ErrorKind::data, fmt::format("expected 2 weights, got {}", m.coeffs.weights.size()));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::data, fmt::format("corrupt model file: {}", e.what()));
    }
}

inline void save_model(const SavedModel& m, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::usage, fmt::format("cannot open {} for writing", path));
    out << to_json(m).dump(2) << '\n';
}

inline SavedModel load_model(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::not_found, fmt::format("file not found: {}", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto j = nlohmann::json::parse(ss.str(), nullptr, false);
    if (j.is_discarded()) fail(ErrorKind::data, fmt::format("corrupt model file: {} is not valid JSON", path));
    return saved_model_from_json(j);
}

inline void check_estimate_inputs(double story_points, double velocity)
{
    if (!(story_points > 0.0) || !std::isfinite(story_points)) {
        fail(ErrorKind::usage, fmt::format("story_points must be positive, got {}", story_points));
    }
    if (!(velocity > 0.0) || !std::isfinite(velocity)) {
        fail(ErrorKind::usage, fmt::format("velocity must be positive, got {}", velocity));
    }
}

/// Effort for a new project on the original scale.
inline double estimate(const SavedModel& m, double story_points, double velocity)
{
    check_estimate_inputs(story_points, velocity);
    DesignMatrix row(1, 2);
    row(0, 0) = normalize_value(story_points, m.normalization.story_points);
    row(0, 1) = normalize_value(velocity, m.normalization.velocity);
    const double y = predict(m.coeffs, row).front();
    return denormalize_value(y, m.normalization.actual_effort);
}

inline double estimate(const std::string& model_file, double story_points, double velocity)
{
    check_estimate_inputs(story_points, velocity);
    return estimate(load_model(model_file), story_points, velocity);
}

} // namespace spe
