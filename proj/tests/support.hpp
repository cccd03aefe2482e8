#pragma once

#include "oracles.hpp"

#include <spe/dataset.hpp>
#include <spe/linear_model.hpp>

#include <random>
#include <string>

namespace test_support {

inline spe::DesignMatrix to_matrix(const oracle::Problem& pr)
{
    spe::DesignMatrix m(pr.rows.size(), pr.rows.front().size());
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = pr.rows[i][j];
        m.y[i] = pr.y[i];
    }
    return m;
}

inline spe::Dataset random_dataset(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> sp(1.0, 500.0), vel(0.5, 10.0), eff(1.0, 200.0);
    spe::Dataset ds;
    ds.source = "random";
    for (std::size_t i = 0; i < n; ++i) {
        ds.records.push_back({"R" + std::to_string(i + 1), sp(rng), vel(rng), eff(rng)});
    }
    return ds;
}

inline std::string zia_path() { return std::string(SPE_DATA_DIR) + "/zia_story_points.csv"; }

} // namespace test_support
