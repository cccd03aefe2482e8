#include "support.hpp"

#include <spe/linear_model.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

using namespace spe;

namespace {

ModelConfig tight(double alpha, double l1_ratio)
{
    ModelConfig c;
    c.alpha = alpha;
    c.l1_ratio = l1_ratio;
    c.max_iter = 100000;
    c.tol = 1e-12;
    return c;
}

DesignMatrix single_feature(const std::vector<double>& x, const std::vector<double>& y)
{
    DesignMatrix m(x.size(), 1);
    for (std::size_t i = 0; i < x.size(); ++i) {
        m(i, 0) = x[i];
        m.y[i] = y[i];
    }
    return m;
}

} // namespace

TEST(SoftThreshold, Examples)
{
    EXPECT_EQ(soft_threshold(3, 1), 2);
    EXPECT_EQ(soft_threshold(-3, 1), -2);
    EXPECT_EQ(soft_threshold(0.5, 1), 0);
    EXPECT_EQ(soft_threshold(-0.5, 1), 0);
    EXPECT_EQ(soft_threshold(2, 0), 2);
}

TEST(ModelConfig, Validation)
{
    EXPECT_NO_THROW(ModelConfig{}.validate());
    EXPECT_THROW((ModelConfig{-1.0}.validate()), Error);
    EXPECT_THROW((ModelConfig{1.0, 1.5}.validate()), Error);
    EXPECT_THROW((ModelConfig{1.0, 0.5, 0}.validate()), Error);
    EXPECT_THROW((ModelConfig{1.0, 0.5, 10, 0.0}.validate()), Error);
}

TEST(FitElasticNet, InterpolatesExactLine)
{
    const auto m = single_feature({0, 1}, {0, 1});
    for (double l1 : {0.0, 0.5, 1.0}) {
        const auto c = fit_elastic_net(m, tight(0.0, l1));
        EXPECT_NEAR(c.weights[0], 1.0, 1e-8);
        EXPECT_NEAR(c.intercept, 0.0, 1e-8);
        EXPECT_TRUE(c.converged);
    }
}

TEST(FitElasticNet, HugePenaltyLeavesOnlyIntercept)
{
    std::mt19937_64 rng(1);
    const auto pr = oracle::random_problem(rng, 12, 2);
    const auto m = test_support::to_matrix(pr);
    double ybar = 0;
    for (double v : pr.y) ybar += v;
    ybar /= pr.y.size();
    for (double l1 : {0.5, 1.0}) {
        const auto c = fit_elastic_net(m, ModelConfig{1e6, l1});
        EXPECT_EQ(c.weights, (std::vector<double>{0.0, 0.0}));
        EXPECT_NEAR(c.intercept, ybar, 1e-8);
    }
}

TEST(FitElasticNet, SingleStandardizedFeatureMatchesClosedForm)
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(15), y(15);
        for (auto& v : x) v = g(rng);
        x = oracle::standardize(x);
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = 0.7 * x[i] + 0.3 * g(rng) + 2.0;
        const double alpha = 0.05 * (trial % 10);
        const double l1 = (trial % 5) / 4.0;
        const auto c = fit_elastic_net(single_feature(x, y), tight(alpha, l1));
        EXPECT_NEAR(c.weights[0], oracle::enet_single_feature(x, y, alpha, l1), 1e-8);
    }
}

TEST(FitLasso, BelowThresholdGivesZero)
{
    std::vector<double> x = oracle::standardize({1, 2, 3, 4, 5, 6});
    std::vector<double> y{1.0, 0.8, 1.3, 0.9, 1.2, 1.1};
    double xy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) xy += x[i] * y[i];
    const double alpha = std::abs(xy / x.size()) * 1.01;
    const auto c = fit_lasso(single_feature(x, y), tight(alpha, 0.3));
    EXPECT_EQ(c.weights[0], 0.0);
}

TEST(FitLasso, MatchesElasticNetWithUnitRatioBitwise)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = test_support::to_matrix(oracle::random_problem(rng, 10, 2));
        ModelConfig cfg{0.01 * trial, 0.3, 500};
        ModelConfig unit = cfg;
        unit.l1_ratio = 1.0;
        EXPECT_EQ(fit_lasso(m, cfg), fit_elastic_net(m, unit));
    }
}

TEST(FitLasso, ZeroPenaltyIsOls)
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pr = oracle::random_problem(rng, 10, 2);
        const auto [w, b] = oracle::ols(pr.rows, pr.y);
        const auto c = fit_lasso(test_support::to_matrix(pr), tight(0.0, 1.0));
        EXPECT_NEAR(c.weights[0], w[0], 1e-6);
        EXPECT_NEAR(c.weights[1], w[1], 1e-6);
        EXPECT_NEAR(c.intercept, b, 1e-6);
    }
}

TEST(FitElasticNet, ShrinkageIsMonotoneInAlpha)
{
    std::vector<double> x = oracle::standardize({0.3, 1.2, 2.2, 2.9, 4.1, 5.0, 6.2});
    std::vector<double> y{0.1, 0.9, 2.4, 2.8, 4.4, 4.9, 6.1};
    for (double l1 : {0.0, 0.5, 1.0}) {
        double prev = std::numeric_limits<double>::infinity();
        for (double alpha = 0.0; alpha <= 3.0; alpha += 0.1) {
            const double w = std::abs(fit_elastic_net(single_feature(x, y), tight(alpha, l1)).weights[0]);
            EXPECT_LE(w, prev + 1e-12);
            prev = w;
        }
    }
}

TEST(FitElasticNet, BudgetExhaustionStillReturns)
{
    std::mt19937_64 rng(5);
    // Strongly correlated features make cyclic descent slow.
    DesignMatrix m(20, 2);
    std::normal_distribution<double> g(0, 1);
    for (std::size_t i = 0; i < 20; ++i) {
        const double t = g(rng);
        m(i, 0) = t;
        m(i, 1) = t + 1e-3 * g(rng);
        m.y[i] = t + 0.1 * g(rng);
    }
    std::ostringstream warn;
    ModelConfig cfg{0.0, 1.0, 3, 1e-10};
    const auto c = fit_elastic_net(m, cfg, &warn);
    EXPECT_FALSE(c.converged);
    EXPECT_EQ(c.n_sweeps_used, 3);
    EXPECT_NE(warn.str().find("warning"), std::string::npos);
}

TEST(FitElasticNet, RejectsNonFiniteData)
{
    auto m = single_feature({0, 1, 2}, {0, 1, std::nan("")});
    EXPECT_THROW(fit_elastic_net(m, ModelConfig{}), Error);
    m = single_feature({0, INFINITY, 2}, {0, 1, 2});
    EXPECT_THROW(fit_elastic_net(m, ModelConfig{}), Error);
}

TEST(FitElasticNet, DeterministicBitwise)
{
    std::mt19937_64 rng(8);
    const auto m = test_support::to_matrix(oracle::random_problem(rng, 16, 2));
    const ModelConfig cfg{0.003, 0.4, 1000};
    const auto a = fit_elastic_net(m, cfg);
    const auto b = fit_elastic_net(m, cfg);
    ASSERT_EQ(a.weights.size(), b.weights.size());
    EXPECT_EQ(std::memcmp(a.weights.data(), b.weights.data(), a.weights.size() * sizeof(double)), 0);
    EXPECT_EQ(std::memcmp(&a.intercept, &b.intercept, sizeof(double)), 0);
}

TEST(Predict, Examples)
{
    DesignMatrix m(3, 2);
    m(0, 0) = 0.5;
    m(0, 1) = 123.0;
    m(1, 0) = 1.0;
    m(2, 1) = -4.0;
    EXPECT_EQ(predict(Coefficients{{0, 0}, 2.5}, m), (std::vector<double>{2.5, 2.5, 2.5}));
    EXPECT_EQ(predict(Coefficients{{1, 0}, 0.0}, m)[0], 0.5);
    EXPECT_THROW(predict(Coefficients{{1}, 0.0}, m), Error);
}

TEST(Predict, ExactLinearTrainingDataReproduced)
{
    DesignMatrix m(6, 2);
    for (std::size_t i = 0; i < 6; ++i) {
        m(i, 0) = 0.1 * i;
        m(i, 1) = std::sin(static_cast<double>(i));
        m.y[i] = 0.5 + 2.0 * m(i, 0) - 1.5 * m(i, 1);
    }
    const auto c = fit_elastic_net(m, tight(0.0, 0.5));
    const auto p = predict(c, m);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(p[i], m.y[i], 1e-8);
}

TEST(VerifyKkt, ConvergedRandomFitsPass)
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> a(0.0, 0.2), r(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = test_support::to_matrix(oracle::random_problem(rng, 10 + trial % 15, 2));
        ModelConfig cfg{a(rng), r(rng), 10000, 1e-9};
        const auto c = fit_elastic_net(m, cfg);
        ASSERT_TRUE(c.converged);
        const auto k = verify_kkt(c, m, cfg, 1e-6);
        EXPECT_TRUE(k.pass) << "trial " << trial << " residuals " << k.residuals[0] << ", " << k.residuals[1];
    }
}

TEST(VerifyKkt, PerturbedCoefficientFails)
{
    std::mt19937_64 rng(29);
    const auto m = test_support::to_matrix(oracle::random_problem(rng, 12, 2));
    const ModelConfig cfg = tight(0.01, 0.5);
    auto c = fit_elastic_net(m, cfg);
    ASSERT_TRUE(verify_kkt(c, m, cfg, 1e-6).pass);
    c.weights[0] += 0.1;
    const auto k = verify_kkt(c, m, cfg, 1e-6);
    EXPECT_FALSE(k.pass);
    EXPECT_GT(k.residuals[0], 1e-6);
}

TEST(VerifyKkt, OlsGradientVanishes)
{
    std::mt19937_64 rng(31);
    const auto pr = oracle::random_problem(rng, 10, 2);
    const auto [w, b] = oracle::ols(pr.rows, pr.y);
    const auto m = test_support::to_matrix(pr);
    const auto k = verify_kkt(Coefficients{w, b}, m, ModelConfig{0.0, 1.0}, 1e-8);
    EXPECT_TRUE(k.pass);
    for (double v : k.residuals) EXPECT_LE(v, 1e-8);
    EXPECT_LE(k.intercept_residual, 1e-8);
}
