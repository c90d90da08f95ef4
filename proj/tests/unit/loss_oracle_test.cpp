#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "valid/errors.hpp"
#include "valid/loss.hpp"
#include "valid/oracle.hpp"

namespace valid {
namespace {

using Mat = std::vector<std::vector<double>>;

TEST(Minimizer, QuadraticIsMeanOfMeans) {
  EXPECT_EQ(global_minimizer_real(LossModel::quadratic({{0.0}, {2.0}}, 1.0)), std::vector<double>{1.0});
  EXPECT_EQ(global_minimizer_real(LossModel::quadratic({{-3.5}}, 1.0)), std::vector<double>{-3.5});
  const auto x = global_minimizer_real(LossModel::quadratic({{0, 0}, {3, 0}, {0, 3}}, 1.0));
  EXPECT_DOUBLE_EQ(x[0], 1.0);
  EXPECT_DOUBLE_EQ(x[1], 1.0);
  EXPECT_EQ(global_minimizer(LossModel::quadratic({{0.0}, {2.0}}, 1.0))[0], Fixed::one());
}

TEST(Heterogeneity, QuadraticExamples) {
  EXPECT_DOUBLE_EQ(heterogeneity(LossModel::quadratic({{0.0}, {2.0}}, 1.0)), 1.0);
  EXPECT_DOUBLE_EQ(heterogeneity(LossModel::quadratic({{0, 0}, {3, 0}, {0, 3}}, 1.0)), 4.0);
  EXPECT_DOUBLE_EQ(heterogeneity(LossModel::quadratic({{1, 2}, {1, 2}, {1, 2}}, 0.3)), 0.0);
}

TEST(Admissible, TwoAgentExamples) {
  const LossModel loss = LossModel::quadratic({{0.0}, {5.0}}, 1.0);
  const std::vector<double> half{0.5};
  const auto ok = check_admissible(half, {0}, loss, 1.0, 0.0);
  EXPECT_TRUE(ok.admissible);
  ASSERT_EQ(ok.witness.size(), 1u);
  EXPECT_DOUBLE_EQ(ok.witness[0][0], -0.5);
  EXPECT_DOUBLE_EQ(ok.statistic, 0.25);

  const std::vector<double> two{2.0};
  const auto bad = check_admissible(two, {0}, loss, 1.0, 0.0);
  EXPECT_FALSE(bad.admissible);
  EXPECT_DOUBLE_EQ(bad.statistic, 4.0);
}

TEST(Admissible, MinimizerWithFullHonestSet) {
  const LossModel loss = LossModel::quadratic({{0, 0}, {3, 0}, {0, 3}}, 1.0);
  const auto xs = global_minimizer_real(loss);
  EXPECT_TRUE(check_admissible(xs, {0, 1, 2}, loss, 4.0, 1e-12).admissible);
  EXPECT_FALSE(check_admissible(xs, {0, 1, 2}, loss, 3.9, 1e-12).admissible);
}

TEST(Admissible, WitnessIsOptimalAgainstGridSearch) {
  // U = {0}, two free agents in d = 1: any split g1 + g2 = -g0 is feasible.
  const LossModel loss = LossModel::quadratic({{0.0}, {0.0}, {0.0}}, 1.0);
  const std::vector<double> xhat{1.2};
  const auto res = check_admissible(xhat, {0}, loss, 10.0, 0.0);
  double best = 1e300;
  for (int k = -3000; k <= 3000; ++k) {
    const double g1 = k * 0.001;
    const double g2 = -1.2 - g1;
    best = std::min(best, (1.2 * 1.2 + g1 * g1 + g2 * g2) / 3.0);
  }
  EXPECT_NEAR(res.statistic, best, 1e-6);
  EXPECT_LE(res.statistic, best + 1e-12);
}

TEST(SampleGradient, NoiselessQuadraticIsExact) {
  const LossModel loss = LossModel::quadratic({{0.0, 0.0}}, 0.0);
  CounterRng rng(1);
  const std::vector<double> x{1.0, 0.0};
  EXPECT_EQ(loss.sample_gradient(0, x, rng, 1), (std::vector<double>{1.0, 0.0}));
  const LossModel at_x = LossModel::quadratic({{1.0, 0.0}}, 0.0);
  EXPECT_EQ(at_x.sample_gradient(0, x, rng, 7), (std::vector<double>{0.0, 0.0}));
}

TEST(SampleGradient, MonteCarloMatchesExpectation) {
  const double sigma = 0.8;
  const size_t batch = 4;
  const LossModel loss = LossModel::quadratic({{1.0, -2.0}}, sigma);
  const std::vector<double> x{0.5, 0.5};
  const auto expect = loss.expected_gradient(0, x);
  EXPECT_DOUBLE_EQ(expect[0], -0.5);
  EXPECT_DOUBLE_EQ(expect[1], 2.5);
  const int n = 20000;
  std::vector<double> mean(2, 0.0);
  double var0 = 0.0;
  for (int i = 0; i < n; ++i) {
    CounterRng rng(42, 0, static_cast<uint64_t>(i), StreamPurpose::kMinibatch);
    const auto g = loss.sample_gradient(0, x, rng, batch);
    mean[0] += g[0];
    mean[1] += g[1];
    var0 += (g[0] - expect[0]) * (g[0] - expect[0]);
  }
  const double se = sigma / std::sqrt(static_cast<double>(batch) * n);
  EXPECT_NEAR(mean[0] / n, expect[0], 5 * se);
  EXPECT_NEAR(mean[1] / n, expect[1], 5 * se);
  EXPECT_NEAR(var0 / n, sigma * sigma / batch, 0.01);
}

TEST(DataSource, SameRoundSameBatch) {
  auto loss = std::make_shared<const LossModel>(LossModel::quadratic({{0.0}, {1.0}}, 1.0));
  const AgentDataSource a(1, loss, 5, 9);
  const AgentDataSource b(1, loss, 5, 9);
  const ModelVec x = ModelVec::from_doubles(std::vector<double>{0.25});
  EXPECT_EQ(a.stochastic_gradient(x, 3), b.stochastic_gradient(x, 3));
  EXPECT_NE(a.stochastic_gradient(x, 3), a.stochastic_gradient(x, 4));
  EXPECT_THROW(a.stochastic_gradient(x, 0), InvalidParameter);
}

// Plain gradient descent on the mean expected loss, used as a reference for
// the Newton-based logistic minimizer.
std::vector<double> descend(const LossModel& loss, int iters, double step) {
  std::vector<double> x(loss.dim(), 0.0);
  for (int k = 0; k < iters; ++k) {
    std::vector<double> g(loss.dim(), 0.0);
    for (AgentId v = 0; v < loss.agents(); ++v) {
      const auto gv = loss.expected_gradient(v, x);
      for (size_t i = 0; i < g.size(); ++i) g[i] += gv[i] / static_cast<double>(loss.agents());
    }
    for (size_t i = 0; i < x.size(); ++i) x[i] -= step * g[i];
  }
  return x;
}

TEST(Logistic, MinimizerAgreesWithGradientDescent) {
  const std::vector<double> truth{1.0, -0.5};
  const LossModel loss = make_synthetic_logistic({{1.0, 0.0}, {-1.0, 0.5}, {0.0, 1.0}}, truth, 30,
                                                 1.0, 0.1, 4);
  const auto xs = global_minimizer_real(loss);
  const auto ref = descend(loss, 20000, 1.0);
  ASSERT_EQ(xs.size(), 2u);
  EXPECT_NEAR(xs[0], ref[0], 1e-8);
  EXPECT_NEAR(xs[1], ref[1], 1e-8);
  EXPECT_GE(heterogeneity(loss, xs), 0.0);
}

TEST(Logistic, RequiresRegularization) {
  EXPECT_THROW(LossModel::logistic({{{{1.0}, 1.0}}}, 0.0), InvalidParameter);
}

TEST(Custom, HasNoOracle) {
  const LossModel loss = LossModel::custom(
      2, 1, 1.0, 1.0, 0.0,
      [](AgentId, std::span<const double> x, CounterRng&, size_t) { return std::vector<double>(x.begin(), x.end()); });
  EXPECT_FALSE(loss.has_oracle());
  EXPECT_THROW(global_minimizer_real(loss), UnsupportedOracle);
  EXPECT_THROW(heterogeneity(loss), UnsupportedOracle);
  CounterRng rng(1);
  const std::vector<double> x{3.0};
  EXPECT_EQ(loss.sample_gradient(0, x, rng, 1), x);
}

TEST(Quadratic, RejectsBadInput) {
  EXPECT_THROW(LossModel::quadratic({}, 1.0), InvalidParameter);
  EXPECT_THROW(LossModel::quadratic({{0.0}, {0.0, 1.0}}, 1.0), InvalidParameter);
  EXPECT_THROW(LossModel::quadratic({{0.0}}, -1.0), InvalidParameter);
}

}  // namespace
}  // namespace valid
