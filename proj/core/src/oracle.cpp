#include "valid/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "valid/errors.hpp"

namespace valid {

namespace {

double sq_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double e : v) acc += e * e;
  return acc;
}

std::vector<double> mean_gradient(const LossModel& loss, std::span<const double> x) {
  std::vector<double> g(loss.dim(), 0.0);
  for (AgentId v = 0; v < loss.agents(); ++v) {
    const auto gv = loss.expected_gradient(v, x);
    for (size_t i = 0; i < g.size(); ++i) g[i] += gv[i];
  }
  for (double& e : g) e /= static_cast<double>(loss.agents());
  return g;
}

double mean_loss(const LossModel& loss, std::span<const double> x) {
  double acc = 0.0;
  for (AgentId v = 0; v < loss.agents(); ++v) acc += loss.expected_loss(v, x);
  return acc / static_cast<double>(loss.agents());
}

Eigen::MatrixXd logistic_hessian(const LossModel& loss, std::span<const double> x) {
  const size_t d = loss.dim();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(d));
  for (AgentId v = 0; v < loss.agents(); ++v) {
    const auto& support = loss.distribution(v).support;
    const double w = 1.0 / (static_cast<double>(support.size()) * static_cast<double>(loss.agents()));
    for (const auto& p : support) {
      Eigen::Map<const Eigen::VectorXd> a(p.features.data(), static_cast<Eigen::Index>(d));
      const double s = 1.0 / (1.0 + std::exp(-p.label * a.dot(xv)));
      h.noalias() += (w * s * (1.0 - s)) * a * a.transpose();
    }
  }
  h.diagonal().array() += loss.l2();
  return h;
}

std::vector<double> newton_minimizer(const LossModel& loss) {
  const size_t d = loss.dim();
  std::vector<double> x(d, 0.0);
  for (int iter = 0; iter < 200; ++iter) {
    const auto g = mean_gradient(loss, x);
    if (std::sqrt(sq_norm(g)) < 1e-10) return x;
    const Eigen::MatrixXd h = logistic_hessian(loss, x);
    Eigen::Map<const Eigen::VectorXd> gv(g.data(), static_cast<Eigen::Index>(d));
    const Eigen::VectorXd step = h.ldlt().solve(gv);
    // Backtracking keeps the iteration monotone far from the optimum.
    const double f0 = mean_loss(loss, x);
    const double slope = gv.dot(step);
    double t = 1.0;
    std::vector<double> next(d);
    for (int ls = 0; ls < 60; ++ls) {
      for (size_t i = 0; i < d; ++i) next[i] = x[i] - t * step[static_cast<Eigen::Index>(i)];
      if (mean_loss(loss, next) <= f0 - 0.25 * t * slope) break;
      t *= 0.5;
    }
    x = next;
  }
  const auto g = mean_gradient(loss, x);
  if (std::sqrt(sq_norm(g)) < 1e-10) return x;
  throw Error("logistic minimizer did not reach gradient norm 1e-10");
}

}  // namespace

std::vector<double> global_minimizer_real(const LossModel& loss) {
  if (!loss.has_oracle()) throw UnsupportedOracle("global_minimizer requires an analytic oracle");
  if (loss.kind() == LossKind::kQuadratic) {
    std::vector<double> x(loss.dim(), 0.0);
    for (AgentId v = 0; v < loss.agents(); ++v) {
      const auto& m = loss.distribution(v).mean;
      for (size_t i = 0; i < x.size(); ++i) x[i] += m[i];
    }
    for (double& e : x) e /= static_cast<double>(loss.agents());
    return x;
  }
  return newton_minimizer(loss);
}

ModelVec global_minimizer(const LossModel& loss) {
  return ModelVec::from_doubles(global_minimizer_real(loss));
}

double heterogeneity(const LossModel& loss, std::span<const double> xstar) {
  if (!loss.has_oracle()) throw UnsupportedOracle("heterogeneity requires an analytic oracle");
  double acc = 0.0;
  for (AgentId v = 0; v < loss.agents(); ++v) acc += sq_norm(loss.expected_gradient(v, xstar));
  return acc / static_cast<double>(loss.agents());
}

double heterogeneity(const LossModel& loss) {
  return heterogeneity(loss, global_minimizer_real(loss));
}

AdmissibilityResult check_admissible(std::span<const double> xhat, const AgentSet& honest,
                                     const LossModel& loss, double delta, double tol) {
  if (honest.empty()) throw InvalidParameter("check_admissible needs a nonempty honest set");
  if (!loss.has_oracle()) throw UnsupportedOracle("check_admissible requires an analytic oracle");
  const size_t n = loss.agents();
  std::vector<bool> in_u(n, false);
  for (AgentId u : honest) {
    if (u >= n) throw InvalidParameter("honest agent id out of range");
    in_u[u] = true;
  }
  const size_t u_count = static_cast<size_t>(std::count(in_u.begin(), in_u.end(), true));
  const size_t rest = n - u_count;

  std::vector<double> sum(loss.dim(), 0.0);
  double honest_sq = 0.0;
  for (AgentId u = 0; u < n; ++u) {
    if (!in_u[u]) continue;
    const auto g = loss.expected_gradient(u, xhat);
    honest_sq += sq_norm(g);
    for (size_t i = 0; i < sum.size(); ++i) sum[i] += g[i];
  }

  AdmissibilityResult result;
  if (rest == 0) {
    result.statistic = honest_sq / static_cast<double>(n);
    result.admissible = std::sqrt(sq_norm(sum)) <= tol && result.statistic <= delta + tol;
    return result;
  }
  std::vector<double> w(sum.size());
  for (size_t i = 0; i < sum.size(); ++i) w[i] = -sum[i] / static_cast<double>(rest);
  result.witness.assign(rest, w);
  result.statistic = (honest_sq + static_cast<double>(rest) * sq_norm(w)) / static_cast<double>(n);
  result.admissible = result.statistic <= delta + tol;
  return result;
}

AdmissibilityResult check_admissible(const ModelVec& xhat, const AgentSet& honest,
                                     const LossModel& loss, double delta, double tol) {
  const auto x = xhat.to_doubles();
  return check_admissible(std::span<const double>(x), honest, loss, delta, tol);
}

}  // namespace valid
