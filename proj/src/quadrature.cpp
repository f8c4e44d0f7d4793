#include "onsager/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "onsager/error.hpp"
#include "onsager/mollifier.hpp"

namespace onsager {

GaussRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ValidationError("gauss_legendre: n must be positive");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = mid - half * x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = mid + half * x;
    rule.weights[static_cast<std::size_t>(i)] = half * w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = half * w;
  }
  return rule;
}

GaussRule gauss_weighted(int n, const std::function<double(double)>& weight, int discretization) {
  if (n < 1) throw ValidationError("gauss_weighted: n must be positive");
  const GaussRule base = gauss_legendre(discretization, 0.0, 1.0);
  const std::size_t m = base.nodes.size();
  std::vector<double> x = base.nodes;
  std::vector<double> w(m);
  double mass = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    w[i] = base.weights[i] * weight(x[i]);
    mass += w[i];
  }
  for (double& v : w) v /= mass;

  // Stieltjes procedure with orthonormal polynomials (total mass is one).
  std::vector<double> alpha(static_cast<std::size_t>(n)), offdiag(static_cast<std::size_t>(n), 0.0);
  std::vector<double> q_prev(m, 0.0), q_cur(m, 1.0), r(m);
  for (int k = 0; k < n; ++k) {
    double a = 0.0;
    for (std::size_t i = 0; i < m; ++i) a += w[i] * x[i] * q_cur[i] * q_cur[i];
    alpha[static_cast<std::size_t>(k)] = a;
    const double b_prev = k == 0 ? 0.0 : offdiag[static_cast<std::size_t>(k - 1)];
    double b2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      r[i] = (x[i] - a) * q_cur[i] - b_prev * q_prev[i];
      b2 += w[i] * r[i] * r[i];
    }
    const double b = std::sqrt(b2);
    offdiag[static_cast<std::size_t>(k)] = b;
    for (std::size_t i = 0; i < m; ++i) {
      q_prev[i] = q_cur[i];
      q_cur[i] = r[i] / b;
    }
  }

  Eigen::VectorXd diag(n), off(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag(k) = alpha[static_cast<std::size_t>(k)];
  for (int k = 1; k < n; ++k) off(k - 1) = offdiag[static_cast<std::size_t>(k - 1)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  GaussRule rule;
  for (int k = 0; k < n; ++k) {
    rule.nodes.push_back(solver.eigenvalues()(k));
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights.push_back(v0 * v0);
  }
  return rule;
}

namespace {

const GaussRule& radial_rule(int dim, int n) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, GaussRule> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(dim, n);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto weight = [dim](double r) { return bump_profile(r) * std::pow(r, dim - 1); };
  return cache.emplace(key, gauss_weighted(n, weight)).first->second;
}

}  // namespace

BallRule mollifier_ball_rule(int dim, double epsilon, QuadratureOrder order) {
  if (dim != 2 && dim != 3) throw ValidationError("mollifier_ball_rule: dim must be 2 or 3");
  if (order.radial < 3 || order.azimuthal < 3 || (dim == 3 && order.polar < 3)) {
    throw ValidationError("mollifier_ball_rule: at least 3 nodes per axis are required");
  }
  if (!(epsilon > 0.0)) throw ValidationError("mollifier_ball_rule: epsilon must be positive");
  BallRule rule;
  rule.dim = dim;
  rule.epsilon = epsilon;
  rule.order = order;
  const GaussRule& radial = radial_rule(dim, order.radial);
  const double dphi = 2.0 * std::numbers::pi / order.azimuthal;
  if (dim == 3) {
    const GaussRule polar = gauss_legendre(order.polar);
    for (std::size_t a = 0; a < radial.nodes.size(); ++a) {
      const double r = epsilon * radial.nodes[a];
      for (std::size_t b = 0; b < polar.nodes.size(); ++b) {
        const double mu = polar.nodes[b];
        const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        for (int c = 0; c < order.azimuthal; ++c) {
          const double phi = dphi * (c + 0.5);
          rule.nodes.push_back({{r * s * std::cos(phi), r * s * std::sin(phi), r * mu},
                                radial.weights[a] * 0.5 * polar.weights[b] / order.azimuthal});
        }
      }
    }
  } else {
    for (std::size_t a = 0; a < radial.nodes.size(); ++a) {
      const double r = epsilon * radial.nodes[a];
      for (int c = 0; c < order.azimuthal; ++c) {
        const double phi = dphi * (c + 0.5);
        rule.nodes.push_back({{r * std::cos(phi), r * std::sin(phi), 0.0}, radial.weights[a] / order.azimuthal});
      }
    }
  }
  return rule;
}

}  // namespace onsager
