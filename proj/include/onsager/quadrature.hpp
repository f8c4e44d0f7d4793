#pragma once

#include <array>
#include <functional>
#include <vector>

namespace onsager {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss–Legendre rule on [a, b].
GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// n-point Gauss rule for ∫_0^1 w(r) f(r) dr with a positive weight, built by
/// the discretized Stieltjes procedure and the Golub–Welsch eigenproblem.
/// Weights are normalized to sum to one.
GaussRule gauss_weighted(int n, const std::function<double(double)>& weight, int discretization = 2000);

/// Node counts of the radial–angular product rule. For 2-D (disk) rules the
/// polar count is ignored.
struct QuadratureOrder {
  int radial = 7;
  int polar = 7;
  int azimuthal = 7;

  int node_count(int dim) const { return dim == 3 ? radial * polar * azimuthal : radial * azimuthal; }
};

struct BallNode {
  std::array<double, 3> y;
  double weight;
};

/// Product rule for ∫_{B(0,ε)} ρ_ε(y) f(y) dy with the mollifier density
/// absorbed into the weights (they sum to one). dim = 3 gives a ball in R³,
/// dim = 2 a disk in the (y1, y2) plane.
struct BallRule {
  int dim = 3;
  double epsilon = 0.0;
  QuadratureOrder order;
  std::vector<BallNode> nodes;
};

/// Throws ValidationError when any node count is below 3.
BallRule mollifier_ball_rule(int dim, double epsilon, QuadratureOrder order);

}  // namespace onsager
