#pragma once

#include "ptgne/game.hpp"

namespace ptgne {

/// Centralized primal-dual point z = col(x, lambda, mu). No sign restriction
/// on any block.
struct AugmentedState {
  Vec x;
  Vec lambda;
  Vec mu;

  static AugmentedState zeros(const Dimensions& d);
  static AugmentedState from_flat(const Dimensions& d, const Vec& flat);
  Vec flat() const;
  void check(const Dimensions& d) const;
};

/// S(z) split into stationarity, equality residual and FB residual blocks.
struct StationarityValue {
  Vec s1;  // F(x) + dg(x)^T lambda + A^T mu
  Vec s2;  // A x - b
  Vec s3;  // Phi_eps(lambda_j, -g_j(x))
  double olf = 0.0;

  double norm() const;
  /// Stacked in the Jacobian's row order: col(s1, s2, s3).
  Vec flat() const;
};

inline constexpr double kDefaultSmoothing = 1e-8;

struct SmoothingParams {
  double epsilon = kDefaultSmoothing;
  double epsilon_bar = 1e-10;
  void validate() const;
};

/// Smoothed Fischer-Burmeister function sqrt(a^2 + b^2 + eps^2) - (a + b).
/// Zero iff a >= 0, b >= 0 and ab = eps^2 / 2.
double fb(double a, double b, double eps);

struct FbPartials {
  double da;
  double db;
};

/// Both partials lie strictly in (-2, 0) for eps > 0.
FbPartials fb_partials(double a, double b, double eps);

StationarityValue stationarity(const GameProblem& p, const AugmentedState& z, double eps);

/// Dense (n+p+m)^2 Jacobian of S. Rows follow col(s1, s2, s3), columns
/// follow col(x, lambda, mu):
///   [[H_L, dg^T, A^T], [A, 0, 0], [-D_b dg, D_mu, 0]].
Mat stationarity_jacobian(const GameProblem& p, const AugmentedState& z, double eps);

/// grad V = dS^T S, with block views in the (x, lambda, mu) column order.
struct OlfGradient {
  Vec full;
  int n = 0;
  int p = 0;
  int m = 0;

  auto x() const { return full.head(n); }
  auto lambda() const { return full.segment(n, p); }
  auto mu() const { return full.tail(m); }
};

OlfGradient olf_gradient(const GameProblem& p, const AugmentedState& z, double eps);

/// S, dS and grad V from one set of problem evaluations.
struct KktPoint {
  StationarityValue s;
  Mat jacobian;
  OlfGradient gradient;
};

KktPoint evaluate_kkt(const GameProblem& p, const AugmentedState& z, double eps);

/// Sublevel threshold below which {V <= c} is compact: +inf for a full-row-rank
/// affine bundle (or no inequalities), otherwise 0.5 * min_j (min_x g_j)^2.
/// Throws UnsupportedConfiguration for nonlinear constraints lacking known_min.
double compactness_threshold(const GameProblem& p);

}  // namespace ptgne
