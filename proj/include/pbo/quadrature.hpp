#ifndef PBO_QUADRATURE_HPP
#define PBO_QUADRATURE_HPP

#include "pbo/types.hpp"

#include <algorithm>
#include <cmath>

namespace pbo {

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// log sigma(z) without overflow for large |z|.
inline double log_sigmoid(double z) {
  return z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

struct QuadratureRule {
  Vector nodes;
  Vector weights;
};

/// Gauss-Hermite rule for weight exp(-x^2), built by Golub-Welsch.
const QuadratureRule& gauss_hermite(int n);
/// Gauss-Laguerre rule for weight exp(-x) on [0, inf).
const QuadratureRule& gauss_laguerre(int n);

inline constexpr int kQuadratureNodes = 20;

/// First two moments of sigma(f) for f ~ N(mean, var).
struct SigmoidMoments {
  double mean = 0.5;    // E[sigma(f)]
  double second = 0.25; // E[sigma(f)^2]

  double variance() const { return std::max(0.0, second - mean * mean); }
};

/// Narrow Gaussians (sd <= kSplitThreshold) use 20-node Gauss-Hermite.
/// Wide ones split sigma into a Heaviside step, integrated exactly through
/// the normal CDF, plus exponentially decaying tails integrated with
/// 20-node Gauss-Laguerre on each half-line.
SigmoidMoments sigmoid_gaussian_moments(double mean, double var);

inline constexpr double kSplitThreshold = 1.35;

}  // namespace pbo

#endif  // PBO_QUADRATURE_HPP
