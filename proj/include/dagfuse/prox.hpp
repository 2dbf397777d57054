#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Core>

#include "dagfuse/error.hpp"

namespace dagfuse {

template <typename Scalar>
using Signal = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Edge vectors (one entry per edge id) share the representation.
template <typename Scalar>
using EdgeVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Weights of the two edge penalties: lambda_fused * |d| + lambda_ni * d_+,
/// where d = beta_source - beta_target.
template <typename Scalar = double>
struct PenaltyConfig {
  Scalar lambda_fused{0};
  Scalar lambda_ni{0};

  bool is_zero() const { return lambda_fused == Scalar(0) && lambda_ni == Scalar(0); }

  void validate() const {
    using std::isfinite;
    if (!(lambda_fused >= Scalar(0)) || !(lambda_ni >= Scalar(0)) ||
        !isfinite(lambda_fused) || !isfinite(lambda_ni))
      throw PreconditionViolation("penalties must be finite and nonnegative");
  }
};

/// Proximal map of z -> lambda_fused*|z| + lambda_ni*z_+ with step t: the
/// unique minimizer of (z - x)^2 / (2t) + lambda_fused*|z| + lambda_ni*z_+.
/// An asymmetric soft threshold with dead zone [-t*lf, t*(lf + lni)].
template <typename Scalar>
Scalar prox_edge_penalty(Scalar x, Scalar t, const PenaltyConfig<Scalar>& pen) {
  const Scalar upper = t * (pen.lambda_fused + pen.lambda_ni);
  const Scalar lower = -t * pen.lambda_fused;
  if (x > upper) return x - upper;
  if (x < lower) return x - lower;
  return Scalar(0);
}

/// lambda_fused*|d| + lambda_ni*d_+ for a single edge difference.
template <typename Scalar>
Scalar edge_penalty(Scalar d, const PenaltyConfig<Scalar>& pen) {
  using std::abs;
  return pen.lambda_fused * abs(d) + pen.lambda_ni * (d > Scalar(0) ? d : Scalar(0));
}

}  // namespace dagfuse
