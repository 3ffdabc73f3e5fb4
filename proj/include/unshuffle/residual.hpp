#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "unshuffle/instance.hpp"

namespace unshuffle {

/// Residual and Jacobian of the scaled power-sum system at one point.
struct ResidualEval {
  Eigen::VectorXd r;    // length n+1
  Eigen::MatrixXd jac;  // (n+1) x n, empty when not requested
  bool finite = true;
};

/// Default per-equation weights.
///  moment: scale_l = 1 / sqrt(sum_i y_i^(2l)), the 2-norm of the l-th powers.
///  median: scale_l = 1 / max(1, m c^l) with c = median |y_i|.
enum class Scaling { moment, median };

std::string_view to_string(Scaling s);
Scaling parse_scaling(std::string_view text);

/// Compiled evaluator for q_l(x) = p_l(A x) - p_l(y), l = 1..n+1, with
/// per-equation weights. Never expands the polynomials: each evaluation
/// forms the inner products a_i . x once and accumulates their powers.
class ResidualSystem {
 public:
  /// Float view of the instance. Throws UsageError when m < n and
  /// std::domain_error on non-finite data.
  static ResidualSystem compile(const Instance& inst, Scaling scaling = Scaling::moment);
  static ResidualSystem compile(Eigen::MatrixXd a, const Eigen::VectorXd& y, double noise_sigma = 0.0,
                                Scaling scaling = Scaling::moment);

  std::size_t m() const { return static_cast<std::size_t>(a_.rows()); }
  std::size_t n() const { return static_cast<std::size_t>(a_.cols()); }
  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::VectorXd& target() const { return target_; }
  const Eigen::VectorXd& scale() const { return scale_; }
  Scaling scaling() const { return scaling_; }
  /// median |y_i|, the c of the median weights.
  double scale_reference() const { return scale_reference_; }
  double noise_sigma() const { return noise_sigma_; }

  /// Copy with explicit weights; each must be finite and strictly positive.
  ResidualSystem with_scale(const Eigen::VectorXd& scale) const;

  ResidualEval evaluate(const Eigen::VectorXd& x, bool with_jacobian = true) const;
  Eigen::VectorXd residual(const Eigen::VectorXd& x) const { return evaluate(x, false).r; }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const { return evaluate(x, true).jac; }

 private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd target_;
  Eigen::VectorXd scale_;
  Scaling scaling_ = Scaling::moment;
  double scale_reference_ = 1.0;
  double noise_sigma_ = 0.0;
};

}  // namespace unshuffle
