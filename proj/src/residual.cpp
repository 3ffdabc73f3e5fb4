#include "unshuffle/residual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "unshuffle/errors.hpp"

namespace unshuffle {

std::string_view to_string(Scaling s) { return s == Scaling::moment ? "moment" : "median"; }

Scaling parse_scaling(std::string_view text) {
  if (text == "moment") return Scaling::moment;
  if (text == "median") return Scaling::median;
  throw UsageError("scaling must be moment or median");
}

ResidualSystem ResidualSystem::compile(const Instance& inst, Scaling scaling) {
  if (inst.n < 1 || inst.m < inst.n) throw UsageError("m ≥ n required");
  return compile(inst.a_float(), inst.y_float(), inst.sigma, scaling);
}

ResidualSystem ResidualSystem::compile(Eigen::MatrixXd a, const Eigen::VectorXd& y, double noise_sigma,
                                       Scaling scaling) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (n < 1 || m < n) throw UsageError("m ≥ n required");
  if (y.size() != m) throw UsageError("y length does not match the row count of A");
  if (!a.allFinite() || !y.allFinite()) throw std::domain_error("non-finite entries in A or y");

  ResidualSystem sys;
  sys.a_ = std::move(a);
  sys.noise_sigma_ = noise_sigma;

  // Power sums over ascending y, so the targets do not depend on the order
  // in which the responses were supplied.
  std::vector<double> sorted(y.data(), y.data() + m);
  std::sort(sorted.begin(), sorted.end());
  sys.target_ = Eigen::VectorXd::Zero(n + 1);
  for (double v : sorted) {
    double p = 1.0;
    for (Eigen::Index l = 0; l <= n; ++l) {
      p *= v;
      sys.target_(l) += p;
    }
  }

  std::vector<double> mags(m);
  for (Eigen::Index i = 0; i < m; ++i) mags[i] = std::abs(sorted[i]);
  std::nth_element(mags.begin(), mags.begin() + m / 2, mags.end());
  double c = mags[m / 2];
  if (m % 2 == 0) {
    double lower = *std::max_element(mags.begin(), mags.begin() + m / 2);
    c = 0.5 * (c + lower);
  }
  sys.scale_reference_ = c;
  sys.scaling_ = scaling;
  sys.scale_ = Eigen::VectorXd(n + 1);
  if (scaling == Scaling::median) {
    double cp = 1.0;
    for (Eigen::Index l = 0; l <= n; ++l) {
      cp *= c;
      double denom = std::max(1.0, static_cast<double>(m) * cp);
      sys.scale_(l) = std::isfinite(denom) ? 1.0 / denom : 1.0;
    }
  } else {
    Eigen::VectorXd sq = Eigen::VectorXd::Zero(n + 1);
    for (double v : sorted) {
      const double v2 = v * v;
      double p = 1.0;
      for (Eigen::Index l = 0; l <= n; ++l) {
        p *= v2;
        sq(l) += p;
      }
    }
    for (Eigen::Index l = 0; l <= n; ++l) {
      const double denom = std::sqrt(sq(l));
      sys.scale_(l) = denom > 0.0 && std::isfinite(denom) ? 1.0 / denom : 1.0;
    }
  }
  return sys;
}

ResidualSystem ResidualSystem::with_scale(const Eigen::VectorXd& scale) const {
  if (scale.size() != target_.size()) throw UsageError("scale length must be n+1");
  for (Eigen::Index i = 0; i < scale.size(); ++i) {
    if (!(scale(i) > 0.0) || !std::isfinite(scale(i))) throw UsageError("scale entries must be finite and positive");
  }
  ResidualSystem sys = *this;
  sys.scale_ = scale;
  return sys;
}

ResidualEval ResidualSystem::evaluate(const Eigen::VectorXd& x, bool with_jacobian) const {
  const Eigen::Index n = a_.cols();
  if (x.size() != n) throw UsageError("point length does not match n");
  const Eigen::Index eqs = n + 1;

  const Eigen::VectorXd t = a_ * x;
  // powers.col(k) = t^k for k = 0..n; the residual needs t^1..t^(n+1) and
  // the Jacobian t^0..t^n.
  Eigen::MatrixXd powers(t.size(), eqs);
  powers.col(0).setOnes();
  for (Eigen::Index k = 1; k < eqs; ++k) powers.col(k) = powers.col(k - 1).cwiseProduct(t);

  ResidualEval out;
  out.r = powers.transpose() * t;
  out.r = (out.r - target_).cwiseProduct(scale_);
  if (with_jacobian) {
    out.jac = powers.transpose() * a_;
    for (Eigen::Index l = 0; l < eqs; ++l) out.jac.row(l) *= scale_(l) * static_cast<double>(l + 1);
  }
  out.finite = out.r.allFinite() && (!with_jacobian || out.jac.allFinite());
  return out;
}

}  // namespace unshuffle
