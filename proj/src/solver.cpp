#include "unshuffle/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "unshuffle/errors.hpp"
#include "unshuffle/rng.hpp"

namespace unshuffle {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

constexpr double kLambdaMax = 1e16;
constexpr double kLambdaMin = 1e-15;

// Marquardt damping scaled by the column norms of J: the step solves the
// augmented least-squares problem [J; sqrt(lambda) D] step = [rhs; 0].
class DampedSolve {
 public:
  DampedSolve(const Eigen::MatrixXd& jac, double lambda) : eqs_(jac.rows()) {
    const Eigen::Index n = jac.cols();
    Eigen::VectorXd d = jac.colwise().norm().transpose();
    const double dmax = d.maxCoeff();
    for (Eigen::Index j = 0; j < n; ++j) d(j) = std::max(d(j), 1e-12 * std::max(dmax, 1e-300));
    Eigen::MatrixXd aug(eqs_ + n, n);
    aug.topRows(eqs_) = jac;
    aug.bottomRows(n) = (std::sqrt(lambda) * d).asDiagonal();
    qr_.compute(aug);
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(qr_.rows());
    full.head(eqs_) = rhs;
    return qr_.solve(full);
  }

 private:
  Eigen::Index eqs_;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr_;
};

// Accepted steps over which a start must gain at least kStallGain in
// residual before it is abandoned as stuck at a positive local minimum.
constexpr std::size_t kStallWindow = 30;
constexpr double kStallGain = 1e-3;

StartOutcome descend(const ResidualSystem& sys, const SolverConfig& cfg, Eigen::VectorXd x0) {
  StartOutcome out;
  out.x0 = x0;
  Eigen::VectorXd x = std::move(x0);
  ResidualEval ev = sys.evaluate(x, true);
  if (!ev.finite) {
    out.x = x;
    out.residual_norm = std::numeric_limits<double>::infinity();
    return out;
  }
  double cost = ev.r.norm();
  double lambda = cfg.lm_lambda0;
  std::vector<double> history{cost};
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    DampedSolve damped(ev.jac, lambda);
    Eigen::VectorXd step = damped.solve(-ev.r);
    {
      // Geodesic acceleration: second-order correction along the step from
      // a finite-difference directional second derivative of r, kept only
      // while it stays small relative to the step.
      const double h = 0.1;
      ResidualEval hev = sys.evaluate(x + h * step, false);
      if (hev.finite) {
        Eigen::VectorXd rvv = (2.0 / h) * ((hev.r - ev.r) / h - ev.jac * step);
        Eigen::VectorXd acc = damped.solve(-rvv);
        if (2.0 * acc.norm() <= 0.75 * step.norm()) step += 0.5 * acc;
      }
    }
    Eigen::VectorXd trial = x + step;
    ResidualEval tev = sys.evaluate(trial, false);
    double tcost = tev.finite ? tev.r.norm() : std::numeric_limits<double>::infinity();
    if (tcost < cost) {
      x = std::move(trial);
      ev = sys.evaluate(x, true);
      cost = tcost;
      lambda = std::max(lambda * cfg.lm_down, kLambdaMin);
      if (cost <= cfg.residual_tol && step.norm() <= 1e-13 * std::max(1.0, x.norm())) {
        ++it;
        break;
      }
      history.push_back(cost);
      const std::size_t h = history.size();
      if (cost > cfg.residual_tol && h > kStallWindow &&
          cost > (1.0 - kStallGain) * history[h - 1 - kStallWindow]) {
        ++it;
        break;
      }
    } else {
      lambda *= cfg.lm_up;
      if (lambda > kLambdaMax) break;
    }
  }
  out.x = std::move(x);
  out.residual_norm = cost;
  out.iterations = it;
  out.converged = cost <= cfg.residual_tol;
  return out;
}

Eigen::VectorXd draw_start(std::uint64_t seed, int k, Eigen::Index n, double radius) {
  SplitMix64 rng = derive_stream(seed, "start/" + std::to_string(k));
  Eigen::VectorXd g(n);
  for (Eigen::Index j = 0; j < n; ++j) g(j) = rng.normal();
  double u = rng.uniform01();
  double norm = g.norm();
  if (norm == 0.0) return g;
  return g * (radius * std::pow(u, 1.0 / static_cast<double>(n)) / norm);
}

// Residual level explained by N(0, sigma^2) noise on y, propagated to first
// order through the power sums: var(p_l) ~ sigma^2 sum_i (l t_i^(l-1))^2
// with t = A xi_hat.
double noise_floor(const ResidualSystem& sys, const Eigen::VectorXd& xi) {
  if (sys.noise_sigma() == 0.0) return 0.0;
  const Eigen::VectorXd t = sys.a() * xi;
  const Eigen::Index eqs = static_cast<Eigen::Index>(sys.n()) + 1;
  double total = 0.0;
  Eigen::VectorXd pw = Eigen::VectorXd::Ones(t.size());
  for (Eigen::Index l = 0; l < eqs; ++l) {
    double s = sys.scale()(l) * static_cast<double>(l + 1) * sys.noise_sigma();
    total += s * s * pw.squaredNorm();
    pw = pw.cwiseProduct(t);
  }
  return std::sqrt(total);
}

}  // namespace

void SolverConfig::validate() const {
  if (starts < 1) throw UsageError("starts must be at least 1");
  if (max_iters < 1) throw UsageError("max_iters must be at least 1");
  if (!(residual_tol > 0.0) || !(lm_lambda0 > 0.0) || !(start_radius > 0.0)) {
    throw UsageError("tolerances and factors must be strictly positive");
  }
  if (!(lm_up > 1.0) || !(lm_down > 0.0) || !(lm_down < 1.0)) {
    throw UsageError("damping schedule requires lm_up > 1 > lm_down > 0");
  }
}

std::string_view to_string(Certificate c) {
  switch (c) {
    case Certificate::unique_root: return "unique-root";
    case Certificate::approximate: return "approximate";
    case Certificate::none: return "none";
  }
  return "none";
}

SolveReport solve(const ResidualSystem& sys, const SolverConfig& config) {
  config.validate();
  const auto t0 = Clock::now();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.a());
  const Eigen::VectorXd sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smax > 0.0) || smin < 1e-10 * smax) throw DegenerateInput("degenerate design");

  // ||y|| = sqrt(p_2(y)), which the compiled system already holds.
  const double ynorm = std::sqrt(std::max(0.0, sys.target()(std::min<Eigen::Index>(1, sys.target().size() - 1))));
  const double radius = config.start_radius * std::max(ynorm, 1e-300) / smin;

  SolveReport rep;
  rep.config = config;
  rep.scale = sys.scale();
  rep.starts.reserve(static_cast<std::size_t>(config.starts));
  for (int k = 0; k < config.starts; ++k) {
    rep.starts.push_back(descend(sys, config, draw_start(config.seed, k, sys.a().cols(), radius)));
    if (config.stop_at_root && rep.starts.back().converged) break;
  }

  // Minimum residual, ties to the lowest start index.
  std::size_t best = 0;
  for (std::size_t k = 1; k < rep.starts.size(); ++k) {
    if (rep.starts[k].residual_norm < rep.starts[best].residual_norm) best = k;
  }
  rep.best_start_index = static_cast<int>(best);
  rep.xi_hat = rep.starts[best].x;
  rep.residual_norm = rep.starts[best].residual_norm;
  rep.converged_starts = static_cast<int>(
      std::count_if(rep.starts.begin(), rep.starts.end(), [](const StartOutcome& s) { return s.converged; }));
  rep.noise_floor = noise_floor(sys, rep.xi_hat);
  if (sys.noise_sigma() == 0.0) {
    rep.certificate = rep.residual_norm <= config.residual_tol ? Certificate::unique_root : Certificate::none;
  } else {
    rep.certificate = rep.residual_norm <= std::max(10.0 * rep.noise_floor, config.residual_tol)
                          ? Certificate::approximate
                          : Certificate::none;
  }
  rep.solve_ms = ms_since(t0);
  return rep;
}

namespace {

std::vector<std::size_t> sorted_order(const Eigen::VectorXd& v, const char* side) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v(a) < v(b); });
  if (idx.size() < 2) return idx;
  const double spread = v(idx.back()) - v(idx.front());
  const double tol = 1e-9 * spread;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    if (v(idx[k]) - v(idx[k - 1]) <= tol) {
      throw DegenerateInput(std::string("ambiguous matching: tied entries in ") + side);
    }
  }
  return idx;
}

}  // namespace

Permutation recover_permutation(const Eigen::MatrixXd& a, const Eigen::VectorXd& xi, const Eigen::VectorXd& y) {
  if (a.rows() != y.size() || a.cols() != xi.size()) throw UsageError("shape mismatch in recover_permutation");
  const Eigen::VectorXd b = a * xi;
  const auto ob = sorted_order(b, "A xi");
  const auto oy = sorted_order(y, "y");
  Permutation p;
  p.image.resize(ob.size());
  for (std::size_t k = 0; k < ob.size(); ++k) p.image[ob[k]] = oy[k];
  return p;
}

Eigen::VectorXd refit(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, const Permutation& pi_hat) {
  if (pi_hat.size() != static_cast<std::size_t>(y.size()) || !pi_hat.is_bijection()) {
    throw UsageError("pi_hat is not a permutation of the responses");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < a.cols()) throw DegenerateInput("rank-deficient design in refit");
  return qr.solve(pi_hat.unapply(y));
}

SolveReport solve_instance(const Instance& inst, const SolverConfig& config) {
  const auto t0 = Clock::now();
  ResidualSystem sys = ResidualSystem::compile(inst, config.scaling);
  const double compile_ms = ms_since(t0);

  SolveReport rep = solve(sys, config);
  rep.compile_ms = compile_ms;

  const Eigen::VectorXd y = inst.y_float();
  try {
    rep.pi_hat = recover_permutation(sys.a(), rep.xi_hat, y);
    rep.refit_xi = refit(sys.a(), y, *rep.pi_hat);
  } catch (const DegenerateInput& e) {
    rep.note = e.what();
  }

  if (auto truth = inst.xi_float()) {
    const double denom = std::max(truth->norm(), 1e-300);
    rep.relative_error = (rep.xi_hat - *truth).norm() / denom;
    if (rep.refit_xi) rep.refit_relative_error = (*rep.refit_xi - *truth).norm() / denom;
  }
  if (inst.pi && rep.pi_hat) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < inst.m; ++i) hits += rep.pi_hat->image[i] == inst.pi->image[i];
    rep.permutation_accuracy = static_cast<double>(hits) / static_cast<double>(inst.m);
  }
  return rep;
}

namespace {

nlohmann::ordered_json vec_json(const Eigen::VectorXd& v) {
  auto arr = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

}  // namespace

nlohmann::ordered_json to_json(const SolveReport& rep, bool include_timing) {
  nlohmann::ordered_json j;
  j["certificate"] = std::string(to_string(rep.certificate));
  j["certificate_basis"] = "unique root of the n+1 equation system";
  j["xi_hat"] = vec_json(rep.xi_hat);
  j["residual_norm"] = rep.residual_norm;
  j["noise_floor"] = rep.noise_floor;
  j["starts_run"] = rep.starts.size();
  j["converged_starts"] = rep.converged_starts;
  j["best_start_index"] = rep.best_start_index;
  if (rep.pi_hat) j["pi_hat"] = rep.pi_hat->image;
  if (rep.refit_xi) j["refit_xi"] = vec_json(*rep.refit_xi);
  if (rep.relative_error) j["relative_error"] = *rep.relative_error;
  if (rep.refit_relative_error) j["refit_relative_error"] = *rep.refit_relative_error;
  if (rep.permutation_accuracy) j["permutation_accuracy"] = *rep.permutation_accuracy;
  if (rep.note) j["note"] = *rep.note;
  if (include_timing) {
    j["compile_ms"] = rep.compile_ms;
    j["wall_time_ms"] = rep.solve_ms;
  }
  nlohmann::ordered_json cfg;
  cfg["starts"] = rep.config.starts;
  cfg["max_iters"] = rep.config.max_iters;
  cfg["residual_tol"] = rep.config.residual_tol;
  cfg["lm_lambda0"] = rep.config.lm_lambda0;
  cfg["lm_up"] = rep.config.lm_up;
  cfg["lm_down"] = rep.config.lm_down;
  cfg["start_radius"] = rep.config.start_radius;
  cfg["seed"] = rep.config.seed;
  cfg["scaling"] = std::string(to_string(rep.config.scaling));
  cfg["stop_at_root"] = rep.config.stop_at_root;
  cfg["scale"] = vec_json(rep.scale);
  cfg["snr_convention"] = "10 log10((||A xi||^2 / m) / sigma^2)";
  j["config"] = std::move(cfg);
  return j;
}

}  // namespace unshuffle
