#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "unshuffle/instance.hpp"
#include "unshuffle/residual.hpp"

namespace unshuffle {

struct SolverConfig {
  int starts = 16;
  int max_iters = 200;
  double residual_tol = 1e-10;
  double lm_lambda0 = 1e-3;
  double lm_up = 10.0;
  double lm_down = 0.1;
  double start_radius = 1.0;
  std::uint64_t seed = 0;
  Scaling scaling = Scaling::moment;
  /// Stop after the first start that reaches residual_tol; later starts are
  /// not run, so the report covers a prefix of the start sequence.
  bool stop_at_root = false;

  /// Throws UsageError unless all counts/tolerances are positive and
  /// lm_up > 1 > lm_down > 0.
  void validate() const;
};

enum class Certificate { unique_root, approximate, none };

std::string_view to_string(Certificate c);

struct StartOutcome {
  Eigen::VectorXd x0;
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct SolveReport {
  Eigen::VectorXd xi_hat;
  double residual_norm = 0.0;
  Certificate certificate = Certificate::none;
  /// Predicted residual level caused by noise at xi_hat (0 when noiseless).
  double noise_floor = 0.0;
  int converged_starts = 0;
  int best_start_index = 0;
  std::vector<StartOutcome> starts;

  std::optional<Permutation> pi_hat;
  std::optional<Eigen::VectorXd> refit_xi;
  std::optional<double> relative_error;        // xi_hat vs ground truth
  std::optional<double> refit_relative_error;  // refit_xi vs ground truth
  std::optional<double> permutation_accuracy;  // fraction of pi_hat matching pi
  std::optional<std::string> note;

  double compile_ms = 0.0;
  double solve_ms = 0.0;
  SolverConfig config;
  Eigen::VectorXd scale;
};

/// Multistart Levenberg-Marquardt on the overdetermined system. Start k
/// begins at a point drawn from the stream derived from (seed, "start/k"),
/// uniform in the ball of radius start_radius * ||y|| / sigma_min(A).
///
/// Throws DegenerateInput("degenerate design") when sigma_min(A) is below
/// 1e-10 sigma_max(A).
SolveReport solve(const ResidualSystem& sys, const SolverConfig& config);

/// Rank matching: pi_hat[i] = index in y of the value paired with (A xi)_i,
/// so that (A xi)_i ~ y[pi_hat[i]]. Throws DegenerateInput("ambiguous
/// matching") if either side has two entries within 1e-9 of its spread.
Permutation recover_permutation(const Eigen::MatrixXd& a, const Eigen::VectorXd& xi,
                                const Eigen::VectorXd& y);

/// Least-squares solution of A x = pi_hat^{-1}(y) by column-pivoted QR.
Eigen::VectorXd refit(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, const Permutation& pi_hat);

/// compile -> solve -> recover_permutation -> refit, with ground-truth
/// metrics filled in when the instance carries xi_star / pi. Matching
/// failures are recorded in `note` rather than thrown.
SolveReport solve_instance(const Instance& inst, const SolverConfig& config);

/// Report as JSON. Timing fields are only included when requested so that
/// repeated runs produce identical output.
nlohmann::ordered_json to_json(const SolveReport& report, bool include_timing = false);

}  // namespace unshuffle
