#include "unshuffle/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "unshuffle/errors.hpp"
#include "unshuffle/exactalg.hpp"
#include "unshuffle/instance.hpp"
#include "unshuffle/macaulay.hpp"
#include "unshuffle/rng.hpp"
#include "unshuffle/solver.hpp"
#include "unshuffle/symfun.hpp"

namespace unshuffle {

namespace {

using Clock = std::chrono::steady_clock;

struct GenFlags {
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string domain = "exact";
  std::optional<double> sigma;
  std::optional<double> snr_db;
  std::string out;
};

struct SolveFlags {
  std::string in;
  std::string out;
  bool timing = false;
  SolverConfig config;
};

struct VerifyFlags {
  std::string mode;
  std::string in;
  std::string matrix;
  std::string out;
  bool allow_large = false;
};

struct BenchFlags {
  std::string m_list;
  std::string n_list;
  int trials = 1;
  std::optional<double> snr_db;
  std::uint64_t seed = 0;
  std::string out;
  SolverConfig config;
};

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg) {
  cmd->add_option("--starts", cfg.starts, "independent LM starts")->capture_default_str();
  cmd->add_option("--max-iters", cfg.max_iters, "iterations per start")->capture_default_str();
  cmd->add_option("--tol", cfg.residual_tol, "scaled residual tolerance")->capture_default_str();
  cmd->add_option("--lambda0", cfg.lm_lambda0, "initial damping")->capture_default_str();
  cmd->add_option("--lm-up", cfg.lm_up, "damping increase factor")->capture_default_str();
  cmd->add_option("--lm-down", cfg.lm_down, "damping decrease factor")->capture_default_str();
  cmd->add_option("--radius", cfg.start_radius, "start radius multiplier")->capture_default_str();
  cmd->add_option_function<std::string>(
         "--scaling", [&cfg](const std::string& v) { cfg.scaling = parse_scaling(v); }, "moment | median")
      ->check(CLI::IsMember({"moment", "median"}));
  cmd->add_flag("--stop-at-root", cfg.stop_at_root, "stop after the first converged start");
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::size_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      unsigned long v = std::stoul(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError(std::string("malformed ") + what + ": " + text);
    }
  }
  if (out.empty()) throw UsageError(std::string(what) + " must not be empty");
  return out;
}

QMatrix parse_matrix(const std::string& text) {
  std::vector<std::vector<Rational>> rows;
  std::stringstream rs(text);
  std::string row;
  while (std::getline(rs, row, ';')) {
    std::stringstream cs(row);
    std::string cell;
    std::vector<Rational> r;
    while (cs >> cell) {
      std::string c = cell;
      if (!c.empty() && c.back() == ',') c.pop_back();
      if (!c.empty()) r.push_back(parse_rational(c));
    }
    if (!r.empty()) rows.push_back(std::move(r));
  }
  if (rows.empty()) throw UsageError("empty matrix");
  return QMatrix::from_rows(rows);
}

int cmd_gen(const GenFlags& f, std::ostream& out) {
  if (f.sigma && f.snr_db) throw UsageError("--sigma and --snr-db are mutually exclusive");
  if (f.n < 1 || f.m < f.n) throw UsageError("m ≥ n required");
  const Domain domain = parse_domain(f.domain);
  if (domain == Domain::exact && ((f.sigma && *f.sigma > 0.0) || f.snr_db)) {
    throw UsageError("noise requires --domain float");
  }
  Instance inst = generate(f.m, f.n, f.seed, domain, 0.0);
  if (f.snr_db) {
    inst = with_noise(inst, snr_to_sigma(inst, *f.snr_db));
  } else if (f.sigma) {
    inst = with_noise(inst, *f.sigma);
  }
  write_text(f.out, serialize(inst), out);
  return kExitConfirmed;
}

int cmd_solve(const SolveFlags& f, std::ostream& out) {
  Instance inst = load_instance(f.in);
  if (auto v = validate(inst); !v.empty() && !(v.size() == 1 && v.front() == "y is not pi(A xi_star)")) {
    throw UsageError("invalid instance: " + v.front());
  }
  SolveReport rep = solve_instance(inst, f.config);
  write_text(f.out, to_json(rep, f.timing).dump(2) + "\n", out);
  return rep.certificate == Certificate::none ? kExitNotConfirmed : kExitConfirmed;
}

Instance require_instance(const VerifyFlags& f) {
  if (f.in.empty()) throw UsageError("--in <instance.json> required for this mode");
  return load_instance(f.in);
}

QMatrix require_matrix(const VerifyFlags& f, std::optional<Instance>& inst) {
  if (!f.matrix.empty()) return parse_matrix(f.matrix);
  inst = require_instance(f);
  return inst->a;
}

int cmd_verify(const VerifyFlags& f, std::ostream& out) {
  nlohmann::ordered_json rec;
  rec["mode"] = f.mode;
  bool confirmed = false;
  const auto t0 = Clock::now();
  std::optional<Instance> inst;

  auto stamp = [&](const Instance& i) {
    rec["seed"] = i.seed;
    rec["n"] = i.n;
    rec["m"] = i.m;
  };

  if (f.mode == "square") {
    inst = require_instance(f);
    stamp(*inst);
    auto dim = verify_square_count(*inst, f.allow_large);
    unsigned long expected = 1;
    for (std::size_t k = 2; k <= inst->n; ++k) expected *= k;
    if (dim) rec["quotient_dim"] = *dim; else rec["quotient_dim"] = "infinite";
    rec["expected"] = expected;
    confirmed = dim && *dim == expected;
  } else if (f.mode == "unique") {
    inst = require_instance(f);
    stamp(*inst);
    try {
      UniqueRootResult res = verify_unique_root(*inst, f.allow_large);
      rec["quotient_dim"] = res.quotient_dim;
      if (res.status == UniqueRootResult::Status::unique_root) {
        auto root = nlohmann::ordered_json::array();
        for (const auto& c : res.root) root.push_back(to_string(c));
        rec["unique_root"] = std::move(root);
        confirmed = true;
      } else {
        rec["unique_root"] = nullptr;
        rec["status"] = "no solution";
      }
      if (res.multiplicity_note) rec["multiplicity_note"] = *res.multiplicity_note; else rec["multiplicity_note"] = nullptr;
    } catch (const TheoremViolation& e) {
      rec["unique_root"] = nullptr;
      rec["error"] = e.what();
    }
  } else if (f.mode == "regseq") {
    QMatrix a = require_matrix(f, inst);
    if (inst) stamp(*inst);
    rec["n"] = a.cols();
    rec["m"] = a.rows();
    confirmed = regular_sequence_test(a);
    rec["regular_sequence"] = confirmed;
  } else if (f.mode == "eliminant") {
    inst = require_instance(f);
    stamp(*inst);
    if (inst->domain != Domain::exact) throw UsageError("eliminant needs an exact instance");
    std::vector<Rational> r_fixed;
    for (std::size_t l = 1; l <= inst->n; ++l) r_fixed.push_back(power_sum<Rational>(static_cast<int>(l), inst->y));
    const Rational target = power_sum<Rational>(static_cast<int>(inst->n + 1), inst->y);
    EliminantOptions opts;
    opts.allow_large = f.allow_large;
    EliminantResult res = eliminant(inst->a, r_fixed, opts);
    rec["eliminant"] = to_json(res);
    const bool vanishes = sgn(res.poly.eval(target)) == 0;
    rec["vanishes_at_target"] = vanishes;
    confirmed = static_cast<std::size_t>(res.poly.degree()) == res.expected_degree && vanishes;
  } else {
    throw UsageError("--mode must be square, unique, regseq or eliminant");
  }
  rec["confirmed"] = confirmed;
  rec["wall_time_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  write_text(f.out, rec.dump(2) + "\n", out);
  return confirmed ? kExitConfirmed : kExitNotConfirmed;
}

double median(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return std::isnan(x); }), v.end());
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

int cmd_bench(const BenchFlags& f, std::ostream& out, std::ostream& err) {
  if (f.trials < 0) throw UsageError("--trials must be non-negative");
  f.config.validate();
  const auto ms = parse_list(f.m_list, "--m-list");
  const auto ns = parse_list(f.n_list, "--n-list");
  for (auto m : ms) {
    for (auto n : ns) {
      if (n < 1 || m < n) throw UsageError("m ≥ n required for every grid point");
    }
  }

  std::string csv = std::string(kBenchCsvHeader) + "\n";
  for (auto m : ms) {
    for (auto n : ns) {
      std::vector<double> times, errs, accs;
      for (int t = 0; t < f.trials; ++t) {
        const std::uint64_t seed =
            derive_stream(f.seed, "bench/" + std::to_string(m) + "/" + std::to_string(n) + "/" + std::to_string(t))
                .next_u64();
        Instance inst = generate(m, n, seed, Domain::floating, 0.0);
        if (f.snr_db) inst = with_noise(inst, snr_to_sigma(inst, *f.snr_db));
        SolverConfig cfg = f.config;
        cfg.seed = seed;
        const SolveReport rep = solve_instance(inst, cfg);
        const double rel = rep.refit_relative_error.value_or(rep.relative_error.value_or(std::nan("")));
        const double acc = rep.permutation_accuracy.value_or(std::nan(""));
        csv += std::to_string(seed) + "," + std::to_string(m) + "," + std::to_string(n) + "," + fmt17(inst.sigma) +
               "," + fmt17(rep.compile_ms) + "," + fmt17(rep.solve_ms) + "," + fmt17(rel) + "," + fmt17(acc) + "," +
               std::string(to_string(rep.certificate)) + "\n";
        times.push_back(rep.solve_ms);
        errs.push_back(rel);
        accs.push_back(acc);
      }
      if (f.trials > 0) {
        err << "# m=" << m << " n=" << n << " trials=" << f.trials << " median_solve_ms=" << fmt17(median(times))
            << " median_rel_err=" << fmt17(median(errs)) << " median_perm_acc=" << fmt17(median(accs)) << "\n";
      }
    }
  }
  write_text(f.out, csv, out);
  return kExitConfirmed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unlabeled sensing via power-sum polynomial systems", "unshuffle"};
  app.require_subcommand(1);

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate an instance file");
  gen_cmd->add_option("--m", gen.m, "rows")->required();
  gen_cmd->add_option("--n", gen.n, "columns")->required();
  gen_cmd->add_option("--seed", gen.seed, "master seed");
  gen_cmd->add_option("--domain", gen.domain, "exact | float");
  gen_cmd->add_option("--sigma", gen.sigma, "noise standard deviation (float domain)");
  gen_cmd->add_option("--snr-db", gen.snr_db, "noise level as SNR in dB (float domain)");
  gen_cmd->add_option("--out", gen.out, "output path (default stdout)");

  SolveFlags solve_f;
  auto* solve_cmd = app.add_subcommand("solve", "recover xi from an instance file");
  solve_cmd->add_option("--in,instance", solve_f.in, "instance JSON")->required();
  solve_cmd->add_option("--seed", solve_f.config.seed, "start seed");
  solve_cmd->add_option("--out", solve_f.out, "report path (default stdout)");
  solve_cmd->add_flag("--timing", solve_f.timing, "include wall-clock timings in the report");
  add_solver_flags(solve_cmd, solve_f.config);

  VerifyFlags verify_f;
  auto* verify_cmd = app.add_subcommand("verify", "exact algebraic verification");
  verify_cmd->add_option("--mode", verify_f.mode, "square | unique | regseq | eliminant")->required();
  verify_cmd->add_option("--in,instance", verify_f.in, "exact instance JSON");
  verify_cmd->add_option("--matrix", verify_f.matrix, "matrix rows separated by ';' (regseq)");
  verify_cmd->add_option("--out", verify_f.out, "record path (default stdout)");
  verify_cmd->add_flag("--allow-large", verify_f.allow_large, "lift the n caps of the exact checks");

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "timing/accuracy grid as CSV");
  bench_cmd->add_option("--m-list", bench.m_list, "comma-separated m values")->required();
  bench_cmd->add_option("--n-list", bench.n_list, "comma-separated n values")->required();
  bench_cmd->add_option("--trials", bench.trials, "trials per grid point");
  bench_cmd->add_option("--snr-db", bench.snr_db, "noise level; omit for noiseless");
  bench_cmd->add_option("--seed", bench.seed, "master seed");
  bench_cmd->add_option("--out", bench.out, "CSV path (default stdout)");
  add_solver_flags(bench_cmd, bench.config);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitConfirmed;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (solve_cmd->parsed()) return cmd_solve(solve_f, out);
    if (verify_cmd->parsed()) return cmd_verify(verify_f, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const DegenerateInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotConfirmed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotConfirmed;
  }
  return kExitUsage;
}

}  // namespace unshuffle
