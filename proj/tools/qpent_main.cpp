// Command-line driver for the identity and lemma verification suites.
//
//   qpent verify <main|no-abs|pentagon> --config <path> --out <path>
//                [--seed N] [--grid N] [--mmax M]
//   qpent bailey --config <path> --out <path>
//   qpent kernel <qpoch|ratio|bkernel> <args...>
//
// Exit codes: 0 = all checks passed (including under-resolved rows),
// 1 = at least one verification failure, 2 = usage or configuration error.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qpent/bailey.hpp"
#include "qpent/config.hpp"
#include "qpent/identities.hpp"
#include "qpent/qkernel.hpp"
#include "qpent/quadrature.hpp"
#include "qpent/report.hpp"
#include "qpent/sampler.hpp"
#include "qpent/types.hpp"

namespace {

using namespace qpent;

void record_instance(Report& report, int row, const MainIdentityInstance& inst) {
  report.set_complex(row, "q", inst.nome.q());
  static const char* a_names[] = {"a1", "a2", "a3"};
  static const char* b_names[] = {"b1", "b2", "b3"};
  static const char* m_names[] = {"m1", "m2", "m3"};
  static const char* n_names[] = {"n1", "n2", "n3"};
  for (int i = 0; i < 3; ++i) {
    report.set_complex(row, a_names[i], inst.a[i].fugacity);
    report.set(row, m_names[i], inst.a[i].charge);
  }
  for (int i = 0; i < 3; ++i) {
    report.set_complex(row, b_names[i], inst.b[i].fugacity);
    report.set(row, n_names[i], inst.b[i].charge);
  }
}

RowStatus worse(RowStatus a, RowStatus b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

struct Tally {
  long passed = 0;
  long under_resolved = 0;
  long failed = 0;
  double max_residual = 0.0;

  void count(RowStatus st) {
    switch (st) {
      case RowStatus::passed:
        ++passed;
        break;
      case RowStatus::under_resolved:
        ++under_resolved;
        break;
      case RowStatus::failed:
        ++failed;
        break;
    }
  }

  void summarize(Report& report) const {
    report.set_summary("rows", passed + under_resolved + failed);
    report.set_summary("passed", passed);
    report.set_summary("under_resolved", under_resolved);
    report.set_summary("failed", failed);
    report.set_summary("max_relative_residual", max_residual);
    const char* status = failed > 0              ? "FAILED"
                         : under_resolved > 0    ? "UNDER_RESOLVED"
                                                 : "PASSED";
    report.set_summary("status", status);
  }
};

RunManifest make_manifest(const std::string& command, const RunConfig& cfg,
                          int grid_n, int m_max) {
  RunManifest man;
  man.command = command;
  man.config_hash = fnv1a64(canonical_config(cfg));
  man.rng_seed = cfg.rng_seed;
  man.grid_n = grid_n;
  man.m_max = m_max;
  man.max_terms = cfg.max_terms;
  man.target_tail = cfg.target_tail;
  return man;
}

int run_verify(const std::string& identity, const RunConfig& cfg,
               const std::string& out_path) {
  Report report(make_manifest("verify " + identity, cfg, cfg.grid_n,
                              cfg.m_max));
  Sampler sampler(cfg.sampler_config());
  const CheckOptions opts = cfg.check_options();

  Tally tally;
  for (int i = 0; i < cfg.n_instances; ++i) {
    const MainIdentityInstance inst = sampler.sample_main_instance();
    const int row = report.add_row();
    record_instance(report, row, inst);
    try {
      ResidualReport rep;
      if (identity == "main") {
        rep = main_identity_check(inst, opts);
      } else if (identity == "no-abs") {
        rep = no_abs_identity_check(inst, opts);
      } else {
        rep = pentagon_check(inst, opts);
      }
      RowStatus st = report.set_residuals(row, rep);
      tally.max_residual = std::max(tally.max_residual, rep.relative_residual);
      if (identity == "no-abs") {
        const ResidualReport agree =
            elimination_agreement_check(inst, opts, cfg.agreement_tolerance);
        report.set(row, "agreement_residual", agree.relative_residual);
        const RowStatus ast = classify(agree);
        report.set(row, "agreement_status", row_status_name(ast));
        st = worse(st, ast);
      }
      tally.count(st);
    } catch (const DecayViolation& e) {
      // The window or grid is too small for a meaningful tail estimate: a
      // resolution shortfall, not a counterexample.
      report.set(row, "status", row_status_name(RowStatus::under_resolved));
      report.set(row, "note", e.what());
      tally.count(RowStatus::under_resolved);
    } catch (const std::exception& e) {
      report.set(row, "status", row_status_name(RowStatus::failed));
      report.set(row, "note", e.what());
      tally.count(RowStatus::failed);
    }
  }
  tally.summarize(report);
  report.write_files(out_path);
  return tally.failed == 0 ? 0 : 1;
}

int run_bailey(const RunConfig& cfg, const std::string& out_path) {
  Report report(make_manifest("bailey", cfg, cfg.bailey_grid_n,
                              cfg.bailey_m_max));
  Sampler sampler(cfg.sampler_config(), cfg.bailey_sampler_config());
  const CircleGrid grid = make_circle_grid(cfg.bailey_grid_n);
  const ChargeWindow window{cfg.bailey_m_max};
  const TruncationPolicy policy = cfg.truncation_policy();
  const std::vector<LemmaProbe> probes = default_probes();

  Tally tally;
  for (int k = 0; k < cfg.bailey_pairs; ++k) {
    const BaileyParams params = sampler.sample_bailey_params();
    const TestSequence alpha = sampler.sample_alpha();
    const int row = report.add_row();
    report.set_complex(row, "t", params.t());
    report.set_complex(row, "s", params.s());
    report.set_complex(row, "u", params.u());
    report.set_complex(row, "w", params.w());
    report.set(row, "n_t", params.n_t());
    report.set(row, "n_s", params.n_s());
    report.set(row, "n_u", params.n_u());
    const std::vector<long> supp = alpha.support();
    report.set(row, "alpha_components", static_cast<long>(supp.size()));
    if (!supp.empty()) report.set(row, "alpha_index", supp.front());
    try {
      const std::vector<ProbeResult> results = lemma_probe_results(
          alpha, params, probes, grid, window, policy, cfg.bailey_tolerance,
          cfg.safety_factor);
      ResidualReport rep;
      rep.tolerance = cfg.bailey_tolerance;
      rep.safety_factor = cfg.safety_factor;
      rep.passed = true;
      double worst = -1.0;
      for (std::size_t p = 0; p < results.size(); ++p) {
        const ProbeResult& pr = results[p];
        const std::string prefix = "probe" + std::to_string(p);
        report.set(row, prefix + "_n", pr.probe.n);
        report.set_complex(row, prefix + "_w", pr.probe.w);
        report.set_complex(row, prefix + "_chain", pr.chain);
        report.set_complex(row, prefix + "_direct", pr.direct);
        report.set(row, prefix + "_relative_difference",
                   pr.relative_difference);
        report.set(row, prefix + "_error_budget", pr.error_budget);
        if (!pr.passed) rep.passed = false;
        if (pr.relative_difference > worst) {
          worst = pr.relative_difference;
          rep.lhs = pr.chain;
          rep.rhs = pr.direct;
          rep.relative_residual = pr.relative_difference;
          rep.quadrature_error_estimate = pr.error_budget;
          rep.error_budget = pr.error_budget;
        }
      }
      const RowStatus st = report.set_residuals(row, rep);
      tally.max_residual = std::max(tally.max_residual, rep.relative_residual);
      tally.count(st);
    } catch (const DecayViolation& e) {
      report.set(row, "status", row_status_name(RowStatus::under_resolved));
      report.set(row, "note", e.what());
      tally.count(RowStatus::under_resolved);
    } catch (const std::exception& e) {
      report.set(row, "status", row_status_name(RowStatus::failed));
      report.set(row, "note", e.what());
      tally.count(RowStatus::failed);
    }
  }
  tally.summarize(report);
  report.write_files(out_path);
  return tally.failed == 0 ? 0 : 1;
}

double arg_double(const std::vector<std::string>& args, std::size_t i) {
  try {
    std::size_t used = 0;
    const double v = std::stod(args.at(i), &used);
    if (used != args.at(i).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("kernel argument " + std::to_string(i + 1) +
                      " is not a number: '" + args.at(i) + "'");
  }
}

long arg_long(const std::vector<std::string>& args, std::size_t i) {
  try {
    std::size_t used = 0;
    const long v = std::stol(args.at(i), &used);
    if (used != args.at(i).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("kernel argument " + std::to_string(i + 1) +
                      " is not an integer: '" + args.at(i) + "'");
  }
}

void print_value(const KernelValue& kv) {
  std::cout << "value_re = " << format_double(kv.value.real()) << "\n"
            << "value_im = " << format_double(kv.value.imag()) << "\n"
            << "tail_bound = " << format_double(kv.tail_bound) << "\n";
}

int run_kernel(const std::string& expr, const std::vector<std::string>& args) {
  if (expr == "qpoch") {
    if (args.size() != 3 && args.size() != 4) {
      throw ConfigError(
          "kernel qpoch expects: z_re z_im q_re [q_im]");
    }
    const cplx z(arg_double(args, 0), arg_double(args, 1));
    const cplx q(arg_double(args, 2),
                 args.size() == 4 ? arg_double(args, 3) : 0.0);
    print_value(qpochhammer(z, Nome(q)));
    return 0;
  }
  if (expr == "ratio") {
    if (args.size() != 4 && args.size() != 5) {
      throw ConfigError(
          "kernel ratio expects: z_re z_im charge q_re [q_im]");
    }
    const cplx z(arg_double(args, 0), arg_double(args, 1));
    const long charge = arg_long(args, 2);
    const cplx q(arg_double(args, 3),
                 args.size() == 5 ? arg_double(args, 4) : 0.0);
    print_value(charged_ratio(z, charge, Nome(q)));
    if (charge % 2 != 0) {
      std::cout << "note = odd charge: the value uses the principal square "
                   "root of q; the opposite root branch maps the value to its "
                   "reciprocal-weighted counterpart\n";
    }
    return 0;
  }
  if (expr == "bkernel") {
    if (args.size() != 7 && args.size() != 8) {
      throw ConfigError(
          "kernel bkernel expects: a_re a_im n b_re b_im m q_re [q_im]");
    }
    const cplx a(arg_double(args, 0), arg_double(args, 1));
    const long n = arg_long(args, 2);
    const cplx b(arg_double(args, 3), arg_double(args, 4));
    const long m = arg_long(args, 5);
    const cplx q(arg_double(args, 6),
                 args.size() == 8 ? arg_double(args, 7) : 0.0);
    print_value(b_kernel(a, n, b, m, Nome(q)));
    return 0;
  }
  throw ConfigError("unknown kernel expression '" + expr +
                    "' (expected qpoch, ratio, or bkernel)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-series identity and Bailey lemma verification"};
  app.require_subcommand(1);

  std::string identity;
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  int grid = 0;
  int mmax = 0;

  CLI::App* verify = app.add_subcommand("verify", "run an identity sweep");
  verify->add_option("identity", identity, "main | no-abs | pentagon")
      ->required()
      ->check(CLI::IsMember({"main", "no-abs", "pentagon"}));
  verify->add_option("--config", config_path, "configuration file")->required();
  verify->add_option("--out", out_path, "report output path")->required();
  CLI::Option* seed_opt =
      verify->add_option("--seed", seed, "override rng_seed");
  CLI::Option* grid_opt = verify->add_option("--grid", grid, "override grid_n");
  CLI::Option* mmax_opt = verify->add_option("--mmax", mmax, "override m_max");

  std::string bailey_config;
  std::string bailey_out;
  CLI::App* bailey = app.add_subcommand("bailey", "run the lemma route check");
  bailey->add_option("--config", bailey_config, "configuration file")
      ->required();
  bailey->add_option("--out", bailey_out, "report output path")->required();

  std::string expr;
  std::vector<std::string> kernel_args;
  CLI::App* kernel = app.add_subcommand("kernel", "evaluate one kernel");
  kernel->add_option("expr", expr, "qpoch | ratio | bkernel")->required();
  kernel->add_option("args", kernel_args, "numeric arguments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) {
      RunConfig cfg = load_config(config_path);
      if (seed_opt->count() > 0) cfg.rng_seed = seed;
      if (grid_opt->count() > 0) cfg.grid_n = grid;
      if (mmax_opt->count() > 0) cfg.m_max = mmax;
      validate_config(cfg);
      return run_verify(identity, cfg, out_path);
    }
    if (bailey->parsed()) {
      const RunConfig cfg = load_config(bailey_config);
      return run_bailey(cfg, bailey_out);
    }
    if (kernel->parsed()) {
      return run_kernel(expr, kernel_args);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
