// End-to-end tests of the command-line driver: kernel evaluation printing,
// verification sweeps with report files, exit-code policy, determinism of
// report bodies, configuration errors, flag overrides, and environment-layer
// precedence — all through the installed binary, exactly as a user runs it.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

const std::string kCli = QPENT_CLI_PATH;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

RunResult run_cli(const std::string& args) {
  const auto out = temp_file("qpent_cli_stdout.txt");
  const auto err = temp_file("qpent_cli_stderr.txt");
  const std::string cmd =
      kCli + " " + args + " > " + out.string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out.string());
  r.err = slurp(err.string());
  return r;
}

std::string write_config(const std::string& name, const std::string& body) {
  const auto path = temp_file(name);
  std::ofstream out(path);
  out << body;
  return path.string();
}

// All rows' values for one report key, in row order.
std::vector<double> report_values(const std::string& doc,
                                  const std::string& key) {
  std::vector<double> vals;
  std::istringstream lines(doc);
  std::string line;
  const std::string prefix = key + " = ";
  while (std::getline(lines, line)) {
    if (line.rfind(prefix, 0) == 0) {
      vals.push_back(std::strtod(line.c_str() + prefix.size(), nullptr));
    }
  }
  return vals;
}

std::string strip_timestamp_line(const std::string& doc) {
  std::istringstream lines(doc);
  std::string line, out;
  while (std::getline(lines, line)) {
    if (line.rfind("timestamp = ", 0) != 0) {
      out += line;
      out += '\n';
    }
  }
  return out;
}

}  // namespace

TEST_CASE("kernel qpoch prints an exact trivial value") {
  const auto r = run_cli("kernel qpoch 0 0 0.5");
  CHECK(r.code == 0);
  CHECK(r.out.find("value_re = 1\n") != std::string::npos);
  CHECK(r.out.find("value_im = 0\n") != std::string::npos);
  CHECK(r.out.find("tail_bound = 0\n") != std::string::npos);
}

TEST_CASE("kernel ratio annotates the root branch only for odd charges") {
  const auto odd = run_cli("kernel ratio 0.3 0.1 1 0.4");
  CHECK(odd.code == 0);
  CHECK(odd.out.find("note = odd charge") != std::string::npos);
  const auto even = run_cli("kernel ratio 0.3 0.1 2 0.4");
  CHECK(even.code == 0);
  CHECK(even.out.find("note") == std::string::npos);
}

TEST_CASE("kernel bkernel output is bitwise slot-symmetric") {
  const auto r1 = run_cli("kernel bkernel 0.3 0 1 0 0.2 -2 0.35");
  const auto r2 = run_cli("kernel bkernel 0 0.2 -2 0.3 0 1 0.35");
  CHECK(r1.code == 0);
  CHECK(r2.code == 0);
  CHECK(r1.out == r2.out);
  CHECK(r1.out.find("value_re = ") != std::string::npos);
}

TEST_CASE("kernel usage errors exit with code 2") {
  CHECK(run_cli("kernel qpoch 0.5").code == 2);
  CHECK(run_cli("kernel qpoch 0 0 abc").code == 2);
  CHECK(run_cli("kernel frobnicate 1 2 3").code == 2);
  CHECK(run_cli("transmogrify").code == 2);
}

TEST_CASE("configuration errors exit with code 2 and name the key") {
  const auto cfg = write_config("qpent_cli_badkey.cfg", "girth = 12\n");
  const auto r = run_cli("verify main --config " + cfg + " --out " +
                         temp_file("qpent_cli_badkey_out.txt").string());
  CHECK(r.code == 2);
  CHECK(r.err.find("girth") != std::string::npos);

  const auto missing = run_cli(
      "verify main --config /nonexistent/q.cfg --out " +
      temp_file("qpent_cli_missing_out.txt").string());
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot open") != std::string::npos);
}

TEST_CASE("a small verification sweep passes and is deterministic") {
  const auto cfg = write_config("qpent_cli_tiny.cfg",
                                "q_values = 0.2\n"
                                "n_instances = 4\n"
                                "grid_n = 128\n");
  const auto out1 = temp_file("qpent_cli_tiny_out1.txt").string();
  const auto out2 = temp_file("qpent_cli_tiny_out2.txt").string();

  const auto r1 = run_cli("verify main --config " + cfg + " --out " + out1);
  CHECK(r1.code == 0);
  const std::string doc1 = slurp(out1);
  CHECK(doc1.find("[manifest]") != std::string::npos);
  CHECK(doc1.find("command = verify main") != std::string::npos);
  CHECK(doc1.find("[row 3]") != std::string::npos);
  CHECK(doc1.find("[row 4]") == std::string::npos);
  CHECK(doc1.find("status = FAILED") == std::string::npos);
  CHECK(doc1.find("failed = 0") != std::string::npos);
  for (const double res : report_values(doc1, "relative_residual")) {
    CHECK(res <= 1e-8);
  }

  const auto r2 = run_cli("verify main --config " + cfg + " --out " + out2);
  CHECK(r2.code == 0);
  CHECK(strip_timestamp_line(slurp(out2)) == strip_timestamp_line(doc1));
  CHECK(slurp(out2 + ".tsv") == slurp(out1 + ".tsv"));

  // The flat export has a header plus one line per instance.
  std::istringstream tsv(slurp(out1 + ".tsv"));
  std::string line;
  int lines = 0;
  while (std::getline(tsv, line)) ++lines;
  CHECK(lines == 5);
}

TEST_CASE("flag overrides land in the manifest") {
  const auto cfg = write_config("qpent_cli_tiny2.cfg",
                                "q_values = 0.2\n"
                                "n_instances = 2\n"
                                "grid_n = 128\n");
  const auto out = temp_file("qpent_cli_override_out.txt").string();
  const auto r = run_cli("verify main --config " + cfg +
                         " --seed 7 --grid 64 --mmax 20 --out " + out);
  CHECK(r.code == 0);
  const std::string doc = slurp(out);
  CHECK(doc.find("rng_seed = 7\n") != std::string::npos);
  CHECK(doc.find("grid_n = 64\n") != std::string::npos);
  CHECK(doc.find("m_max = 20\n") != std::string::npos);
}

TEST_CASE("the signed form reports elimination agreement per row") {
  const auto cfg = write_config("qpent_cli_noabs.cfg",
                                "n_instances = 3\n");
  const auto out = temp_file("qpent_cli_noabs_out.txt").string();
  const auto r = run_cli("verify no-abs --config " + cfg + " --out " + out);
  CHECK(r.code == 0);
  const std::string doc = slurp(out);
  CHECK(doc.find("agreement_residual = ") != std::string::npos);
  CHECK(doc.find("agreement_status = PASSED") != std::string::npos);
  CHECK(doc.find("agreement_status = FAILED") == std::string::npos);
  for (const double res : report_values(doc, "agreement_residual")) {
    CHECK(res <= 1e-9);
  }
}

TEST_CASE("pentagon and main residual profiles agree within an order") {
  // Identical seed and configuration, so both sweeps see the same instance
  // list; the profiles are compared through their extremes with a floor of
  // tolerance/100, below which residuals are indistinguishable noise.
  const auto cfg = write_config("qpent_cli_profile.cfg", "n_instances = 12\n");
  const auto out_m = temp_file("qpent_cli_profile_main.txt").string();
  const auto out_p = temp_file("qpent_cli_profile_pent.txt").string();
  CHECK(run_cli("verify main --config " + cfg + " --out " + out_m).code == 0);
  CHECK(run_cli("verify pentagon --config " + cfg + " --out " + out_p).code ==
        0);
  const auto rm = report_values(slurp(out_m), "relative_residual");
  const auto rp = report_values(slurp(out_p), "relative_residual");
  REQUIRE(rm.size() == 12);
  REQUIRE(rp.size() == 12);
  // Same instances: the recorded draws must match byte-for-byte.
  const auto qm = report_values(slurp(out_m), "a1_re");
  const auto qp = report_values(slurp(out_p), "a1_re");
  CHECK(qm == qp);

  const double floor = 1e-10;
  const auto clamped_max = [&](const std::vector<double>& v) {
    return std::max(*std::max_element(v.begin(), v.end()), floor);
  };
  for (const double r : rm) CHECK(r <= 1e-8);
  for (const double r : rp) CHECK(r <= 1e-8);
  const double ratio = clamped_max(rp) / clamped_max(rm);
  CHECK(ratio <= 10.0);
  CHECK(ratio >= 0.1);
}

TEST_CASE("a coarse grid degrades to under-resolved, not failure") {
  const auto cfg = write_config("qpent_cli_coarse.cfg",
                                "q_values = 0.2\n"
                                "n_instances = 2\n");
  const auto out = temp_file("qpent_cli_coarse_out.txt").string();
  const auto r =
      run_cli("verify main --config " + cfg + " --grid 8 --out " + out);
  CHECK(r.code == 0);
  const std::string doc = slurp(out);
  CHECK(doc.find("UNDER_RESOLVED") != std::string::npos);
  CHECK(doc.find("status = FAILED") == std::string::npos);
  CHECK(doc.find("failed = 0") != std::string::npos);
}

TEST_CASE("an impossible tolerance fails with exit code 1") {
  // A starved grid leaves genuine residual; the scaled budget cannot excuse it.
  const auto cfg = write_config("qpent_cli_fail.cfg",
                                "q_values = 0.2\n"
                                "n_instances = 2\n"
                                "grid_n = 8\n"
                                "tolerance = 1e-30\n"
                                "safety_factor = 0.001\n");
  const auto out = temp_file("qpent_cli_fail_out.txt").string();
  const auto r = run_cli("verify main --config " + cfg + " --out " + out);
  CHECK(r.code == 1);
  const std::string doc = slurp(out);
  CHECK(doc.find("status = FAILED") != std::string::npos);
  CHECK(report_values(doc, "relative_residual").size() == 2);
}

TEST_CASE("the lemma sweep passes at production resolution") {
  const auto cfg = write_config("qpent_cli_bailey.cfg", "bailey_pairs = 2\n");
  const auto out = temp_file("qpent_cli_bailey_out.txt").string();
  const auto r = run_cli("bailey --config " + cfg + " --out " + out);
  CHECK(r.code == 0);
  const std::string doc = slurp(out);
  CHECK(doc.find("command = bailey") != std::string::npos);
  CHECK(doc.find("probe0_n = ") != std::string::npos);
  CHECK(doc.find("probe5_relative_difference = ") != std::string::npos);
  CHECK(doc.find("status = FAILED") == std::string::npos);
  for (const double res : report_values(doc, "relative_residual")) {
    CHECK(res <= 1e-6);
  }
}

TEST_CASE("the lemma sweep flags a starved resolution") {
  const auto cfg = write_config("qpent_cli_bailey_low.cfg",
                                "bailey_pairs = 2\n"
                                "bailey_grid_n = 8\n"
                                "bailey_m_max = 12\n");
  const auto out = temp_file("qpent_cli_bailey_low_out.txt").string();
  const auto r = run_cli("bailey --config " + cfg + " --out " + out);
  CHECK(r.code == 0);  // under-resolved is not failure
  const std::string doc = slurp(out);
  CHECK(doc.find("UNDER_RESOLVED") != std::string::npos);
  CHECK(doc.find("status = FAILED") == std::string::npos);
}

TEST_CASE("forced Bailey charges must balance") {
  const auto cfg = write_config("qpent_cli_bailey_bad.cfg", "bailey_n_t = 1\n");
  const auto out = temp_file("qpent_cli_bailey_bad_out.txt").string();
  const auto r = run_cli("bailey --config " + cfg + " --out " + out);
  CHECK(r.code == 2);
  CHECK(r.err.find("sum to zero") != std::string::npos);
}

TEST_CASE("environment overrides sit below the config file") {
  struct EnvGuard {
    ~EnvGuard() { unsetenv("QPENT_N_INSTANCES"); }
  } guard;
  setenv("QPENT_N_INSTANCES", "2", 1);

  const auto cfg_plain = write_config("qpent_cli_env1.cfg",
                                      "q_values = 0.2\n"
                                      "grid_n = 128\n");
  const auto out1 = temp_file("qpent_cli_env_out1.txt").string();
  CHECK(run_cli("verify main --config " + cfg_plain + " --out " + out1).code ==
        0);
  CHECK(slurp(out1).find("rows = 2\n") != std::string::npos);

  const auto cfg_over = write_config("qpent_cli_env2.cfg",
                                     "q_values = 0.2\n"
                                     "grid_n = 128\n"
                                     "n_instances = 3\n");
  const auto out2 = temp_file("qpent_cli_env_out2.txt").string();
  CHECK(run_cli("verify main --config " + cfg_over + " --out " + out2).code ==
        0);
  CHECK(slurp(out2).find("rows = 3\n") != std::string::npos);
}
