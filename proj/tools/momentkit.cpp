// momentkit command-line harness: model validation, momentum tables, and the
// randomized verification suites. Exit codes: 0 pass, 1 check failure,
// 2 usage or input error.

#include "momentkit/momentkit.hpp"

#include "CLI11.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace mk = momentkit;

namespace {

std::uint64_t seed_from_env() {
  const char* env = std::getenv("MOMENTKIT_SEED");
  if (env == nullptr || *env == '\0') return mk::kDefaultSeed;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (errno != 0 || end == env || *end != '\0' || env[0] == '-')
    throw mk::parse_error("MOMENTKIT_SEED must be a non-negative integer");
  return v;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

double parse_double_token(const std::string& tok, std::size_t lineno) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw mk::parse_error("states file line " + std::to_string(lineno) + ": bad number '" + tok +
                          "'");
  }
  while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
  if (used != tok.size())
    throw mk::parse_error("states file line " + std::to_string(lineno) + ": bad number '" + tok +
                          "'");
  return v;
}

// Rows of 2n comma-separated reals, interleaved re/im; '#' lines are comments.
std::vector<std::pair<std::string, mk::CVec>> read_states_csv(const std::string& path,
                                                              Eigen::Index n) {
  std::ifstream in(path);
  if (!in) throw mk::parse_error("cannot open states file: " + path);
  std::vector<std::pair<std::string, mk::CVec>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> vals;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) vals.push_back(parse_double_token(tok, lineno));
    if (static_cast<Eigen::Index>(vals.size()) != 2 * n)
      throw mk::parse_error("states file line " + std::to_string(lineno) + ": expected " +
                            std::to_string(2 * n) + " values, got " + std::to_string(vals.size()));
    mk::CVec v(n);
    for (Eigen::Index k = 0; k < n; ++k) v(k) = mk::Complex(vals[2 * k], vals[2 * k + 1]);
    out.emplace_back("row" + std::to_string(out.size() + 1), std::move(v));
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw mk::parse_error("cannot write output file: " + path);
  return f;
}

int cmd_validate(const std::string& model, const mk::Tolerance& tol) {
  const mk::Representation rep = mk::parse_model_spec(model, tol, /*validate_files=*/false);
  const mk::ValidationReport report = mk::validate(rep, tol);
  std::printf("model: %s (algebra dim %d, hilbert dim %d)\n", rep.name.c_str(), rep.algebra.dim,
              rep.hilbert_dim);
  std::printf("%-22s %-9s %13s %13s %s\n", "check", "index", "residual", "threshold", "status");
  for (const mk::ValidationEntry& e : report.entries) {
    std::string idx;
    if (e.i > 0) {
      idx = std::to_string(e.i);
      if (e.j > 0) idx += "," + std::to_string(e.j);
    } else {
      idx = "-";
    }
    std::printf("%-22s %-9s %13.5e %13.5e %s\n", e.check.c_str(), idx.c_str(), e.residual,
                e.threshold, e.pass ? "PASS" : "FAIL");
  }
  if (report.pass) {
    std::printf("validation: PASS (max residual %.5e)\n", report.max_residual);
    return 0;
  }
  std::printf("validation: FAIL at %s\n", report.first_failure().c_str());
  return 1;
}

int cmd_momentum(const std::string& model, const std::string& states_path,
                 const std::string& out_path, const mk::Tolerance& tol) {
  const mk::Representation rep = mk::parse_model_spec(model, tol, /*validate_files=*/true);
  const mk::CentralExtension ext = mk::central_extension(rep);
  const Eigen::Index n = ext.hdim();

  std::vector<std::pair<std::string, mk::CVec>> states;
  if (states_path.empty()) {
    for (Eigen::Index k = 0; k < n; ++k)
      states.emplace_back("e" + std::to_string(k + 1), mk::CVec::Unit(n, k));
  } else {
    states = read_states_csv(states_path, n);
  }

  std::ofstream file;
  if (!out_path.empty()) file = open_out(out_path);
  std::ostream& os = out_path.empty() ? std::cout : file;

  os << "state";
  for (const std::string& name : ext.algebra.basis_names) os << ",mu_" << name;
  os << ",stab_dim,ker_dim\n";

  char buf[64];
  for (const auto& [id, psi] : states) {
    if (!(psi.norm() > 0.0)) {
      std::fprintf(stderr, "momentum: skipping zero state '%s'\n", id.c_str());
      continue;
    }
    const mk::CVec psin = psi.normalized();
    const mk::Covector mu = mk::momentum(ext, psin);
    const mk::StabilizerBasis stab = mk::stabilizer(ext, psin, tol);
    const mk::KernelResult kr = mk::momentum_kernel(ext, psin, tol);
    os << id;
    for (int i = 0; i < ext.dim(); ++i) {
      std::snprintf(buf, sizeof buf, "%.12g", mu.coords(i));
      os << "," << buf;
    }
    os << "," << stab.dim() << "," << kr.direct.cols() << "\n";
  }
  return 0;
}

int cmd_verify(const mk::SuiteConfig& cfg, const std::string& out_path) {
  const mk::Report report = mk::run_verify(cfg);
  const std::string csv = report.to_csv();
  if (out_path.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    open_out(out_path) << csv;
    // keep the console readable: summary block only
    const std::size_t at = csv.find("# summary\n");
    if (at != std::string::npos) std::fputs(csv.c_str() + at, stdout);
  }
  return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"momentum-map verification toolkit"};
  app.require_subcommand(1);

  std::string model;
  std::string states_path;
  std::string out_path;
  std::string suites_csv;
  std::vector<std::string> verify_models;
  int samples = 100;
  std::uint64_t seed = 0;
  bool seed_given = false;
  mk::Tolerance tol;

  auto add_tol_flags = [&tol](CLI::App* cmd) {
    cmd->add_option("--tol-abs", tol.abs_tol, "absolute residual tolerance");
    cmd->add_option("--tol-null", tol.nullspace_tol, "relative nullspace cutoff");
    cmd->add_option("--fd-step", tol.fd_step, "centered-difference step");
  };

  CLI::App* validate = app.add_subcommand("validate", "check representation axioms of a model");
  validate->add_option("--model", model, "model address (builder:params or file:path)")
      ->required();
  add_tol_flags(validate);

  CLI::App* momentum = app.add_subcommand("momentum", "momentum covectors per state");
  momentum->add_option("--model", model, "model address (builder:params or file:path)")
      ->required();
  momentum->add_option("--states", states_path, "CSV of states, interleaved re/im per row");
  momentum->add_option("--out", out_path, "write table here instead of stdout");
  add_tol_flags(momentum);

  CLI::App* verify = app.add_subcommand("verify", "run randomized verification suites");
  verify->add_option("--model", verify_models, "model address, repeatable");
  verify->add_option("--samples", samples, "samples per check");
  verify->add_option("--seed", seed, "RNG seed")->each([&seed_given](const std::string&) {
    seed_given = true;
  });
  verify->add_option("--suites", suites_csv, "comma-separated suite subset");
  verify->add_option("--out", out_path, "write the CSV report here");
  add_tol_flags(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(model, tol);
    if (momentum->parsed()) return cmd_momentum(model, states_path, out_path, tol);

    mk::SuiteConfig cfg;
    cfg.tol = tol;
    cfg.samples = samples;
    cfg.seed = seed_given ? seed : seed_from_env();
    if (!verify_models.empty()) cfg.models = verify_models;
    if (!suites_csv.empty()) cfg.suites = split_list(suites_csv);
    return cmd_verify(cfg, out_path);
  } catch (const mk::validation_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const mk::parse_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
