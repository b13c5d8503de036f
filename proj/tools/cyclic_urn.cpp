// Command-line harness for the cyclic urn experiments.
//
// Exit codes: 0 pass, 1 tolerance failure, 2 usage or domain error,
// 3 resource guard.

#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "cyclicurn/errors.hpp"
#include "cyclicurn/experiments.hpp"

namespace {

using namespace cyclicurn;

struct Defaults {
  int m = 7;
  std::uint64_t n = 10000;
  std::size_t reps = 10000;
};

struct Command {
  const char* name;
  const char* help;
  Defaults defaults;
  std::function<Report(const ExperimentConfig&)> run;
};

struct Flags {
  int m = 0;
  std::uint64_t n = 0;
  std::vector<std::uint64_t> nlimit;
  std::size_t reps = 0;
  std::uint64_t seed = ExperimentConfig{}.seed;
  unsigned threads = 1;
  std::string mode = "gamma_ratio";
  std::string out;
  std::string format = "json";
  bool exact_rational = false;
  bool history = false;
  std::vector<int> ks;
  int m_min = 0;
  std::uint64_t n_min = 0;
  int initial_type = 0;
  std::vector<std::string> tol;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--m", f.m, "number of ball types");
  sub->add_option("--n", f.n, "number of draws (observation time)");
  sub->add_option("--nlimit", f.nlimit, "horizon(s) N for the martingale limit; first is primary")->delimiter(',');
  sub->add_option("--reps", f.reps, "Monte Carlo replicates");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--threads", f.threads, "worker threads")->check(CLI::Range(1u, 1024u));
  sub->add_option("--mode", f.mode, "large-k normalization")->check(CLI::IsMember({"gamma_ratio", "power_phase"}));
  sub->add_option("--out", f.out, "output file (default stdout)");
  sub->add_option("--format", f.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_flag("--exact-rational", f.exact_rational, "rational arithmetic in the oracle identities");
  sub->add_flag("--history", f.history, "simulate: emit every state");
  sub->add_option("--k", f.ks, "projection index (repeatable)")->delimiter(',');
  sub->add_option("--m-min", f.m_min, "lower end of the m range");
  sub->add_option("--n-min", f.n_min, "lower end of the n grid");
  sub->add_option("--initial-type", f.initial_type, "type of the initial ball");
  sub->add_option("--tol", f.tol, "override a tolerance, name=value (repeatable)");
}

ExperimentConfig to_config(const CLI::App* sub, const Flags& f, const Defaults& d) {
  ExperimentConfig cfg;
  cfg.m = sub->count("--m") ? f.m : d.m;
  cfg.n = sub->count("--n") ? f.n : d.n;
  cfg.reps = sub->count("--reps") ? f.reps : d.reps;
  cfg.n_limits = f.nlimit;
  cfg.seed = f.seed;
  cfg.threads = f.threads;
  cfg.mode = parse_mode(f.mode);
  cfg.exact_rational = f.exact_rational;
  cfg.history = f.history;
  cfg.ks = f.ks;
  cfg.m_min = f.m_min;
  cfg.n_min = f.n_min;
  cfg.initial_type = f.initial_type;
  for (const auto& item : f.tol) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParameterError("--tol expects name=value, got " + item);
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ParameterError("--tol value is not a number: " + item);
    }
    cfg.tol.set(item.substr(0, eq), value);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyclic urn experiments"};
  app.set_version_flag("--version", cyclicurn::kVersion);
  app.require_subcommand(1);

  const std::vector<Command> commands = {
      {"simulate", "run one trajectory", {7, 10000, 1}, cmd_simulate},
      {"clt", "fluctuation covariance against the limit", {7, 10000, 10000}, cmd_clt},
      {"rate", "residual and covariance rates from exact moments", {7, 100000, 1}, cmd_rate},
      {"rank", "rank of the theorem-level covariance", {24, 0, 1}, cmd_rank},
      {"fixpoint", "distributional fixed point of the martingale limit", {7, 100000, 10000}, cmd_fixpoint},
      {"oracle", "closed forms against exact enumeration", {9, 8, 100000}, cmd_oracle},
      {"mean", "three-term mean expansion", {7, 1000000, 1}, cmd_mean},
  };

  Flags flags;
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_flags(sub, flags);
    subs[c.name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (const auto& c : commands) {
    CLI::App* sub = subs[c.name];
    if (!sub->parsed()) continue;
    try {
      const ExperimentConfig cfg = to_config(sub, flags, c.defaults);
      const Report report = c.run(cfg);
      const std::string text = flags.format == "csv" ? report.to_csv() : report.to_json().dump(2) + "\n";
      if (flags.out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(flags.out);
        if (!out) {
          std::cerr << "error: cannot open " << flags.out << "\n";
          return 2;
        }
        out << text;
      }
      if (!report.pass) std::cerr << c.name << ": tolerance check failed\n";
      return report.pass ? 0 : 1;
    } catch (const ResourceError& e) {
      std::cerr << "resource guard: " << e.what() << "\n";
      return 3;
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const std::domain_error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return 2;
}
