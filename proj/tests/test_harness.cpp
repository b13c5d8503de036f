#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cyclicurn/errors.hpp"
#include "cyclicurn/experiments.hpp"
#include "cyclicurn/limits.hpp"
#include "cyclicurn/oracle.hpp"

using namespace cyclicurn;
using json = nlohmann::ordered_json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(CYCLIC_URN_BIN) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void check_schema(const json& j) {
  for (const char* key : {"config", "results", "diagnostics", "version"}) CHECK(j.contains(key));
  CHECK(j["version"] == kVersion);
  CHECK(j["diagnostics"].contains("rng"));
  CHECK(j["diagnostics"].contains("wall_clock_s"));
}

}  // namespace

TEST_CASE("dyadic grid") {
  CHECK((dyadic_grid(100, 800) == std::vector<std::uint64_t>{100, 200, 400, 800}));
  CHECK((dyadic_grid(100, 1000) == std::vector<std::uint64_t>{100, 200, 400, 800, 1000}));
  CHECK((dyadic_grid(5, 5) == std::vector<std::uint64_t>{5}));
  CHECK_THROWS_AS(dyadic_grid(0, 5), ParameterError);
}

TEST_CASE("tolerance overrides") {
  Tolerances t;
  t.set("sigmas", 3.0);
  CHECK(t.sigmas == 3.0);
  CHECK_THROWS_AS(t.set("nonsense", 1.0), ParameterError);
  CHECK(t.to_json()["sigmas"] == 3.0);
}

TEST_CASE("covariance comparison") {
  const Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd se = Eigen::MatrixXd::Constant(2, 2, 0.01);
  Eigen::MatrixXd est = sigma;
  est(0, 0) = 1.03;
  const auto c = compare_covariance(est, se, sigma, 4.0, 0.0, Eigen::MatrixXd::Identity(2, 2));
  CHECK(c.max_abs_z == doctest::Approx(3.0));
  CHECK(c.within_sigmas);
  CHECK(c.plane_eigen_ratio.size() == 2);
  est(0, 0) = 1.2;
  const auto d = compare_covariance(est, se, sigma, 4.0, 0.0, {});
  CHECK_FALSE(d.within_sigmas);
  CHECK_FALSE(d.within_budget);
  CHECK((compare_covariance(est, se, sigma, 4.0, 0.2, {}).within_budget));
}

TEST_CASE("sampled compositions are reproducible across thread counts") {
  const std::vector<std::uint64_t> points{10, 100};
  const auto a = sample_compositions(UrnParams{5, 0}, points, 40, 9, 1);
  const auto b = sample_compositions(UrnParams{5, 0}, points, 40, 9, 4);
  CHECK(a == b);
  CHECK(a[3][1].n == 100);
}

TEST_CASE("clt report is deterministic at any thread count") {
  ExperimentConfig cfg;
  cfg.m = 7;
  cfg.n = 200;
  cfg.reps = 300;
  cfg.ks = {1, 2};
  cfg.threads = 1;
  const auto one = cmd_clt(cfg);
  cfg.threads = 4;
  const auto four = cmd_clt(cfg);
  CHECK(one.results == four.results);
  check_schema(one.to_json());
  const auto& block = one.results["blocks"][0];
  CHECK(block["k"] == 1);
  CHECK(block["checkpoints"][0].contains("bias_budget"));
  CHECK(block["checkpoints"][0]["covariance"]["rows"] == 7);
  CHECK(block["checkpoints"][0]["covariance"]["data"].size() == 49);
}

TEST_CASE("report csv") {
  ExperimentConfig cfg;
  cfg.m = 9;
  cfg.m_min = 7;
  const auto r = cmd_rank(cfg);
  CHECK(r.pass);
  const std::string csv = r.to_csv();
  CHECK(csv.rfind("m,rank,expected,idempotence_residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("cli: success, json shape and csv") {
  const auto r = run_cli("rank --m 13");
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  check_schema(j);
  CHECK(j["command"] == "rank");
  CHECK(j["results"]["ranks"].size() == 7);

  const auto path = std::filesystem::temp_directory_path() / "cyclic_urn_mean.csv";
  CHECK(run_cli("mean --m 7 --n 3200 --format csv --out " + path.string()).code == 0);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("n,log_n,ratio,osc0", 0) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("cli: exit codes") {
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("bogus").code == 2);
  CHECK(run_cli("clt --no-such-flag").code == 2);
  CHECK(run_cli("simulate --m 1").code == 2);
  CHECK(run_cli("clt --mode other").code == 2);
  CHECK(run_cli("rate --m 7 --n 1000 --tol what=1").code == 2);
  CHECK(run_cli("fixpoint --m 7 --k 2 --n 100 --reps 10").code == 2);
  CHECK(run_cli("oracle --m 20 --n 200").code == 3);
  CHECK(run_cli("simulate --m 7 --n 1000 --seed 5").code == 0);
  // an impossible tolerance makes the check fail
  CHECK(run_cli("rate --m 7 --n 1000 --tol rate_rel=0").code == 1);
}

TEST_CASE("cli: simulate output is seeded") {
  const auto a = json::parse(run_cli("simulate --m 7 --n 5000 --seed 17").out);
  const auto b = json::parse(run_cli("simulate --m 7 --n 5000 --seed 17").out);
  const auto c = json::parse(run_cli("simulate --m 7 --n 5000 --seed 18").out);
  CHECK(a["results"]["final_counts"] == b["results"]["final_counts"]);
  CHECK(a["results"]["final_counts"] != c["results"]["final_counts"]);
  std::uint64_t total = 0;
  for (const auto& v : a["results"]["final_counts"]) total += v.get<std::uint64_t>();
  CHECK(total == 5001);
}

TEST_CASE("exact fluctuation covariance") {
  // against the exact law at small n
  const int m = 5;
  const std::uint64_t n = 8;
  const auto dist = exact_distribution(m, 0, n);
  const EigenData eig = eigen_data(m);
  for (int k : {1, 2}) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
    const cdouble mean = mean_u(n, m, k);
    for (const auto& [key, p] : dist.pmf) {
      std::vector<std::uint64_t> counts(key.begin(), key.end());
      const Eigen::VectorXd x = 2.0 * (((dft_coordinates(counts)[k] - mean) * eig.v[k]).real()) / std::sqrt(double(n));
      acc += p * x * x.transpose();
    }
    const double scale = projection_kind(m, k) == ProjectionKind::Critical ? 1.0 / std::log(double(n)) : 1.0;
    CHECK((exact_x_covariance(m, n, k, k) - scale * acc).cwiseAbs().maxCoeff() < 1e-12);
  }
  // converges to the limit for a fast small projection
  const auto s = sigma_k(7, 2).entries();
  CHECK((exact_x_covariance(7, 1000000, 2, 2) - s).cwiseAbs().maxCoeff() < 1e-3 * s.cwiseAbs().maxCoeff());
  CHECK_THROWS_AS(exact_x_covariance(7, 100, 1, 1), DomainError);
}
