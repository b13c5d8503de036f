#include "cyclicurn/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <Eigen/Eigenvalues>

#include "cyclicurn/errors.hpp"
#include "cyclicurn/limits.hpp"
#include "cyclicurn/montecarlo.hpp"
#include "cyclicurn/oracle.hpp"
#include "cyclicurn/stats.hpp"

namespace cyclicurn {

using json = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json matrix_json(const Eigen::MatrixXd& a) {
  json j;
  j["rows"] = a.rows();
  j["cols"] = a.cols();
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(a.size()));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index c = 0; c < a.cols(); ++c) data.push_back(a(i, c));
  j["data"] = data;
  return j;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json complex_json(cdouble z) { return json::array({z.real(), z.imag()}); }

std::string kind_name(ProjectionKind kind) {
  switch (kind) {
    case ProjectionKind::Drift: return "drift";
    case ProjectionKind::Large: return "large";
    case ProjectionKind::Critical: return "critical";
    case ProjectionKind::Small: return "small";
    case ProjectionKind::Alternating: return "alternating";
  }
  return "?";
}

void base_diagnostics(Report& r, const ExperimentConfig& cfg, Clock::time_point t0, double work_units,
                      const char* unit) {
  r.diagnostics["rng"] = Rng::kAlgorithm;
  r.diagnostics["kernel"] = std::string(simd::kernel_name(simd::default_kernel()));
  r.diagnostics["threads"] = cfg.threads;
  const double wall = seconds_since(t0);
  r.diagnostics["wall_clock_s"] = wall;
  if (work_units > 0) {
    r.diagnostics["work"] = work_units;
    r.diagnostics["work_unit"] = unit;
    r.diagnostics["throughput_per_s"] = wall > 0 ? work_units / wall : 0.0;
  }
  r.diagnostics["tolerances"] = cfg.tol.to_json();
  r.diagnostics["tolerance_note"] =
      "Monte Carlo and asymptotic-rate thresholds are engineering choices; the limit theorems give no finite-n rates";
}

std::vector<int> target_ks(const ExperimentConfig& cfg) {
  std::vector<int> ks = cfg.ks;
  if (ks.empty()) {
    for (int k = 1; k <= cfg.m / 2; ++k) ks.push_back(k);
  }
  for (int k : ks) {
    if (k < 1 || k > cfg.m / 2) throw ParameterError("projection index k must lie in [1, m/2]");
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

double lambda_of(int m, int k) { return root_of_unity(k, m).real(); }

double bias_budget(std::uint64_t n, std::uint64_t limit, double lambda) {
  return std::pow(static_cast<double>(n) / static_cast<double>(limit), lambda - 0.5);
}

// Stacks the per-replicate vectors into an R x d matrix.
Eigen::MatrixXd stack(const std::vector<Eigen::VectorXd>& rows) {
  if (rows.empty()) return {};
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return out;
}

// Normalization of X_{n,k} relative to the centered pair projection.
double x_norm(int m, int k, std::uint64_t n) {
  const double nd = static_cast<double>(n);
  return projection_kind(m, k) == ProjectionKind::Critical ? 1.0 / std::sqrt(nd * std::log(nd)) : 1.0 / std::sqrt(nd);
}

}  // namespace

// E[X_{n,k} X_{n,l}^T] for projections that need no martingale limit, from
// exact mixed moments.
Eigen::MatrixXd exact_x_covariance(int m, std::uint64_t n, int k, int l) {
  if (projection_kind(m, k) == ProjectionKind::Large || projection_kind(m, l) == ProjectionKind::Large) {
    throw DomainError("exact_x_covariance: large projections need the martingale limit");
  }
  const EigenData eig = eigen_data(m);
  const std::uint64_t cp[] = {n};
  const cdouble same = cross_moment_path(m, k, l, cp).front().centered;
  const cdouble conj = cross_moment_path(m, k, (m - l) % m, cp).front().centered;
  const double ck = 2 * k == m ? 1.0 : 2.0;
  const double cl = 2 * l == m ? 1.0 : 2.0;
  const Eigen::MatrixXcd inner = same * eig.v[k] * eig.v[l].transpose() + conj * eig.v[k] * eig.v[l].adjoint();
  return ck * cl * 0.5 * inner.real() * x_norm(m, k, n) * x_norm(m, l, n);
}

// ---------------------------------------------------------------------------

void Tolerances::set(const std::string& name, double value) {
  if (name == "sigmas") sigmas = value;
  else if (name == "rate_rel") rate_rel = value;
  else if (name == "critical_rel") critical_rel = value;
  else if (name == "mixed_ratio") mixed_ratio = value;
  else if (name == "oracle_abs") oracle_abs = value;
  else if (name == "martingale_abs") martingale_abs = value;
  else if (name == "identity_abs") identity_abs = value;
  else if (name == "chi2_p") chi2_p = value;
  else if (name == "mean_growth") mean_growth = value;
  else throw ParameterError("unknown tolerance: " + name);
}

json Tolerances::to_json() const {
  return json{{"sigmas", sigmas},           {"rate_rel", rate_rel},
              {"critical_rel", critical_rel}, {"mixed_ratio", mixed_ratio},
              {"oracle_abs", oracle_abs},     {"martingale_abs", martingale_abs},
              {"identity_abs", identity_abs}, {"chi2_p", chi2_p},
              {"mean_growth", mean_growth}};
}

json ExperimentConfig::to_json() const {
  json j;
  j["m"] = m;
  j["initial_type"] = initial_type;
  j["n"] = n;
  j["n_limits"] = n_limits;
  j["reps"] = reps;
  j["seed"] = seed;
  j["threads"] = threads;
  j["mode"] = std::string(mode_name(mode));
  j["ks"] = ks;
  j["m_min"] = m_min;
  j["n_min"] = n_min;
  j["exact_rational"] = exact_rational;
  j["history"] = history;
  j["tolerances"] = tol.to_json();
  return j;
}

json Report::to_json() const {
  json j;
  j["command"] = command;
  j["pass"] = pass;
  j["config"] = config;
  j["results"] = results;
  j["diagnostics"] = diagnostics;
  j["version"] = kVersion;
  return j;
}

std::string Report::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return out.str();
}

std::vector<std::uint64_t> dyadic_grid(std::uint64_t lo, std::uint64_t hi) {
  if (lo == 0 || lo > hi) throw ParameterError("dyadic_grid: need 0 < lo <= hi");
  std::vector<std::uint64_t> g;
  for (std::uint64_t v = lo; v <= hi; v *= 2) {
    g.push_back(v);
    if (v > hi / 2) break;
  }
  if (g.back() != hi) g.push_back(hi);
  return g;
}

std::vector<std::vector<Composition>> sample_compositions(const UrnParams& params,
                                                          const std::vector<std::uint64_t>& points,
                                                          std::size_t reps, std::uint64_t seed, unsigned threads) {
  params.validate();
  if (!std::is_sorted(points.begin(), points.end())) throw ParameterError("sample points must be ascending");
  return run_replicates(reps, threads, seed, [&](std::size_t, Rng& rng) {
    UrnProcess urn(params);
    std::vector<Composition> states;
    states.reserve(points.size());
    for (auto p : points) {
      urn.advance_to(p, rng);
      states.push_back(urn.state());
    }
    return states;
  });
}

CovComparison compare_covariance(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& standard_error,
                                 const Eigen::MatrixXd& sigma, double sigmas, double budget,
                                 const Eigen::MatrixXd& plane_basis) {
  CovComparison c;
  const double scale = sigma.cwiseAbs().maxCoeff();
  c.within_sigmas = true;
  c.within_budget = true;
  c.max_excess = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < sigma.rows(); ++i) {
    for (Eigen::Index j = 0; j < sigma.cols(); ++j) {
      const double diff = std::abs(estimate(i, j) - sigma(i, j));
      const double se = standard_error(i, j);
      const double z = se > 0 ? diff / se : (diff > 0 ? std::numeric_limits<double>::infinity() : 0.0);
      c.max_abs_z = std::max(c.max_abs_z, z);
      c.max_excess = std::max(c.max_excess, (diff - sigmas * se) / scale);
      if (z > sigmas) c.within_sigmas = false;
      if (diff > sigmas * se + budget * scale) c.within_budget = false;
    }
  }
  c.rel_frobenius = (estimate - sigma).norm() / sigma.norm();
  if (plane_basis.size() > 0) {
    const Eigen::MatrixXd est = plane_basis.transpose() * estimate * plane_basis;
    const Eigen::MatrixXd lim = plane_basis.transpose() * sigma * plane_basis;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(est, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ls(lim, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      c.plane_eigen_ratio.push_back(es.eigenvalues()[i] / ls.eigenvalues()[i]);
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// simulate

Report cmd_simulate(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  Report r;
  r.command = "simulate";
  r.config = cfg.to_json();
  const UrnParams params{cfg.m, cfg.initial_type};
  constexpr double kHistoryCells = 2e8;
  if (cfg.history && static_cast<double>(cfg.n) * cfg.m > kHistoryCells) {
    throw ResourceError("simulate: history of n * m cells exceeds the guard");
  }
  const Trajectory traj = simulate(params, cfg.n, cfg.seed, cfg.history);
  const CenteringTable table(params, cfg.n);
  const MartingaleTrack track = MartingaleTrack::from_counts(traj.final_state, table);
  r.results["final_counts"] = traj.final_state.counts;
  json u = json::array();
  json mg = json::array();
  for (int k = 0; k < cfg.m; ++k) {
    u.push_back(complex_json(track.u()[k]));
    mg.push_back(complex_json(track.M()[k]));
  }
  r.results["u"] = u;
  r.results["M"] = mg;
  r.results["mean_vector"] = vector_json(mean_vector(cfg.n, cfg.m, cfg.initial_type));
  r.table.columns = {"n"};
  for (int i = 0; i < cfg.m; ++i) r.table.columns.push_back("R" + std::to_string(i));
  const auto emit = [&](const Composition& c) {
    std::vector<double> row{static_cast<double>(c.n)};
    for (auto v : c.counts) row.push_back(static_cast<double>(v));
    r.table.rows.push_back(std::move(row));
  };
  if (cfg.history) {
    for (const auto& c : traj.states) emit(c);
  } else {
    emit(traj.final_state);
  }
  base_diagnostics(r, cfg, t0, static_cast<double>(cfg.n), "urn steps");
  return r;
}

// ---------------------------------------------------------------------------
// clt

namespace {

struct CltReplicate {
  // [checkpoint][target index] -> X
  std::vector<std::vector<Eigen::VectorXd>> X;
  // [checkpoint][target index] -> sup-norm difference between modes (large k only)
  std::vector<std::vector<double>> mode_gap;
  // [extra limit][target index] -> X at the first checkpoint
  std::vector<std::vector<Eigen::VectorXd>> sweep;
  // theorem-level statistic at the first checkpoint
  Eigen::VectorXd theorem;
};

}  // namespace

Report cmd_clt(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  Report r;
  r.command = "clt";
  r.config = cfg.to_json();
  const UrnParams params{cfg.m, cfg.initial_type};
  params.validate();
  const int m = cfg.m;
  const std::uint64_t n = cfg.n;
  if (n < 2) throw ParameterError("clt: n must be >= 2");
  if (cfg.reps < 3) throw ParameterError("clt: need at least 3 replicates");
  const std::vector<int> ks = target_ks(cfg);
  const bool all_blocks = static_cast<int>(ks.size()) == m / 2 && m >= 7;

  std::vector<int> large_all;
  for (int k = 1; k <= m / 2; ++k)
    if (projection_kind(m, k) == ProjectionKind::Large) large_all.push_back(k);
  bool need_limit = all_blocks && !large_all.empty();
  for (int k : ks) need_limit = need_limit || projection_kind(m, k) == ProjectionKind::Large;

  std::vector<std::uint64_t> limits = cfg.n_limits;
  if (limits.empty()) limits.push_back(64 * n);
  for (auto l : limits)
    if (l < n) throw ParameterError("clt: every n_limit must be >= n");
  const std::vector<std::uint64_t> checkpoints = {n, 2 * n, 4 * n};

  std::set<std::uint64_t> point_set(checkpoints.begin(), checkpoints.end());
  if (need_limit) point_set.insert(limits.begin(), limits.end());
  const std::vector<std::uint64_t> points(point_set.begin(), point_set.end());
  const auto tables = CenteringTable::along(params, points);
  const auto point_index = [&](std::uint64_t p) {
    return static_cast<std::size_t>(std::lower_bound(points.begin(), points.end(), p) - points.begin());
  };
  const NormalizationMode other_mode =
      cfg.mode == NormalizationMode::GammaRatio ? NormalizationMode::PowerPhase : NormalizationMode::GammaRatio;

  const auto reps = run_replicates(cfg.reps, cfg.threads, cfg.seed, [&](std::size_t, Rng& rng) {
    UrnProcess urn(params);
    std::vector<MartingaleTrack> tracks;
    tracks.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      urn.advance_to(points[i], rng);
      tracks.push_back(MartingaleTrack::from_counts(urn.state(), tables[i]));
    }
    auto xi_at = [&](std::uint64_t limit) {
      XiMap xi;
      if (need_limit) {
        const auto& t = tracks[point_index(limit)];
        for (int k : large_all) xi.emplace(k, xi_estimate(t, k));
      }
      return xi;
    };
    const XiMap xi = xi_at(limits.front());

    CltReplicate out;
    out.X.resize(checkpoints.size());
    out.mode_gap.resize(checkpoints.size());
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      const auto& track = tracks[point_index(checkpoints[c])];
      for (int k : ks) {
        Eigen::VectorXd x = x_statistic(track, xi, k, cfg.mode);
        double gap = 0.0;
        if (projection_kind(m, k) == ProjectionKind::Large) {
          gap = (x - x_statistic(track, xi, k, other_mode)).cwiseAbs().maxCoeff();
        }
        out.X[c].push_back(std::move(x));
        out.mode_gap[c].push_back(gap);
      }
    }
    for (std::size_t e = 1; e < limits.size(); ++e) {
      const XiMap xi_e = xi_at(limits[e]);
      std::vector<Eigen::VectorXd> row;
      for (int k : ks) row.push_back(x_statistic(tracks[point_index(n)], xi_e, k, cfg.mode));
      out.sweep.push_back(std::move(row));
    }
    if (all_blocks) {
      Eigen::VectorXd s = Eigen::VectorXd::Zero(m);
      const double damp = m % 6 == 0 ? 1.0 / std::sqrt(std::log(static_cast<double>(n))) : 1.0;
      for (std::size_t i = 0; i < ks.size(); ++i) {
        const bool critical = projection_kind(m, ks[i]) == ProjectionKind::Critical;
        s += (critical ? 1.0 : damp) * out.X[0][i];
      }
      out.theorem = s;
    }
    return out;
  });

  const double sig = cfg.tol.sigmas;
  json blocks = json::array();
  bool pass = true;
  for (std::size_t ti = 0; ti < ks.size(); ++ti) {
    const int k = ks[ti];
    const ProjectionKind kind = projection_kind(m, k);
    const double lambda = lambda_of(m, k);
    const CovMatrix sigma = sigma_k(m, k);
    const Eigen::MatrixXd basis = projection_basis(m, k);
    json block;
    block["k"] = k;
    block["kind"] = kind_name(kind);
    block["lambda"] = lambda;
    block["sigma"] = matrix_json(sigma.entries());
    json cps = json::array();
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      const std::uint64_t nc = checkpoints[c];
      if (kind == ProjectionKind::Large && nc > limits.front()) continue;
      std::vector<Eigen::VectorXd> rows;
      rows.reserve(reps.size());
      for (const auto& rep : reps) rows.push_back(rep.X[c][ti]);
      const Eigen::MatrixXd samples = stack(rows);
      const CovEstimate est = estimate_covariance(samples);
      const double budget = kind == ProjectionKind::Large ? bias_budget(nc, limits.front(), lambda) : 0.0;
      const CovComparison cmp = compare_covariance(est.covariance, est.standard_error, sigma.entries(), sig, budget, basis);
      const Eigen::MatrixXd coords = samples * basis;
      json normality = json::array();
      bool normal_ok = true;
      for (Eigen::Index col = 0; col < coords.cols(); ++col) {
        const Eigen::VectorXd v = coords.col(col);
        const auto d = normality_diagnostic(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())), sig);
        normal_ok = normal_ok && d.pass;
        normality.push_back(json{{"skewness", d.skewness},
                                 {"excess_kurtosis", d.excess_kurtosis},
                                 {"skewness_threshold", d.skewness_threshold},
                                 {"kurtosis_threshold", d.kurtosis_threshold},
                                 {"pass", d.pass}});
      }
      bool eig_ok = true;
      for (double ratio : cmp.plane_eigen_ratio) eig_ok = eig_ok && std::abs(ratio - 1.0) <= cfg.tol.critical_rel;
      bool ok = false;
      switch (kind) {
        case ProjectionKind::Small:
        case ProjectionKind::Alternating: ok = cmp.within_sigmas && normal_ok; break;
        case ProjectionKind::Critical: ok = eig_ok; break;
        case ProjectionKind::Large: ok = cmp.within_budget; break;
        case ProjectionKind::Drift: break;
      }
      double gap = 0.0;
      for (const auto& rep : reps) gap = std::max(gap, rep.mode_gap[c][ti]);
      json cj;
      cj["n"] = nc;
      cj["covariance"] = matrix_json(est.covariance);
      cj["standard_error"] = matrix_json(est.standard_error);
      cj["mean"] = vector_json(est.mean);
      cj["max_abs_z"] = cmp.max_abs_z;
      cj["max_excess"] = cmp.max_excess;
      cj["rel_frobenius"] = cmp.rel_frobenius;
      cj["plane_eigen_ratio"] = cmp.plane_eigen_ratio;
      cj["bias_budget"] = budget;
      cj["within_sigmas"] = cmp.within_sigmas;
      cj["within_budget"] = cmp.within_budget;
      cj["normality"] = normality;
      cj["normality_pass"] = normal_ok;
      if (kind == ProjectionKind::Large) {
        cj["mode_discrepancy"] = gap;
      } else {
        const Eigen::MatrixXd exact = exact_x_covariance(m, nc, k, k);
        const CovComparison ex = compare_covariance(exact, est.standard_error, sigma.entries(), sig, 0.0, basis);
        const CovComparison mc = compare_covariance(est.covariance, est.standard_error, exact, sig, 0.0, {});
        cj["exact_finite_n"] = json{{"covariance", matrix_json(exact)},
                                    {"plane_eigen_ratio", ex.plane_eigen_ratio},
                                    {"rel_frobenius", ex.rel_frobenius},
                                    {"monte_carlo_max_abs_z", mc.max_abs_z}};
      }
      cj["pass"] = ok;
      if (c == 0) pass = pass && ok;
      cps.push_back(cj);
    }
    block["checkpoints"] = cps;
    if (kind == ProjectionKind::Large && !reps.front().sweep.empty()) {
      json sweep = json::array();
      double prev = std::numeric_limits<double>::infinity();
      bool shrinking = true;
      for (std::size_t e = 0; e < limits.size(); ++e) {
        std::vector<Eigen::VectorXd> rows;
        for (const auto& rep : reps) rows.push_back(e == 0 ? rep.X[0][ti] : rep.sweep[e - 1][ti]);
        const CovEstimate est = estimate_covariance(stack(rows));
        const double budget = bias_budget(n, limits[e], lambda);
        const CovComparison cmp =
            compare_covariance(est.covariance, est.standard_error, sigma.entries(), sig, budget, basis);
        shrinking = shrinking && cmp.rel_frobenius < prev;
        prev = cmp.rel_frobenius;
        sweep.push_back(json{{"n_limit", limits[e]},
                             {"bias_budget", budget},
                             {"rel_frobenius", cmp.rel_frobenius},
                             {"plane_eigen_ratio", cmp.plane_eigen_ratio},
                             {"within_budget", cmp.within_budget}});
      }
      block["limit_sweep"] = sweep;
      block["limit_sweep_shrinking"] = shrinking;
    }
    blocks.push_back(block);
  }
  r.results["blocks"] = blocks;

  // cross-block correlations at the first checkpoint
  json cross = json::array();
  double max_cross_z = 0.0;
  const double sqrt_r = std::sqrt(static_cast<double>(reps.size()));
  for (std::size_t a = 0; a < ks.size(); ++a) {
    for (std::size_t b = a + 1; b < ks.size(); ++b) {
      const Eigen::MatrixXd ba = projection_basis(m, ks[a]);
      const Eigen::MatrixXd bb = projection_basis(m, ks[b]);
      std::vector<Eigen::VectorXd> ra, rb;
      for (const auto& rep : reps) {
        ra.push_back(ba.transpose() * rep.X[0][a]);
        rb.push_back(bb.transpose() * rep.X[0][b]);
      }
      const Eigen::MatrixXd corr = cross_correlation(stack(ra), stack(rb));
      const double z = corr.cwiseAbs().maxCoeff() * sqrt_r;
      max_cross_z = std::max(max_cross_z, z);
      json cj{{"k", ks[a]}, {"l", ks[b]}, {"correlation", matrix_json(corr)}, {"max_abs_z", z}};
      const bool exact_available = projection_kind(m, ks[a]) != ProjectionKind::Large &&
                                   projection_kind(m, ks[b]) != ProjectionKind::Large;
      if (exact_available) {
        const Eigen::MatrixXd cab = ba.transpose() * exact_x_covariance(m, n, ks[a], ks[b]) * bb;
        const Eigen::MatrixXd caa = ba.transpose() * exact_x_covariance(m, n, ks[a], ks[a]) * ba;
        const Eigen::MatrixXd cbb = bb.transpose() * exact_x_covariance(m, n, ks[b], ks[b]) * bb;
        Eigen::MatrixXd exact_corr(cab.rows(), cab.cols());
        for (Eigen::Index i = 0; i < cab.rows(); ++i)
          for (Eigen::Index j = 0; j < cab.cols(); ++j) exact_corr(i, j) = cab(i, j) / std::sqrt(caa(i, i) * cbb(j, j));
        cj["exact_finite_n_correlation"] = matrix_json(exact_corr);
        cj["exact_max_abs_z"] = exact_corr.cwiseAbs().maxCoeff() * sqrt_r;
      } else {
        cj["exact_finite_n_correlation"] = "zero: future martingale increments are uncorrelated with the present";
      }
      cross.push_back(cj);
    }
  }
  const bool cross_ok = max_cross_z <= sig;
  r.results["cross_blocks"] = json{{"pairs", cross}, {"max_abs_z", max_cross_z}, {"pass", cross_ok}};
  pass = pass && cross_ok;

  if (all_blocks) {
    std::vector<Eigen::VectorXd> rows;
    for (const auto& rep : reps) rows.push_back(rep.theorem);
    const CovEstimate est = estimate_covariance(stack(rows));
    const CovMatrix total = sigma_total(m);
    double budget = 0.0;
    for (int k : large_all) budget = std::max(budget, bias_budget(n, limits.front(), lambda_of(m, k)));
    const CovComparison cmp = compare_covariance(est.covariance, est.standard_error, total.entries(), sig, budget, {});
    r.results["theorem"] = json{{"statistic", m % 6 == 0 ? "X_{m/6} + (log n)^{-1/2} sum_{k != m/6} X_k" : "sum_k X_k"},
                                {"covariance", matrix_json(est.covariance)},
                                {"sigma_total", matrix_json(total.entries())},
                                {"max_abs_z", cmp.max_abs_z},
                                {"rel_frobenius", cmp.rel_frobenius},
                                {"bias_budget", budget},
                                {"within_budget", cmp.within_budget}};
    pass = pass && cmp.within_budget;
  }
  r.pass = pass;

  r.table.columns = {"k", "n", "max_abs_z", "rel_frobenius", "bias_budget", "pass"};
  for (const auto& b : blocks) {
    for (const auto& c : b["checkpoints"]) {
      r.table.rows.push_back({b["k"].get<double>(), c["n"].get<double>(), c["max_abs_z"].get<double>(),
                              c["rel_frobenius"].get<double>(), c["bias_budget"].get<double>(),
                              c["pass"].get<bool>() ? 1.0 : 0.0});
    }
  }
  const double steps = static_cast<double>(cfg.reps) * static_cast<double>(points.back());
  base_diagnostics(r, cfg, t0, steps, "urn steps");
  r.diagnostics["points"] = points;
  r.diagnostics["xi_policy"] = "Xi_k realized as M_{N,k} at N = n_limits[0]; bias budget (n/N)^(lambda_k - 1/2)";
  return r;
}

// ---------------------------------------------------------------------------
// rate

Report cmd_rate(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  Report r;
  r.command = "rate";
  r.config = cfg.to_json();
  const int m = cfg.m;
  UrnParams{m, 0}.validate();
  const std::uint64_t n = cfg.n;
  const std::uint64_t n_limit = cfg.n_limits.empty() ? 100 * n : cfg.n_limits.front();
  const std::uint64_t lo = cfg.n_min > 0 ? cfg.n_min : std::min<std::uint64_t>(1000, n);
  const auto grid = dyadic_grid(lo, n);
  bool pass = true;

  std::vector<int> large;
  for (int k = 1; k <= m / 2; ++k)
    if (projection_kind(m, k) == ProjectionKind::Large) large.push_back(k);
  std::vector<int> gated = cfg.ks;

  json residual = json::array();
  for (int k : large) {
    const auto rows = residual_l2_grid(grid, m, k, n_limit);
    bool monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i) monotone = monotone && rows[i].raw <= rows[i - 1].raw;
    const bool close = std::abs(rows.back().normalized - 1.0) <= cfg.tol.rate_rel;
    json g = json::array();
    for (const auto& row : rows) {
      g.push_back(json{{"n", row.n},
                       {"raw", row.raw},
                       {"tail", row.tail},
                       {"value", row.value},
                       {"normalized", row.normalized},
                       {"raw_normalized", row.raw_normalized}});
      r.table.rows.push_back({static_cast<double>(k), static_cast<double>(row.n), row.raw, row.value, row.normalized});
    }
    const bool gate = gated.empty() || std::find(gated.begin(), gated.end(), k) != gated.end();
    if (gate) pass = pass && close && monotone;
    residual.push_back(json{{"k", k},
                            {"lambda", lambda_of(m, k)},
                            {"n_limit", n_limit},
                            {"extrapolation_model", rows.front().model},
                            {"xi_second_moment", rows.front().second_moment_limit + rows.front().tail},
                            {"grid", g},
                            {"normalized_at_n", rows.back().normalized},
                            {"monotone_raw", monotone},
                            {"within_tolerance", close}});
  }
  r.table.columns = {"k", "n", "raw", "value", "normalized"};
  r.results["residual_l2"] = residual;

  // covariance scale of Pi_{n,k}
  json cov = json::array();
  const auto tables = CenteringTable::along(UrnParams{m, 0}, std::vector<std::uint64_t>{n});
  for (int k = 1; k <= m / 2; ++k) {
    const ProjectionKind kind = projection_kind(m, k);
    const double lambda = lambda_of(m, k);
    const double nd = static_cast<double>(n);
    double ratio = 0.0;
    std::string law;
    if (kind == ProjectionKind::Large) {
      const auto res = residual_l2(n, m, k, n_limit);
      ratio = std::norm(tables[0].growth(k)) * res.value * (2.0 * lambda - 1.0) / nd;
      law = "n / |2 lambda - 1|";
    } else {
      const std::uint64_t cp[] = {n};
      const double var = cross_moment_path(m, k, (m - k) % m, cp).front().centered.real();
      if (kind == ProjectionKind::Critical) {
        ratio = var / (nd * std::log(nd));
        law = "n log n";
      } else {
        ratio = var * std::abs(2.0 * lambda - 1.0) / nd;
        law = "n / |2 lambda - 1|";
      }
    }
    const double tol = kind == ProjectionKind::Critical ? cfg.tol.critical_rel : cfg.tol.rate_rel;
    const bool ok = std::abs(ratio - 1.0) <= tol;
    const bool gate = gated.empty() ? kind == ProjectionKind::Critical
                                    : std::find(gated.begin(), gated.end(), k) != gated.end();
    if (gate) pass = pass && ok;
    cov.push_back(json{{"k", k}, {"kind", kind_name(kind)}, {"law", law}, {"ratio", ratio},
                       {"tolerance", tol}, {"within_tolerance", ok}, {"gating", gate}});
  }
  r.results["pi_covariance_scale"] = cov;

  // cross residuals between distinct large projections
  json mixed = json::array();
  std::vector<int> large_all;
  for (int k = 1; k < m; ++k)
    if (projection_kind(m, k) == ProjectionKind::Large) large_all.push_back(k);
  for (int k : large_all) {
    if (k > m / 2) continue;
    for (int l : large_all) {
      if (l <= k || l == m - k) continue;
      std::vector<std::uint64_t> cps = grid;
      cps.push_back(n_limit);
      const auto path = cross_moment_path(m, k, l, cps);
      double worst = 0.0;
      json g = json::array();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double nd = static_cast<double>(grid[i]);
        const double measured = std::abs(path.back().martingale - path[i].martingale);
        const double scale = 1.0 / nd + std::pow(nd, lambda_of(m, k + l) - lambda_of(m, k) - lambda_of(m, l));
        worst = std::max(worst, measured / scale);
        g.push_back(json{{"n", grid[i]}, {"measured", measured}, {"scale", scale}, {"ratio", measured / scale}});
      }
      const bool ok = worst <= cfg.tol.mixed_ratio;
      pass = pass && ok;
      mixed.push_back(json{{"k", k}, {"l", l}, {"grid", g}, {"max_ratio", worst}, {"within_bound", ok}});
    }
  }
  r.results["mixed_residual"] = mixed;
  r.pass = pass;
  base_diagnostics(r, cfg, t0, 0.0, "");
  return r;
}

// ---------------------------------------------------------------------------
// rank

Report cmd_rank(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  Report r;
  r.command = "rank";
  r.config = cfg.to_json();
  const int lo = cfg.m_min > 0 ? cfg.m_min : 7;
  const int hi = std::max(cfg.m, lo);
  if (lo < 7) throw DomainError("rank: theorem-level covariance is defined for m >= 7");
  constexpr double kRankTol = 1e-9;
  bool pass = true;
  json rows = json::array();
  r.table.columns = {"m", "rank", "expected", "idempotence_residual"};
  for (int m = lo; m <= hi; ++m) {
    const CovMatrix total = sigma_total(m);
    const int rank = numerical_rank(total, kRankTol);
    const int expected = m % 6 == 0 ? 2 : m - 1;
    json row{{"m", m}, {"rank", rank}, {"expected", expected}, {"match", rank == expected}};
    double idem = std::numeric_limits<double>::quiet_NaN();
    if (m % 6 == 0) {
      const Eigen::MatrixXd p = m * total.entries();
      idem = (p * p - p).cwiseAbs().maxCoeff();
      row["idempotence_residual"] = idem;
      pass = pass && idem < 1e-10;
    }
    // resolution of the identity sum_k m v_k v_k^*
    const EigenData eig = eigen_data(m);
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Zero(m, m);
    for (int k = 0; k < m; ++k) id += static_cast<double>(m) * eig.v[k] * eig.v[k].adjoint();
    row["completeness_residual"] = (id - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff();
    row["eigenvalues"] = vector_json(total.eigenvalues());
    rows.push_back(row);
    pass = pass && rank == expected;
    r.table.rows.push_back({static_cast<double>(m), static_cast<double>(rank), static_cast<double>(expected), idem});
  }
  r.results["ranks"] = rows;
  r.results["rank_tolerance"] = kRankTol;
  r.pass = pass;
  base_diagnostics(r, cfg, t0, 0.0, "");
  return r;
}

// ---------------------------------------------------------------------------
// fixpoint

namespace {

struct ComplexMoments {
  MeanEstimate re, im, sq_re, sq_im, abs2, abs4;
};

ComplexMoments complex_moments(const std::vector<cdouble>& z) {
  const std::size_t r = z.size();
  std::vector<double> re(r), im(r), sre(r), sim(r), a2(r), a4(r);
  for (std::size_t i = 0; i < r; ++i) {
    re[i] = z[i].real();
    im[i] = z[i].imag();
    const cdouble sq = z[i] * z[i];
    sre[i] = sq.real();
    sim[i] = sq.imag();
    a2[i] = std::norm(z[i]);
    a4[i] = a2[i] * a2[i];
  }
  return {estimate_mean(re), estimate_mean(im), estimate_mean(sre), estimate_mean(sim), estimate_mean(a2), estimate_mean(a4)};
}

double two_sample_z(const MeanEstimate& a, const MeanEstimate& b) {
  const double se = std::sqrt(a.standard_error * a.standard_error + b.standard_error * b.standard_error);
  return se > 0 ? (a.mean - b.mean) / se : 0.0;
}

}  // namespace

Report cmd_fixpoint(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  Report r;
  r.command = "fixpoint";
  r.config = cfg.to_json();
  const int m = cfg.m;
  const UrnParams params{m, 0};
  params.validate();
  const int k = cfg.ks.empty() ? 1 : cfg.ks.front();
  if (k < 1 || k >= m) throw ParameterError("fixpoint: k out of range");
  if (projection_kind(m, k) != ProjectionKind::Large) throw DomainError("fixpoint: requires lambda_k > 1/2");
  const std::uint64_t big_n = cfg.n;
  const std::size_t reps = cfg.reps;
  if (reps < 3) throw ParameterError("fixpoint: need at least 3 replicates");
  const CenteringTable table(params, big_n);

  // 3R independent trajectories: R for the left side, 2R for the two
  // independent copies on the right.
  const auto xi = run_replicates(3 * reps, cfg.threads, cfg.seed, [&](std::size_t, Rng& rng) {
    UrnProcess urn(params);
    urn.advance_to(big_n, rng);
    return martingale_value(urn.state(), k, table);
  });
  const std::uint64_t u_seed = mix64(cfg.seed ^ 0x5555555555555555ULL);
  std::vector<cdouble> lhs(xi.begin(), xi.begin() + static_cast<std::ptrdiff_t>(reps));
  std::vector<cdouble> rhs(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    Rng rng = Rng::for_stream(u_seed, i);
    rhs[i] = fixpoint_rhs(xi[reps + i], xi[2 * reps + i], rng.open01(), m, k);
  }
  const ComplexMoments a = complex_moments(lhs);
  const ComplexMoments b = complex_moments(rhs);
  const double sig = cfg.tol.sigmas;
  json moments = json::array();
  bool pass = true;
  const auto add = [&](const char* name, const MeanEstimate& x, const MeanEstimate& y) {
    const double z = two_sample_z(x, y);
    pass = pass && std::abs(z) <= sig;
    moments.push_back(json{{"moment", name}, {"xi", x.mean}, {"xi_se", x.standard_error},
                           {"rhs", y.mean}, {"rhs_se", y.standard_error}, {"z", z}});
    r.table.rows.push_back({x.mean, x.standard_error, y.mean, y.standard_error, z});
  };
  r.table.columns = {"xi", "xi_se", "rhs", "rhs_se", "z"};
  add("Re E[Z]", a.re, b.re);
  add("Im E[Z]", a.im, b.im);
  add("Re E[Z^2]", a.sq_re, b.sq_re);
  add("Im E[Z^2]", a.sq_im, b.sq_im);
  add("E|Z|^2", a.abs2, b.abs2);
  add("E|Z|^4", a.abs4, b.abs4);
  r.results["moments"] = moments;

  json centered = json::array();
  for (const auto* s : {&a, &b}) {
    const double zr = s->re.mean / s->re.standard_error;
    const double zi = s->im.mean / s->im.standard_error;
    const bool ok = std::abs(zr) <= sig && std::abs(zi) <= sig;
    pass = pass && ok;
    centered.push_back(json{{"z_re", zr}, {"z_im", zi}, {"pass", ok}});
  }
  r.results["centered"] = centered;

  const cdouble integral = integrate_g_k(m, k);
  const bool quad_ok = std::abs(integral) <= 1e-10;
  pass = pass && quad_ok;
  r.results["g_integral"] = json{{"value", complex_json(integral)}, {"pass", quad_ok}};
  r.results["exact_second_moment_M_N"] = second_moment_M(big_n, m, k);
  r.results["k"] = k;
  r.results["n_limit"] = big_n;
  r.pass = pass;
  base_diagnostics(r, cfg, t0, 3.0 * static_cast<double>(reps) * static_cast<double>(big_n), "urn steps");
  r.diagnostics["xi_policy"] = "Xi_k realized as M_{N,k}; both sides share the same N";
  return r;
}

// ---------------------------------------------------------------------------
// oracle

namespace {

// Chi-square goodness of fit of sampled compositions against an exact law.
json law_check(const ExactDist& exact, const std::vector<Composition>& samples, double p_threshold, bool& pass) {
  std::map<CompositionKey, double> observed;
  for (const auto& c : samples) observed[CompositionKey(c.counts.begin(), c.counts.end())] += 1.0;
  const double total = static_cast<double>(samples.size());
  double chi2 = 0.0;
  double max_z = 0.0;
  std::size_t outside = 0;
  for (const auto& [key, p] : exact.pmf) {
    const double expected = p * total;
    const double obs = observed.contains(key) ? observed[key] : 0.0;
    chi2 += (obs - expected) * (obs - expected) / expected;
    max_z = std::max(max_z, std::abs(obs - expected) / std::sqrt(total * p * (1.0 - p)));
  }
  for (const auto& [key, count] : observed) outside += exact.pmf.contains(key) ? 0 : static_cast<std::size_t>(count);
  const double dof = static_cast<double>(exact.pmf.size() - 1);
  const boost::math::chi_squared dist(dof);
  const double p_value = boost::math::cdf(boost::math::complement(dist, chi2));
  const bool ok = p_value > p_threshold && outside == 0;
  pass = pass && ok;
  return json{{"support", exact.pmf.size()}, {"samples", samples.size()}, {"chi2", chi2}, {"dof", dof},
              {"p_value", p_value}, {"max_point_z", max_z}, {"outside_support", outside}, {"pass", ok}};
}

}  // namespace

Report cmd_oracle(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  Report r;
  r.command = "oracle";
  r.config = cfg.to_json();
  const int m_lo = cfg.m_min > 0 ? cfg.m_min : 2;
  const int m_hi = cfg.m;
  const std::uint64_t n_hi = cfg.n;
  if (m_lo < 2 || m_hi < m_lo) throw ParameterError("oracle: need 2 <= m_min <= m");
  // guard up front on the largest instance
  if (lattice_size_bound(m_hi, n_hi) > kOracleSizeGuard) {
    throw ResourceError("oracle: enumeration for m=" + std::to_string(m_hi) + ", n=" + std::to_string(n_hi) +
                        " exceeds the size guard");
  }
  bool pass = true;
  const auto& tol = cfg.tol;

  // closed-form moments against enumeration
  double worst_mean = 0.0;
  double worst_mixed = 0.0;
  double worst_vector = 0.0;
  for (int m = m_lo; m <= m_hi; ++m) {
    for (std::uint64_t n = 0; n <= n_hi; ++n) {
      const ExactDist dist = exact_distribution(m, 0, n);
      const DistMoments mom = dist_moments(dist);
      worst_vector = std::max(worst_vector, (mom.mean - mean_vector(n, m)).cwiseAbs().maxCoeff());
      MomentTable table(m, n);
      for (int k = 0; k < m; ++k) {
        worst_mean = std::max(worst_mean, std::abs(expect_u(dist, k) - table.mean_u(k)));
        for (int l = k; l < m; ++l) worst_mixed = std::max(worst_mixed, std::abs(expect_uu(dist, k, l) - table.mixed(k, l)));
      }
    }
  }
  const bool moments_ok = std::max({worst_mean, worst_mixed, worst_vector}) < tol.oracle_abs;
  pass = pass && moments_ok;
  r.results["moments"] = json{{"m_range", {m_lo, m_hi}}, {"n_max", n_hi}, {"max_mean_u_deviation", worst_mean},
                              {"max_mixed_deviation", worst_mixed}, {"max_mean_vector_deviation", worst_vector},
                              {"pass", moments_ok}};

  // martingale property
  const int mg_m = std::min(m_hi, 6);
  const std::uint64_t mg_n = std::min<std::uint64_t>(n_hi, 6);
  double worst_mg = 0.0;
  for (int m = m_lo; m <= mg_m; ++m)
    for (std::uint64_t n = 0; n <= mg_n; ++n) worst_mg = std::max(worst_mg, martingale_property_deviation(m, n));
  const bool mg_ok = worst_mg < tol.martingale_abs;
  pass = pass && mg_ok;
  r.results["martingale"] = json{{"m_range", {m_lo, mg_m}}, {"n_max", mg_n}, {"max_deviation", worst_mg}, {"pass", mg_ok}};

  // shift and recurrence identities
  const int id_m = std::min(m_hi, 7);
  const std::uint64_t id_n = std::min<std::uint64_t>(n_hi, 6);
  double worst_shift = 0.0;
  double worst_tv = 0.0;
  bool all_exact = true;
  for (int m = m_lo; m <= id_m; ++m) {
    for (std::uint64_t n = 0; n <= id_n; ++n) {
      for (int j = 0; j <= m; ++j) {
        const IdentityCheck s = shift_check(m, j, n, cfg.exact_rational);
        worst_shift = std::max(worst_shift, s.max_deviation);
        all_exact = all_exact && s.exact;
      }
      if (n >= 1) {
        const IdentityCheck rc = recurrence_check(m, n, cfg.exact_rational);
        worst_tv = std::max(worst_tv, rc.max_deviation);
        all_exact = all_exact && rc.exact;
      }
    }
  }
  const bool id_ok = cfg.exact_rational ? all_exact : (worst_shift < tol.identity_abs && worst_tv < tol.identity_abs);
  pass = pass && id_ok;
  r.results["identities"] = json{{"m_range", {m_lo, id_m}}, {"n_max", id_n}, {"exact_rational", cfg.exact_rational},
                                 {"max_shift_deviation", worst_shift}, {"max_recurrence_tv", worst_tv},
                                 {"all_exact", all_exact}, {"pass", id_ok}};

  // sampled laws: urn kernel and tree embedding against the enumeration
  {
    const int lm = 3;
    const std::uint64_t ln = 4;
    const std::size_t runs = std::max<std::size_t>(cfg.reps, 1000);
    const ExactDist exact = exact_distribution(lm, 0, ln);
    std::vector<Composition> urn_samples;
    std::vector<Composition> bst_samples;
    urn_samples.reserve(runs);
    bst_samples.reserve(runs);
    const auto states = sample_compositions(UrnParams{lm, 0}, {ln}, runs, cfg.seed, cfg.threads);
    for (const auto& s : states) urn_samples.push_back(s.front());
    for (std::size_t i = 0; i < runs; ++i) bst_samples.push_back(bst_simulate(lm, ln, stream_seed(cfg.seed ^ 0xB57ULL, i)));
    json laws;
    laws["urn"] = law_check(exact, urn_samples, tol.chi2_p, pass);
    laws["bst"] = law_check(exact, bst_samples, tol.chi2_p, pass);
    laws["m"] = lm;
    laws["n"] = ln;
    r.results["laws"] = laws;
  }
  r.pass = pass;
  r.table.columns = {"mean_dev", "mixed_dev", "martingale_dev", "shift_dev", "recurrence_tv"};
  r.table.rows.push_back({worst_mean, worst_mixed, worst_mg, worst_shift, worst_tv});
  base_diagnostics(r, cfg, t0, 0.0, "");
  return r;
}

// ---------------------------------------------------------------------------
// mean

Report cmd_mean(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  Report r;
  r.command = "mean";
  r.config = cfg.to_json();
  const int m = cfg.m;
  if (m < 7) throw DomainError("mean: expansion check needs m >= 7");
  const std::uint64_t lo = cfg.n_min > 0 ? cfg.n_min : 100;
  const auto grid = dyadic_grid(lo, cfg.n);
  const auto means = mean_vector_path(m, 0, grid);
  const EigenData eig = eigen_data(m);
  bool pass = true;
  json rows = json::array();
  std::vector<double> log2n, ratio;
  double worst_sum = 0.0;
  r.table.columns = {"n", "log_n", "ratio"};
  for (int i = 0; i < m; ++i) r.table.columns.push_back("osc" + std::to_string(i));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double nd = static_cast<double>(grid[i]);
    const Eigen::VectorXd expansion = mean_expansion(grid[i], m);
    const double ratio_i = (means[i] - expansion).norm() / std::sqrt(nd);
    const double sum_dev = std::abs(means[i].sum() - (nd + 1.0)) / (nd + 1.0);
    worst_sum = std::max(worst_sum, sum_dev);
    log2n.push_back(std::log2(nd));
    ratio.push_back(ratio_i);
    rows.push_back(json{{"n", grid[i]}, {"remainder_over_sqrt_n", ratio_i}, {"relative_sum_deviation", sum_dev}});
    std::vector<double> row{nd, std::log(nd), ratio_i};
    const Eigen::VectorXd osc = (means[i].array() - (nd + 1.0) / m) / std::pow(nd, eig.lambda[1]);
    for (int t = 0; t < m; ++t) row.push_back(osc[t]);
    r.table.rows.push_back(std::move(row));
  }
  const LinearFit fit = linear_fit(log2n, ratio);
  double mean_ratio = 0.0;
  for (double v : ratio) mean_ratio += v;
  mean_ratio /= static_cast<double>(ratio.size());
  const double relative_growth = fit.slope / mean_ratio;
  const bool bounded = relative_growth <= cfg.tol.mean_growth;
  const bool sums_ok = worst_sum < 1e-12;
  pass = bounded && sums_ok;
  r.results["grid"] = rows;
  r.results["trend"] = json{{"slope_per_doubling", fit.slope}, {"slope_se", fit.slope_standard_error},
                            {"mean_ratio", mean_ratio}, {"relative_growth_per_doubling", relative_growth},
                            {"bounded", bounded}};
  r.results["max_relative_sum_deviation"] = worst_sum;

  // oscillation frequency of the leading component in log n
  if (large_pair_count(m) >= 1 && cfg.n >= 10000) {
    constexpr int kPoints = 240;
    const double a = std::log(1000.0);
    const double b = std::log(static_cast<double>(cfg.n));
    std::vector<std::uint64_t> dense;
    for (int i = 0; i < kPoints; ++i) {
      dense.push_back(static_cast<std::uint64_t>(std::llround(std::exp(a + (b - a) * i / (kPoints - 1)))));
    }
    dense.erase(std::unique(dense.begin(), dense.end()), dense.end());
    const auto dm = mean_vector_path(m, 0, dense);
    std::vector<double> t, y;
    for (std::size_t i = 0; i < dense.size(); ++i) {
      const double nd = static_cast<double>(dense[i]);
      t.push_back(std::log(nd));
      y.push_back((dm[i][0] - (nd + 1.0) / m) / std::pow(nd, eig.lambda[1]));
    }
    // least squares y ~ c0 + c1 cos(w t) + c2 sin(w t) over a frequency scan
    double best_w = eig.mu[1];
    double best_sse = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= 2000; ++s) {
      const double w = eig.mu[1] * (0.5 + s / 2000.0);
      Eigen::MatrixXd design(static_cast<Eigen::Index>(t.size()), 3);
      Eigen::VectorXd target(static_cast<Eigen::Index>(t.size()));
      for (std::size_t i = 0; i < t.size(); ++i) {
        design(static_cast<Eigen::Index>(i), 0) = 1.0;
        design(static_cast<Eigen::Index>(i), 1) = std::cos(w * t[i]);
        design(static_cast<Eigen::Index>(i), 2) = std::sin(w * t[i]);
        target[static_cast<Eigen::Index>(i)] = y[i];
      }
      const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(target);
      const double sse = (design * coef - target).squaredNorm();
      if (sse < best_sse) {
        best_sse = sse;
        best_w = w;
      }
    }
    r.results["oscillation"] = json{{"predicted_period_log_n", 2.0 * std::numbers::pi / eig.mu[1]},
                                    {"fitted_period_log_n", 2.0 * std::numbers::pi / best_w},
                                    {"relative_error", std::abs(best_w - eig.mu[1]) / best_w}};
  }
  r.pass = pass;
  base_diagnostics(r, cfg, t0, 0.0, "");
  return r;
}

}  // namespace cyclicurn
