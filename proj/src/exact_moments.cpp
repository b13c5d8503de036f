#include "cyclicurn/exact_moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cyclicurn/errors.hpp"
#include "cyclicurn/log_gamma.hpp"
#include "cyclicurn/stats.hpp"

namespace cyclicurn {

namespace {

double wrap_phase(double p) {
  using std::numbers::pi;
  if (p > pi || p <= -pi) {
    p = std::remainder(p, 2.0 * pi);
    if (p <= -pi) p += 2.0 * pi;
  }
  return p;
}

void check_index(int m, int k, const char* what) {
  if (m < 2) throw ParameterError(std::string(what) + ": m must be >= 2");
  if (k < 0 || k >= m) throw ParameterError(std::string(what) + ": index out of range");
}

// Positions of the checkpoints in ascending order of value.
std::vector<std::size_t> ascending(std::span<const std::uint64_t> checkpoints) {
  std::vector<std::size_t> order(checkpoints.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return checkpoints[a] < checkpoints[b]; });
  return order;
}

double lambda_of(int m, int k) { return root_of_unity(k, m).real(); }

}  // namespace

// ---------------------------------------------------------------------------
// LogPolarComplex

LogPolarComplex LogPolarComplex::zero() {
  LogPolarComplex z;
  z.zero_ = true;
  return z;
}

LogPolarComplex LogPolarComplex::from(cdouble z) {
  if (z == cdouble(0.0, 0.0)) return zero();
  return from_log_polar(std::log(std::abs(z)), std::arg(z));
}

LogPolarComplex LogPolarComplex::from_log_polar(double log_modulus, double phase) {
  LogPolarComplex out;
  out.log_modulus_ = log_modulus;
  out.phase_ = wrap_phase(phase);
  return out;
}

double LogPolarComplex::modulus() const { return zero_ ? 0.0 : std::exp(log_modulus_); }

cdouble LogPolarComplex::value() const {
  if (zero_) return 0.0;
  return std::polar(std::exp(log_modulus_), phase_);
}

LogPolarComplex LogPolarComplex::inverse() const {
  if (zero_) throw DomainError("LogPolarComplex: inverse of zero");
  return from_log_polar(-log_modulus_, -phase_);
}

LogPolarComplex& LogPolarComplex::operator*=(const LogPolarComplex& other) {
  if (zero_ || other.zero_) {
    *this = zero();
    return *this;
  }
  log_modulus_ += other.log_modulus_;
  phase_ = wrap_phase(phase_ + other.phase_);
  return *this;
}

// ---------------------------------------------------------------------------
// Gamma ratios and means

LogPolarComplex gamma_ratio(std::uint64_t n, cdouble z) {
  const std::uint64_t cp[] = {n};
  return gamma_ratio_path(z, cp).front();
}

std::vector<LogPolarComplex> gamma_ratio_path(cdouble z, std::span<const std::uint64_t> checkpoints) {
  std::vector<LogPolarComplex> out(checkpoints.size());
  // log-modulus and phase are summed unwrapped with compensation; each
  // factor goes through log1p/atan2 so small terms keep full precision
  CompensatedSum log_mod;
  CompensatedSum phase;
  bool zero = false;
  std::uint64_t s = 0;
  for (std::size_t idx : ascending(checkpoints)) {
    for (const std::uint64_t target = checkpoints[idx]; s < target && !zero; ++s) {
      const cdouble w = z / static_cast<double>(s + 1);
      const double re = 1.0 + w.real();
      if (re == 0.0 && w.imag() == 0.0) {
        zero = true;
        break;
      }
      log_mod.add(0.5 * std::log1p(2.0 * w.real() + std::norm(w)));
      phase.add(std::atan2(w.imag(), re));
    }
    out[idx] = zero ? LogPolarComplex::zero() : LogPolarComplex::from_log_polar(log_mod.value(), phase.value());
  }
  return out;
}

cdouble gamma_at_root(int m, int k) {
  check_index(m, k, "gamma_at_root");
  return gamma(1.0 + root_of_unity(k, m));
}

cdouble mean_u(std::uint64_t n, int m, int k, int initial_type) {
  check_index(m, k, "mean_u");
  check_index(m, initial_type, "mean_u");
  return root_of_unity(static_cast<std::int64_t>(k) * initial_type, m) * gamma_ratio(n, root_of_unity(k, m)).value();
}

std::vector<Eigen::VectorXd> mean_vector_path(int m, int initial_type, std::span<const std::uint64_t> checkpoints) {
  check_index(m, initial_type, "mean_vector");
  std::vector<Eigen::VectorXcd> coords(checkpoints.size(), Eigen::VectorXcd(m));
  for (int k = 0; k < m; ++k) {
    const auto ratios = gamma_ratio_path(root_of_unity(k, m), checkpoints);
    const cdouble phase = root_of_unity(static_cast<std::int64_t>(k) * initial_type, m);
    for (std::size_t i = 0; i < checkpoints.size(); ++i) coords[i][k] = phase * ratios[i].value();
  }
  std::vector<Eigen::VectorXd> out;
  out.reserve(checkpoints.size());
  for (const auto& u : coords) out.push_back(reconstruct(u).real());
  return out;
}

Eigen::VectorXd mean_vector(std::uint64_t n, int m, int initial_type) {
  const std::uint64_t cp[] = {n};
  return mean_vector_path(m, initial_type, cp).front();
}

// ---------------------------------------------------------------------------
// Mixed moments
//
// With a = omega^k + omega^l and b = omega^{k+l}, T_n = E[u_k u_l] obeys
//   T_n = T_{n-1} (1 + a/n) + (b/n) Q_{n-1},   Q_n = prod_{t<=n} (1 + b/t),
// which is the product-plus-sum closed form accumulated left to right.

std::vector<CrossMomentPoint> cross_moment_path(int m, int k, int l, std::span<const std::uint64_t> checkpoints) {
  check_index(m, k, "cross_moment_path");
  check_index(m, l, "cross_moment_path");
  const cdouble wk = root_of_unity(k, m);
  const cdouble wl = root_of_unity(l, m);
  const cdouble a = wk + wl;
  const cdouble b = root_of_unity(static_cast<std::int64_t>(k) + l, m);
  const auto mean_k = gamma_ratio_path(wk, checkpoints);
  const auto mean_l = gamma_ratio_path(wl, checkpoints);
  const cdouble gk = 2 * k == m ? cdouble(1.0) : gamma_at_root(m, k);
  const cdouble gl = 2 * l == m ? cdouble(1.0) : gamma_at_root(m, l);

  std::vector<CrossMomentPoint> out(checkpoints.size());
  cdouble t_acc = 1.0;
  cdouble q_acc = 1.0;
  std::uint64_t s = 0;
  for (std::size_t idx : ascending(checkpoints)) {
    const std::uint64_t n = checkpoints[idx];
    for (; s < n; ++s) {
      const double inv = 1.0 / static_cast<double>(s + 1);
      t_acc = t_acc * (1.0 + a * inv) + b * inv * q_acc;
      q_acc *= 1.0 + b * inv;
    }
    CrossMomentPoint& p = out[idx];
    p.n = n;
    p.mixed = t_acc;
    p.mean_k = mean_k[idx].value();
    p.mean_l = mean_l[idx].value();
    p.centered = p.mixed - p.mean_k * p.mean_l;
    auto scale = [&](int j, const LogPolarComplex& ratio, cdouble g) -> cdouble {
      if (2 * j == m) return static_cast<double>(n);
      return ratio.inverse().value() / g;
    };
    p.martingale = n == 0 ? cdouble(0.0) : scale(k, mean_k[idx], gk) * scale(l, mean_l[idx], gl) * p.centered;
  }
  return out;
}

cdouble mixed_moment(std::uint64_t n, int m, int k, int l) {
  const std::uint64_t cp[] = {n};
  return cross_moment_path(m, k, l, cp).front().mixed;
}

cdouble martingale_scale(std::uint64_t n, int m, int k) {
  check_index(m, k, "martingale_scale");
  if (2 * k == m) return static_cast<double>(n);
  return gamma_ratio(n, root_of_unity(k, m)).inverse().value() / gamma_at_root(m, k);
}

double second_moment_M(std::uint64_t n, int m, int k) {
  check_index(m, k, "second_moment_M");
  const std::uint64_t cp[] = {n};
  return cross_moment_path(m, k, (m - k) % m, cp).front().martingale.real();
}

MomentTable::MomentTable(int m, std::uint64_t n, int initial_type)
    : m_(m), n_(n), initial_type_(initial_type), mixed_(static_cast<std::size_t>(m) * m) {
  check_index(m, initial_type, "MomentTable");
  mean_u_.resize(m);
  for (int k = 0; k < m; ++k) mean_u_[k] = cyclicurn::mean_u(n, m, k, initial_type);
}

Eigen::VectorXd MomentTable::mean_vector() const {
  Eigen::VectorXcd u(m_);
  for (int k = 0; k < m_; ++k) u[k] = mean_u_[k];
  return reconstruct(u).real();
}

cdouble MomentTable::mixed(int k, int l) {
  check_index(m_, k, "MomentTable::mixed");
  check_index(m_, l, "MomentTable::mixed");
  auto& slot = mixed_[static_cast<std::size_t>(k) * m_ + l];
  if (!slot) {
    const cdouble base = mixed_moment(n_, m_, k, l);
    const cdouble phase = root_of_unity((static_cast<std::int64_t>(k) + l) * initial_type_, m_);
    slot = phase * base;
    mixed_[static_cast<std::size_t>(l) * m_ + k] = slot;
  }
  return *slot;
}

// ---------------------------------------------------------------------------
// Residual rates

std::vector<ResidualL2> residual_l2_grid(std::span<const std::uint64_t> ns, int m, int k, std::uint64_t n_limit) {
  check_index(m, k, "residual_l2");
  if (projection_kind(m, k) != ProjectionKind::Large) {
    throw DomainError("residual_l2: requires lambda_k > 1/2");
  }
  const std::uint64_t half = n_limit / 2;
  std::vector<std::uint64_t> cps(ns.begin(), ns.end());
  for (auto n : cps) {
    if (n > n_limit) throw ParameterError("residual_l2: n must not exceed n_limit");
  }
  cps.push_back(half);
  cps.push_back(n_limit);
  const auto path = cross_moment_path(m, k, m - k, cps);
  const double v_limit = path[cps.size() - 1].martingale.real();
  const double v_half = path[cps.size() - 2].martingale.real();
  const double lambda = lambda_of(m, k);
  const double e = 2.0 * lambda - 1.0;
  // E|Xi|^2 - E|M_N|^2 ~ c N^{-e}  =>  tail = (V_N - V_{N/2}) / (2^e - 1)
  const double tail = half > 0 ? (v_limit - v_half) / (std::pow(2.0, e) - 1.0) : 0.0;

  std::vector<ResidualL2> out;
  out.reserve(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    ResidualL2 r;
    r.n = ns[i];
    r.n_limit = n_limit;
    r.lambda = lambda;
    r.second_moment_n = path[i].martingale.real();
    r.second_moment_limit = v_limit;
    r.raw = v_limit - r.second_moment_n;
    r.tail = tail;
    r.value = r.raw + tail;
    const double norm = e * std::pow(static_cast<double>(r.n), e);
    r.normalized = norm * r.value;
    r.raw_normalized = norm * r.raw;
    r.model = "E|Xi|^2 = E|M_N|^2 + (E|M_N|^2 - E|M_{N/2}|^2)/(2^(2*lambda-1) - 1)";
    out.push_back(r);
  }
  return out;
}

ResidualL2 residual_l2(std::uint64_t n, int m, int k, std::uint64_t n_limit) {
  const std::uint64_t ns[] = {n};
  return residual_l2_grid(ns, m, k, n_limit).front();
}

Eigen::VectorXd mean_expansion(std::uint64_t n, int m) {
  if (m < 2) throw ParameterError("mean_expansion: m must be >= 2");
  const EigenData eig = eigen_data(m);
  Eigen::VectorXd out = Eigen::VectorXd::Constant(m, static_cast<double>(n + 1) / m);
  const double log_n = std::log(static_cast<double>(n));
  for (int k = 1; k <= large_pair_count(m); ++k) {
    // n^{omega^k} = n^{lambda_k} n^{i mu_k}
    const cdouble power = std::exp(eig.omega[k] * log_n);
    const cdouble coeff = 2.0 * power / gamma_at_root(m, k);
    out += (coeff * eig.v[k]).real();
  }
  return out;
}

MixedResidualCheck mixed_residual_bound_check(std::uint64_t n, int m, int k, int l, std::uint64_t n_limit) {
  check_index(m, k, "mixed_residual_bound_check");
  check_index(m, l, "mixed_residual_bound_check");
  if (k == l) throw ParameterError("mixed_residual_bound_check: k must differ from l (use residual_l2)");
  if (projection_kind(m, k) != ProjectionKind::Large || projection_kind(m, l) != ProjectionKind::Large) {
    throw DomainError("mixed_residual_bound_check: requires lambda_k, lambda_l > 1/2");
  }
  if (n == 0 || n > n_limit) throw ParameterError("mixed_residual_bound_check: need 0 < n <= n_limit");
  const std::uint64_t cps[] = {n, n_limit};
  const auto path = cross_moment_path(m, k, l, cps);
  // E[(M_n - Xi_k)(M_n - Xi_l)] = E[Xi_k Xi_l] - E[M_{n,k} M_{n,l}] by orthogonal increments
  MixedResidualCheck out;
  out.measured = std::abs(path[1].martingale - path[0].martingale);
  const double nd = static_cast<double>(n);
  out.scale = 1.0 / nd + std::pow(nd, lambda_of(m, k + l) - lambda_of(m, k) - lambda_of(m, l));
  out.ratio = out.measured / out.scale;
  return out;
}

}  // namespace cyclicurn
