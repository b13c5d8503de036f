#include "cyclicurn/residuals.hpp"

#include <cmath>
#include <string>

#include "cyclicurn/errors.hpp"

namespace cyclicurn {

namespace {

bool is_alternating(int m, int k) { return 2 * k == m; }

cdouble scale_from(const LogPolarComplex& ratio, cdouble gamma_root, std::uint64_t n, int m, int k) {
  if (is_alternating(m, k)) return static_cast<double>(n);
  return ratio.inverse().value() / gamma_root;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<CenteringTable> CenteringTable::along(const UrnParams& params, std::span<const std::uint64_t> checkpoints) {
  params.validate();
  const int m = params.m;
  std::vector<CenteringTable> out;
  out.reserve(checkpoints.size());
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    out.push_back(CenteringTable());
    out[i].params_ = params;
    out[i].n_ = checkpoints[i];
    out[i].mean_u_.resize(m);
    out[i].ratio_.resize(m);
    out[i].scale_.resize(m);
    out[i].growth_.resize(m);
  }
  for (int k = 0; k < m; ++k) {
    const cdouble w = root_of_unity(k, m);
    const cdouble phase = root_of_unity(static_cast<std::int64_t>(k) * params.initial_type, m);
    const cdouble g = is_alternating(m, k) ? cdouble(1.0) : gamma_at_root(m, k);
    const auto ratios = gamma_ratio_path(w, checkpoints);
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      auto& t = out[i];
      t.ratio_[k] = ratios[i];
      t.mean_u_[k] = phase * ratios[i].value();
      t.scale_[k] = scale_from(ratios[i], g, t.n_, m, k);
      t.growth_[k] = is_alternating(m, k) ? cdouble(0.0) : g * ratios[i].value();
    }
  }
  return out;
}

CenteringTable::CenteringTable(const UrnParams& params, std::uint64_t n) {
  const std::uint64_t cp[] = {n};
  *this = along(params, cp).front();
}

// ---------------------------------------------------------------------------

MartingaleTrack::MartingaleTrack(const UrnParams& params) : params_(params) {
  params.validate();
  const int m = params.m;
  u_.resize(m);
  M_ = Eigen::VectorXcd::Zero(m);
  ratio_.assign(m, LogPolarComplex());
  gamma_root_.resize(m);
  for (int k = 0; k < m; ++k) {
    u_[k] = root_of_unity(static_cast<std::int64_t>(k) * params.initial_type, m);
    gamma_root_[k] = is_alternating(m, k) ? cdouble(1.0) : gamma_at_root(m, k);
  }
}

MartingaleTrack MartingaleTrack::from_counts(const Composition& state, const CenteringTable& table) {
  if (state.m() != table.m() || state.n != table.n()) {
    throw ParameterError("MartingaleTrack::from_counts: table does not match the state");
  }
  MartingaleTrack t(table.params());
  t.n_ = state.n;
  t.u_ = dft_coordinates(state.counts);
  for (int k = 0; k < t.m(); ++k) t.ratio_[k] = table.ratio(k);
  t.refresh_martingales();
  return t;
}

cdouble MartingaleTrack::centered(int k) const {
  const cdouble mean = root_of_unity(static_cast<std::int64_t>(k) * params_.initial_type, m()) * ratio_[k].value();
  return u_[k] - mean;
}

cdouble MartingaleTrack::growth(int k) const {
  if (is_alternating(m(), k)) throw DomainError("growth factor undefined for k = m/2");
  return gamma_root_[k] * ratio_[k].value();
}

void MartingaleTrack::refresh_martingales() {
  const int m = this->m();
  for (int k = 0; k < m; ++k) {
    if (n_ == 0) {
      M_[k] = 0.0;
    } else {
      M_[k] = scale_from(ratio_[k], gamma_root_[k], n_, m, k) * centered(k);
    }
  }
}

void MartingaleTrack::step(int drawn_type) {
  const int m = this->m();
  if (drawn_type < 0 || drawn_type >= m) throw ParameterError("track step: drawn type out of range");
  const int added = (drawn_type + 1) % m;
  ++n_;
  const double inv = 1.0 / static_cast<double>(n_);
  for (int k = 0; k < m; ++k) {
    u_[k] += coordinate_increment(k, added, m);
    ratio_[k] *= LogPolarComplex::from(1.0 + root_of_unity(k, m) * inv);
  }
  refresh_martingales();
}

MartingaleTrack track_init(const UrnParams& params) { return MartingaleTrack(params); }

MartingaleTrack track_step(MartingaleTrack track, int drawn_type) {
  track.step(drawn_type);
  return track;
}

cdouble martingale_value(const Composition& state, int k, const CenteringTable& table) {
  if (state.n != table.n()) throw ParameterError("martingale_value: table step mismatch");
  if (state.n == 0) return 0.0;
  const cdouble u = dft_coordinate(state.as_vector(), k);
  return table.scale(k) * (u - table.mean_u(k));
}

// ---------------------------------------------------------------------------

XiEstimate xi_estimate(const MartingaleTrack& track, int k) {
  if (k < 1 || k >= track.m()) throw ParameterError("xi_estimate: k out of range");
  if (projection_kind(track.m(), k) != ProjectionKind::Large) {
    throw DomainError("xi_estimate: martingale limit requires lambda_k > 1/2");
  }
  return XiEstimate{k, track.n(), track.M()[k]};
}

Eigen::VectorXcd pi_residual(const MartingaleTrack& track, const std::optional<XiEstimate>& xi, int k) {
  const int m = track.m();
  if (k < 1 || k >= m) throw ParameterError("pi_residual: k out of range");
  const EigenData eig = eigen_data(m);
  if (projection_kind(m, k) == ProjectionKind::Large) {
    if (!xi) throw ParameterError("pi_residual: large projection needs a limit estimate");
    if (xi->k != k) throw ParameterError("pi_residual: limit estimate is for another k");
    return track.growth(k) * (track.M()[k] - xi->value) * eig.v[k];
  }
  return track.centered(k) * eig.v[k];
}

std::string_view mode_name(NormalizationMode mode) {
  return mode == NormalizationMode::PowerPhase ? "power_phase" : "gamma_ratio";
}

NormalizationMode parse_mode(std::string_view name) {
  if (name == "gamma_ratio") return NormalizationMode::GammaRatio;
  if (name == "power_phase") return NormalizationMode::PowerPhase;
  throw ParameterError("unknown normalization mode: " + std::string(name));
}

Eigen::VectorXd x_statistic(const MartingaleTrack& track, const XiMap& xi, int k, NormalizationMode mode) {
  const int m = track.m();
  if (k < 1 || k > m / 2) throw ParameterError("x_statistic: k must lie in [1, m/2]");
  if (track.n() < 2) throw ParameterError("x_statistic: needs n >= 2");
  const double n = static_cast<double>(track.n());
  const EigenData eig = eigen_data(m);
  const cdouble c = track.centered(k);

  switch (projection_kind(m, k)) {
    case ProjectionKind::Alternating:
      return (c * eig.v[k]).real() / std::sqrt(n);
    case ProjectionKind::Small:
      return 2.0 * (c * eig.v[k]).real() / std::sqrt(n);
    case ProjectionKind::Critical:
      return 2.0 * (c * eig.v[k]).real() / std::sqrt(n * std::log(n));
    case ProjectionKind::Large: {
      const auto it = xi.find(k);
      if (it == xi.end()) throw ParameterError("x_statistic: missing limit estimate for k = " + std::to_string(k));
      const cdouble g = mode == NormalizationMode::GammaRatio ? track.growth(k) : std::exp(eig.omega[k] * std::log(n));
      return 2.0 * ((c - g * it->second.value) * eig.v[k]).real() / std::sqrt(n);
    }
    case ProjectionKind::Drift:
      break;
  }
  throw ParameterError("x_statistic: invalid k");
}

FluctuationSample fluctuation_sample(const MartingaleTrack& track, const XiMap& xi, NormalizationMode mode) {
  FluctuationSample s{track.m(), track.n(), mode, {}};
  for (int k = 1; k <= track.m() / 2; ++k) s.X[k] = x_statistic(track, xi, k, mode);
  return s;
}

Eigen::MatrixXd projection_basis(int m, int k) {
  if (k < 1 || k > m / 2) throw ParameterError("projection_basis: k must lie in [1, m/2]");
  const EigenData eig = eigen_data(m);
  if (is_alternating(m, k)) {
    Eigen::MatrixXd b = eig.v[k].real();
    return b / b.norm();
  }
  Eigen::MatrixXd b(m, 2);
  b.col(0) = eig.v[k].real().normalized();
  b.col(1) = eig.v[k].imag().normalized();
  return b;
}

}  // namespace cyclicurn
