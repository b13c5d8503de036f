#include "cyclicurn/spectral.hpp"

#include <cmath>
#include <numbers>

#include "cyclicurn/errors.hpp"

namespace cyclicurn {

cdouble root_of_unity(std::int64_t e, int m) {
  std::int64_t r = e % m;
  if (r < 0) r += m;
  const bool upper = 2 * r > m;
  const std::int64_t q = upper ? m - r : r;  // 0 <= q <= m/2
  double c = 0.0;
  double s = 0.0;
  const std::int64_t twelve = 12 * q;
  if (twelve % m == 0 && (twelve / m) % 2 == 0) {
    // multiples of 60 degrees (and 90 via the table below)
    switch (twelve / m) {
      case 0: c = 1.0; s = 0.0; break;
      case 2: c = 0.5; s = std::sqrt(3.0) / 2.0; break;
      case 4: c = -0.5; s = std::sqrt(3.0) / 2.0; break;
      case 6: c = -1.0; s = 0.0; break;
      default: break;
    }
  } else if (4 * q == m) {
    c = 0.0;
    s = 1.0;
  } else {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(q) / m;
    c = std::cos(angle);
    s = std::sin(angle);
  }
  return {c, upper ? -s : s};
}

ProjectionKind projection_kind(int m, int k) {
  if (k < 0 || k >= m) throw ParameterError("projection index out of range");
  if (k == 0) return ProjectionKind::Drift;
  const int q = std::min(k, m - k);
  if (2 * q == m) return ProjectionKind::Alternating;
  if (6 * q < m) return ProjectionKind::Large;
  if (6 * q == m) return ProjectionKind::Critical;
  return ProjectionKind::Small;
}

int large_pair_count(int m) { return (m - 1) / 6; }

EigenData eigen_data(int m) {
  if (m < 2) throw ParameterError("eigen_data: m must be >= 2");
  EigenData d;
  d.m = m;
  d.omega.resize(m);
  d.lambda.resize(m);
  d.mu.resize(m);
  d.v.assign(m, Eigen::VectorXcd(m));
  for (int k = 0; k < m; ++k) {
    d.omega[k] = root_of_unity(k, m);
    d.lambda[k] = d.omega[k].real();
    d.mu[k] = d.omega[k].imag();
    for (int t = 0; t < m; ++t) {
      d.v[k][t] = root_of_unity(-static_cast<std::int64_t>(k) * t, m) / static_cast<double>(m);
    }
  }
  return d;
}

namespace {

void check_k(int k, int m) {
  if (k < 0 || k >= m) throw ParameterError("coordinate index k out of range");
}

}  // namespace

cdouble dft_coordinate(const Eigen::VectorXcd& x, int k) {
  const int m = static_cast<int>(x.size());
  check_k(k, m);
  cdouble acc = 0.0;
  for (int t = 0; t < m; ++t) acc += root_of_unity(static_cast<std::int64_t>(k) * t, m) * x[t];
  return acc;
}

cdouble dft_coordinate(const Eigen::VectorXd& x, int k) {
  const int m = static_cast<int>(x.size());
  check_k(k, m);
  cdouble acc = 0.0;
  for (int t = 0; t < m; ++t) acc += root_of_unity(static_cast<std::int64_t>(k) * t, m) * x[t];
  return acc;
}

Eigen::VectorXcd dft_coordinates(const Eigen::VectorXd& x) {
  const int m = static_cast<int>(x.size());
  std::vector<cdouble> roots(m);
  for (int r = 0; r < m; ++r) roots[r] = root_of_unity(r, m);
  Eigen::VectorXcd u(m);
  for (int k = 0; k < m; ++k) {
    cdouble acc = 0.0;
    for (int t = 0; t < m; ++t) acc += roots[(static_cast<std::int64_t>(k) * t) % m] * x[t];
    u[k] = acc;
  }
  return u;
}

Eigen::VectorXcd dft_coordinates(const std::vector<std::uint64_t>& counts) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(counts.size()));
  for (std::size_t i = 0; i < counts.size(); ++i) x[static_cast<Eigen::Index>(i)] = static_cast<double>(counts[i]);
  return dft_coordinates(x);
}

Eigen::VectorXcd reconstruct(const Eigen::VectorXcd& coords) {
  const int m = static_cast<int>(coords.size());
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(m);
  for (int k = 0; k < m; ++k) {
    for (int t = 0; t < m; ++t) {
      x[t] += coords[k] * root_of_unity(-static_cast<std::int64_t>(k) * t, m);
    }
  }
  return x / static_cast<double>(m);
}

Eigen::VectorXd project_pair(const Eigen::VectorXd& x, int k) {
  const int m = static_cast<int>(x.size());
  if (k < 1 || k > m / 2) throw ParameterError("project_pair: k must lie in [1, m/2]");
  const cdouble u = dft_coordinate(x, k);
  Eigen::VectorXd out(m);
  const double scale = 2 * k == m ? 1.0 : 2.0;
  for (int t = 0; t < m; ++t) {
    out[t] = scale * (u * root_of_unity(-static_cast<std::int64_t>(k) * t, m)).real() / m;
  }
  return out;
}

Eigen::VectorXd shift_action(const Eigen::VectorXd& x) {
  const Eigen::Index m = x.size();
  Eigen::VectorXd out(m);
  for (Eigen::Index i = 0; i < m; ++i) out[(i + 1) % m] = x[i];
  return out;
}

Eigen::VectorXcd shift_action(const Eigen::VectorXcd& x) {
  const Eigen::Index m = x.size();
  Eigen::VectorXcd out(m);
  for (Eigen::Index i = 0; i < m; ++i) out[(i + 1) % m] = x[i];
  return out;
}

std::vector<std::uint64_t> shift_action(const std::vector<std::uint64_t>& counts, int times) {
  const auto m = static_cast<std::int64_t>(counts.size());
  std::vector<std::uint64_t> out(counts.size());
  std::int64_t shift = times % m;
  if (shift < 0) shift += m;
  for (std::int64_t i = 0; i < m; ++i) out[(i + shift) % m] = counts[i];
  return out;
}

}  // namespace cyclicurn
