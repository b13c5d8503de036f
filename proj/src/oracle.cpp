#include "cyclicurn/oracle.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "cyclicurn/errors.hpp"
#include "cyclicurn/residuals.hpp"

namespace cyclicurn {

namespace {

template <class P>
P ratio_of(std::uint64_t num, std::uint64_t den) {
  if constexpr (std::is_same_v<P, double>) {
    return static_cast<double>(num) / static_cast<double>(den);
  } else {
    return P(num, den);
  }
}

template <class P>
double to_dbl(const P& p) {
  if constexpr (std::is_same_v<P, double>) {
    return p;
  } else {
    return static_cast<double>(p);
  }
}

template <class P>
ExactDistT<P> exact_distribution_impl(int m, int initial_type, std::uint64_t n) {
  UrnParams{m, initial_type}.validate();
  if (lattice_size_bound(m, n) > kOracleSizeGuard) {
    throw ResourceError("exact_distribution: lattice C(n+m, m-1) exceeds the enumeration guard (m=" +
                        std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }
  std::map<CompositionKey, P> layer;
  CompositionKey start(m, 0);
  start[initial_type] = 1;
  layer.emplace(std::move(start), P(1));
  for (std::uint64_t s = 0; s < n; ++s) {
    std::map<CompositionKey, P> next;
    for (const auto& [key, p] : layer) {
      for (int i = 0; i < m; ++i) {
        if (key[i] == 0) continue;
        CompositionKey child = key;
        child[(i + 1) % m] += 1;
        next[std::move(child)] += p * ratio_of<P>(key[i], s + 1);
      }
    }
    layer = std::move(next);
  }
  ExactDistT<P> out;
  out.m = m;
  out.initial_type = initial_type;
  out.n = n;
  out.pmf = std::move(layer);
  return out;
}

Eigen::VectorXd key_vector(const CompositionKey& key) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(key.size()));
  for (std::size_t i = 0; i < key.size(); ++i) x[static_cast<Eigen::Index>(i)] = key[i];
  return x;
}

CompositionKey shifted(const CompositionKey& key, int times) {
  const int m = static_cast<int>(key.size());
  CompositionKey out(key.size());
  for (int i = 0; i < m; ++i) out[((i + times) % m + m) % m] = key[i];
  return out;
}

template <class P>
IdentityCheck compare(const std::map<CompositionKey, P>& a, const std::map<CompositionKey, P>& b, bool total_variation) {
  IdentityCheck out;
  out.exact = a == b;
  double acc = 0.0;
  double worst = 0.0;
  auto visit = [&](const P& diff) {
    const double d = std::abs(to_dbl(diff));
    acc += d;
    worst = std::max(worst, d);
  };
  for (const auto& [key, p] : a) {
    const auto it = b.find(key);
    visit(it == b.end() ? p : P(p - it->second));
  }
  for (const auto& [key, p] : b) {
    if (!a.contains(key)) visit(p);
  }
  out.max_deviation = total_variation ? 0.5 * acc : worst;
  return out;
}

template <class P>
IdentityCheck shift_check_impl(int m, int j, std::uint64_t n) {
  const int jr = ((j % m) + m) % m;
  const auto direct = exact_distribution_impl<P>(m, jr, n);
  const auto base = exact_distribution_impl<P>(m, 0, n);
  std::map<CompositionKey, P> pushed;
  for (const auto& [key, p] : base.pmf) pushed[shifted(key, j)] += p;
  return compare(direct.pmf, pushed, false);
}

template <class P>
IdentityCheck recurrence_check_impl(int m, std::uint64_t n) {
  if (n == 0) throw ParameterError("recurrence_check: needs n >= 1");
  const auto lhs = exact_distribution_impl<P>(m, 0, n);
  std::vector<ExactDistT<P>> laws;
  laws.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) laws.push_back(exact_distribution_impl<P>(m, 0, i));
  const P weight = ratio_of<P>(1, n);
  std::map<CompositionKey, P> rhs;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto& left = laws[i];
    const auto& right = laws[n - 1 - i];
    for (const auto& [a, pa] : left.pmf) {
      for (const auto& [b, pb] : right.pmf) {
        CompositionKey sum = shifted(b, 1);
        for (int t = 0; t < m; ++t) sum[t] += a[t];
        rhs[std::move(sum)] += weight * pa * pb;
      }
    }
  }
  return compare(lhs.pmf, rhs, true);
}

std::string key_string(const CompositionKey& key) {
  std::string s;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(key[i]);
  }
  return s;
}

}  // namespace

double lattice_size_bound(int m, std::uint64_t n) {
  // C(n+m, m-1)
  const double nn = static_cast<double>(n);
  return std::exp(std::lgamma(nn + m + 1.0) - std::lgamma(static_cast<double>(m)) - std::lgamma(nn + 2.0));
}

ExactDist exact_distribution(int m, int initial_type, std::uint64_t n) {
  return exact_distribution_impl<double>(m, initial_type, n);
}

RationalDist exact_distribution_rational(int m, int initial_type, std::uint64_t n) {
  return exact_distribution_impl<Rational>(m, initial_type, n);
}

ExactDist to_double(const RationalDist& dist) {
  ExactDist out{dist.m, dist.initial_type, dist.n, {}};
  for (const auto& [key, p] : dist.pmf) out.pmf.emplace(key, static_cast<double>(p));
  return out;
}

DistMoments dist_moments(const ExactDist& dist) {
  const int m = dist.m;
  DistMoments out{Eigen::VectorXd::Zero(m), Eigen::MatrixXd::Zero(m, m)};
  for (const auto& [key, p] : dist.pmf) out.mean += p * key_vector(key);
  for (const auto& [key, p] : dist.pmf) {
    const Eigen::VectorXd d = key_vector(key) - out.mean;
    out.covariance += p * d * d.transpose();
  }
  return out;
}

cdouble expect_u(const ExactDist& dist, int k) {
  cdouble acc = 0.0;
  for (const auto& [key, p] : dist.pmf) acc += p * dft_coordinate(key_vector(key), k);
  return acc;
}

cdouble expect_uu(const ExactDist& dist, int k, int l) {
  cdouble acc = 0.0;
  for (const auto& [key, p] : dist.pmf) {
    const Eigen::VectorXd x = key_vector(key);
    acc += p * dft_coordinate(x, k) * dft_coordinate(x, l);
  }
  return acc;
}

IdentityCheck shift_check(int m, int j, std::uint64_t n, bool rational) {
  return rational ? shift_check_impl<Rational>(m, j, n) : shift_check_impl<double>(m, j, n);
}

IdentityCheck recurrence_check(int m, std::uint64_t n, bool rational) {
  return rational ? recurrence_check_impl<Rational>(m, n) : recurrence_check_impl<double>(m, n);
}

Composition bst_simulate(int m, std::uint64_t n, std::uint64_t seed) {
  UrnParams{m, 0}.validate();
  Rng rng(seed);
  std::vector<int> external;
  external.reserve(n + 1);
  external.push_back(0);
  for (std::uint64_t s = 0; s < n; ++s) {
    const auto idx = rng.below(external.size());
    const int label = external[idx];
    // left child keeps the slot and the label, right child is appended
    external.push_back((label + 1) % m);
  }
  Composition c{std::vector<std::uint64_t>(m, 0), n};
  for (int label : external) c.counts[label] += 1;
  return c;
}

double martingale_property_deviation(int m, std::uint64_t n) {
  const UrnParams params{m, 0};
  const auto dist = exact_distribution(m, 0, n);
  const std::uint64_t cps[] = {n, n + 1};
  const auto tables = CenteringTable::along(params, cps);
  double worst = 0.0;
  for (const auto& [key, p] : dist.pmf) {
    Composition state{std::vector<std::uint64_t>(key.begin(), key.end()), n};
    for (int k = 0; k < m; ++k) {
      const cdouble now = martingale_value(state, k, tables[0]);
      cdouble next = 0.0;
      for (int i = 0; i < m; ++i) {
        if (key[i] == 0) continue;
        next += static_cast<double>(key[i]) / static_cast<double>(n + 1) *
                martingale_value(after_draw(state, i), k, tables[1]);
      }
      worst = std::max(worst, std::abs(next - now));
    }
  }
  return worst;
}

nlohmann::ordered_json to_json(const ExactDist& dist) {
  nlohmann::ordered_json j;
  j["m"] = dist.m;
  j["n"] = dist.n;
  j["initial_type"] = dist.initial_type;
  j["exact"] = false;
  nlohmann::ordered_json pmf = nlohmann::ordered_json::object();
  for (const auto& [key, p] : dist.pmf) pmf[key_string(key)] = p;
  j["pmf"] = std::move(pmf);
  return j;
}

nlohmann::ordered_json to_json(const RationalDist& dist) {
  nlohmann::ordered_json j;
  j["m"] = dist.m;
  j["n"] = dist.n;
  j["initial_type"] = dist.initial_type;
  j["exact"] = true;
  nlohmann::ordered_json pmf = nlohmann::ordered_json::object();
  for (const auto& [key, p] : dist.pmf) pmf[key_string(key)] = p.str();
  j["pmf"] = std::move(pmf);
  return j;
}

}  // namespace cyclicurn
