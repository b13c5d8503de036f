#include "cyclicurn/urn.hpp"

#include <string>

#include "cyclicurn/errors.hpp"

namespace cyclicurn {

void UrnParams::validate() const {
  if (m < 2) throw ParameterError("number of types m must be >= 2, got " + std::to_string(m));
  if (initial_type < 0 || initial_type >= m) {
    throw ParameterError("initial type must lie in [0, m), got " + std::to_string(initial_type));
  }
}

Eigen::VectorXd Composition::as_vector() const {
  Eigen::VectorXd v(m());
  for (int i = 0; i < m(); ++i) v[i] = static_cast<double>(counts[i]);
  return v;
}

Composition new_urn(const UrnParams& params) {
  params.validate();
  Composition c;
  c.counts.assign(params.m, 0);
  c.counts[params.initial_type] = 1;
  return c;
}

int ball_type(const Composition& state, std::uint64_t x) {
  std::uint64_t acc = 0;
  for (int i = 0; i < state.m(); ++i) {
    acc += state.counts[i];
    if (x < acc) return i;
  }
  throw ParameterError("ball index beyond the urn content");
}

Composition after_draw(const Composition& state, int drawn_type) {
  Composition next = state;
  next.counts[(drawn_type + 1) % state.m()] += 1;
  next.n += 1;
  return next;
}

Composition step(const Composition& state, Rng& rng) {
  return after_draw(state, ball_type(state, rng.below(state.n + 1)));
}

Eigen::MatrixXi replacement_matrix(int m) {
  if (m < 2) throw ParameterError("replacement_matrix: m must be >= 2");
  Eigen::MatrixXi r = Eigen::MatrixXi::Zero(m, m);
  for (int i = 0; i < m; ++i) r(i, (i + 1) % m) = 1;
  return r;
}

Eigen::VectorXd conditional_mean(const Composition& state) {
  const int m = state.m();
  const Eigen::VectorXd x = state.as_vector();
  Eigen::VectorXd out = x;
  const double w = 1.0 / static_cast<double>(state.n + 1);
  for (int i = 0; i < m; ++i) out[(i + 1) % m] += w * x[i];
  return out;
}

UrnProcess::UrnProcess(const UrnParams& params, simd::KernelKind kernel)
    : params_((params.validate(), params)), kernel_(kernel), prefix_(params.m, params.initial_type) {}

int UrnProcess::step(Rng& rng) {
  if (prefix_.total() + 1 > simd::PrefixCounts::kMaxTotal) {
    throw ResourceError("UrnProcess: ball total exceeds 32-bit lane range");
  }
  const auto x = static_cast<std::uint32_t>(rng.below(n_ + 1));
  ++n_;
  return simd::draw_insert(kernel_, prefix_, x);
}

void UrnProcess::advance_to(std::uint64_t n_target, Rng& rng) {
  if (n_target <= n_) return;
  simd::advance(kernel_, prefix_, rng, n_target - n_);
  n_ = n_target;
}

Composition UrnProcess::state() const { return Composition{prefix_.counts(), n_}; }

Trajectory simulate(const UrnParams& params, std::uint64_t n_max, std::uint64_t seed, bool keep_history) {
  params.validate();
  Trajectory t{params, seed, new_urn(params), {}};
  Rng rng(seed);
  UrnProcess urn(params);
  if (keep_history) {
    t.states.reserve(n_max + 1);
    t.states.push_back(urn.state());
    for (std::uint64_t s = 0; s < n_max; ++s) {
      urn.step(rng);
      t.states.push_back(urn.state());
    }
  } else {
    urn.advance_to(n_max, rng);
  }
  t.final_state = urn.state();
  return t;
}

}  // namespace cyclicurn
