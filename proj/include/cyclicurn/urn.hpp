#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cyclicurn/draw_kernel.hpp"
#include "cyclicurn/rng.hpp"

namespace cyclicurn {

/// Number of types m >= 2 and the type of the single initial ball.
struct UrnParams {
  int m = 0;
  int initial_type = 0;

  /// Throws ParameterError unless m >= 2 and 0 <= initial_type < m.
  void validate() const;
};

/// Ball counts per type after n draws; the counts sum to n + 1.
struct Composition {
  std::vector<std::uint64_t> counts;
  std::uint64_t n = 0;

  int m() const noexcept { return static_cast<int>(counts.size()); }
  Eigen::VectorXd as_vector() const;

  friend bool operator==(const Composition&, const Composition&) = default;
};

Composition new_urn(const UrnParams& params);

/// Type of ball number x (0-based, in type order) of the composition.
int ball_type(const Composition& state, std::uint64_t x);

/// Adds the successor ball after a draw of `drawn_type`.
Composition after_draw(const Composition& state, int drawn_type);

/// One urn step: draws a type with probability counts[i]/(n+1) and adds a
/// ball of type i+1 mod m.
Composition step(const Composition& state, Rng& rng);

/// Entry (i, j) is 1 iff j = i+1 mod m.
Eigen::MatrixXi replacement_matrix(int m);

/// E[R_{n+1} | R_n] = (Id + R^t/(n+1)) R_n.
Eigen::VectorXd conditional_mean(const Composition& state);

/// Streaming urn evolution on the prefix-count kernels.  The drawn type of
/// every step is the same as the one `step` would produce from the same
/// generator state.
class UrnProcess {
 public:
  explicit UrnProcess(const UrnParams& params, simd::KernelKind kernel = simd::default_kernel());

  /// One draw; returns the drawn type.
  int step(Rng& rng);
  /// Runs draws until the step index reaches n_target (no-op if already there).
  void advance_to(std::uint64_t n_target, Rng& rng);

  std::uint64_t n() const noexcept { return n_; }
  const UrnParams& params() const noexcept { return params_; }
  Composition state() const;

 private:
  UrnParams params_;
  simd::KernelKind kernel_;
  simd::PrefixCounts prefix_;
  std::uint64_t n_ = 0;
};

struct Trajectory {
  UrnParams params;
  std::uint64_t seed = 0;
  Composition final_state;
  /// States for n = 0..n_max; empty unless the history was requested.
  std::vector<Composition> states;
};

/// Deterministic in (params, n_max, seed): the generator is Rng(seed).
Trajectory simulate(const UrnParams& params, std::uint64_t n_max, std::uint64_t seed,
                    bool keep_history = false);

}  // namespace cyclicurn
