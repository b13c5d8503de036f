#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cyclicurn/rng.hpp"

// Inner loop of the urn: pick the ball with index x among the n+1 balls in
// type order, then add a ball of the successor type.  The scalar kernel is
// the reference; the AVX2 kernel must produce bit-identical states.

namespace cyclicurn::simd {

enum class KernelKind { Scalar, Avx2 };

std::string_view kernel_name(KernelKind kind);

/// Whether `kind` was compiled in and is supported by the running CPU.
bool kernel_available(KernelKind kind);

/// Best available kernel.  The environment variable CYCLICURN_KERNEL
/// ("scalar" or "avx2") overrides the choice when that kernel is available.
KernelKind default_kernel();

/// Inclusive prefix sums of the per-type ball counts, padded to a whole
/// number of 8-lane blocks.  Padding lanes hold INT32_MAX so they never
/// compare below a draw.
class PrefixCounts {
 public:
  static constexpr int kLanes = 8;
  /// Largest supported ball total.
  static constexpr std::uint64_t kMaxTotal = 0x7FFFFFF0ULL;

  PrefixCounts(int m, int initial_type);
  explicit PrefixCounts(std::span<const std::uint64_t> counts);

  int m() const noexcept { return m_; }
  int padded() const noexcept { return static_cast<int>(prefix_.size()); }
  std::uint64_t total() const noexcept { return static_cast<std::uint64_t>(prefix_[m_ - 1]); }

  std::int32_t* data() noexcept { return prefix_.data(); }
  const std::int32_t* data() const noexcept { return prefix_.data(); }

  std::vector<std::uint64_t> counts() const;

  friend bool operator==(const PrefixCounts&, const PrefixCounts&) = default;

 private:
  int m_;
  std::vector<std::int32_t> prefix_;
};

/// One draw with ball index x in [0, total).  Returns the drawn type.
int draw_insert(KernelKind kind, PrefixCounts& prefix, std::uint32_t x);

/// Runs `steps` urn steps with x = rng.below(total) each step.  Draws are
/// not reported; use draw_insert when they are needed.
void advance(KernelKind kind, PrefixCounts& prefix, Rng& rng, std::uint64_t steps);

namespace detail {
int draw_insert_scalar(std::int32_t* prefix, int m, std::int32_t x) noexcept;
void advance_scalar(std::int32_t* prefix, int m, Rng& rng, std::uint64_t steps);
bool avx2_compiled() noexcept;
int draw_insert_avx2(std::int32_t* prefix, int m, int padded, std::int32_t x) noexcept;
void advance_avx2(std::int32_t* prefix, int m, int padded, Rng& rng, std::uint64_t steps);
}  // namespace detail

}  // namespace cyclicurn::simd
