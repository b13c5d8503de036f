#include "cyclicurn/draw_kernel.hpp"

namespace cyclicurn::simd::detail {

int draw_insert_scalar(std::int32_t* prefix, int m, std::int32_t x) noexcept {
  int type = 0;
  for (int i = 0; i < m; ++i) type += prefix[i] <= x ? 1 : 0;
  const int target = type + 1 == m ? 0 : type + 1;
  for (int i = target; i < m; ++i) ++prefix[i];
  return type;
}

void advance_scalar(std::int32_t* prefix, int m, Rng& rng, std::uint64_t steps) {
  std::uint64_t total = static_cast<std::uint64_t>(prefix[m - 1]);
  for (std::uint64_t s = 0; s < steps; ++s, ++total) {
    const auto x = static_cast<std::int32_t>(rng.below(total));
    draw_insert_scalar(prefix, m, x);
  }
}

}  // namespace cyclicurn::simd::detail
