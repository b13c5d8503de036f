#include "cyclicurn/draw_kernel.hpp"

#if defined(CYCLICURN_HAVE_AVX2) && defined(__AVX2__)
#include <immintrin.h>

namespace cyclicurn::simd::detail {

namespace {

inline int draw_insert_impl(std::int32_t* prefix, int m, int padded, std::int32_t x) noexcept {
  const __m256i xv = _mm256_set1_epi32(x);
  int above = 0;
  for (int b = 0; b < padded; b += 8) {
    const __m256i p = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(prefix + b));
    const int mask = _mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpgt_epi32(p, xv)));
    above += _mm_popcnt_u32(static_cast<unsigned>(mask));
  }
  const int type = padded - above;
  const int target = type + 1 == m ? 0 : type + 1;

  // lanes target..m-1 gain one ball
  const __m256i lo = _mm256_set1_epi32(target - 1);
  const __m256i hi = _mm256_set1_epi32(m);
  __m256i idx = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  const __m256i step = _mm256_set1_epi32(8);
  for (int b = 0; b < padded; b += 8) {
    auto* slot = reinterpret_cast<__m256i*>(prefix + b);
    const __m256i inc = _mm256_and_si256(_mm256_cmpgt_epi32(idx, lo), _mm256_cmpgt_epi32(hi, idx));
    _mm256_storeu_si256(slot, _mm256_sub_epi32(_mm256_loadu_si256(slot), inc));
    idx = _mm256_add_epi32(idx, step);
  }
  return type;
}

// Up to 16 types the prefix array lives in registers for the whole run,
// which keeps store-to-load forwarding off the dependency chain.
template <int Blocks>
void advance_resident(std::int32_t* prefix, int m, Rng& rng, std::uint64_t steps) {
  __m256i p[Blocks];
  __m256i valid[Blocks];
  __m256i idx[Blocks];
  for (int b = 0; b < Blocks; ++b) {
    p[b] = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(prefix + 8 * b));
    idx[b] = _mm256_add_epi32(_mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7), _mm256_set1_epi32(8 * b));
    valid[b] = _mm256_cmpgt_epi32(_mm256_set1_epi32(m), idx[b]);
  }
  std::uint64_t total = static_cast<std::uint64_t>(prefix[m - 1]);
  for (std::uint64_t s = 0; s < steps; ++s, ++total) {
    const __m256i xv = _mm256_set1_epi32(static_cast<std::int32_t>(rng.below(total)));
    int above = 0;
    for (int b = 0; b < Blocks; ++b) {
      const int mask = _mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpgt_epi32(p[b], xv)));
      above += _mm_popcnt_u32(static_cast<unsigned>(mask));
    }
    const int type = 8 * Blocks - above;
    const int target = type + 1 == m ? 0 : type + 1;
    const __m256i lo = _mm256_set1_epi32(target - 1);
    for (int b = 0; b < Blocks; ++b) {
      p[b] = _mm256_sub_epi32(p[b], _mm256_and_si256(_mm256_cmpgt_epi32(idx[b], lo), valid[b]));
    }
  }
  for (int b = 0; b < Blocks; ++b) _mm256_storeu_si256(reinterpret_cast<__m256i*>(prefix + 8 * b), p[b]);
}

}  // namespace

bool avx2_compiled() noexcept { return true; }

int draw_insert_avx2(std::int32_t* prefix, int m, int padded, std::int32_t x) noexcept {
  return draw_insert_impl(prefix, m, padded, x);
}

void advance_avx2(std::int32_t* prefix, int m, int padded, Rng& rng, std::uint64_t steps) {
  if (padded == 8) return advance_resident<1>(prefix, m, rng, steps);
  if (padded == 16) return advance_resident<2>(prefix, m, rng, steps);
  std::uint64_t total = static_cast<std::uint64_t>(prefix[m - 1]);
  for (std::uint64_t s = 0; s < steps; ++s, ++total) {
    const auto x = static_cast<std::int32_t>(rng.below(total));
    draw_insert_impl(prefix, m, padded, x);
  }
}

}  // namespace cyclicurn::simd::detail

#else

namespace cyclicurn::simd::detail {

bool avx2_compiled() noexcept { return false; }

int draw_insert_avx2(std::int32_t* prefix, int m, int, std::int32_t x) noexcept {
  return draw_insert_scalar(prefix, m, x);
}

void advance_avx2(std::int32_t* prefix, int m, int, Rng& rng, std::uint64_t steps) {
  advance_scalar(prefix, m, rng, steps);
}

}  // namespace cyclicurn::simd::detail

#endif
