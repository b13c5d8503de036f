#include "cyclicurn/draw_kernel.hpp"

#include <climits>
#include <cstdlib>
#include <string>

#include "cyclicurn/errors.hpp"

namespace cyclicurn::simd {

std::string_view kernel_name(KernelKind kind) {
  return kind == KernelKind::Avx2 ? "avx2" : "scalar";
}

bool kernel_available(KernelKind kind) {
  if (kind == KernelKind::Scalar) return true;
#if defined(__x86_64__) || defined(__i386__)
  static const bool cpu_ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
  return detail::avx2_compiled() && cpu_ok;
#else
  return false;
#endif
}

KernelKind default_kernel() {
  static const KernelKind chosen = [] {
    if (const char* env = std::getenv("CYCLICURN_KERNEL")) {
      const std::string v(env);
      if (v == "scalar") return KernelKind::Scalar;
      if (v == "avx2" && kernel_available(KernelKind::Avx2)) return KernelKind::Avx2;
    }
    return kernel_available(KernelKind::Avx2) ? KernelKind::Avx2 : KernelKind::Scalar;
  }();
  return chosen;
}

namespace {

int padded_size(int m) {
  return (m + PrefixCounts::kLanes - 1) / PrefixCounts::kLanes * PrefixCounts::kLanes;
}

}  // namespace

PrefixCounts::PrefixCounts(int m, int initial_type) : m_(m), prefix_(padded_size(m), INT32_MAX) {
  if (m < 2) throw ParameterError("PrefixCounts: m must be >= 2");
  if (initial_type < 0 || initial_type >= m) throw ParameterError("PrefixCounts: initial type out of range");
  for (int i = 0; i < m; ++i) prefix_[i] = i >= initial_type ? 1 : 0;
}

PrefixCounts::PrefixCounts(std::span<const std::uint64_t> counts)
    : m_(static_cast<int>(counts.size())), prefix_(padded_size(m_), INT32_MAX) {
  if (m_ < 2) throw ParameterError("PrefixCounts: m must be >= 2");
  std::uint64_t acc = 0;
  for (int i = 0; i < m_; ++i) {
    acc += counts[i];
    if (acc > kMaxTotal) throw ResourceError("PrefixCounts: ball total exceeds 32-bit lane range");
    prefix_[i] = static_cast<std::int32_t>(acc);
  }
  if (acc == 0) throw ParameterError("PrefixCounts: empty urn");
}

std::vector<std::uint64_t> PrefixCounts::counts() const {
  std::vector<std::uint64_t> out(m_);
  std::int32_t prev = 0;
  for (int i = 0; i < m_; ++i) {
    out[i] = static_cast<std::uint64_t>(prefix_[i] - prev);
    prev = prefix_[i];
  }
  return out;
}

int draw_insert(KernelKind kind, PrefixCounts& prefix, std::uint32_t x) {
  if (kind == KernelKind::Avx2 && kernel_available(KernelKind::Avx2)) {
    return detail::draw_insert_avx2(prefix.data(), prefix.m(), prefix.padded(), static_cast<std::int32_t>(x));
  }
  return detail::draw_insert_scalar(prefix.data(), prefix.m(), static_cast<std::int32_t>(x));
}

void advance(KernelKind kind, PrefixCounts& prefix, Rng& rng, std::uint64_t steps) {
  if (prefix.total() + steps > PrefixCounts::kMaxTotal) {
    throw ResourceError("advance: ball total would exceed 32-bit lane range");
  }
  if (kind == KernelKind::Avx2 && kernel_available(KernelKind::Avx2)) {
    detail::advance_avx2(prefix.data(), prefix.m(), prefix.padded(), rng, steps);
  } else {
    detail::advance_scalar(prefix.data(), prefix.m(), rng, steps);
  }
}

}  // namespace cyclicurn::simd
