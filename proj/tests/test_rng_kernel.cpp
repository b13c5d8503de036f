#include <doctest.h>

#include <set>

#include "cyclicurn/draw_kernel.hpp"
#include "cyclicurn/errors.hpp"
#include "cyclicurn/montecarlo.hpp"
#include "cyclicurn/rng.hpp"
#include "cyclicurn/urn.hpp"

using namespace cyclicurn;
using simd::KernelKind;

TEST_CASE("rng is reproducible and streams differ") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    CHECK(x != c.next());
  }
  CHECK(stream_seed(1, 0) != stream_seed(1, 1));
  CHECK(stream_seed(1, 0) != stream_seed(2, 0));
}

TEST_CASE("below stays in range and hits every value") {
  Rng rng(7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto x = rng.below(5);
    REQUIRE(x < 5);
    seen.insert(x);
  }
  CHECK(seen.size() == 5);
  for (int i = 0; i < 100; ++i) CHECK(rng.below(1) == 0);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.open01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("below is close to uniform") {
  Rng rng(11);
  constexpr int kBins = 10;
  constexpr int kDraws = 200000;
  std::vector<int> hist(kBins);
  for (int i = 0; i < kDraws; ++i) ++hist[rng.below(kBins)];
  double chi2 = 0.0;
  for (int h : hist) chi2 += (h - kDraws / kBins) * (h - kDraws / kBins) / double(kDraws / kBins);
  CHECK(chi2 < 30.0);  // 9 dof, p ~ 4e-4
}

TEST_CASE("prefix counts round-trip") {
  const std::vector<std::uint64_t> counts{3, 0, 5, 1, 2, 0, 0, 4, 1};
  simd::PrefixCounts p(counts);
  CHECK(p.m() == 9);
  CHECK(p.padded() == 16);
  CHECK(p.total() == 16);
  CHECK(p.counts() == counts);
  simd::PrefixCounts fresh(5, 3);
  CHECK((fresh.counts() == std::vector<std::uint64_t>{0, 0, 0, 1, 0}));
}

TEST_CASE("scalar and avx2 draw_insert agree on every position") {
  if (!simd::kernel_available(KernelKind::Avx2)) return;
  for (int m = 2; m <= 20; ++m) {
    Rng rng(static_cast<std::uint64_t>(m));
    std::vector<std::uint64_t> counts(m);
    for (auto& c : counts) c = rng.below(4);
    counts[0] += 1;
    simd::PrefixCounts a(counts), b(counts);
    for (std::uint32_t x = 0; x < a.total(); ++x) {
      simd::PrefixCounts sa = a, sb = b;
      const int ta = simd::draw_insert(KernelKind::Scalar, sa, x);
      const int tb = simd::draw_insert(KernelKind::Avx2, sb, x);
      REQUIRE(ta == tb);
      REQUIRE(sa == sb);
    }
  }
}

TEST_CASE("scalar and avx2 trajectories are bit-identical") {
  if (!simd::kernel_available(KernelKind::Avx2)) return;
  for (int m : {2, 3, 7, 8, 9, 12, 13, 16, 17, 24}) {
    UrnProcess a(UrnParams{m, m / 2}, KernelKind::Scalar);
    UrnProcess b(UrnParams{m, m / 2}, KernelKind::Avx2);
    Rng ra(99), rb(99);
    for (std::uint64_t n : {1ULL, 10ULL, 1000ULL, 50000ULL}) {
      a.advance_to(n, ra);
      b.advance_to(n, rb);
      REQUIRE(a.state() == b.state());
    }
    for (int i = 0; i < 500; ++i) REQUIRE(a.step(ra) == b.step(rb));
    CHECK(a.state() == b.state());
  }
}

TEST_CASE("advance matches repeated single draws") {
  for (auto kind : {KernelKind::Scalar, simd::default_kernel()}) {
    UrnProcess bulk(UrnParams{7, 0}, kind);
    UrnProcess single(UrnParams{7, 0}, kind);
    Rng ra(5), rb(5);
    bulk.advance_to(20000, ra);
    for (int i = 0; i < 20000; ++i) single.step(rb);
    CHECK(bulk.state() == single.state());
  }
}

TEST_CASE("functional step agrees with the process") {
  const UrnParams params{5, 2};
  UrnProcess proc(params, KernelKind::Scalar);
  Composition state = new_urn(params);
  Rng ra(123), rb(123);
  for (int i = 0; i < 3000; ++i) {
    proc.step(ra);
    state = step(state, rb);
  }
  CHECK(proc.state() == state);
}

TEST_CASE("lane overflow is guarded") {
  simd::PrefixCounts p(std::vector<std::uint64_t>{simd::PrefixCounts::kMaxTotal - 2, 1});
  Rng rng(1);
  CHECK_THROWS_AS(simd::advance(KernelKind::Scalar, p, rng, 10), ResourceError);
}

TEST_CASE("replicate results do not depend on the thread count") {
  auto run = [](unsigned threads) {
    return run_replicates(64, threads, 77, [](std::size_t, Rng& rng) {
      UrnProcess u(UrnParams{7, 0});
      u.advance_to(2000, rng);
      return u.state().counts;
    });
  };
  const auto one = run(1);
  CHECK(one == run(3));
  CHECK(one == run(8));
  CHECK(one[0] != one[1]);
}

TEST_CASE("replicate exceptions propagate") {
  CHECK_THROWS_AS(run_replicates(16, 4, 1,
                                 [](std::size_t r, Rng&) -> int {
                                   if (r == 9) throw ResourceError("boom");
                                   return 0;
                                 }),
                  ResourceError);
}
