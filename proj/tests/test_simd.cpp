#include "dirac/simd/kernels.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace dirac::simd;

namespace {

std::vector<cplx> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

std::vector<double> random_reals(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// odd lengths exercise the scalar remainder of the vector loops
const std::size_t kLengths[] = {0, 1, 2, 3, 7, 16, 31, 1001, 3375};

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar kernels match their definitions") {
  const KernelTable& s = scalar();
  const auto a = random_values(37, 1), b = random_values(37, 2);
  cplx dot{};
  double n2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += std::conj(a[i]) * b[i];
    n2 += std::norm(a[i]);
  }
  CHECK(std::abs(s.dot(a.data(), b.data(), a.size()) - dot) < 1e-13);
  CHECK(s.norm2(a.data(), a.size()) == doctest::Approx(n2).epsilon(1e-14));

  // σ·v applied to (1, 0) is the first column of σ·v = [[v3, v1 − i v2], [v1 + i v2, −v3]]
  const double v1 = 0.5, v2 = -1.5, v3 = 2.0;
  const cplx up = 1.0, dn = 0.0;
  cplx ou{}, od{};
  s.pauli_apply(&v1, &v2, &v3, &up, &dn, &ou, &od, 1, 1.0, false);
  CHECK(ou == cplx(v3, 0.0));
  CHECK(od == cplx(v1, v2));
}

TEST_CASE("avx2 kernels agree with scalar kernels") {
  const KernelTable* v = avx2();
  if (v == nullptr) {
    MESSAGE("AVX2/FMA not available on this machine; only the scalar path is exercised");
    return;
  }
  const KernelTable& s = scalar();
  for (std::size_t n : kLengths) {
    CAPTURE(n);
    const auto a = random_values(n, 10 + n), b = random_values(n, 20 + n);
    const cplx ds = s.dot(a.data(), b.data(), n), dv = v->dot(a.data(), b.data(), n);
    CHECK(std::abs(ds - dv) <= 1e-13 * (1.0 + static_cast<double>(n)));
    CHECK(std::abs(s.norm2(a.data(), n) - v->norm2(a.data(), n)) <= 1e-13 * (1.0 + static_cast<double>(n)));

    auto ys = b, yv = b;
    const cplx alpha(0.3, -1.7);
    s.axpy(alpha, a.data(), ys.data(), n);
    v->axpy(alpha, a.data(), yv.data(), n);
    CHECK(max_diff(ys, yv) <= 1e-14 * 4.0);

    const auto v1 = random_reals(n, 30 + n), v2 = random_reals(n, 40 + n), v3 = random_reals(n, 50 + n);
    for (bool accumulate : {false, true}) {
      auto us = random_values(n, 60 + n), ds2 = random_values(n, 70 + n);
      auto uv = us, dv2 = ds2;
      s.pauli_apply(v1.data(), v2.data(), v3.data(), a.data(), b.data(), us.data(), ds2.data(), n, -0.75, accumulate);
      v->pauli_apply(v1.data(), v2.data(), v3.data(), a.data(), b.data(), uv.data(), dv2.data(), n, -0.75, accumulate);
      CHECK(max_diff(us, uv) <= 1e-13);
      CHECK(max_diff(ds2, dv2) <= 1e-13);
    }
  }
}

TEST_CASE("pauli_apply may write in place without accumulation") {
  for (const KernelTable* t : {&scalar(), avx2()}) {
    if (t == nullptr) continue;
    CAPTURE(t->name);
    const std::size_t n = 19;
    const auto v1 = random_reals(n, 1), v2 = random_reals(n, 2), v3 = random_reals(n, 3);
    const auto up0 = random_values(n, 4), dn0 = random_values(n, 5);
    std::vector<cplx> ou(n), od(n);
    t->pauli_apply(v1.data(), v2.data(), v3.data(), up0.data(), dn0.data(), ou.data(), od.data(), n, 2.0, false);
    auto up = up0, dn = dn0;
    t->pauli_apply(v1.data(), v2.data(), v3.data(), up.data(), dn.data(), up.data(), dn.data(), n, 2.0, false);
    CHECK(max_diff(up, ou) == 0.0);
    CHECK(max_diff(dn, od) == 0.0);
  }
}

TEST_CASE("active table is one of the variants") {
  const KernelTable& a = active();
  const bool known = &a == &scalar() || (avx2() != nullptr && &a == avx2());
  CHECK(known);
}

}
