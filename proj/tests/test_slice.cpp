#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hyperfine/sampling.hpp"
#include "hyperfine/slice.hpp"
#include "oracle_axial.hpp"
#include "oracle_fd.hpp"

using namespace hyperfine;

namespace {

template <int N>
Jet<N> power_jet(const Paravector<N>& x, int k, int deg) {
  Jet<N> xj(deg);
  xj.a[0] = x.mv();
  if (deg >= 1)
    for (int v = 0; v <= N; ++v)
      xj.a[1 + v] = (v == 0) ? Multivector<N>(1.0) : Multivector<N>::basis(v);
  Jet<N> p = Jet<N>::constant(Multivector<N>(1.0), deg);
  for (int i = 0; i < k; ++i) p = p * xj;
  return p;
}

template <int N>
Multivector<N> omega_of(const Paravector<N>& x) {
  Multivector<N> w;
  const double v = x.vec_norm();
  for (int i = 1; i <= N; ++i) w.c[1u << (i - 1)] = x.v[i - 1] / v;
  return w;
}

}  // namespace

TEST_CASE("monomial seed derivatives are coherent") {
  const Seed s = seed_monomial(4);
  const cplx z0(0.4, 0.3);
  const auto c = s.taylor(z0, 4);
  CHECK(std::abs(c[0] - std::pow(z0, 4)) < 1e-14);
  CHECK(std::abs(c[1] - 4.0 * std::pow(z0, 3)) < 1e-14);
  CHECK(std::abs(c[4] - 1.0) < 1e-14);
  CHECK_NOTHROW(validate_seed(s));
  CHECK_NOTHROW(validate_seed(seed_exp()));
  CHECK_NOTHROW(validate_seed(seed_reciprocal(cplx(2.0, 0.0))));
  CHECK_NOTHROW(validate_seed(seed_reciprocal(cplx(1.5, 0.8))));
}

TEST_CASE("seed validation rejects non-holomorphic data") {
  Seed bad;
  bad.name = "conj";
  bad.taylor = [](cplx z, int m) {
    std::vector<cplx> c(m + 1, 0.0);
    c[0] = std::conj(z);
    if (m >= 1) c[1] = 1.0;  // lies: d/dz conj(z) does not exist
    return c;
  };
  CHECK_THROWS_AS(validate_seed(bad), SeedNotHolomorphic);

  Seed skew;  // holomorphic but not intrinsic
  skew.name = "shifted-pole";
  const cplx p(0.9, 1.1);
  skew.taylor = [p](cplx z, int m) {
    std::vector<cplx> c(m + 1);
    const cplx w = 1.0 / (z - p);
    cplx pw = w;
    for (int j = 0; j <= m; ++j) {
      c[j] = pw * (j % 2 ? -1.0 : 1.0);
      pw *= w;
    }
    return c;
  };
  CHECK_THROWS_AS(validate_seed(skew), NotSliceHyperholomorphic);
}

TEST_CASE("slice extension of monomials is the paravector power") {
  std::mt19937_64 rng(53);
  DomainBox box;
  for (int k = 1; k <= 6; ++k) {
    const auto f3 = tfs1<3>(seed_monomial(k));
    const auto f5 = tfs1<5>(seed_monomial(k));
    for (int rep = 0; rep < 3; ++rep) {
      const auto x3 = random_point<3>(rng, box);
      const auto x5 = random_point<5>(rng, box);
      // pointwise values
      Multivector<3> want3(1.0);
      for (int i = 0; i < k; ++i) want3 = want3 * x3.mv();
      CHECK(max_abs_diff(f3.eval(x3), want3) < 1e-13);
      // full jets against products of coordinate jets
      const auto jf = f5.eval_jet(x5, 4);
      const auto jp = power_jet(x5, k, 4);
      double m = 0.0;
      for (std::size_t p = 0; p < jf.a.size(); ++p)
        m = std::max(m, max_abs_diff(jf.a[p], jp.a[p]));
      CAPTURE(k);
      CHECK(m < 2e-12);
    }
  }
}

TEST_CASE("representation formula reconstructs values from one slice") {
  std::mt19937_64 rng(59);
  DomainBox box;
  const auto f = tfs1<3>(seed_exp());
  for (int rep = 0; rep < 10; ++rep) {
    const auto x = random_point<3>(rng, box);
    const auto I = random_imaginary_unit<3>(rng);
    const double u = x.r0, v = x.vec_norm();
    // y = u + I v and conj(y) in the I-plane
    Paravector<3> y(u), yc(u);
    for (int i = 1; i <= 3; ++i) {
      y.v[i - 1] = v * I.c[1u << (i - 1)];
      yc.v[i - 1] = -v * I.c[1u << (i - 1)];
    }
    const auto fy = f.eval(y), fyc = f.eval(yc);
    const auto Ix = omega_of(x);
    const auto rebuilt = 0.5 * (fy + fyc) - 0.5 * (Ix * (I * (fy - fyc)));
    CHECK(max_abs_diff(f.eval(x), rebuilt) < 1e-13);
  }
}

TEST_CASE("exp slice function against its closed axial form") {
  std::mt19937_64 rng(61);
  DomainBox box;
  const auto f = tfs1<5>(seed_exp());
  for (int rep = 0; rep < 10; ++rep) {
    const auto x = random_point<5>(rng, box);
    const double v = x.vec_norm();
    const double a = std::exp(x.r0) * std::cos(v);
    const double b = std::exp(x.r0) * std::sin(v);
    auto want = Multivector<5>(a);
    want += omega_of(x) * b;
    CHECK(max_abs_diff(f.eval(x), want) < 1e-13);
  }
  // value on the real axis exists (beta vanishes there)
  CHECK(max_abs_diff(f.eval(Paravector<5>(0.3)), Multivector<5>(std::exp(0.3))) < 1e-14);
}

TEST_CASE("reciprocal slice function inverts x - p pointwise") {
  std::mt19937_64 rng(67);
  DomainBox box;
  const double p = 2.0;
  const auto f = tfs1<3>(seed_reciprocal(cplx(p, 0.0)));
  for (int rep = 0; rep < 10; ++rep) {
    const auto x = random_point<3>(rng, box);
    auto shifted = x;
    shifted.r0 -= p;
    const auto want = shifted.conj().mv() / shifted.modulus_sq();
    CHECK(max_abs_diff(f.eval(x), want) < 1e-13);
  }
}

TEST_CASE("eval_jet derivatives cross-checked by finite differences") {
  std::mt19937_64 rng(71);
  DomainBox box;
  const auto f = tfs1<3>(seed_exp());
  fd::PointFn<3> pf = [&](const Paravector<3>& x) { return f.eval(x); };
  for (int rep = 0; rep < 3; ++rep) {
    const auto x = random_point<3>(rng, box);
    const auto j = f.eval_jet(x, 2);
    for (int v = 0; v <= 3; ++v) {
      const auto want = fd::d1<3>(pf, x, v);
      CHECK(max_abs_diff(j.a[1 + v], want) < 1e-9);
    }
    CHECK(max_abs_diff(apply_Delta(j).value(), fd::apply_Delta<3>(pf, x)) < 1e-6);
  }
}

TEST_CASE("eval_jet requires an off-axis point") {
  const auto f = tfs1<3>(seed_monomial(2));
  CHECK_THROWS_AS(f.eval_jet(Paravector<3>(0.5), 2), OnRealAxis);
  Paravector<3> near_axis(0.5, {1e-9, 0.0, 0.0});
  CHECK_THROWS_AS(f.eval_jet(near_axis, 2), OnRealAxis);
}

TEST_CASE("second extension step yields monogenic values with frozen constants") {
  std::mt19937_64 rng(73);
  DomainBox box;

  const auto f2 = tfs1<3>(seed_monomial(2));
  const auto g2 = tfs2(f2);
  const auto f3 = tfs1<3>(seed_monomial(3));
  const auto g3 = tfs2(f3);
  const auto f5 = tfs1<5>(seed_monomial(5));
  const auto g5 = tfs2(f5);

  for (int rep = 0; rep < 5; ++rep) {
    const auto x3 = random_point<3>(rng, box);
    const auto x5 = random_point<5>(rng, box);

    CHECK(max_abs_diff(g2.value(x3), Multivector<3>(-4.0)) < 1e-11);

    auto want3 = Multivector<3>(-12.0 * x3.r0);
    for (int i = 1; i <= 3; ++i) want3.c[1u << (i - 1)] = -4.0 * x3.v[i - 1];
    CHECK(max_abs_diff(g3.value(x3), want3) < 1e-11);

    auto want5 = Multivector<5>(320.0 * x5.r0);
    for (int i = 1; i <= 5; ++i) want5.c[1u << (i - 1)] = 64.0 * x5.v[i - 1];
    CHECK(max_abs_diff(g5.value(x5), want5) < 1e-9);

    // monogenicity of the result
    CHECK(apply_D(g3.jet(x3, 1)).value().norm() < 1e-10);
    CHECK(apply_D(g5.jet(x5, 1)).value().norm() < 1e-8);
  }
}

TEST_CASE("second extension step rejects even dimension") {
  const auto f = tfs1<4>(seed_monomial(2));
  CHECK_THROWS_AS(tfs2(f), EvenDimension);
}

TEST_CASE("transcendental seeds stay monogenic after the second step") {
  std::mt19937_64 rng(79);
  DomainBox box;
  const auto fe = tfs2(tfs1<3>(seed_exp()));
  const auto fi = tfs2(tfs1<3>(seed_reciprocal(cplx(2.0, 0.0))));
  const auto fc = tfs2(tfs1<3>(seed_reciprocal(cplx(1.6, 0.9))));
  for (int rep = 0; rep < 5; ++rep) {
    const auto x = random_point<3>(rng, box);
    CHECK(apply_D(fe.jet(x, 1)).value().norm() < 1e-10);
    CHECK(apply_D(fi.jet(x, 1)).value().norm() < 1e-10);
    CHECK(apply_D(fc.jet(x, 1)).value().norm() < 1e-10);
  }
}
