#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "hyperfine/calculus.hpp"
#include "hyperfine/sampling.hpp"

using namespace hyperfine;

namespace {

OperatorTuple tuple_e1() {
  OperatorTuple T;
  T.n = 3;
  T.m = 1;
  T.T.assign(4, Eigen::MatrixXd::Zero(1, 1));
  T.T[1](0, 0) = 1.0;
  return T;
}

OperatorTuple random_tuple(std::mt19937_64& rng, int n, int m) {
  Eigen::MatrixXd S = Eigen::MatrixXd::Identity(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) S(r, c) += 0.3 * uniform(rng, -1.0, 1.0);
  const Eigen::MatrixXd Sinv = S.inverse();
  OperatorTuple T;
  T.n = n;
  T.m = m;
  for (int j = 0; j <= n; ++j) {
    Eigen::VectorXd d(m);
    for (int r = 0; r < m; ++r) d(r) = uniform(rng, -1.0, 1.0);
    T.T.push_back(S * d.asDiagonal() * Sinv);
  }
  return T;
}

// point tuple: 1x1 components carrying the coordinates of a paravector
template <int N>
OperatorTuple point_tuple(const Paravector<N>& x) {
  OperatorTuple T;
  T.n = N;
  T.m = 1;
  T.T.assign(N + 1, Eigen::MatrixXd::Zero(1, 1));
  T.T[0](0, 0) = x.r0;
  for (int j = 1; j <= N; ++j) T.T[j](0, 0) = x.v[j - 1];
  return T;
}

template <int N>
Multivector<N> to_mv(const OperatorMultivector& a) {
  REQUIRE(a.n == N);
  REQUIRE(a.m == 1);
  Multivector<N> out;
  for (std::uint32_t b = 0; b < (1u << N); ++b) out.c[b] = a.c[b](0, 0);
  return out;
}

std::vector<double> first_plane(int n) {
  std::vector<double> p(n, 0.0);
  p[0] = 1.0;
  return p;
}

}  // namespace

TEST_CASE("integrating the constant against the resolvent yields the identity") {
  std::mt19937_64 rng(301);
  for (int trial = 0; trial < 3; ++trial) {
    const auto T = random_tuple(rng, 3, 4);
    const auto C = build_contour(s_spectrum(T), first_plane(3), 1.0, 256);
    const auto one = functional_calculus(CalcKind::S, {}, seed_monomial(0), T, C);
    CHECK(max_abs_diff(one, OperatorMultivector::identity(3, 4)) < 1e-12);
  }
}

TEST_CASE("square of the basis tuple through the integral") {
  const auto T = tuple_e1();
  const auto C = build_contour(s_spectrum(T), first_plane(3), 1.0, 256);
  const auto z2 = functional_calculus(CalcKind::S, {}, seed_monomial(2), T, C);
  CHECK(z2.c[0](0, 0) == Catch::Approx(-1.0).margin(1e-10));
  const auto z1 = functional_calculus(CalcKind::S, {}, seed_monomial(1), T, C);
  CHECK(z1.c[1](0, 0) == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("polynomial calculus matches direct substitution") {
  std::mt19937_64 rng(307);
  for (int trial = 0; trial < 4; ++trial) {
    const auto T = random_tuple(rng, 3, 4);
    const auto C = build_contour(s_spectrum(T), first_plane(3), 1.0, 256);
    for (int k = 0; k <= 5; ++k) {
      std::vector<double> coeffs(k + 1, 0.0);
      coeffs[k] = 1.0;
      const auto via_int = functional_calculus(CalcKind::S, {}, seed_monomial(k), T, C);
      CHECK(max_abs_diff(via_int, direct_polynomial(coeffs, T)) < 1e-8);
    }
    const auto e = functional_calculus(CalcKind::S, {}, seed_exp(), T, C);
    CHECK(max_abs_diff(e, direct_exp(T)) < 1e-10);
  }
}

TEST_CASE("calculus is a homomorphism on intrinsic polynomials") {
  std::mt19937_64 rng(311);
  for (int trial = 0; trial < 3; ++trial) {
    const auto T = random_tuple(rng, 3, 4);
    const auto C = build_contour(s_spectrum(T), first_plane(3), 1.0, 256);
    std::vector<double> p(4), q(3);
    for (auto& c : p) c = uniform(rng, -1.0, 1.0);
    for (auto& c : q) c = uniform(rng, -1.0, 1.0);
    std::vector<double> pq(p.size() + q.size() - 1, 0.0);
    for (std::size_t a = 0; a < p.size(); ++a)
      for (std::size_t b = 0; b < q.size(); ++b) pq[a + b] += p[a] * q[b];
    const auto fp = functional_calculus(CalcKind::S, {}, seed_polynomial(p), T, C);
    const auto fq = functional_calculus(CalcKind::S, {}, seed_polynomial(q), T, C);
    const auto fpq = functional_calculus(CalcKind::S, {}, seed_polynomial(pq), T, C);
    CHECK(max_abs_diff(fpq, fp * fq) < 1e-7);
  }
}

TEST_CASE("result does not depend on plane, radius, or node count") {
  std::mt19937_64 rng(313);
  const auto T = random_tuple(rng, 3, 4);
  const auto rep = s_spectrum(T);
  const double rt = 1.0 / std::sqrt(2.0);
  const auto a = functional_calculus(CalcKind::S, {}, seed_monomial(2), T,
                                     build_contour(rep, first_plane(3), 1.0, 256));
  const auto b = functional_calculus(CalcKind::S, {}, seed_monomial(2), T,
                                     build_contour(rep, {rt, rt, 0.0}, 1.0, 256));
  const auto c = functional_calculus(CalcKind::S, {}, seed_monomial(2), T,
                                     build_contour(rep, first_plane(3), 2.0, 256));
  const auto d = functional_calculus(CalcKind::S, {}, seed_monomial(2), T,
                                     build_contour(rep, first_plane(3), 1.0, 128));
  CHECK(max_abs_diff(a, b) < 1e-8);
  CHECK(max_abs_diff(a, c) < 1e-8);
  CHECK(max_abs_diff(a, d) < 1e-10);
}

TEST_CASE("trapezoidal error on circles decays geometrically") {
  std::mt19937_64 rng(317);
  const auto T = random_tuple(rng, 3, 4);
  const auto rep = s_spectrum(T);
  const auto direct = direct_polynomial({0.0, 0.0, 0.0, 1.0}, T);
  double prev = -1.0;
  for (int N = 8; N <= 512; N *= 2) {
    const auto C = build_contour(rep, first_plane(3), 1.0, N);
    const double err =
        max_abs_diff(functional_calculus(CalcKind::S, {}, seed_monomial(3), T, C), direct);
    if (prev > 0.0 && prev >= 1e-12) {
      CAPTURE(N, err, prev);
      CHECK(prev / err > 10.0);
    }
    prev = err;
  }
  CHECK(prev < 1e-12);
}

TEST_CASE("second-extension calculus at a point tuple matches the jet value") {
  Paravector<5> x;
  x.r0 = 0.3;
  const double xv[5] = {0.5, -0.2, 0.4, 0.1, -0.3};
  for (int i = 0; i < 5; ++i) x.v[i] = xv[i];
  const auto T = point_tuple(x);
  const auto C = build_contour(s_spectrum(T), first_plane(5), 1.0, 256);

  const auto viaF = functional_calculus(CalcKind::F, {}, seed_monomial(4), T, C);
  const auto g = tfs2(tfs1<5>(seed_monomial(4)));
  CHECK(max_abs_diff(to_mv<5>(viaF), g.value(x)) < 1e-9);

  const auto viaFine = functional_calculus(CalcKind::Fine, {Letter::D}, seed_monomial(4), T, C);
  const auto ext = tfs1<5>(seed_monomial(4));
  CHECK(max_abs_diff(to_mv<5>(viaFine), apply_word({Letter::D}, ext.eval_jet(x, 1)).value()) <
        1e-9);

  const auto viaDD =
      functional_calculus(CalcKind::Fine, {Letter::Delta, Letter::D}, seed_monomial(4), T, C);
  CHECK(max_abs_diff(to_mv<5>(viaDD),
                     apply_word({Letter::Delta, Letter::D}, ext.eval_jet(x, 3)).value()) < 1e-9);
}

TEST_CASE("operator substitution with a numerically derived kernel constant") {
  // derive the closed-form coefficient from the jet route at a probe point,
  // then integrate with it: an independent path to the same operator
  std::mt19937_64 rng(331);
  const auto T = random_tuple(rng, 5, 3);
  const auto C = build_contour(s_spectrum(T), first_plane(5), 1.0, 256);
  for (const Word w : {Word{Letter::D}, Word{Letter::Delta, Letter::D}}) {
    const ClosedForm cf = closed_form(5, w);
    Paravector<5> s0(2.1), x0(0.3);
    s0.v[1] = 0.4;
    x0.v[0] = -0.5;
    x0.v[3] = 0.2;
    const Multivector<5> probe = fine_kernel(w, s0, x0, KernelRoute::jet);
    Multivector<5> qp(1.0);
    for (int e = 0; e < cf.qpow; ++e) qp = qp * q_eval(s0, x0);
    const Multivector<5> coeff_mv = probe * qp;
    Multivector<5> off = coeff_mv;
    off.c[0] = 0.0;
    REQUIRE(off.norm() < 1e-8);  // scalar constant, as registered
    const ClosedForm derived{coeff_mv.real(), cf.qpow, cf.affine};
    const auto via_registry =
        functional_calculus(CalcKind::Fine, w, seed_monomial(3), T, C);
    const auto via_derived = contour_quadrature(derived, seed_monomial(3), T, C);
    CHECK(max_abs_diff(via_registry, via_derived) < 1e-8);
  }
}

TEST_CASE("close spheres integrate over a merged contour") {
  OperatorTuple T;
  T.n = 3;
  T.m = 2;
  T.T.assign(4, Eigen::MatrixXd::Zero(2, 2));
  T.T[0] = Eigen::Vector2d(0.0, 0.3).asDiagonal();
  const auto rep = s_spectrum(T);
  const auto C = build_contour(rep, first_plane(3), 1.0, 256);
  CHECK(C.circles.size() == 1);
  CHECK_NOTHROW(validate_contour(C, rep));
  const auto z3 = functional_calculus(CalcKind::S, {}, seed_monomial(3), T, C);
  CHECK(max_abs_diff(z3, direct_polynomial({0, 0, 0, 1}, T)) < 1e-8);
}

TEST_CASE("calculus error conditions") {
  std::mt19937_64 rng(337);
  const auto T = random_tuple(rng, 3, 4);
  const auto rep = s_spectrum(T);
  const auto C = build_contour(rep, first_plane(3), 1.0, 64);

  // pole of f inside the integration region
  CHECK_THROWS_AS(functional_calculus(CalcKind::S, {}, seed_reciprocal(cplx(0.1, 0.0)), T, C),
                  NotSliceHyperholomorphic);
  // pole far outside is fine
  CHECK_NOTHROW(functional_calculus(CalcKind::S, {}, seed_reciprocal(cplx(40.0, 0.0)), T, C));

  // hand-built contours that miss or touch the spectrum
  Contour miss;
  miss.plane = first_plane(3);
  miss.nodes = 32;
  miss.circles = {{90.0, 0.0, 0.5}};
  CHECK_THROWS_AS(validate_contour(miss, rep), ContourTouchesSpectrum);

  OperatorTuple Td;
  Td.n = 3;
  Td.m = 2;
  Td.T.assign(4, Eigen::MatrixXd::Zero(2, 2));
  Td.T[0] = Eigen::Vector2d(0.0, 2.0).asDiagonal();
  const auto repd = s_spectrum(Td);
  Contour touch;
  touch.plane = first_plane(3);
  touch.nodes = 32;
  touch.circles = {{0.0, 0.0, 1.99}, {90.0, 0.0, 0.5}};
  CHECK_THROWS_AS(validate_contour(touch, repd), ContourTouchesSpectrum);

  // unregistered fine word
  CHECK_THROWS_AS(functional_calculus(CalcKind::Fine, {Letter::Dbar}, seed_monomial(2), T, C),
                  UnknownClosedForm);

  // even dimension has no second extension exponent
  OperatorTuple Te;
  Te.n = 4;
  Te.m = 1;
  Te.T.assign(5, Eigen::MatrixXd::Zero(1, 1));
  const auto Ce = build_contour(s_spectrum(Te), first_plane(4), 1.0, 32);
  CHECK_THROWS_AS(functional_calculus(CalcKind::F, {}, seed_monomial(2), Te, Ce),
                  EvenDimension);

  // non-intrinsic seed is rejected before any integration
  Seed bad;
  bad.name = "conj";
  bad.taylor = [](cplx z, int m) {
    std::vector<cplx> c(m + 1, 0.0);
    c[0] = std::conj(z);
    if (m >= 1) c[1] = 1.0;
    return c;
  };
  CHECK_THROWS_AS(functional_calculus(CalcKind::S, {}, bad, T, C), SeedNotHolomorphic);
}

TEST_CASE("quadrature is bit-reproducible") {
  std::mt19937_64 rng(347);
  const auto T = random_tuple(rng, 3, 4);
  const auto C = build_contour(s_spectrum(T), first_plane(3), 1.0, 256);
  const auto a = functional_calculus(CalcKind::S, {}, seed_exp(), T, C);
  const auto b = functional_calculus(CalcKind::S, {}, seed_exp(), T, C);
  CHECK(max_abs_diff(a, b) == 0.0);
}
