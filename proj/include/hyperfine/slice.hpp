#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "hyperfine/errors.hpp"
#include "hyperfine/jet.hpp"
#include "hyperfine/multivector.hpp"

namespace hyperfine {

using cplx = std::complex<double>;

// Holomorphic stem of an intrinsic slice function.  taylor(z0, m) returns the
// coefficients f^{(j)}(z0)/j! for j = 0..m; intrinsic means f(conj z) =
// conj f(z), which keeps the induced pair (alpha, beta) real-valued.
struct Seed {
  std::string name;
  std::function<std::vector<cplx>(cplx, int)> taylor;
  std::vector<cplx> singularities;
  bool entire = true;

  cplx value(cplx z) const { return taylor(z, 0)[0]; }
};

inline Seed seed_monomial(int k) {
  Seed s;
  s.name = "z^" + std::to_string(k);
  s.taylor = [k](cplx z, int m) {
    std::vector<cplx> c(m + 1, 0.0);
    // binomial expansion of (z + h)^k with iterated powers
    std::vector<cplx> zp(k + 1, 1.0);
    for (int j = 1; j <= k; ++j) zp[j] = zp[j - 1] * z;
    double binom = 1.0;
    for (int j = 0; j <= m && j <= k; ++j) {
      c[j] = binom * zp[k - j];
      binom = binom * (k - j) / (j + 1);
    }
    return c;
  };
  return s;
}

// Polynomial with real coefficients c0 + c1 z + ... (intrinsic by construction).
inline Seed seed_polynomial(const std::vector<double>& coeffs) {
  Seed s;
  s.name = "poly" + std::to_string(coeffs.empty() ? 0 : coeffs.size() - 1);
  s.taylor = [coeffs](cplx z, int m) {
    std::vector<cplx> c(m + 1, 0.0);
    // repeated synthetic differentiation keeps the j! folded in
    std::vector<cplx> work(coeffs.begin(), coeffs.end());
    for (int j = 0; j <= m; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = work.size(); k-- > 0;) acc = acc * z + work[k];
      c[j] = acc;
      for (std::size_t k = 1; k < work.size(); ++k)
        work[k - 1] = work[k] * (static_cast<double>(k) / (j + 1));
      if (!work.empty()) work.pop_back();
    }
    return c;
  };
  return s;
}

inline Seed seed_exp() {
  Seed s;
  s.name = "exp";
  s.taylor = [](cplx z, int m) {
    std::vector<cplx> c(m + 1);
    const cplx e = std::exp(z);
    double fact = 1.0;
    for (int j = 0; j <= m; ++j) {
      c[j] = e / fact;
      fact *= (j + 1);
    }
    return c;
  };
  return s;
}

// 1/(z - p) for real p; for complex p the symmetrized pair
// (1/(z-p) + 1/(z-conj p))/2, which restores intrinsicness.
inline Seed seed_reciprocal(cplx p) {
  Seed s;
  s.name = "inv";
  s.entire = false;
  if (std::abs(p.imag()) < 1e-15) {
    const double pr = p.real();
    s.singularities = {cplx(pr, 0.0)};
    s.taylor = [pr](cplx z, int m) {
      std::vector<cplx> c(m + 1);
      const cplx w = 1.0 / (z - pr);
      cplx pw = w;
      for (int j = 0; j <= m; ++j) {
        c[j] = pw * (j % 2 ? -1.0 : 1.0);
        pw *= w;
      }
      return c;
    };
  } else {
    s.singularities = {p, std::conj(p)};
    s.taylor = [p](cplx z, int m) {
      std::vector<cplx> c(m + 1);
      const cplx w1 = 1.0 / (z - p), w2 = 1.0 / (z - std::conj(p));
      cplx p1 = w1, p2 = w2;
      for (int j = 0; j <= m; ++j) {
        c[j] = 0.5 * (p1 + p2) * (j % 2 ? -1.0 : 1.0);
        p1 *= w1;
        p2 *= w2;
      }
      return c;
    };
  }
  return s;
}

// Validates that the taylor functor is coherent (finite differences of the
// value reproduce the reported derivative, in both the real and the
// imaginary direction) and intrinsic.  The imaginary-direction check is the
// Cauchy-Riemann test: it rejects functors built from non-holomorphic data.
inline void validate_seed(const Seed& s) {
  const std::vector<cplx> probes = {cplx(0.37, 0.41), cplx(-0.29, 0.23), cplx(0.11, -0.31)};
  const double h = 1e-4;
  for (cplx z0 : probes) {
    bool near_pole = false;
    for (cplx p : s.singularities)
      if (std::abs(z0 - p) < 0.3) near_pole = true;
    if (near_pole) continue;

    const cplx d = s.taylor(z0, 1)[1];
    const cplx fd_re = (s.value(z0 + h) - s.value(z0 - h)) / (2 * h);
    const cplx fd_im = (s.value(z0 + cplx(0, h)) - s.value(z0 - cplx(0, h))) / cplx(0, 2 * h);
    const double scale = 1.0 + std::abs(d);
    if (std::abs(fd_re - d) > 1e-5 * scale || std::abs(fd_im - d) > 1e-5 * scale)
      throw SeedNotHolomorphic("seed '" + s.name + "' fails the Cauchy-Riemann check at z=(" +
                               std::to_string(z0.real()) + "," + std::to_string(z0.imag()) + ")");

    const cplx v = s.value(z0), vc = s.value(std::conj(z0));
    if (std::abs(vc - std::conj(v)) > 1e-10 * (1.0 + std::abs(v)))
      throw NotSliceHyperholomorphic("seed '" + s.name +
                                     "' is not intrinsic: f(conj z) != conj f(z)");
  }
}

// Intrinsic slice function f(x) = alpha(u, v) + (vec x/|vec x|) beta(u, v)
// with u = x0, v = |vec x|, alpha + i beta = stem(u + iv).  This is the first
// (slice) extension step: the stem is extended from the plane to all of
// R^{n+1} by axial symmetry.
template <int N>
struct SliceFunction {
  Seed seed;
  Side side = Side::left;

  cplx stem(double u, double v) const { return seed.value(cplx(u, v)); }

  // Pointwise evaluation; fine on the real axis where beta vanishes.
  Multivector<N> eval(const Paravector<N>& x) const {
    const double v = x.vec_norm();
    const cplx w = stem(x.r0, v);
    Multivector<N> out(w.real());
    if (v > 1e-14) {
      const double scale = w.imag() / v;
      for (int i = 1; i <= N; ++i) out.c[1u << (i - 1)] += scale * x.v[i - 1];
    }
    return out;
  }

  // Taylor jet of the function at x in all n+1 coordinates.  The slice chart
  // (u, v) degenerates on the real axis, hence the guard.
  Jet<N> eval_jet(const Paravector<N>& x, int degree) const {
    const double v0 = x.vec_norm();
    if (v0 < 1e-8)
      throw OnRealAxis("eval_jet at |vec x| = " + std::to_string(v0));

    // chart jets
    Jet<N> rho(degree);
    {
      Jet<N> acc(degree);
      for (int i = 1; i <= N; ++i) {
        const auto xi = Jet<N>::coordinate(i, x.v[i - 1], degree);
        acc += xi * xi;
      }
      rho = acc;
    }
    const Jet<N> r = jet_sqrt(rho);
    const Jet<N> u = Jet<N>::coordinate(0, x.r0, degree);

    // deviation jets du = u - u0, dv = r - v0 have zero constant term
    Jet<N> du = u;
    du.a[0] = Multivector<N>(0.0);
    Jet<N> dv = r;
    dv.a[0] = Multivector<N>(0.0);

    // bivariate Taylor data of (alpha, beta) at (u0, v0) from the stem:
    // coefficient of du^a dv^b is C(a+b, b) i^b f^{(a+b)}(z0)/(a+b)!.
    const std::vector<cplx> c = seed.taylor(cplx(x.r0, v0), degree);

    std::vector<Jet<N>> du_pow(degree + 1, Jet<N>::constant(Multivector<N>(1.0), degree));
    std::vector<Jet<N>> dv_pow = du_pow;
    for (int k = 1; k <= degree; ++k) {
      du_pow[k] = du_pow[k - 1] * du;
      dv_pow[k] = dv_pow[k - 1] * dv;
    }

    Jet<N> alpha(degree), beta(degree);
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) {
        double binom = 1.0;
        for (int t = 0; t < b; ++t) binom = binom * (a + b - t) / (t + 1);
        cplx ib(1.0, 0.0);
        switch (b % 4) {
          case 1: ib = cplx(0.0, 1.0); break;
          case 2: ib = cplx(-1.0, 0.0); break;
          case 3: ib = cplx(0.0, -1.0); break;
          default: break;
        }
        const cplx w = binom * ib * c[a + b];
        const Jet<N> basis = du_pow[a] * dv_pow[b];
        alpha += w.real() * basis;
        beta += w.imag() * basis;
      }

    // omega = vec x / |vec x| as a jet
    Jet<N> vecjet(degree);
    for (int i = 1; i <= N; ++i) {
      vecjet.a[0] += Multivector<N>::basis(i) * x.v[i - 1];
      if (degree >= 1) vecjet.a[1 + i] = Multivector<N>::basis(i);
    }
    const Jet<N> omega = vecjet * jet_invert(r);

    return side == Side::left ? alpha + omega * beta : alpha + beta * omega;
  }
};

// First extension step: intrinsic slice function from a holomorphic seed.
template <int N>
SliceFunction<N> tfs1(const Seed& seed, Side side = Side::left) {
  validate_seed(seed);
  return SliceFunction<N>{seed, side};
}

// Function known through its jets at points.
template <int N>
struct JetField {
  std::function<Jet<N>(const Paravector<N>&, int)> jet;

  Multivector<N> value(const Paravector<N>& x) const { return jet(x, 0).value(); }
};

inline int sce_exponent(int n) {
  if (n % 2 == 0)
    throw EvenDimension("the second extension step needs odd n, got " + std::to_string(n));
  return (n - 1) / 2;
}

// Second extension step: Delta^{(n-1)/2} maps the slice extension to an
// axially monogenic function.
template <int N>
JetField<N> tfs2(const SliceFunction<N>& f) {
  const int h = sce_exponent(N);
  return JetField<N>{[f, h](const Paravector<N>& x, int degree) {
    Jet<N> j = f.eval_jet(x, degree + 2 * h);
    for (int k = 0; k < h; ++k) j = apply_Delta(j);
    return j;
  }};
}

}  // namespace hyperfine
