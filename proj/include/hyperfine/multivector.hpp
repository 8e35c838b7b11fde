#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>

#include "hyperfine/blades.hpp"
#include "hyperfine/errors.hpp"

namespace hyperfine {

// Element of the real Clifford algebra R_N over generators e_1..e_N with
// e_i e_j = -e_j e_i and e_i^2 = -1.  Coefficients are indexed by blade mask.
template <int N>
struct Multivector {
  static_assert(N >= 1 && N <= 8, "generator count out of supported range");
  static constexpr int vector_dim = N;
  static constexpr int size = 1 << N;

  std::array<double, size> c{};

  Multivector() = default;
  Multivector(double s) { c[0] = s; }  // NOLINT: implicit scalar embedding

  static Multivector blade(std::uint32_t mask, double w = 1.0) {
    assert(mask < static_cast<std::uint32_t>(size));
    Multivector m;
    m.c[mask] = w;
    return m;
  }
  // e_i, 1-based to match the classical notation e_1..e_N.
  static Multivector basis(int i) {
    assert(i >= 1 && i <= N);
    return blade(1u << (i - 1));
  }

  double& operator[](int mask) { return c[mask]; }
  const double& operator[](int mask) const { return c[mask]; }

  Multivector& operator+=(const Multivector& o) {
    for (int i = 0; i < size; ++i) c[i] += o.c[i];
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    for (int i = 0; i < size; ++i) c[i] -= o.c[i];
    return *this;
  }
  Multivector& operator*=(double s) {
    for (double& x : c) x *= s;
    return *this;
  }
  Multivector& operator/=(double s) { return *this *= (1.0 / s); }

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, double s) { return a *= s; }
  friend Multivector operator*(double s, Multivector a) { return a *= s; }
  friend Multivector operator/(Multivector a, double s) { return a *= (1.0 / s); }
  friend Multivector operator-(const Multivector& a) {
    Multivector m;
    for (int i = 0; i < size; ++i) m.c[i] = -a.c[i];
    return m;
  }

  friend Multivector operator*(const Multivector& a, const Multivector& b) {
    Multivector out;
    mul_add(out, a, b);
    return out;
  }

  // out += a * b, skipping zero coefficients; jets call this in tight loops
  // where operands carry only a handful of nonzero blades.
  friend void mul_add(Multivector& out, const Multivector& a, const Multivector& b) {
    for (int i = 0; i < size; ++i) {
      const double ai = a.c[i];
      if (ai == 0.0) continue;
      for (int j = 0; j < size; ++j) {
        const double bj = b.c[j];
        if (bj == 0.0) continue;
        out.c[blade_mul_mask(i, j)] += blade_mul_sign(i, j) * ai * bj;
      }
    }
  }

  Multivector conj() const {
    Multivector m;
    for (int i = 0; i < size; ++i) m.c[i] = blade_conjugation_sign(i) * c[i];
    return m;
  }

  double real() const { return c[0]; }

  Multivector grade(int k) const {
    Multivector m;
    for (int i = 0; i < size; ++i)
      if (blade_grade(i) == k) m.c[i] = c[i];
    return m;
  }

  Multivector vec() const { return grade(1); }

  double norm_sq() const {
    double s = 0.0;
    for (double x : c) s += x * x;
    return s;
  }
  double norm() const { return std::sqrt(norm_sq()); }

  double vec_norm() const {
    double s = 0.0;
    for (int i = 1; i <= N; ++i) {
      const double x = c[1u << (i - 1)];
      s += x * x;
    }
    return std::sqrt(s);
  }

  // Largest coefficient living outside grades 0 and 1.
  double non_paravector_mass() const {
    double m = 0.0;
    for (int i = 0; i < size; ++i)
      if (blade_grade(i) > 1) m = std::max(m, std::abs(c[i]));
    return m;
  }
};

template <int N>
double max_abs_diff(const Multivector<N>& a, const Multivector<N>& b) {
  double m = 0.0;
  for (int i = 0; i < Multivector<N>::size; ++i)
    m = std::max(m, std::abs(a.c[i] - b.c[i]));
  return m;
}

// Sphere [x] = { Re x + J |vec x| : J imaginary unit }; degenerate when the
// radius vanishes (real points).
struct Sphere {
  double center = 0.0;
  double radius = 0.0;
};

// Paravector x = x0 + x1 e_1 + ... + xN e_N, the points where slice functions
// and kernels are evaluated.
template <int N>
struct Paravector {
  double r0 = 0.0;
  std::array<double, N> v{};

  Paravector() = default;
  explicit Paravector(double x0) : r0(x0) {}
  Paravector(double x0, const std::array<double, N>& xv) : r0(x0), v(xv) {}

  static Paravector from(const Multivector<N>& m) {
    Paravector p;
    p.r0 = m.c[0];
    for (int i = 1; i <= N; ++i) p.v[i - 1] = m.c[1u << (i - 1)];
    return p;
  }

  Multivector<N> mv() const {
    Multivector<N> m(r0);
    for (int i = 1; i <= N; ++i) m.c[1u << (i - 1)] = v[i - 1];
    return m;
  }

  Paravector conj() const {
    Paravector p = *this;
    for (double& x : p.v) x = -x;
    return p;
  }

  double vec_norm_sq() const {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
  }
  double vec_norm() const { return std::sqrt(vec_norm_sq()); }
  double modulus_sq() const { return r0 * r0 + vec_norm_sq(); }
  double modulus() const { return std::sqrt(modulus_sq()); }

  friend Paravector operator+(Paravector a, const Paravector& b) {
    a.r0 += b.r0;
    for (int i = 0; i < N; ++i) a.v[i] += b.v[i];
    return a;
  }
  friend Paravector operator-(Paravector a, const Paravector& b) {
    a.r0 -= b.r0;
    for (int i = 0; i < N; ++i) a.v[i] -= b.v[i];
    return a;
  }
  friend Paravector operator*(Paravector a, double s) {
    a.r0 *= s;
    for (double& x : a.v) x *= s;
    return a;
  }
};

template <int N>
Sphere sphere_of(const Paravector<N>& x) {
  return Sphere{x.r0, x.vec_norm()};
}

template <int N>
Sphere sphere_of(const Multivector<N>& x) {
  return Sphere{x.c[0], x.vec_norm()};
}

// Distance between x and the sphere [s] inside any slice plane through both;
// zero exactly when x lies on [s].  Used for kernel admissibility.
inline double sphere_distance(const Sphere& s, const Sphere& x) {
  const double du = x.center - s.center;
  const double dv = x.radius - s.radius;
  return std::sqrt(du * du + dv * dv);
}

}  // namespace hyperfine
