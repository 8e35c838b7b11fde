#pragma once

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <string>

#include "hyperfine/errors.hpp"
#include "hyperfine/jet.hpp"
#include "hyperfine/multivector.hpp"

namespace hyperfine {

// Inverse through the Clifford conjugate.  Valid whenever m * conj(m) is a
// real scalar, which holds for paravectors and for values confined to one
// slice plane; anything else is a caller bug, not a data condition.
template <int N>
Multivector<N> conj_inverse(const Multivector<N>& m) {
  Multivector<N> prod;
  mul_add(prod, m, m.conj());
  const double s0 = prod.real();
  Multivector<N> off = prod;
  off.c[0] = 0.0;
  if (std::abs(s0) < 1e-300 || off.norm() > 1e-10 * std::abs(s0))
    throw std::logic_error("conj_inverse: m * conj(m) is not a real scalar");
  return m.conj() * (1.0 / s0);
}

// The kernels below are defined away from the sphere [s]; on it the
// companion polynomial degenerates.
template <int N>
void check_admissible(const Paravector<N>& s, const Paravector<N>& x) {
  const double d = sphere_distance(sphere_of(s), sphere_of(x));
  if (d < 1e-10)
    throw OnSpectrumSphere("x lies on [s] (chart distance " + std::to_string(d) + ")");
}

// Companion polynomial Q_s(x) = s^2 - 2 x0 s + |x|^2, a paravector in the
// slice plane of s.  Vanishes exactly when x lies on [s].
template <int N>
Multivector<N> q_eval(const Paravector<N>& s, const Paravector<N>& x) {
  const Multivector<N> sm = s.mv();
  return sm * sm - 2.0 * x.r0 * sm + Multivector<N>(x.modulus_sq());
}

template <int N>
Multivector<N> q_inverse(const Paravector<N>& s, const Paravector<N>& x) {
  check_admissible(s, x);
  return conj_inverse(q_eval(s, x));
}

// Left Cauchy kernel (s - xbar) Q_s(x)^{-1}; reproduces the geometric series
// sum_k x^k s^{-1-k} on |x| < |s|.  The affine factor multiplies from the
// left; the mirrored product is the right kernel, matching
// sum_k s^{-1-k} x^k.
template <int N>
Multivector<N> s_left_kernel(const Paravector<N>& s, const Paravector<N>& x) {
  return (s.mv() - x.conj().mv()) * q_inverse(s, x);
}

template <int N>
Multivector<N> s_right_kernel(const Paravector<N>& s, const Paravector<N>& x) {
  return q_inverse(s, x) * (s.mv() - x.conj().mv());
}

// Jet of Q_s around x in the n+1 coordinates of x.
template <int N>
Jet<N> q_jet(const Paravector<N>& s, const Paravector<N>& x, int degree) {
  const Multivector<N> sm = s.mv();
  Jet<N> x0 = Jet<N>::coordinate(0, x.r0, degree);
  Jet<N> mod2 = x0 * x0;
  for (int v = 1; v <= N; ++v) {
    const Jet<N> xv = Jet<N>::coordinate(v, x.v[v - 1], degree);
    mod2 += xv * xv;
  }
  Jet<N> q = mod2;
  q += mv_mul_right(x0 * (-2.0), sm);
  q += Jet<N>::constant(sm * sm, degree);
  return q;
}

template <int N>
Jet<N> q_inverse_jet(const Paravector<N>& s, const Paravector<N>& x, int degree) {
  check_admissible(s, x);
  return jet_invert(q_jet(s, x, degree));
}

template <int N>
Jet<N> s_left_kernel_jet(const Paravector<N>& s, const Paravector<N>& x, int degree) {
  Jet<N> affine = Jet<N>::constant(s.mv(), degree);
  affine -= Jet<N>::coordinate(0, x.r0, degree);
  for (int v = 1; v <= N; ++v)
    affine += mv_mul_right(Jet<N>::coordinate(v, x.v[v - 1], degree), Multivector<N>::basis(v));
  return affine * q_inverse_jet(s, x, degree);
}

template <int N>
Jet<N> s_right_kernel_jet(const Paravector<N>& s, const Paravector<N>& x, int degree) {
  Jet<N> affine = Jet<N>::constant(s.mv(), degree);
  affine -= Jet<N>::coordinate(0, x.r0, degree);
  for (int v = 1; v <= N; ++v)
    affine += mv_mul_left(Multivector<N>::basis(v), Jet<N>::coordinate(v, x.v[v - 1], degree));
  return q_inverse_jet(s, x, degree) * affine;
}

// Closed form coeff * (s - xbar)^{affine} * Q_s(x)^{-qpow} for the words
// whose kernel derivative collapses to a rational expression in s and x.
struct ClosedForm {
  double coeff = 1.0;
  int qpow = 1;
  bool affine = false;
};

inline ClosedForm closed_form(int n, const Word& w) {
  int nd = 0, ndbar = 0, ndelta = 0;
  for (Letter l : w) {
    if (l == Letter::D) ++nd;
    if (l == Letter::Dbar) ++ndbar;
    if (l == Letter::Delta) ++ndelta;
  }
  if (nd == 0 && ndbar == 0 && ndelta == 0) return {1.0, 1, true};
  if (nd == 1 && ndbar == 0 && ndelta == 0) return {-(n - 1.0), 1, false};
  if (n == 3 && nd == 0 && ndbar == 0 && ndelta == 1) return {-4.0, 2, true};
  if (n == 5 && nd == 1 && ndbar == 0 && ndelta == 1) return {16.0, 2, false};
  if (n == 5 && nd == 0 && ndbar == 0 && ndelta == 2) return {64.0, 3, true};
  throw UnknownClosedForm("no closed form for '" + word_name(w) +
                          "' at n=" + std::to_string(n));
}

template <int N>
Multivector<N> closed_form_eval(const ClosedForm& cf, const Paravector<N>& s,
                                const Paravector<N>& x) {
  const Multivector<N> qi = q_inverse(s, x);
  Multivector<N> out(cf.coeff);
  if (cf.affine) out = out * (s.mv() - x.conj().mv());
  for (int k = 0; k < cf.qpow; ++k) out = out * qi;
  return out;
}

enum class KernelRoute { jet, closed_form };

// Derivative of the left kernel under a word in D, Dbar, Delta.  The jet
// route differentiates the kernel jet (degree = word order) and is the
// source of truth; the closed-form route is an accelerator and is admitted
// only after a one-time comparison against the jet route at fixed points.
template <int N>
Multivector<N> fine_kernel(const Word& w, const Paravector<N>& s, const Paravector<N>& x,
                           KernelRoute via = KernelRoute::jet);

template <int N>
bool closed_form_confirmed(const Word& w, const ClosedForm& cf) {
  static std::mutex mu;
  static std::map<std::string, bool> cache;
  const std::string key = word_name(w);
  std::lock_guard<std::mutex> lock(mu);
  const auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  bool ok = true;
  for (int t = 0; t < 3 && ok; ++t) {
    Paravector<N> s, x;
    s.r0 = 2.0 + 0.3 * t;
    x.r0 = 0.2 - 0.1 * t;
    for (int i = 0; i < N; ++i) {
      s.v[i] = 0.4 / (1 + i) - 0.05 * t;
      x.v[i] = (i % 2 ? -0.3 : 0.25) + 0.04 * t * (i + 1);
    }
    const Multivector<N> ref = fine_kernel(w, s, x, KernelRoute::jet);
    const Multivector<N> cand = closed_form_eval(cf, s, x);
    ok = max_abs_diff(ref, cand) <= 1e-8 * (1.0 + ref.norm());
  }
  cache.emplace(key, ok);
  return ok;
}

template <int N>
Multivector<N> fine_kernel(const Word& w, const Paravector<N>& s, const Paravector<N>& x,
                           KernelRoute via) {
  if (via == KernelRoute::jet)
    return apply_word(w, s_left_kernel_jet(s, x, word_order(w))).value();
  const ClosedForm cf = closed_form(N, w);
  if (!closed_form_confirmed<N>(w, cf))
    throw UnknownClosedForm("closed form for '" + word_name(w) +
                            "' failed its self-test against the jet route");
  return closed_form_eval(cf, s, x);
}

}  // namespace hyperfine
