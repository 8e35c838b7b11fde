#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hyperfine/contour.hpp"
#include "hyperfine/kernels.hpp"
#include "hyperfine/operators.hpp"
#include "hyperfine/slice.hpp"
#include "hyperfine/spectrum.hpp"

namespace hyperfine {

enum class CalcKind { S, F, Fine };

// S-calculus integrates the plain resolvent (empty word), F-calculus the
// word Delta^((n-1)/2); Fine carries a caller-chosen word.
inline Word calculus_word(CalcKind kind, int n, const Word& fine_word = {}) {
  switch (kind) {
    case CalcKind::S:
      return {};
    case CalcKind::F:
      return Word(static_cast<std::size_t>(sce_exponent(n)), Letter::Delta);
    case CalcKind::Fine:
      return fine_word;
  }
  return {};
}

// (s I - Tbar) with s = u + I v
inline OperatorMultivector affine_resolvent_factor(double u, double v,
                                                   const std::vector<double>& plane,
                                                   const OperatorTuple& T) {
  OperatorMultivector out(T.n, T.m);
  out.c[0] = u * Eigen::MatrixXd::Identity(T.m, T.m) - T.T[0];
  for (int j = 1; j <= T.n; ++j)
    out.c[1u << (j - 1)] =
        v * plane[j - 1] * Eigen::MatrixXd::Identity(T.m, T.m) + T.T[j];
  return out;
}

// Fixed-order pairwise summation: deterministic bits independent of any
// parallel evaluation of the terms.
inline OperatorMultivector pairwise_sum(const std::vector<OperatorMultivector>& terms,
                                        std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return terms[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(terms, lo, mid) + pairwise_sum(terms, mid, hi);
}

// Trapezoidal quadrature of (1/2pi) sum over circles of
// kernel(s) * ds_I * f(s), with ds_I = R e^{I theta} d theta and the factor
// order exactly as written.  ds_I and f(s) live in the plane C_I, so their
// product is computed as a complex number before embedding.
inline OperatorMultivector contour_quadrature(const ClosedForm& cf, const Seed& f,
                                              const OperatorTuple& T, const Contour& C) {
  if (static_cast<int>(C.plane.size()) != T.n)
    throw DimensionMismatch("contour plane has " + std::to_string(C.plane.size()) +
                            " components, expected " + std::to_string(T.n));
  using cd = std::complex<double>;
  const int N = C.nodes;
  if (N < 1 || C.circles.empty()) return OperatorMultivector(T.n, T.m);
  std::vector<OperatorMultivector> terms;
  terms.reserve(C.circles.size() * static_cast<std::size_t>(N));
  for (const auto& k : C.circles) {
    for (int j = 0; j < N; ++j) {
      const double th = 2.0 * std::numbers::pi * j / N;
      const double u = k.cu + k.r * std::cos(th);
      const double v = k.cv + k.r * std::sin(th);
      const QInverseParts p = q_op_inverse_parts(u, v, T);
      Eigen::MatrixXcd qinv = p.C.cast<cd>() + cd(0.0, 1.0) * p.D.cast<cd>();
      Eigen::MatrixXcd qp = qinv;
      for (int e = 1; e < cf.qpow; ++e) qp = qp * qinv;
      OperatorMultivector kern(T.n, T.m);
      kern.c[0] = qp.real();
      for (int b = 1; b <= T.n; ++b)
        if (C.plane[b - 1] != 0.0) kern.c[1u << (b - 1)] = C.plane[b - 1] * qp.imag();
      if (cf.affine) kern = affine_resolvent_factor(u, v, C.plane, T) * kern;
      kern *= cf.coeff;
      const cd node_ds = (2.0 * std::numbers::pi / N) * k.r * std::exp(cd(0.0, th));
      const cd zeta = node_ds * f.value(cd(u, v));
      terms.push_back(kern * embed_inplane(zeta.real(), zeta.imag(), C.plane, T.n, T.m));
    }
  }
  return pairwise_sum(terms, 0, terms.size()) * (1.0 / (2.0 * std::numbers::pi));
}

// Poles of f (and their mirror images) must clear the closed discs by 5%.
inline void check_poles_outside(const Seed& f, const Contour& C) {
  for (const cplx& p : f.singularities)
    for (const double sign : {1.0, -1.0})
      for (const auto& k : C.circles)
        if (std::hypot(p.real() - k.cu, sign * p.imag() - k.cv) < 1.05 * k.r)
          throw NotSliceHyperholomorphic("singularity at (" + std::to_string(p.real()) + "," +
                                         std::to_string(p.imag()) +
                                         ") meets the integration region");
}

// The closed forms feeding the operator substitution are trusted only after
// the jet-route self-test; dimensions without a compile-time jet oracle
// (neither 3 nor 5) carry only the dimension-generic entries.
inline void closed_form_gate(int n, const Word& w, const ClosedForm& cf) {
  bool ok = true;
  if (n == 3) ok = closed_form_confirmed<3>(w, cf);
  if (n == 5) ok = closed_form_confirmed<5>(w, cf);
  if (!ok)
    throw UnknownClosedForm("closed form for '" + word_name(w) +
                            "' failed its self-test against the jet route");
}

inline OperatorMultivector functional_calculus(CalcKind kind, const Word& fine_word,
                                               const Seed& f, const OperatorTuple& T,
                                               const Contour& C) {
  T.validate();
  validate_seed(f);
  const Word w = calculus_word(kind, T.n, fine_word);
  const ClosedForm cf = closed_form(T.n, w);
  closed_form_gate(T.n, w, cf);
  validate_contour(C, s_spectrum(T));
  check_poles_outside(f, C);
  return contour_quadrature(cf, f, T, C);
}

// Direct substitution oracles for comparison reports.
inline OperatorMultivector direct_polynomial(const std::vector<double>& coeffs,
                                             const OperatorTuple& T) {
  const OperatorMultivector X = T.embed();
  OperatorMultivector acc(T.n, T.m);
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    acc = acc * X;
    acc.c[0] += coeffs[k] * Eigen::MatrixXd::Identity(T.m, T.m);
  }
  return acc;
}

inline OperatorMultivector direct_exp(const OperatorTuple& T) {
  const OperatorMultivector X = T.embed();
  OperatorMultivector sum = OperatorMultivector::identity(T.n, T.m);
  OperatorMultivector term = OperatorMultivector::identity(T.n, T.m);
  for (int k = 1; k <= 80; ++k) {
    term = term * X * (1.0 / k);
    sum += term;
    if (term.norm() < 1e-18 * (1.0 + sum.norm())) break;
  }
  return sum;
}

}  // namespace hyperfine
