#pragma once

// Test-only oracle.  Fourth-order central finite differences for pointwise
// functions of a paravector, entirely independent of the jet engine.  Good
// for ~1e-9 absolute accuracy on smooth O(1) data with the default steps.

#include <functional>

#include "hyperfine/multivector.hpp"

namespace fd {

template <int N>
using PointFn = std::function<hyperfine::Multivector<N>(const hyperfine::Paravector<N>&)>;

template <int N>
hyperfine::Paravector<N> shifted(hyperfine::Paravector<N> x, int v, double h) {
  if (v == 0)
    x.r0 += h;
  else
    x.v[v - 1] += h;
  return x;
}

template <int N>
hyperfine::Multivector<N> d1(const PointFn<N>& f, const hyperfine::Paravector<N>& x, int v,
                             double h = 1e-3) {
  const auto fp2 = f(shifted(x, v, 2 * h)), fp1 = f(shifted(x, v, h));
  const auto fm1 = f(shifted(x, v, -h)), fm2 = f(shifted(x, v, -2 * h));
  return (-1.0 * fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
}

template <int N>
hyperfine::Multivector<N> d2(const PointFn<N>& f, const hyperfine::Paravector<N>& x, int v,
                             double h = 1e-2) {
  const auto fp2 = f(shifted(x, v, 2 * h)), fp1 = f(shifted(x, v, h));
  const auto fm1 = f(shifted(x, v, -h)), fm2 = f(shifted(x, v, -2 * h));
  return (-1.0 * fp2 + 16.0 * fp1 - 30.0 * f(x) + 16.0 * fm1 - fm2) / (12.0 * h * h);
}

template <int N>
hyperfine::Multivector<N> apply_D(const PointFn<N>& f, const hyperfine::Paravector<N>& x) {
  auto out = d1(f, x, 0);
  for (int i = 1; i <= N; ++i) out += hyperfine::Multivector<N>::basis(i) * d1(f, x, i);
  return out;
}

template <int N>
hyperfine::Multivector<N> apply_Dbar(const PointFn<N>& f, const hyperfine::Paravector<N>& x) {
  auto out = d1(f, x, 0);
  for (int i = 1; i <= N; ++i) out -= hyperfine::Multivector<N>::basis(i) * d1(f, x, i);
  return out;
}

template <int N>
hyperfine::Multivector<N> apply_Delta(const PointFn<N>& f, const hyperfine::Paravector<N>& x) {
  auto out = d2(f, x, 0);
  for (int i = 1; i <= N; ++i) out += d2(f, x, i);
  return out;
}

}  // namespace fd
