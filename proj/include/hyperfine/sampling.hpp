#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hyperfine/multivector.hpp"

namespace hyperfine {

// All randomness flows through mt19937_64 seeded from the run config, with
// doubles derived from raw bits so reruns are byte-identical.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline double gaussian(std::mt19937_64& rng) {
  // Box-Muller; avoids std::normal_distribution whose stream is
  // implementation-defined.
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Uniform point on the sphere of purely vector units; satisfies I^2 = -1.
template <int N>
Multivector<N> random_imaginary_unit(std::mt19937_64& rng) {
  std::array<double, N> g{};
  double nrm = 0.0;
  do {
    nrm = 0.0;
    for (int i = 0; i < N; ++i) {
      g[i] = gaussian(rng);
      nrm += g[i] * g[i];
    }
  } while (nrm < 1e-12);
  nrm = std::sqrt(nrm);
  Multivector<N> I;
  for (int i = 1; i <= N; ++i) I.c[1u << (i - 1)] = g[i - 1] / nrm;
  return I;
}

// Axially symmetric box: u in [u_lo, u_hi], |vec x| in [v_lo, v_hi].  The
// lower radius keeps samples off the real axis where the slice chart
// degenerates.
struct DomainBox {
  double u_lo = -0.8;
  double u_hi = 0.8;
  double v_lo = 0.1;
  double v_hi = 0.9;
};

template <int N>
Paravector<N> random_point(std::mt19937_64& rng, const DomainBox& box) {
  const double u = uniform(rng, box.u_lo, box.u_hi);
  const double v = uniform(rng, box.v_lo, box.v_hi);
  const Multivector<N> I = random_imaginary_unit<N>(rng);
  Paravector<N> p;
  p.r0 = u;
  for (int i = 1; i <= N; ++i) p.v[i - 1] = v * I.c[1u << (i - 1)];
  return p;
}

// Van der Corput radical inverse; bases are consumed per coordinate to get a
// low-discrepancy sweep of the box.
inline double radical_inverse(std::uint64_t index, std::uint32_t base) {
  double inv = 1.0 / base;
  double scale = inv;
  double r = 0.0;
  while (index) {
    r += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv;
  }
  return r;
}

inline constexpr std::uint32_t kHaltonBases[8] = {2, 3, 5, 7, 11, 13, 17, 19};

// Quasi-random points in the box: Halton in the (u, v) chart, random
// direction for the imaginary unit.
template <int N>
std::vector<Paravector<N>> halton_points(int count, const DomainBox& box,
                                         std::mt19937_64& rng,
                                         std::uint64_t offset = 1) {
  std::vector<Paravector<N>> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) {
    const std::uint64_t idx = offset + static_cast<std::uint64_t>(k);
    const double u = box.u_lo + (box.u_hi - box.u_lo) * radical_inverse(idx, kHaltonBases[0]);
    const double v = box.v_lo + (box.v_hi - box.v_lo) * radical_inverse(idx, kHaltonBases[1]);
    const Multivector<N> I = random_imaginary_unit<N>(rng);
    Paravector<N> p;
    p.r0 = u;
    for (int i = 1; i <= N; ++i) p.v[i - 1] = v * I.c[1u << (i - 1)];
    pts.push_back(p);
  }
  return pts;
}

}  // namespace hyperfine
