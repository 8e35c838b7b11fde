#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hyperfine/errors.hpp"
#include "hyperfine/spectrum.hpp"

namespace hyperfine {

// Circle in the chart of one slice plane, traversed counterclockwise.
struct Circle {
  double cu = 0.0, cv = 0.0, r = 0.0;
};

// Boundary of a symmetric union of discs in the plane C_I.  Discs are kept
// pairwise disjoint, so the enclosed region rotated through the vector
// sphere is an axially symmetric Cauchy domain.
struct Contour {
  std::vector<double> plane;  // unit vector of e_1..e_n components
  std::vector<Circle> circles;
  int nodes = 256;
};

namespace detail {

// smallest circle containing both discs
inline Circle enclosing_circle(const Circle& a, const Circle& b) {
  const double d = std::hypot(b.cu - a.cu, b.cv - a.cv);
  if (d + b.r <= a.r) return a;
  if (d + a.r <= b.r) return b;
  Circle out;
  out.r = 0.5 * (d + a.r + b.r);
  const double t = d > 0.0 ? (out.r - a.r) / d : 0.0;
  out.cu = a.cu + t * (b.cu - a.cu);
  out.cv = a.cv + t * (b.cv - a.cv);
  return out;
}

}  // namespace detail

// One circle around each in-plane spectral point (center, +/- radius), sized
// max(0.5, 0.75 * radius) * radius_scale, then merged until pairwise
// disjoint with slack.  Merging keeps the family symmetric under v -> -v
// because the seeds are symmetric and the rule is isometry-equivariant.
inline Contour build_contour(const SpectrumReport& spectrum, std::vector<double> plane,
                             double radius_scale = 1.0, int nodes = 256) {
  double norm = 0.0;
  for (double p : plane) norm += p * p;
  norm = std::sqrt(norm);
  if (norm < 1e-14)
    throw DimensionMismatch("contour plane vector is zero");
  for (double& p : plane) p /= norm;

  Contour c;
  c.plane = std::move(plane);
  c.nodes = nodes;
  for (const auto& s : spectrum.spheres) {
    const double r = std::max(0.5, 0.75 * s.radius) * radius_scale;
    if (s.radius < 1e-12) {
      c.circles.push_back({s.center, 0.0, r});
    } else {
      c.circles.push_back({s.center, s.radius, r});
      c.circles.push_back({s.center, -s.radius, r});
    }
  }

  // deterministic merge: sort, collapse the first overlapping pair, repeat
  bool merged = true;
  while (merged) {
    merged = false;
    std::sort(c.circles.begin(), c.circles.end(), [](const Circle& a, const Circle& b) {
      if (a.cu != b.cu) return a.cu < b.cu;
      if (a.cv != b.cv) return a.cv < b.cv;
      return a.r < b.r;
    });
    for (std::size_t i = 0; i + 1 < c.circles.size() && !merged; ++i)
      for (std::size_t j = i + 1; j < c.circles.size() && !merged; ++j) {
        const Circle &a = c.circles[i], &b = c.circles[j];
        const double d = std::hypot(b.cu - a.cu, b.cv - a.cv);
        if (d < a.r + b.r + 0.1 * std::max(a.r, b.r)) {
          Circle e = detail::enclosing_circle(a, b);
          e.r += 0.05 * e.r;  // slack so the merged disc strictly covers both
          if (std::abs(e.cv) < 1e-12) e.cv = 0.0;
          c.circles.erase(c.circles.begin() + j);
          c.circles.erase(c.circles.begin() + i);
          c.circles.push_back(e);
          merged = true;
        }
      }
  }
  return c;
}

// Every spectral point must sit strictly inside some circle and every circle
// boundary must clear every spectral point by 5% of its radius.
inline void validate_contour(const Contour& c, const SpectrumReport& spectrum) {
  if (c.circles.empty())
    throw ContourTouchesSpectrum("contour has no circles");
  std::vector<std::pair<double, double>> points;
  for (const auto& s : spectrum.spheres) {
    points.emplace_back(s.center, s.radius);
    if (s.radius > 0.0) points.emplace_back(s.center, -s.radius);
  }
  for (const auto& [pu, pv] : points) {
    bool inside = false;
    for (const auto& k : c.circles) {
      const double d = std::hypot(pu - k.cu, pv - k.cv);
      if (std::abs(d - k.r) < 0.05 * k.r)
        throw ContourTouchesSpectrum("spectral point (" + std::to_string(pu) + "," +
                                     std::to_string(pv) + ") is within 5% of a circle boundary");
      if (d < k.r) inside = true;
    }
    if (!inside)
      throw ContourTouchesSpectrum("spectral point (" + std::to_string(pu) + "," +
                                   std::to_string(pv) + ") is not enclosed");
  }
  for (std::size_t i = 0; i < c.circles.size(); ++i)
    for (std::size_t j = i + 1; j < c.circles.size(); ++j) {
      const Circle &a = c.circles[i], &b = c.circles[j];
      if (std::hypot(b.cu - a.cu, b.cv - a.cv) < a.r + b.r)
        throw ContourTouchesSpectrum("contour circles overlap");
    }
}

}  // namespace hyperfine
