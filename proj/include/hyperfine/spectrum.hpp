#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hyperfine/errors.hpp"
#include "hyperfine/operators.hpp"
#include "hyperfine/sampling.hpp"

namespace hyperfine {

struct SpectralSphere {
  double center = 0.0;
  double radius = 0.0;
  int multiplicity = 0;
};

struct SpectrumReport {
  std::vector<SpectralSphere> spheres;
  double residual = 0.0;  // worst scaled sigma_min of Q over the spheres
};

// Joint eigenvalues of a commuting family: complex-Schur a seeded random
// combination, reuse its unitary on every component, and read the diagonals.
// Distinct combination eigenvalues force shared invariant subspaces, so
// leakage below the strict triangle is the failure monitor; a few retry
// combinations guard against unlucky coefficient draws.
inline SpectrumReport s_spectrum(const OperatorTuple& T, std::uint64_t seed = 0x5eedULL) {
  T.validate();
  const double scale = 1.0 + T.scale();
  std::mt19937_64 rng(seed);

  Eigen::MatrixXcd unitary;
  bool ok = false;
  double best_leak = 0.0;
  for (int attempt = 0; attempt < 5 && !ok; ++attempt) {
    Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(T.m, T.m);
    for (const auto& t : T.T) combo += uniform(rng, -1.0, 1.0) * t;
    const Eigen::ComplexSchur<Eigen::MatrixXcd> schur(combo.cast<std::complex<double>>());
    double leak = 0.0;
    for (const auto& t : T.T) {
      const Eigen::MatrixXcd tri =
          schur.matrixU().adjoint() * t.cast<std::complex<double>>() * schur.matrixU();
      for (int r = 1; r < T.m; ++r)
        for (int c = 0; c < r; ++c) leak = std::max(leak, std::abs(tri(r, c)));
    }
    best_leak = attempt == 0 ? leak : std::min(best_leak, leak);
    if (leak <= 1e-8 * scale) {
      unitary = schur.matrixU();
      ok = true;
    }
  }
  if (!ok)
    throw JointDiagonalizationFailed("triangularization leakage " + std::to_string(best_leak) +
                                     " exceeds tolerance " + std::to_string(1e-8 * scale));

  // diagonals give the joint eigenvalue tuples; each yields the roots of
  // s^2 - 2 t0 s + (t0^2 + sum_j tj^2), folded onto spheres (Re s, |Im s|)
  std::vector<std::vector<std::complex<double>>> joint(T.m);
  for (const auto& t : T.T) {
    const Eigen::MatrixXcd tri =
        unitary.adjoint() * t.cast<std::complex<double>>() * unitary;
    for (int k = 0; k < T.m; ++k) joint[k].push_back(tri(k, k));
  }

  std::vector<SpectralSphere> raw;
  for (const auto& tup : joint) {
    std::complex<double> r2(0.0, 0.0);
    for (std::size_t j = 1; j < tup.size(); ++j) r2 += tup[j] * tup[j];
    const std::complex<double> disc = std::sqrt(r2);
    const std::complex<double> i_unit(0.0, 1.0);
    const std::complex<double> roots[2] = {tup[0] + i_unit * disc, tup[0] - i_unit * disc};
    SpectralSphere first{roots[0].real(), std::abs(roots[0].imag()), 1};
    raw.push_back(first);
    SpectralSphere second{roots[1].real(), std::abs(roots[1].imag()), 1};
    if (std::abs(second.center - first.center) > 1e-12 ||
        std::abs(second.radius - first.radius) > 1e-12)
      raw.push_back(second);
  }

  std::sort(raw.begin(), raw.end(), [](const SpectralSphere& a, const SpectralSphere& b) {
    return a.center != b.center ? a.center < b.center : a.radius < b.radius;
  });
  SpectrumReport report;
  for (const auto& s : raw) {
    if (!report.spheres.empty() && std::abs(report.spheres.back().center - s.center) < 1e-8 &&
        std::abs(report.spheres.back().radius - s.radius) < 1e-8)
      report.spheres.back().multiplicity += 1;
    else
      report.spheres.push_back(s);
  }

  // the block system depends only on (u, v), so one probe per sphere covers
  // every slice plane
  for (const auto& s : report.spheres)
    report.residual =
        std::max(report.residual, q_sigma_min(s.center, s.radius, T) / (scale * scale));
  return report;
}

}  // namespace hyperfine
