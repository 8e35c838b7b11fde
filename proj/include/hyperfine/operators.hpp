#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hyperfine/blades.hpp"
#include "hyperfine/errors.hpp"

namespace hyperfine {

// Element of R_n tensor R^{m x m}: one real m x m matrix per blade.  n is a
// runtime parameter here because operator data comes from config files.
struct OperatorMultivector {
  int n = 0, m = 0;
  std::vector<Eigen::MatrixXd> c;

  OperatorMultivector() = default;
  OperatorMultivector(int n_, int m_)
      : n(n_), m(m_), c(std::size_t(1) << n_, Eigen::MatrixXd::Zero(m_, m_)) {}

  static OperatorMultivector identity(int n_, int m_) {
    OperatorMultivector out(n_, m_);
    out.c[0] = Eigen::MatrixXd::Identity(m_, m_);
    return out;
  }

  void require_same_shape(const OperatorMultivector& o) const {
    if (n != o.n || m != o.m)
      throw DimensionMismatch("operator multivectors of shape (" + std::to_string(n) + "," +
                              std::to_string(m) + ") vs (" + std::to_string(o.n) + "," +
                              std::to_string(o.m) + ")");
  }

  double norm() const {
    double s = 0.0;
    for (const auto& b : c) s += b.squaredNorm();
    return std::sqrt(s);
  }

  OperatorMultivector& operator+=(const OperatorMultivector& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
    return *this;
  }
  OperatorMultivector& operator-=(const OperatorMultivector& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
    return *this;
  }
  OperatorMultivector& operator*=(double s) {
    for (auto& b : c) b *= s;
    return *this;
  }
  friend OperatorMultivector operator+(OperatorMultivector a, const OperatorMultivector& b) {
    return a += b;
  }
  friend OperatorMultivector operator-(OperatorMultivector a, const OperatorMultivector& b) {
    return a -= b;
  }
  friend OperatorMultivector operator*(OperatorMultivector a, double s) { return a *= s; }
  friend OperatorMultivector operator*(double s, OperatorMultivector a) { return a *= s; }

  friend OperatorMultivector operator*(const OperatorMultivector& a,
                                       const OperatorMultivector& b) {
    a.require_same_shape(b);
    OperatorMultivector out(a.n, a.m);
    for (std::uint32_t i = 0; i < a.c.size(); ++i) {
      if (a.c[i].isZero(0.0)) continue;
      for (std::uint32_t j = 0; j < b.c.size(); ++j) {
        if (b.c[j].isZero(0.0)) continue;
        const double sign = blade_mul_sign(i, j);
        out.c[blade_mul_mask(i, j)] += sign * (a.c[i] * b.c[j]);
      }
    }
    return out;
  }
};

inline double max_abs_diff(const OperatorMultivector& a, const OperatorMultivector& b) {
  a.require_same_shape(b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.c.size(); ++i)
    worst = std::max(worst, (a.c[i] - b.c[i]).cwiseAbs().maxCoeff());
  return worst;
}

// Paravector operator T = T0 + e_1 T1 + ... + e_n Tn with commuting real
// components on V = R^m.
struct OperatorTuple {
  int n = 0, m = 0;
  std::vector<Eigen::MatrixXd> T;

  void validate() const {
    if (static_cast<int>(T.size()) != n + 1)
      throw DimensionMismatch("tuple needs n+1 = " + std::to_string(n + 1) + " matrices, got " +
                              std::to_string(T.size()));
    for (const auto& t : T)
      if (t.rows() != m || t.cols() != m)
        throw DimensionMismatch("component is " + std::to_string(t.rows()) + "x" +
                                std::to_string(t.cols()) + ", expected " + std::to_string(m) +
                                "x" + std::to_string(m));
    for (std::size_t i = 0; i < T.size(); ++i)
      for (std::size_t j = i + 1; j < T.size(); ++j) {
        const double scale = T[i].norm() * T[j].norm();
        if (scale == 0.0) continue;
        const double defect = (T[i] * T[j] - T[j] * T[i]).norm() / scale;
        if (defect > 1e-10)
          throw NonCommuting("components " + std::to_string(i) + " and " + std::to_string(j) +
                             " have relative commutator " + std::to_string(defect));
      }
  }

  double scale() const {
    double s = 0.0;
    for (const auto& t : T) s = std::max(s, t.norm());
    return s;
  }

  // T0^2 + sum_j Tj^2, the grade-0 matrix T Tbar under commutation
  Eigen::MatrixXd grade_zero_square() const {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
    for (const auto& t : T) p += t * t;
    return p;
  }

  OperatorMultivector embed() const {
    OperatorMultivector out(n, m);
    out.c[0] = T[0];
    for (int j = 1; j <= n; ++j) out.c[1u << (j - 1)] = T[j];
    return out;
  }

  OperatorMultivector conjugate() const {
    OperatorMultivector out(n, m);
    out.c[0] = T[0];
    for (int j = 1; j <= n; ++j) out.c[1u << (j - 1)] = -T[j];
    return out;
  }
};

// Spectral parameter written in slice-chart form s = u + I v; the plane I is
// a unit vector of e_1..e_n components and v may carry sign (lower half of
// the chart).
struct SlicePoint {
  double u = 0.0, v = 0.0;
  std::vector<double> plane;
};

inline void check_plane(const SlicePoint& s, int n) {
  if (static_cast<int>(s.plane.size()) != n)
    throw DimensionMismatch("slice plane has " + std::to_string(s.plane.size()) +
                            " components, expected " + std::to_string(n));
}

// Scalar in-plane value z = re + I im as an operator multivector.
inline OperatorMultivector embed_inplane(double re, double im, const std::vector<double>& plane,
                                         int n, int m) {
  OperatorMultivector out(n, m);
  out.c[0] = re * Eigen::MatrixXd::Identity(m, m);
  for (int j = 1; j <= n; ++j)
    if (plane[j - 1] != 0.0)
      out.c[1u << (j - 1)] = im * plane[j - 1] * Eigen::MatrixXd::Identity(m, m);
  return out;
}

// Q_s(T) = s^2 I - s(T + Tbar) + T Tbar splits over the chart as A + I B with
// real matrix parts; the blade content of Q comes only from s.
struct QParts {
  Eigen::MatrixXd A, B;
};

inline QParts q_block_parts(double u, double v, const OperatorTuple& T) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(T.m, T.m);
  QParts p;
  p.A = (u * u - v * v) * id - 2.0 * u * T.T[0] + T.grade_zero_square();
  p.B = 2.0 * v * (u * id - T.T[0]);
  return p;
}

inline OperatorMultivector q_op(const SlicePoint& s, const OperatorTuple& T) {
  check_plane(s, T.n);
  const QParts p = q_block_parts(s.u, s.v, T);
  OperatorMultivector out(T.n, T.m);
  out.c[0] = p.A;
  for (int j = 1; j <= T.n; ++j)
    if (s.plane[j - 1] != 0.0) out.c[1u << (j - 1)] = s.plane[j - 1] * p.B;
  return out;
}

// Inverse of A + I B through the real block system [[A, -B], [B, A]]; the
// condition number doubles as the singularity monitor for s near the
// S-spectrum.
struct QInverseParts {
  Eigen::MatrixXd C, D;
};

inline double q_sigma_min(double u, double v, const OperatorTuple& T) {
  const QParts p = q_block_parts(u, v, T);
  Eigen::MatrixXd block(2 * T.m, 2 * T.m);
  block << p.A, -p.B, p.B, p.A;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(block);
  return svd.singularValues()(2 * T.m - 1);
}

inline QInverseParts q_op_inverse_parts(double u, double v, const OperatorTuple& T) {
  const QParts p = q_block_parts(u, v, T);
  Eigen::MatrixXd block(2 * T.m, 2 * T.m);
  block << p.A, -p.B, p.B, p.A;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0), smin = sv(2 * T.m - 1);
  if (!(smin > 0.0) || smax / smin > 1e12)
    throw SingularAtS("Q at (u,v)=(" + std::to_string(u) + "," + std::to_string(v) +
                      ") has condition beyond 1e12");
  const Eigen::MatrixXd inv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
  QInverseParts out;
  out.C = inv.topLeftCorner(T.m, T.m);
  out.D = inv.bottomLeftCorner(T.m, T.m);
  return out;
}

inline OperatorMultivector q_op_inverse(const SlicePoint& s, const OperatorTuple& T) {
  check_plane(s, T.n);
  const QInverseParts p = q_op_inverse_parts(s.u, s.v, T);
  OperatorMultivector out(T.n, T.m);
  out.c[0] = p.C;
  for (int j = 1; j <= T.n; ++j)
    if (s.plane[j - 1] != 0.0) out.c[1u << (j - 1)] = s.plane[j - 1] * p.D;
  return out;
}

}  // namespace hyperfine
