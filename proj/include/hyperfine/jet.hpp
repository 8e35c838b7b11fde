#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "hyperfine/errors.hpp"
#include "hyperfine/multivector.hpp"

namespace hyperfine {

// Multi-indices over a fixed number of variables, enumerated in graded
// lexicographic order so the positions of degree <= d form a prefix.  One
// table per variable count is cached and regrown on demand; jets of any
// degree share it, which keeps coefficient indices stable under truncation.
struct MultiIndexTable {
  struct Triple {
    std::int32_t i, j, t;
  };

  int nvars = 0;
  int max_degree = 0;
  std::vector<std::uint8_t> exps;       // pos * nvars, exponent vectors
  std::vector<std::int32_t> deg;        // |alpha| per position
  std::vector<std::int32_t> count_at;   // count_at[d] = #positions with |alpha| <= d
  std::vector<std::vector<std::int32_t>> up;  // up[v][pos] = pos of alpha+e_v, -1 past max
  std::vector<Triple> triples;                // products, sorted by deg(i)+deg(j)
  std::vector<std::int32_t> triples_end;      // triples with degsum <= d end here

  int count(int degree) const { return count_at[degree]; }
  const std::uint8_t* alpha(int pos) const { return exps.data() + pos * nvars; }

  static void build(MultiIndexTable& t, int nvars, int max_degree) {
    t.nvars = nvars;
    t.max_degree = max_degree;
    t.exps.clear();
    t.deg.clear();
    std::vector<std::uint8_t> cur(nvars, 0);
    for (int d = 0; d <= max_degree; ++d) {
      emit(t, cur, 0, d);
      t.count_at.push_back(static_cast<std::int32_t>(t.deg.size()));
    }
    const int npos = static_cast<int>(t.deg.size());

    // exponent vector -> position, keyed in base (max_degree + 1)
    std::int64_t key_span = 1;
    for (int v = 0; v < nvars; ++v) key_span *= (max_degree + 1);
    std::vector<std::int32_t> rank(key_span, -1);
    const auto key_of = [&](const std::uint8_t* e) {
      std::int64_t k = 0;
      for (int v = nvars - 1; v >= 0; --v) k = k * (max_degree + 1) + e[v];
      return k;
    };
    for (int p = 0; p < npos; ++p) rank[key_of(t.alpha(p))] = p;

    std::vector<std::uint8_t> scratch(nvars);
    t.up.assign(nvars, std::vector<std::int32_t>(npos, -1));
    for (int p = 0; p < npos; ++p) {
      if (t.deg[p] == max_degree) continue;
      for (int v = 0; v < nvars; ++v) {
        std::copy(t.alpha(p), t.alpha(p) + nvars, scratch.begin());
        scratch[v] += 1;
        t.up[v][p] = rank[key_of(scratch.data())];
      }
    }

    // positions are sorted by degree, so the inner loop can stop at the
    // degree budget
    std::vector<std::vector<Triple>> buckets(max_degree + 1);
    for (int i = 0; i < npos; ++i) {
      const int jmax = t.count_at[max_degree - t.deg[i]];
      for (int j = 0; j < jmax; ++j) {
        for (int v = 0; v < nvars; ++v)
          scratch[v] = static_cast<std::uint8_t>(t.alpha(i)[v] + t.alpha(j)[v]);
        buckets[t.deg[i] + t.deg[j]].push_back({i, j, rank[key_of(scratch.data())]});
      }
    }
    for (int dsum = 0; dsum <= max_degree; ++dsum) {
      t.triples.insert(t.triples.end(), buckets[dsum].begin(), buckets[dsum].end());
      t.triples_end.push_back(static_cast<std::int32_t>(t.triples.size()));
    }
  }

 private:
  static void emit(MultiIndexTable& t, std::vector<std::uint8_t>& cur, int v, int left) {
    if (v == t.nvars - 1) {
      cur[v] = static_cast<std::uint8_t>(left);
      t.exps.insert(t.exps.end(), cur.begin(), cur.end());
      int d = 0;
      for (int k = 0; k < t.nvars; ++k) d += cur[k];
      t.deg.push_back(d);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[v] = static_cast<std::uint8_t>(e);
      emit(t, cur, v + 1, left - e);
    }
    cur[v] = 0;
  }
};

// Regrowth allocates a fresh table and leaks the old one on purpose: jets in
// flight on other threads may still read it, and the handful of retired
// tables is tiny.
inline const MultiIndexTable& multi_index_table(int nvars, int degree_needed) {
  static std::mutex mu;
  static std::map<int, std::vector<std::unique_ptr<MultiIndexTable>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& versions = cache[nvars];
  if (versions.empty() || versions.back()->max_degree < degree_needed) {
    const int target = std::max(degree_needed, 8);
    auto fresh = std::make_unique<MultiIndexTable>();
    MultiIndexTable::build(*fresh, nvars, target);
    versions.push_back(std::move(fresh));
  }
  return *versions.back();
}

// Truncated Taylor expansion in the n+1 real coordinates x_0..x_n around a
// base point, with coefficients in R_n.  Coefficient at alpha is the Taylor
// coefficient (derivative / alpha!), so products are plain convolutions.
template <int N>
struct Jet {
  static constexpr int nvars = N + 1;

  int degree = 0;
  std::vector<Multivector<N>> a;

  static const MultiIndexTable& table(int degree_needed) {
    return multi_index_table(nvars, degree_needed);
  }

  Jet() : Jet(0) {}
  explicit Jet(int deg) : degree(deg), a(table(deg).count(deg)) {}

  static Jet constant(const Multivector<N>& value, int deg) {
    Jet f(deg);
    f.a[0] = value;
    return f;
  }
  // The coordinate function x_v as a jet: value + t_v.
  static Jet coordinate(int v, double value, int deg) {
    Jet f(deg);
    f.a[0] = Multivector<N>(value);
    if (deg >= 1) f.a[1 + v] = Multivector<N>(1.0);
    return f;
  }

  const Multivector<N>& value() const { return a[0]; }

  double norm() const {
    double s = 0.0;
    for (const auto& m : a) s += m.norm_sq();
    return std::sqrt(s);
  }

  Jet truncated(int deg) const {
    if (deg > degree)
      throw DegreeExhausted("truncate to degree " + std::to_string(deg) +
                            " from degree " + std::to_string(degree));
    Jet out(deg);
    for (std::size_t p = 0; p < out.a.size(); ++p) out.a[p] = a[p];
    return out;
  }

  Jet& operator+=(const Jet& o) {
    check_same(o);
    for (std::size_t p = 0; p < a.size(); ++p) a[p] += o.a[p];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_same(o);
    for (std::size_t p = 0; p < a.size(); ++p) a[p] -= o.a[p];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& m : a) m *= s;
    return *this;
  }
  friend Jet operator+(Jet x, const Jet& y) { return x += y; }
  friend Jet operator-(Jet x, const Jet& y) { return x -= y; }
  friend Jet operator*(Jet x, double s) { return x *= s; }
  friend Jet operator*(double s, Jet x) { return x *= s; }
  friend Jet operator-(const Jet& x) {
    Jet out(x.degree);
    for (std::size_t p = 0; p < x.a.size(); ++p) out.a[p] = -x.a[p];
    return out;
  }

  bool scalar_coefficients() const {
    for (const auto& m : a)
      for (int i = 1; i < Multivector<N>::size; ++i)
        if (m.c[i] != 0.0) return false;
    return true;
  }

  // Truncated product at the common degree.  Scalar-coefficient operands
  // (chart jets, powers of them) take a plain double convolution, which the
  // slice evaluator leans on heavily.
  friend Jet operator*(const Jet& x, const Jet& y) {
    const int dout = std::min(x.degree, y.degree);
    const MultiIndexTable& t = table(std::max(x.degree, y.degree));
    Jet out(dout);
    const auto end = t.triples_end[dout];
    if (x.scalar_coefficients() && y.scalar_coefficients()) {
      for (std::int32_t k = 0; k < end; ++k) {
        const auto& tr = t.triples[k];
        out.a[tr.t].c[0] += x.a[tr.i].c[0] * y.a[tr.j].c[0];
      }
      return out;
    }
    for (std::int32_t k = 0; k < end; ++k) {
      const auto& tr = t.triples[k];
      mul_add(out.a[tr.t], x.a[tr.i], y.a[tr.j]);
    }
    return out;
  }

 private:
  void check_same(const Jet& o) const {
    if (degree != o.degree)
      throw DegreeExhausted("jet degrees differ: " + std::to_string(degree) + " vs " +
                            std::to_string(o.degree));
  }
};

template <int N>
Jet<N> mv_mul_left(const Multivector<N>& m, const Jet<N>& f) {
  Jet<N> out(f.degree);
  for (std::size_t p = 0; p < f.a.size(); ++p) mul_add(out.a[p], m, f.a[p]);
  return out;
}

template <int N>
Jet<N> mv_mul_right(const Jet<N>& f, const Multivector<N>& m) {
  Jet<N> out(f.degree);
  for (std::size_t p = 0; p < f.a.size(); ++p) mul_add(out.a[p], f.a[p], m);
  return out;
}

// Partial derivative with respect to x_v; costs one degree.
template <int N>
Jet<N> derivative(const Jet<N>& f, int v) {
  if (f.degree < 1)
    throw DegreeExhausted("derivative of a degree-0 jet");
  const MultiIndexTable& t = Jet<N>::table(f.degree);
  Jet<N> out(f.degree - 1);
  for (std::size_t p = 0; p < out.a.size(); ++p) {
    const int q = t.up[v][p];
    out.a[p] = f.a[q] * static_cast<double>(t.alpha(p)[v] + 1);
  }
  return out;
}

// Power series g -> sum coeffs[k] g^k for a jet with vanishing constant term
// (Horner form, exact after truncation).
template <int N>
Jet<N> jet_series(const Jet<N>& w, std::span<const double> coeffs) {
  Jet<N> acc = Jet<N>::constant(Multivector<N>(coeffs.empty() ? 0.0 : coeffs.back()),
                                w.degree);
  for (int k = static_cast<int>(coeffs.size()) - 2; k >= 0; --k) {
    acc = w * acc;
    acc.a[0] += Multivector<N>(coeffs[k]);
  }
  return acc;
}

// Multiplicative inverse.  Requires the constant term c to satisfy
// c conj(c) = |c|^2 (paravector-like), which covers every kernel use.
template <int N>
Jet<N> jet_invert(const Jet<N>& f) {
  const Multivector<N> c = f.a[0];
  const Multivector<N> cc = c * c.conj();
  const double s0 = cc.real();
  Multivector<N> offdiag = cc;
  offdiag.c[0] = 0.0;
  if (std::abs(s0) < 1e-24 || offdiag.norm() > 1e-12 * std::abs(s0))
    throw NonInvertibleConstantTerm("constant term norm " + std::to_string(std::sqrt(std::abs(s0))));
  const Multivector<N> cinv = c.conj() / s0;

  // f = c (1 + w) with w = c^{-1}(f - c); invert the unit factor by the
  // truncated geometric series.
  Jet<N> w = mv_mul_left(cinv, f);
  w.a[0] -= Multivector<N>(1.0);
  Jet<N> acc = Jet<N>::constant(Multivector<N>(1.0), f.degree);
  for (int k = 0; k < f.degree; ++k) {
    acc = w * acc;
    for (auto& m : acc.a) m = -m;
    acc.a[0] += Multivector<N>(1.0);
  }
  return mv_mul_right(acc, cinv);
}

// Square root of a scalar-coefficient jet with positive constant term.
template <int N>
Jet<N> jet_sqrt(const Jet<N>& f) {
  const double c0 = f.a[0].real();
  if (!(c0 > 0.0))
    throw NonInvertibleConstantTerm("sqrt of jet with non-positive constant term");
  Jet<N> w = f * (1.0 / c0);
  w.a[0] -= Multivector<N>(1.0);
  // binomial series for (1+t)^{1/2}
  std::vector<double> coeffs(f.degree + 1);
  coeffs[0] = 1.0;
  for (int k = 1; k <= f.degree; ++k)
    coeffs[k] = coeffs[k - 1] * (0.5 - (k - 1)) / k;
  return jet_series(w, coeffs) * std::sqrt(c0);
}

enum class Side { left, right };

// Generalized Cauchy-Riemann (Dirac) operator D = d/dx0 + sum_i e_i d/dx_i
// and its conjugate; the right-sided variants multiply e_i from the right.
template <int N>
Jet<N> apply_D(const Jet<N>& f, Side side = Side::left) {
  Jet<N> out = derivative(f, 0);
  for (int i = 1; i <= N; ++i) {
    const Jet<N> di = derivative(f, i);
    out += side == Side::left ? mv_mul_left(Multivector<N>::basis(i), di)
                              : mv_mul_right(di, Multivector<N>::basis(i));
  }
  return out;
}

template <int N>
Jet<N> apply_Dbar(const Jet<N>& f, Side side = Side::left) {
  Jet<N> out = derivative(f, 0);
  for (int i = 1; i <= N; ++i) {
    const Jet<N> di = derivative(f, i);
    out -= side == Side::left ? mv_mul_left(Multivector<N>::basis(i), di)
                              : mv_mul_right(di, Multivector<N>::basis(i));
  }
  return out;
}

// Laplacian of R^{n+1}; costs two degrees and equals D Dbar = Dbar D.
template <int N>
Jet<N> apply_Delta(const Jet<N>& f) {
  if (f.degree < 2)
    throw DegreeExhausted("laplacian of a degree-" + std::to_string(f.degree) + " jet");
  Jet<N> out(f.degree - 2);
  for (int v = 0; v <= N; ++v) out += derivative(derivative(f, v), v);
  return out;
}

enum class Letter { D, Dbar, Delta };

inline int letter_order(Letter l) { return l == Letter::Delta ? 2 : 1; }

using Word = std::vector<Letter>;

inline int word_order(const Word& w) {
  int o = 0;
  for (Letter l : w) o += letter_order(l);
  return o;
}

// Applies the letters right to left, matching operator composition notation:
// word {A, B} maps f to A(B(f)).
template <int N>
Jet<N> apply_word(const Word& w, Jet<N> f, Side side = Side::left) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    switch (*it) {
      case Letter::D: f = apply_D(f, side); break;
      case Letter::Dbar: f = apply_Dbar(f, side); break;
      case Letter::Delta: f = apply_Delta(f); break;
    }
  }
  return f;
}

inline std::string letter_name(Letter l) {
  switch (l) {
    case Letter::D: return "D";
    case Letter::Dbar: return "Dbar";
    case Letter::Delta: return "Delta";
  }
  return "?";
}

inline std::string word_name(const Word& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ",";
    s += letter_name(w[i]);
  }
  return s + ")";
}

}  // namespace hyperfine
