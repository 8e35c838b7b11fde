#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "hyperfine/jet.hpp"

namespace hyperfine {

// Function spaces are identified by the operator word that annihilates their
// members: Delta^k D^l (or Delta^k Dbar^l).  The named catalog below covers
// every station that appears in the registered chains.
struct SpaceLaw {
  int delta_pow = 0;
  int d_pow = 0;
  bool conjugate = false;  // excess first-order letters are Dbar

  int order() const { return 2 * delta_pow + d_pow; }

  Word word() const {
    Word w(delta_pow, Letter::Delta);
    w.insert(w.end(), d_pow, conjugate ? Letter::Dbar : Letter::D);
    return w;
  }

  friend bool operator==(const SpaceLaw& a, const SpaceLaw& b) {
    return a.delta_pow == b.delta_pow && a.d_pow == b.d_pow &&
           (a.d_pow == 0 || a.conjugate == b.conjugate);
  }
};

enum class SpaceTag { AM, AH, ABH, AP2, AP3, AHC1, AntiAHC1, APC12, Other };

inline SpaceLaw law_of(SpaceTag t) {
  switch (t) {
    case SpaceTag::AM: return {0, 1, false};       // axially monogenic
    case SpaceTag::AH: return {1, 0, false};       // axially harmonic
    case SpaceTag::ABH: return {2, 0, false};      // axially biharmonic
    case SpaceTag::AP2: return {0, 2, false};      // polyanalytic of order 2
    case SpaceTag::AP3: return {0, 3, false};
    case SpaceTag::AHC1: return {1, 1, false};     // harmonic, Dirac-composed
    case SpaceTag::AntiAHC1: return {1, 1, true};
    case SpaceTag::APC12: return {1, 2, false};    // polyanalytic-harmonic mix
    case SpaceTag::Other: break;
  }
  return {};
}

inline std::string space_name(const SpaceLaw& law) {
  if (law == law_of(SpaceTag::AM)) return "AM";
  if (law == law_of(SpaceTag::AH)) return "AH";
  if (law == law_of(SpaceTag::ABH)) return "ABH";
  if (law == law_of(SpaceTag::AP2)) return "AP2";
  if (law == law_of(SpaceTag::AP3)) return "AP3";
  if (law.delta_pow == 1 && law.d_pow == 1)
    return law.conjugate ? "antiAHC1" : "AHC1";
  if (law == law_of(SpaceTag::APC12)) return "APC(1,2)";
  return "PHC(" + std::to_string(law.delta_pow) + "," + std::to_string(law.d_pow) +
         (law.conjugate && law.d_pow ? ",bar" : "") + ")";
}

inline std::vector<SpaceTag> space_catalog(int n) {
  if (n == 3) return {SpaceTag::AM, SpaceTag::AH, SpaceTag::AP2};
  return {SpaceTag::AM,   SpaceTag::AH,        SpaceTag::ABH,  SpaceTag::AP2,
          SpaceTag::AP3,  SpaceTag::AHC1,      SpaceTag::AntiAHC1, SpaceTag::APC12};
}

// Max norm of the annihilator word applied to the supplied jets (one jet per
// sample point, each of degree >= law order).
template <int N>
double membership_residual(const SpaceLaw& law, const std::vector<Jet<N>>& jets,
                           Side side = Side::left) {
  const Word w = law.word();
  double r = 0.0;
  for (const auto& j : jets) r = std::max(r, apply_word(w, j, side).value().norm());
  return r;
}

struct MembershipEntry {
  std::string space;
  double residual = 0.0;
  bool pass = false;
};

template <int N>
std::vector<MembershipEntry> classify_membership(const std::vector<Jet<N>>& jets, int n,
                                                 double tol, Side side = Side::left) {
  std::vector<MembershipEntry> out;
  for (SpaceTag t : space_catalog(n)) {
    const SpaceLaw law = law_of(t);
    MembershipEntry e;
    e.space = space_name(law);
    e.residual = membership_residual(law, jets, side);
    e.pass = e.residual < tol;
    out.push_back(e);
  }
  return out;
}

}  // namespace hyperfine
