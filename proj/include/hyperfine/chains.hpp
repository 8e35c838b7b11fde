#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "hyperfine/slice.hpp"
#include "hyperfine/spaces.hpp"

namespace hyperfine {

// A factorization of the second extension step into arrows.  Applying all
// steps (left to right) equals Delta^{(n-1)/2}; the intermediate stations
// land in the graded function spaces of spaces.hpp.
struct Chain {
  std::string name;
  std::vector<Word> steps;
};

inline Word parse_step(const std::string& token) {
  std::string base = token;
  int rep = 1;
  if (const auto caret = token.find('^'); caret != std::string::npos) {
    base = token.substr(0, caret);
    rep = std::stoi(token.substr(caret + 1));
    if (rep < 1) throw UnknownChain("bad repetition in step '" + token + "'");
  }
  Letter l;
  if (base == "D")
    l = Letter::D;
  else if (base == "Dbar")
    l = Letter::Dbar;
  else if (base == "Delta")
    l = Letter::Delta;
  else
    throw UnknownChain("unknown operator letter '" + base + "'");
  return Word(rep, l);
}

inline Chain make_chain(const std::string& name) {
  Chain c;
  c.name = name;
  std::string token;
  for (char ch : name + ",") {
    if (ch == ',') {
      if (!token.empty()) c.steps.push_back(parse_step(token));
      token.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      token += ch;
    }
  }
  if (c.steps.empty()) throw UnknownChain("empty chain name");
  return c;
}

inline std::vector<Chain> chain_registry(int n) {
  std::vector<std::string> names;
  if (n == 3) {
    names = {"D,Dbar", "Dbar,D"};
  } else if (n == 5) {
    names = {
        // Dirac fine structures, one letter per arrow
        "D,Dbar,Dbar,D",
        "D,D,Dbar,Dbar",
        "Dbar,D,Dbar,D",
        "Dbar,D,D,Dbar",
        "Dbar,Dbar,D,D",
        // coarse structures with multi-letter arrows
        "Delta,Delta",
        "Dbar^2,D,D",
        "D,Delta,Dbar",
    };
  } else {
    throw UnknownChain("no registered chains for n=" + std::to_string(n));
  }
  std::vector<Chain> out;
  for (const auto& s : names) out.push_back(make_chain(s));
  return out;
}

inline Chain find_chain(const std::string& name, int n) {
  for (const auto& c : chain_registry(n))
    if (c.name == name) return c;
  throw UnknownChain("'" + name + "' is not registered for n=" + std::to_string(n));
}

// The full kill word for intrinsic slice extensions is D Delta^h, i.e.
// D^{h+1} Dbar^h up to order.  After applying a prefix with the given letter
// counts (Delta counting once for each side), the unused letters annihilate
// the station, and their multiset names its space.
inline SpaceLaw station_law(int n, int d_applied, int dbar_applied) {
  const int h = sce_exponent(n);
  const int rem_d = h + 1 - d_applied;
  const int rem_dbar = h - dbar_applied;
  if (rem_d < 0 || rem_dbar < 0)
    throw UnknownChain("prefix exceeds Delta^h");
  SpaceLaw law;
  law.delta_pow = std::min(rem_d, rem_dbar);
  law.d_pow = std::abs(rem_d - rem_dbar);
  law.conjugate = rem_d < rem_dbar;
  return law;
}

inline void count_letters(const Word& w, int& d, int& dbar) {
  for (Letter l : w) {
    if (l == Letter::D) ++d;
    if (l == Letter::Dbar) ++dbar;
    if (l == Letter::Delta) {
      ++d;
      ++dbar;
    }
  }
}

struct StationPlan {
  std::string arrow;  // step leading into the station
  std::string space;  // expected membership
  SpaceLaw law;
  Word step;
  Word prefix;        // all steps up to and including the arrow
};

inline std::vector<StationPlan> chain_plan(const Chain& chain, int n) {
  std::vector<StationPlan> plan;
  Word prefix;
  int d = 0, dbar = 0;
  for (const Word& step : chain.steps) {
    // steps apply left to right: the next step acts on the previous station
    prefix.insert(prefix.begin(), step.begin(), step.end());
    count_letters(step, d, dbar);
    StationPlan sp;
    sp.arrow = word_name(step);
    sp.law = station_law(n, d, dbar);
    sp.space = space_name(sp.law);
    sp.step = step;
    sp.prefix = prefix;
    plan.push_back(sp);
  }
  return plan;
}

struct StationCheck {
  std::string arrow;
  std::string space;
  double residual = 0.0;
  bool pass = false;
};

struct ChainReport {
  std::string chain;
  std::vector<StationCheck> stations;
  double end_vs_tfs2 = 0.0;  // chain composition equals Delta^h
  bool pass = false;
};

template <int N>
ChainReport verify_chain(const SliceFunction<N>& f, const Chain& chain,
                         const std::vector<Paravector<N>>& points, double tol) {
  const int h = sce_exponent(N);
  ChainReport rep;
  rep.chain = chain.name;
  const auto plan = chain_plan(chain, N);

  const Word delta_h(h, Letter::Delta);
  bool all = true;
  std::vector<double> station_res(plan.size(), 0.0);
  for (const auto& x : points) {
    const Jet<N> base = f.eval_jet(x, 2 * h + 1);
    Jet<N> station = base;
    for (std::size_t si = 0; si < plan.size(); ++si) {
      station = apply_word(plan[si].step, station, f.side);
      const double r =
          apply_word(plan[si].law.word(), station, f.side).value().norm();
      station_res[si] = std::max(station_res[si], r);
    }
    // last station must coincide with the direct second extension step
    const Jet<N> direct = apply_word(delta_h, base, f.side);
    rep.end_vs_tfs2 =
        std::max(rep.end_vs_tfs2, max_abs_diff(station.value(), direct.value()));
  }
  for (std::size_t si = 0; si < plan.size(); ++si) {
    StationCheck sc;
    sc.arrow = plan[si].arrow;
    sc.space = plan[si].space;
    sc.residual = station_res[si];
    sc.pass = sc.residual < tol;
    all = all && sc.pass;
    rep.stations.push_back(sc);
  }
  rep.pass = all && rep.end_vs_tfs2 < tol;
  return rep;
}

}  // namespace hyperfine
