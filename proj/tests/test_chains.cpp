#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hyperfine/chains.hpp"
#include "hyperfine/sampling.hpp"

using namespace hyperfine;

namespace {

std::vector<std::string> plan_spaces(const std::string& name, int n) {
  std::vector<std::string> out;
  for (const auto& sp : chain_plan(find_chain(name, n), n)) out.push_back(sp.space);
  return out;
}

template <int N>
std::vector<Paravector<N>> points(std::mt19937_64& rng, int count) {
  DomainBox box;
  std::vector<Paravector<N>> pts;
  for (int i = 0; i < count; ++i) pts.push_back(random_point<N>(rng, box));
  return pts;
}

}  // namespace

TEST_CASE("registry contents") {
  CHECK(chain_registry(3).size() == 2);
  CHECK(chain_registry(5).size() == 8);
  CHECK_NOTHROW(find_chain("Dbar,Dbar,D,D", 5));
  CHECK_THROWS_AS(find_chain("D,D", 3), UnknownChain);
  CHECK_THROWS_AS(find_chain("D,Dbar,Dbar,D", 3), UnknownChain);
  CHECK_THROWS_AS(make_chain("Q,D"), UnknownChain);
  CHECK_THROWS_AS(chain_registry(4), UnknownChain);
}

TEST_CASE("station plans match the derived space table") {
  using V = std::vector<std::string>;
  CHECK(plan_spaces("D,Dbar", 3) == V{"AH", "AM"});
  CHECK(plan_spaces("Dbar,D", 3) == V{"AP2", "AM"});

  CHECK(plan_spaces("D,Dbar,Dbar,D", 5) == V{"ABH", "AHC1", "AP2", "AM"});
  CHECK(plan_spaces("D,D,Dbar,Dbar", 5) == V{"ABH", "antiAHC1", "AH", "AM"});
  CHECK(plan_spaces("Dbar,D,Dbar,D", 5) == V{"APC(1,2)", "AHC1", "AP2", "AM"});
  CHECK(plan_spaces("Dbar,D,D,Dbar", 5) == V{"APC(1,2)", "AHC1", "AH", "AM"});
  CHECK(plan_spaces("Dbar,Dbar,D,D", 5) == V{"APC(1,2)", "AP3", "AP2", "AM"});
  CHECK(plan_spaces("Delta,Delta", 5) == V{"AHC1", "AM"});
  CHECK(plan_spaces("Dbar^2,D,D", 5) == V{"AP3", "AP2", "AM"});
  CHECK(plan_spaces("D,Delta,Dbar", 5) == V{"ABH", "AH", "AM"});
}

TEST_CASE("every registered chain verifies on polynomial and entire seeds") {
  std::mt19937_64 rng(83);
  const auto pts3 = points<3>(rng, 6);
  const auto pts5 = points<5>(rng, 6);

  for (const auto& chain : chain_registry(3)) {
    for (int k = 2; k <= 5; ++k) {
      const auto rep = verify_chain(tfs1<3>(seed_monomial(k)), chain, pts3, 1e-9);
      CAPTURE(chain.name, k);
      CHECK(rep.pass);
    }
    const auto repe = verify_chain(tfs1<3>(seed_exp()), chain, pts3, 1e-9);
    CAPTURE(chain.name);
    CHECK(repe.pass);
  }
  for (const auto& chain : chain_registry(5)) {
    for (int k = 4; k <= 6; ++k) {
      const auto rep = verify_chain(tfs1<5>(seed_monomial(k)), chain, pts5, 1e-8);
      CAPTURE(chain.name, k);
      CHECK(rep.pass);
    }
    const auto repe = verify_chain(tfs1<5>(seed_exp()), chain, pts5, 1e-8);
    CAPTURE(chain.name);
    CHECK(repe.pass);
  }
}

TEST_CASE("third station of Dbar,Dbar,D,D is polyanalytic but not harmonic") {
  // For the z^5 seed in n=5 the station D Dbar^2 f has Delta(D Dbar^2 f) =
  // Dbar Delta^2 f = 640, a constant, while D^2 annihilates it.  This pins
  // the station space as AP2 and rules out AH by a margin of hundreds.
  std::mt19937_64 rng(89);
  const auto pts = points<5>(rng, 4);
  const auto f = tfs1<5>(seed_monomial(5));
  const Word prefix = {Letter::D, Letter::Dbar, Letter::Dbar};

  for (const auto& x : pts) {
    const auto station = apply_word(prefix, f.eval_jet(x, 5));
    const auto harmonic_defect = apply_Delta(station).value();
    CHECK(max_abs_diff(harmonic_defect, Multivector<5>(640.0)) < 1e-9);
    const auto ap2_residual = apply_word({Letter::D, Letter::D}, station).value();
    CHECK(ap2_residual.norm() < 1e-9);
  }
}

TEST_CASE("memberships are nested: the end station passes every catalog law") {
  std::mt19937_64 rng(97);
  const auto pts = points<5>(rng, 3);
  const auto f = tfs1<5>(seed_exp());
  const auto g = tfs2(f);
  std::vector<Jet<5>> jets;
  for (const auto& x : pts) jets.push_back(g.jet(x, 4));
  for (const auto& e : classify_membership(jets, 5, 1e-7)) {
    CAPTURE(e.space);
    CHECK(e.pass);
  }
}

TEST_CASE("classification discriminates for transcendental data") {
  std::mt19937_64 rng(101);
  const auto pts = points<5>(rng, 3);
  const auto f = tfs1<5>(seed_exp());

  // Dbar f lands in APC(1,2) and nothing smaller
  std::vector<Jet<5>> jets;
  for (const auto& x : pts) jets.push_back(apply_Dbar(f.eval_jet(x, 5)));
  double am = 0.0, apc = 0.0, ah = 0.0;
  for (const auto& e : classify_membership(jets, 5, 1e-8)) {
    if (e.space == "AM") am = e.residual;
    if (e.space == "APC(1,2)") apc = e.residual;
    if (e.space == "AH") ah = e.residual;
  }
  CHECK(apc < 1e-8);
  CHECK(am > 1e-2);
  CHECK(ah > 1e-2);
}
