#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperfine/calculus.hpp"
#include "hyperfine/chains.hpp"
#include "hyperfine/sampling.hpp"

namespace hyperfine {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// run configuration

struct RunConfig {
  std::string command;
  int n = 3;
  std::uint64_t rng_seed = 0x5eedULL;
  double tolerance = 0.0;  // 0 means per-command default
  std::vector<std::string> seeds;
  std::vector<std::string> chains;
  std::vector<std::string> words;
  int points = 0;  // 0 means per-command default
  int samples = 0;
  int m = 0;
  std::vector<Eigen::MatrixXd> T;
  std::string f;
  std::string kind = "S";
  std::string fine_word;
  int nodes = 512;
  int nodes_min = 32;
  int nodes_max = 512;
  std::vector<double> plane;
  double radius_scale = 1.0;
  std::string out_dir;
};

inline const std::set<std::string>& command_names() {
  static const std::set<std::string> names = {"verify-fueter-sce", "verify-chains",
                                              "verify-kernels",    "s-spectrum",
                                              "calculus-compare",  "quadrature-study"};
  return names;
}

inline Seed parse_seed(const std::string& spec) {
  if (spec == "exp") return seed_exp();
  if (spec == "inv") return seed_reciprocal(cplx(2.0, 0.0));
  if (spec.rfind("inv@", 0) == 0) {
    char* end = nullptr;
    const double p = std::strtod(spec.c_str() + 4, &end);
    if (end == spec.c_str() + 4 || *end != '\0')
      throw ConfigInvalid("seed '" + spec + "': expected inv@<real pole>");
    return seed_reciprocal(cplx(p, 0.0));
  }
  if (spec.rfind("z^", 0) == 0) {
    char* end = nullptr;
    const long k = std::strtol(spec.c_str() + 2, &end, 10);
    if (end == spec.c_str() + 2 || *end != '\0' || k < 0 || k > 64)
      throw ConfigInvalid("seed '" + spec + "': expected z^<k> with 0 <= k <= 64");
    return seed_monomial(static_cast<int>(k));
  }
  if (spec.rfind("poly:", 0) == 0) {
    std::vector<double> coeffs;
    std::string tok;
    for (char ch : spec.substr(5) + ",") {
      if (ch == ',') {
        char* end = nullptr;
        coeffs.push_back(std::strtod(tok.c_str(), &end));
        if (tok.empty() || end != tok.c_str() + tok.size())
          throw ConfigInvalid("seed '" + spec + "': bad coefficient '" + tok + "'");
        tok.clear();
      } else {
        tok += ch;
      }
    }
    return seed_polynomial(coeffs);
  }
  throw ConfigInvalid("seed '" + spec + "': expected z^<k>, exp, inv, inv@<p>, or poly:<c0,c1,...>");
}

// Seeds with a finite real Taylor polynomial admit the direct operator oracle.
inline bool polynomial_coeffs(const std::string& spec, std::vector<double>& out) {
  if (spec.rfind("z^", 0) == 0) {
    const int k = std::stoi(spec.substr(2));
    out.assign(k + 1, 0.0);
    out[k] = 1.0;
    return true;
  }
  if (spec.rfind("poly:", 0) == 0) {
    out.clear();
    std::string tok;
    for (char ch : spec.substr(5) + ",") {
      if (ch == ',') {
        out.push_back(std::strtod(tok.c_str(), nullptr));
        tok.clear();
      } else {
        tok += ch;
      }
    }
    return true;
  }
  return false;
}

// "1" (or the empty string) is the bare kernel; otherwise comma-separated
// letters with optional ^rep, e.g. "Delta,D".
inline Word parse_word_spec(const std::string& spec) {
  if (spec.empty() || spec == "1") return {};
  Word flat;
  for (const Word& step : make_chain(spec).steps)
    flat.insert(flat.end(), step.begin(), step.end());
  return flat;
}

namespace cfg {

inline bool is_pow2(long v) { return v > 0 && (v & (v - 1)) == 0; }

inline void require_keys(const json& j) {
  static const std::set<std::string> allowed = {
      "command", "n",     "rng_seed", "tolerance", "seeds",     "chains",
      "words",   "points", "samples",  "m",         "T",         "f",
      "kind",    "fine_word", "nodes", "nodes_min", "nodes_max", "plane",
      "radius_scale", "out"};
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigInvalid("unknown field '" + key + "'");
}

inline int get_int(const json& j, const char* key, int def, int lo, int hi) {
  if (!j.contains(key)) return def;
  if (!j[key].is_number_integer())
    throw ConfigInvalid(std::string("field '") + key + "' must be an integer");
  const long v = j[key].get<long>();
  if (v < lo || v > hi)
    throw ConfigInvalid(std::string("field '") + key + "' must lie in [" + std::to_string(lo) +
                        ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

inline double get_pos(const json& j, const char* key, double def) {
  if (!j.contains(key)) return def;
  if (!j[key].is_number())
    throw ConfigInvalid(std::string("field '") + key + "' must be a number");
  const double v = j[key].get<double>();
  if (!(v > 0.0)) throw ConfigInvalid(std::string("field '") + key + "' must be positive");
  return v;
}

inline std::vector<std::string> get_strings(const json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  if (!j[key].is_array())
    throw ConfigInvalid(std::string("field '") + key + "' must be an array of strings");
  for (const auto& e : j[key]) {
    if (!e.is_string())
      throw ConfigInvalid(std::string("field '") + key + "' must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline int get_nodes(const json& j, const char* key, int def) {
  const int v = get_int(j, key, def, 1, 1 << 20);
  if (!is_pow2(v) || v < 32 || v > 4096)
    throw ConfigInvalid(std::string("field '") + key + "' must be a power of two in [32, 4096]");
  return v;
}

}  // namespace cfg

inline RunConfig parse_config(const json& j, const std::string& cli_command) {
  if (!j.is_object()) throw ConfigInvalid("config root must be a JSON object");
  cfg::require_keys(j);

  RunConfig rc;
  rc.command = cli_command;
  if (j.contains("command")) {
    if (!j["command"].is_string()) throw ConfigInvalid("field 'command' must be a string");
    const std::string c = j["command"].get<std::string>();
    if (!command_names().count(c)) throw ConfigInvalid("unknown command '" + c + "'");
    if (!cli_command.empty() && c != cli_command)
      throw ConfigInvalid("config command '" + c + "' does not match CLI command '" +
                          cli_command + "'");
    rc.command = c;
  }
  if (rc.command.empty()) throw ConfigInvalid("no command given");

  rc.n = cfg::get_int(j, "n", 3, 1, 64);
  if (rc.n != 3 && rc.n != 5) throw ConfigInvalid("field 'n' must be 3 or 5");

  if (j.contains("rng_seed")) {
    if (!j["rng_seed"].is_number_unsigned() && !j["rng_seed"].is_number_integer())
      throw ConfigInvalid("field 'rng_seed' must be a nonnegative integer");
    if (j["rng_seed"].is_number_integer() && j["rng_seed"].get<long long>() < 0)
      throw ConfigInvalid("field 'rng_seed' must be a nonnegative integer");
    rc.rng_seed = j["rng_seed"].get<std::uint64_t>();
  }

  rc.tolerance = cfg::get_pos(j, "tolerance", 0.0);
  rc.points = cfg::get_int(j, "points", 0, 1, 100000);
  rc.samples = cfg::get_int(j, "samples", 0, 1, 100000);
  rc.seeds = cfg::get_strings(j, "seeds");
  for (const auto& s : rc.seeds) parse_seed(s);
  rc.chains = cfg::get_strings(j, "chains");
  for (const auto& c : rc.chains) {
    try {
      make_chain(c);
    } catch (const UnknownChain& e) {
      throw ConfigInvalid("field 'chains': " + std::string(e.what()));
    }
  }
  rc.words = cfg::get_strings(j, "words");
  for (const auto& w : rc.words) {
    try {
      parse_word_spec(w);
    } catch (const UnknownChain& e) {
      throw ConfigInvalid("field 'words': " + std::string(e.what()));
    }
  }

  if (j.contains("f")) {
    if (!j["f"].is_string()) throw ConfigInvalid("field 'f' must be a string");
    rc.f = j["f"].get<std::string>();
    parse_seed(rc.f);
  }
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) throw ConfigInvalid("field 'kind' must be a string");
    rc.kind = j["kind"].get<std::string>();
    if (rc.kind != "S" && rc.kind != "F" && rc.kind != "fine")
      throw ConfigInvalid("field 'kind' must be one of S, F, fine");
  }
  if (j.contains("fine_word")) {
    if (!j["fine_word"].is_string()) throw ConfigInvalid("field 'fine_word' must be a string");
    rc.fine_word = j["fine_word"].get<std::string>();
    try {
      parse_word_spec(rc.fine_word);
    } catch (const UnknownChain& e) {
      throw ConfigInvalid("field 'fine_word': " + std::string(e.what()));
    }
  }
  if (rc.kind == "fine" && parse_word_spec(rc.fine_word).empty())
    throw ConfigInvalid("kind 'fine' needs a nonempty 'fine_word'");

  rc.nodes = cfg::get_nodes(j, "nodes", 512);
  rc.nodes_min = cfg::get_nodes(j, "nodes_min", 32);
  rc.nodes_max = cfg::get_nodes(j, "nodes_max", 512);
  if (rc.nodes_min > rc.nodes_max)
    throw ConfigInvalid("field 'nodes_min' must not exceed 'nodes_max'");
  rc.radius_scale = cfg::get_pos(j, "radius_scale", 1.0);

  if (j.contains("plane")) {
    if (!j["plane"].is_array()) throw ConfigInvalid("field 'plane' must be an array of numbers");
    double nrm = 0.0;
    for (const auto& e : j["plane"]) {
      if (!e.is_number()) throw ConfigInvalid("field 'plane' must be an array of numbers");
      rc.plane.push_back(e.get<double>());
      nrm += rc.plane.back() * rc.plane.back();
    }
    if (static_cast<int>(rc.plane.size()) != rc.n)
      throw ConfigInvalid("field 'plane' must have n entries");
    if (!(nrm > 1e-24)) throw ConfigInvalid("field 'plane' must be a nonzero direction");
  }

  if (j.contains("m") || j.contains("T")) {
    rc.m = cfg::get_int(j, "m", 0, 1, 64);
    if (rc.m == 0) throw ConfigInvalid("field 'T' needs 'm' (matrix size)");
    if (!j.contains("T") || !j["T"].is_array())
      throw ConfigInvalid("field 'T' must be an array of row-major m*m matrices");
    const auto& arr = j["T"];
    if (static_cast<int>(arr.size()) != rc.n + 1)
      throw ConfigInvalid("field 'T' must have n+1 = " + std::to_string(rc.n + 1) + " entries");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_array() || static_cast<int>(arr[i].size()) != rc.m * rc.m)
        throw ConfigInvalid("field 'T[" + std::to_string(i) + "]' must have m*m = " +
                            std::to_string(rc.m * rc.m) + " numbers (row-major)");
      Eigen::MatrixXd M(rc.m, rc.m);
      for (int r = 0; r < rc.m; ++r)
        for (int c = 0; c < rc.m; ++c) {
          const auto& e = arr[i][r * rc.m + c];
          if (!e.is_number())
            throw ConfigInvalid("field 'T[" + std::to_string(i) + "]' must hold numbers");
          M(r, c) = e.get<double>();
        }
      rc.T.push_back(M);
    }
  }

  if (j.contains("out")) {
    if (!j["out"].is_string()) throw ConfigInvalid("field 'out' must be a string");
    rc.out_dir = j["out"].get<std::string>();
  }

  const bool needs_tuple = rc.command == "s-spectrum" || rc.command == "calculus-compare" ||
                           rc.command == "quadrature-study";
  if (needs_tuple && rc.T.empty())
    throw ConfigInvalid("command '" + rc.command + "' needs an operator tuple ('m' and 'T')");
  return rc;
}

// ---------------------------------------------------------------------------
// reports

struct CheckRecord {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct RunOutput {
  std::string command;
  std::vector<CheckRecord> checks;
  double seconds = 0.0;
  std::vector<SpectralSphere> spheres;           // s-spectrum CSV rows
  std::vector<std::pair<int, double>> quad_rows;  // quadrature-study CSV rows

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
};

inline json report_json(const RunOutput& r) {
  json j;
  j["command"] = r.command;
  j["checks"] = json::array();
  for (const auto& c : r.checks) {
    json e;
    e["name"] = c.name;
    e["max_residual"] = c.max_residual;
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    j["checks"].push_back(e);
  }
  j["environment"] = {{"precision", "double"}, {"version", kVersion}};
  j["timing"] = {{"seconds", r.seconds}};
  return j;
}

// Timing varies between runs; everything else is covered by the determinism
// contract.
inline json strip_timing(json j) {
  j.erase("timing");
  return j;
}

// Shortest decimal form that round-trips to the same double.
inline std::string shortest_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string spectrum_csv(const std::vector<SpectralSphere>& spheres) {
  std::string out = "center,radius,multiplicity\n";
  for (const auto& s : spheres)
    out += shortest_double(s.center) + "," + shortest_double(s.radius) + "," +
           std::to_string(s.multiplicity) + "\n";
  return out;
}

inline std::string quadrature_csv(const std::vector<std::pair<int, double>>& rows) {
  std::string out = "N,error\n";
  for (const auto& [n, err] : rows) out += std::to_string(n) + "," + shortest_double(err) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// command runners

namespace run_detail {

inline CheckRecord failed(std::string name, const std::exception& e, double tol) {
  return {std::move(name) + " (error: " + e.what() + ")", 1e300, tol, false};
}

inline double rel_diff(const OperatorMultivector& got, const OperatorMultivector& want) {
  return max_abs_diff(got, want) / (1.0 + want.norm());
}

inline std::vector<double> default_plane(int n) {
  std::vector<double> p(n, 0.0);
  p[0] = 1.0;
  return p;
}

// A second direction for plane-independence checks: mix in the axis where the
// given plane is smallest, so the two are never collinear.
inline std::vector<double> other_plane(const std::vector<double>& p) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (std::abs(p[i]) < std::abs(p[k])) k = i;
  std::vector<double> q = p;
  q[k] += 1.0;
  double nrm = 0.0;
  for (double c : q) nrm += c * c;
  nrm = std::sqrt(nrm);
  for (double& c : q) c /= nrm;
  return q;
}

template <int N>
bool near_seed_singularity(const Seed& seed, const Paravector<N>& x) {
  const cplx z(x.r0, x.vec_norm());
  for (const cplx& p : seed.singularities)
    if (std::abs(z - p) < 0.3 || std::abs(std::conj(z) - p) < 0.3) return true;
  return false;
}

template <int N>
void fueter_sce_impl(const RunConfig& rc, RunOutput& out) {
  const double tol = rc.tolerance > 0 ? rc.tolerance : 1e-9;
  const int count = rc.points > 0 ? rc.points : 100;
  const auto specs =
      rc.seeds.empty() ? std::vector<std::string>{"z^2", "z^4", "z^6", "exp", "inv"} : rc.seeds;

  std::mt19937_64 rng(rc.rng_seed);
  const auto pts = halton_points<N>(count, DomainBox{}, rng);
  const int h = sce_exponent(N);
  const Word delta_h(h, Letter::Delta);

  for (const auto& spec : specs) {
    const Seed seed = parse_seed(spec);
    const std::string name = "dirac kills tfs2[" + seed.name + "]";
    try {
      const auto f = tfs1<N>(seed);
      double worst = 0.0;
      for (const auto& x : pts) {
        if (near_seed_singularity(seed, x)) continue;
        const Jet<N> ext = f.eval_jet(x, 2 * h + 1);
        const Jet<N> mono = apply_word(delta_h, ext, f.side);
        worst = std::max(worst, apply_D(mono, f.side).value().norm());
      }
      out.checks.push_back({name, worst, tol, worst < tol});
    } catch (const std::exception& e) {
      out.checks.push_back(failed(name, e, tol));
    }
  }
}

template <int N>
void chains_impl(const RunConfig& rc, RunOutput& out) {
  const double tol = rc.tolerance > 0 ? rc.tolerance : 1e-9;
  const int count = rc.points > 0 ? rc.points : 25;
  const auto specs = rc.seeds.empty() ? std::vector<std::string>{"z^4", "exp"} : rc.seeds;
  std::vector<std::string> chain_names = rc.chains;
  if (chain_names.empty())
    for (const auto& c : chain_registry(N)) chain_names.push_back(c.name);

  std::mt19937_64 rng(rc.rng_seed);
  const auto pts = halton_points<N>(count, DomainBox{}, rng);

  for (const auto& cname : chain_names) {
    for (const auto& spec : specs) {
      const Seed seed = parse_seed(spec);
      const std::string base = "chain[" + cname + "] " + seed.name;
      try {
        const Chain chain = make_chain(cname);
        const auto rep = verify_chain(tfs1<N>(seed), chain, pts, tol);
        for (const auto& st : rep.stations)
          out.checks.push_back({base + " --" + st.arrow + "--> " + st.space, st.residual, tol,
                                st.pass});
        out.checks.push_back({base + " composite equals tfs2", rep.end_vs_tfs2, tol,
                              rep.end_vs_tfs2 < tol});
      } catch (const std::exception& e) {
        out.checks.push_back(failed(base, e, tol));
      }
    }
  }
}

template <int N>
void kernels_impl(const RunConfig& rc, RunOutput& out) {
  const double tol = rc.tolerance > 0 ? rc.tolerance : 1e-10;
  const int count = rc.samples > 0 ? rc.samples : 50;
  std::vector<std::string> word_specs = rc.words;
  if (word_specs.empty())
    word_specs = (N == 3) ? std::vector<std::string>{"1", "D", "Delta"}
                          : std::vector<std::string>{"1", "D", "Delta,D", "Delta,Delta"};

  std::mt19937_64 rng(rc.rng_seed);
  const auto draw_pair = [&rng](Paravector<N>& s, Paravector<N>& x) {
    for (;;) {
      x = random_point<N>(rng, DomainBox{});
      s = random_point<N>(rng, DomainBox{});
      s.r0 += 2.5;  // keep [s] clear of [x]
      if (sphere_distance(sphere_of(s), sphere_of(x)) > 0.1) return;
    }
  };

  {
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
      Paravector<N> s, x;
      draw_pair(s, x);
      Multivector<N> r = q_inverse(s, x) * q_eval(s, x);
      r.c[0] -= 1.0;
      worst = std::max(worst, r.norm());
    }
    out.checks.push_back({"q-inverse identity", worst, tol, worst < tol});
  }

  for (const auto& wspec : word_specs) {
    const Word w = parse_word_spec(wspec);
    const std::string name = "kernel" + word_name(w) + " closed form vs jet route";
    try {
      const ClosedForm cf = closed_form(N, w);
      double worst = 0.0;
      for (int i = 0; i < count; ++i) {
        Paravector<N> s, x;
        draw_pair(s, x);
        const Multivector<N> want = closed_form_eval(cf, s, x);
        const Multivector<N> got = fine_kernel(w, s, x, KernelRoute::jet);
        worst = std::max(worst, max_abs_diff(got, want) / want.norm());
      }
      out.checks.push_back({name, worst, tol, worst < tol});
    } catch (const std::exception& e) {
      out.checks.push_back(failed(name, e, tol));
    }
  }
}

inline OperatorTuple tuple_from_config(const RunConfig& rc) {
  if (rc.T.empty())
    throw ConfigInvalid("command '" + rc.command + "' needs an operator tuple ('m' and 'T')");
  OperatorTuple T;
  T.n = rc.n;
  T.m = rc.m;
  T.T = rc.T;
  T.validate();
  return T;
}

inline void s_spectrum_impl(const RunConfig& rc, RunOutput& out) {
  const double tol = rc.tolerance > 0 ? rc.tolerance : 1e-8;
  const std::string name = "spectral residual (scaled sigma_min on spheres)";
  try {
    const OperatorTuple T = tuple_from_config(rc);
    const SpectrumReport rep = s_spectrum(T, rc.rng_seed);
    out.spheres = rep.spheres;
    out.checks.push_back({name, rep.residual, tol, rep.residual < tol});
  } catch (const ConfigInvalid&) {
    throw;
  } catch (const std::exception& e) {
    out.checks.push_back(failed(name, e, tol));
  }
}

inline void calculus_compare_impl(const RunConfig& rc, RunOutput& out) {
  const double tol = rc.tolerance > 0 ? rc.tolerance : 1e-8;
  const std::string fspec = rc.f.empty() ? "z^2" : rc.f;
  const CalcKind kind =
      rc.kind == "S" ? CalcKind::S : (rc.kind == "F" ? CalcKind::F : CalcKind::Fine);
  try {
    const OperatorTuple T = tuple_from_config(rc);
    const Seed f = parse_seed(fspec);
    const Word fw = parse_word_spec(rc.fine_word);
    const auto rep = s_spectrum(T, rc.rng_seed);
    const auto plane = rc.plane.empty() ? default_plane(rc.n) : rc.plane;

    const auto C = build_contour(rep, plane, rc.radius_scale, rc.nodes);
    const auto fc = functional_calculus(kind, fw, f, T, C);

    std::vector<double> coeffs;
    if (kind == CalcKind::S && polynomial_coeffs(fspec, coeffs)) {
      const double r = rel_diff(fc, direct_polynomial(coeffs, T));
      out.checks.push_back({"contour vs direct [" + f.name + "]", r, tol, r < tol});
    } else if (kind == CalcKind::S && fspec == "exp") {
      const double r = rel_diff(fc, direct_exp(T));
      out.checks.push_back({"contour vs direct [" + f.name + "]", r, tol, r < tol});
    } else {
      const int n2 = std::min(2 * rc.nodes, 4096);
      const auto C2 = build_contour(rep, plane, rc.radius_scale, n2);
      const double r = rel_diff(fc, functional_calculus(kind, fw, f, T, C2));
      out.checks.push_back({"node refinement [" + f.name + "]", r, tol, r < tol});
    }

    const auto Cp = build_contour(rep, other_plane(plane), rc.radius_scale, rc.nodes);
    const double rp = rel_diff(functional_calculus(kind, fw, f, T, Cp), fc);
    out.checks.push_back({"plane independence", rp, tol, rp < tol});

    const auto Cr = build_contour(rep, plane, 1.5 * rc.radius_scale, rc.nodes);
    const double rr = rel_diff(functional_calculus(kind, fw, f, T, Cr), fc);
    out.checks.push_back({"radius independence", rr, tol, rr < tol});
  } catch (const ConfigInvalid&) {
    throw;
  } catch (const std::exception& e) {
    out.checks.push_back(failed("calculus-compare [" + fspec + "]", e, tol));
  }
}

inline void quadrature_study_impl(const RunConfig& rc, RunOutput& out) {
  const double tol = rc.tolerance > 0 ? rc.tolerance : 1e-12;
  const std::string fspec = rc.f.empty() ? "z^3" : rc.f;
  try {
    const OperatorTuple T = tuple_from_config(rc);
    const Seed f = parse_seed(fspec);
    std::vector<double> coeffs;
    OperatorMultivector direct(rc.n, rc.m);
    if (polynomial_coeffs(fspec, coeffs))
      direct = direct_polynomial(coeffs, T);
    else if (fspec == "exp")
      direct = direct_exp(T);
    else
      throw ConfigInvalid("quadrature-study needs a seed with a direct oracle (z^k, poly, exp)");

    const auto rep = s_spectrum(T, rc.rng_seed);
    const auto plane = rc.plane.empty() ? default_plane(rc.n) : rc.plane;
    for (int nn = rc.nodes_min; nn <= rc.nodes_max; nn *= 2) {
      const auto C = build_contour(rep, plane, rc.radius_scale, nn);
      const auto fc = functional_calculus(CalcKind::S, {}, f, T, C);
      out.quad_rows.emplace_back(nn, rel_diff(fc, direct));
    }

    // each doubling must shrink the error by >= 10x until it hits the floor
    double defect = 0.0;
    for (std::size_t i = 1; i < out.quad_rows.size(); ++i) {
      const double prev = out.quad_rows[i - 1].second;
      if (prev < tol) break;
      defect = std::max(defect, 10.0 * out.quad_rows[i].second / prev);
    }
    out.checks.push_back({"decay defect (10x per doubling)", defect, 1.0, defect < 1.0});
    const double last = out.quad_rows.back().second;
    out.checks.push_back({"final relative error", last, tol, last < tol});
  } catch (const ConfigInvalid&) {
    throw;
  } catch (const std::exception& e) {
    out.checks.push_back(failed("quadrature-study [" + fspec + "]", e, tol));
  }
}

}  // namespace run_detail

inline RunOutput run(const RunConfig& rc) {
  const auto t0 = std::chrono::steady_clock::now();
  RunOutput out;
  out.command = rc.command;
  if (rc.command == "verify-fueter-sce") {
    rc.n == 3 ? run_detail::fueter_sce_impl<3>(rc, out) : run_detail::fueter_sce_impl<5>(rc, out);
  } else if (rc.command == "verify-chains") {
    rc.n == 3 ? run_detail::chains_impl<3>(rc, out) : run_detail::chains_impl<5>(rc, out);
  } else if (rc.command == "verify-kernels") {
    rc.n == 3 ? run_detail::kernels_impl<3>(rc, out) : run_detail::kernels_impl<5>(rc, out);
  } else if (rc.command == "s-spectrum") {
    run_detail::s_spectrum_impl(rc, out);
  } else if (rc.command == "calculus-compare") {
    run_detail::calculus_compare_impl(rc, out);
  } else if (rc.command == "quadrature-study") {
    run_detail::quadrature_study_impl(rc, out);
  } else {
    throw ConfigInvalid("unknown command '" + rc.command + "'");
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// HYPERFINE_THREADS caps internal parallelism (Eigen); unset leaves defaults.
inline void apply_thread_cap() {
  if (const char* env = std::getenv("HYPERFINE_THREADS")) {
    const int k = std::atoi(env);
    if (k >= 1) Eigen::setNbThreads(k);
  }
}

}  // namespace hyperfine
