// Copyright 2026 The rdgroupoid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// rdg: command-line front end. Every report is a CSV written to --out (or
// stdout) plus a key=value manifest at <out>.manifest.
//
// Exit status: 0 ok, 2 a check failed, 1 error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "rdg/rdg.hpp"

namespace {

using namespace rdg;

// ---------------------------------------------------------------------------
// Input specs

struct Inputs {
  std::string groupoid;
  std::string space;
  std::string length = "builtin:discrete";
  std::string cocycle = "trivial";
  std::string function = "builtin:ones";
};

struct Common {
  std::string out;
  std::size_t workers = default_workers();
  std::uint64_t seed = 1;
  SpectralOptions spectral;
};

/// Accumulates everything that determines a report, for the manifest digest.
class Digest {
 public:
  void add(const std::string& label, const std::string& value) {
    h_ = io::fnv1a64(label, h_);
    h_ = io::fnv1a64("=", h_);
    h_ = io::fnv1a64(value, h_);
    h_ = io::fnv1a64("\n", h_);
  }
  std::string hex() const { return io::hex64(h_); }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

Digest g_digest;

bool starts_with(const std::string& s, std::string_view p) { return s.rfind(p, 0) == 0; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::size_t to_size(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos == s.size()) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw Error(Errc::invalid_argument, "bad " + what + " '" + s + "'");
}

io::json load_json(const std::string& path, const std::string& label) {
  const std::string text = io::read_text(path);
  g_digest.add(label, text);
  return io::parse(text, path);
}

/// Everything after "builtin:", or nullopt for a file path.
std::optional<std::string> builtin(const std::string& spec, const std::string& label) {
  if (!starts_with(spec, "builtin:")) return std::nullopt;
  g_digest.add(label, spec);
  return spec.substr(8);
}

// Table groupoids ------------------------------------------------------------

GroupoidPtr load_groupoid(const std::string& spec, const std::string& label = "groupoid") {
  if (auto b = builtin(spec, label)) {
    const auto parts = split(*b, ':');
    if (parts.size() == 2 && parts[0] == "pair") return share(pair_groupoid(to_size(parts[1], "size")));
    if (parts.size() == 2 && parts[0] == "cyclic")
      return share(group_groupoid(cyclic_group_table(to_size(parts[1], "order"))));
    if (parts.size() == 2 && parts[0] == "zn2") {
      const auto zn = cyclic_group_table(to_size(parts[1], "order"));
      return share(group_groupoid(direct_product_table(zn, zn)));
    }
    if (parts.size() == 1 && parts[0] == "z2z2") {
      const auto z2 = cyclic_group_table(2);
      return share(group_groupoid(direct_product_table(z2, z2)));
    }
    throw Error(Errc::invalid_argument, "unknown builtin groupoid '" + spec + "'");
  }
  return share(io::groupoid_from_json(load_json(spec, label)));
}

LengthFunction load_length(const std::string& spec, const Groupoid& g) {
  if (auto b = builtin(spec, "length")) {
    if (*b == "discrete") {
      LengthFunction l;
      for (ArrowId a = 0; a < g.arrow_count(); ++a) l.values.push_back(is_unit(g, a) ? 0.0 : 1.0);
      return l;
    }
    if (starts_with(*b, "word:")) {
      std::vector<ArrowId> K;
      for (const auto& s : split(b->substr(5), ',')) K.push_back(to_size(s, "generator"));
      return word_length(g, K);
    }
    throw Error(Errc::invalid_argument, "unknown builtin length '" + spec + "'");
  }
  return io::length_from_json(load_json(spec, "length"), g);
}

using TableCocycle = std::variant<TrivialCocycle, Cocycle, CoboundaryCocycle<Groupoid, HashedPhase<Groupoid>>>;

TableCocycle load_table_cocycle(const std::string& spec, const GroupoidPtr& g) {
  g_digest.add("cocycle-spec", spec);
  if (spec == "trivial") return TrivialCocycle{};
  if (starts_with(spec, "hashed:")) return hashed_coboundary(*g, to_size(spec.substr(7), "seed"));
  if (spec == "heisenberg") return heisenberg_cocycle(g);
  if (starts_with(spec, "bicharacter:")) return bicharacter_cocycle(g, to_size(spec.substr(12), "order"));
  return io::cocycle_from_json(load_json(spec, "cocycle"), g);
}

GFunction random_function(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  GFunction f(n);
  for (auto& c : f.coeffs) {
    const double re = normal(rng), im = normal(rng);
    c = {re, im};
  }
  return f;
}

template <FiniteGroupoid G>
GFunction load_function(const std::string& spec, const G& g) {
  if (auto b = builtin(spec, "function")) {
    if (*b == "ones") return ones(g.arrow_count());
    if (*b == "units") return unit_indicator(g);
    if (starts_with(*b, "delta:")) {
      const ArrowId a = to_size(b->substr(6), "arrow");
      require(a < g.arrow_count(), Errc::invalid_argument, "delta arrow out of range", {a});
      return delta(g.arrow_count(), a);
    }
    if (starts_with(*b, "random:")) return random_function(g.arrow_count(), to_size(b->substr(7), "seed"));
    throw Error(Errc::invalid_argument, "unknown builtin function '" + spec + "'");
  }
  return io::function_from_json(load_json(spec, "function"), g.arrow_count());
}

// Pair groupoids of metric spaces ---------------------------------------------

using Space = std::variant<FiniteMetricSpace, HeapTreeMetric>;

Space load_space(const std::string& spec) {
  if (auto b = builtin(spec, "space")) {
    const auto parts = split(*b, ':');
    if (parts.size() == 2 && parts[0] == "path") return path_space(to_size(parts[1], "size"));
    if (parts.size() == 2 && parts[0] == "tree") return HeapTreeMetric(to_size(parts[1], "depth"));
    if (parts.size() == 2 && parts[0] == "grid") {
      const auto wh = split(parts[1], 'x');
      require(wh.size() == 2, Errc::invalid_argument, "grid spec is builtin:grid:WxH");
      return grid_space(to_size(wh[0], "width"), to_size(wh[1], "height"));
    }
    throw Error(Errc::invalid_argument, "unknown builtin space '" + spec + "'");
  }
  return io::space_from_json(load_json(spec, "space"));
}

bool is_space_spec(const std::string& spec) {
  return starts_with(spec, "builtin:path:") || starts_with(spec, "builtin:tree:") ||
         starts_with(spec, "builtin:grid:");
}

/// Calls fn(g, l, sigma) with the resolved groupoid, length and cocycle.
template <class Fn>
void with_problem(const Inputs& in, Fn&& fn) {
  const std::string gspec = in.space.empty() ? in.groupoid : in.space;
  require(!gspec.empty(), Errc::invalid_argument, "--groupoid or --space is required");
  if (!in.space.empty() || is_space_spec(gspec)) {
    const Space X = load_space(gspec);
    std::visit(
        [&](const auto& metric) {
          const PairGroupoid g(metric.size());
          const PairMetricLength l(metric);
          g_digest.add("cocycle-spec", in.cocycle);
          if (in.cocycle == "trivial") {
            fn(g, l, TrivialCocycle{});
          } else if (starts_with(in.cocycle, "hashed:")) {
            fn(g, l, hashed_coboundary(g, to_size(in.cocycle.substr(7), "seed")));
          } else {
            throw Error(Errc::invalid_argument, "metric spaces take the trivial or hashed:SEED cocycle");
          }
        },
        X);
    return;
  }
  const GroupoidPtr g = load_groupoid(gspec);
  const LengthFunction l = load_length(in.length, *g);
  const TableCocycle sigma = load_table_cocycle(in.cocycle, g);
  std::visit([&](const auto& s) { fn(*g, l, s); }, sigma);
}

// ---------------------------------------------------------------------------
// Output

struct Output {
  const Common& common;
  std::string command;
  io::Manifest manifest;

  void emit(const io::Csv& csv) {
    manifest.set("tool", "rdg");
    manifest.set("version", std::string(io::kVersion));
    manifest.set("command", command);
    manifest.set("inputs_digest", g_digest.hex());
    manifest.set("seed", std::to_string(common.seed));
    manifest.set("spectral_dense_limit", std::to_string(common.spectral.dense_limit));
    manifest.set("spectral_rel_tol", io::fmt(common.spectral.rel_tol));
    manifest.set("spectral_max_iterations", std::to_string(common.spectral.max_iterations));
    manifest.set("spectral_seed", std::to_string(common.spectral.seed));
    manifest.set("csv_digest", io::hex64(io::fnv1a64(csv.str())));
    if (common.out.empty()) {
      std::cout << csv.str();
    } else {
      io::write_text(common.out, csv.str());
      io::write_text(common.out + ".manifest", manifest.str());
    }
  }
};

std::vector<double> parse_doubles(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Errc::invalid_argument, "bad " + what + " '" + item + "'");
    }
  }
  require(!out.empty(), Errc::invalid_argument, what + " list is empty");
  return out;
}

std::vector<double> parse_ts(const std::string& s) {
  auto ts = parse_doubles(s, "t");
  for (double t : ts) require_nonnegative_t(t);
  return ts;
}

NormOptions norm_options(const Common& c, UnitScope scope = UnitScope::orbit_representatives) {
  NormOptions o;
  o.spectral = c.spectral;
  o.workers = c.workers;
  o.scope = scope;
  return o;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "CSV output path (a manifest is written to <out>.manifest)");
  app->add_option("--workers", c.workers, "worker threads (results do not depend on it)");
  app->add_option("--seed", c.seed, "seed for generated families and functions");
  app->add_option("--dense-limit", c.spectral.dense_limit, "largest fiber solved densely")
      ->default_val(c.spectral.dense_limit);
  app->add_option("--rel-tol", c.spectral.rel_tol, "power iteration relative tolerance")
      ->default_val(c.spectral.rel_tol);
  app->add_option("--max-iterations", c.spectral.max_iterations, "power iteration budget")
      ->default_val(c.spectral.max_iterations);
}

void add_inputs(CLI::App* app, Inputs& in, bool length, bool cocycle, bool function) {
  app->add_option("--groupoid", in.groupoid, "groupoid file or builtin:pair:N|cyclic:N|z2z2|zn2:N|path:N|tree:D|grid:WxH");
  app->add_option("--space", in.space, "metric space file; uses its pair groupoid and metric length");
  if (length) app->add_option("--length", in.length, "length file or builtin:discrete|word:IDS")->default_val(in.length);
  if (cocycle)
    app->add_option("--cocycle", in.cocycle, "cocycle file or trivial|hashed:SEED|heisenberg|bicharacter:N")
        ->default_val(in.cocycle);
  if (function)
    app->add_option("--function", in.function, "function file or builtin:ones|units|delta:ID|random:SEED")
        ->default_val(in.function);
}

// ---------------------------------------------------------------------------
// Commands

int cmd_validate(const Inputs& in, const std::string& hom, const std::string& codomain) {
  if (!hom.empty()) {
    require(!codomain.empty(), Errc::invalid_argument, "--hom needs --codomain");
    const GroupoidPtr dom = load_groupoid(in.groupoid);
    const GroupoidPtr cod = load_groupoid(codomain, "codomain");
    const GroupoidHom phi = io::hom_from_json(load_json(hom, "hom"), dom, cod);
    const Regularity r = n_regularity(phi);
    std::cout << "ok homomorphism" << (r.regular ? " n_regular=" + std::to_string(r.n) : " not_regular")
              << "\n";
    return 0;
  }
  with_problem(in, [&](const auto& g, const auto& l, const auto& sigma) {
    Violations v = validate(g);
    if (v.empty()) v = validate_length(g, l);
    if (v.empty()) v = validate_cocycle(g, sigma);
    if (!v.empty()) throw Error(Errc::validation_error, "input is invalid", std::move(v));
  });
  std::cout << "ok\n";
  return 0;
}

int cmd_info(const Inputs& in, Common& c) {
  Output out{c, "info", {}};
  io::Csv csv({"key", "value"});
  with_problem(in, [&](const auto& g, const auto&, const auto&) {
    csv.row({"arrows", std::to_string(g.arrow_count())});
    csv.row({"units", std::to_string(g.unit_count())});
    csv.row({"orbits", std::to_string(orbit_representatives(g).size())});
    csv.row({"principal", is_principal(g) ? "true" : "false"});
    csv.row({"max_fiber", std::to_string(max_fiber_size(g))});
  });
  out.emit(csv);
  return 0;
}

int cmd_growth(const Inputs& in, Common& c, const std::string& radii) {
  Output out{c, "growth", {}};
  const auto rs = parse_doubles(radii, "radius");
  g_digest.add("radii", radii);
  with_problem(in, [&](const auto& g, const auto& l, const auto&) {
    const GrowthProfile p = growth_profile(g, l, rs);
    out.manifest.set("exponent", io::fmt(p.exponent));
    out.emit(io::growth_csv(p));
  });
  return 0;
}

int cmd_norm(const Inputs& in, Common& c, bool all_units) {
  Output out{c, "norm", {}};
  with_problem(in, [&](const auto& g, const auto&, const auto& sigma) {
    const GFunction f = load_function(in.function, g);
    NormOptions o = norm_options(c, all_units ? UnitScope::all_units : UnitScope::orbit_representatives);
    o.throw_on_no_convergence = false;
    const NormReport r = reduced_norm(g, f, sigma, o);
    out.manifest.set("reduced_norm", io::fmt(r.value));
    out.manifest.set("converged", r.converged ? "true" : "false");
    out.emit(io::norm_csv(r));
  });
  return 0;
}

int cmd_seminorm(const Inputs& in, Common& c, const std::string& ts_s, const std::string& mode) {
  Output out{c, "seminorm", {}};
  const auto ts = parse_ts(ts_s);
  g_digest.add("t", ts_s);
  g_digest.add("mode", mode);
  io::Csv csv({"mode", "t", "value"});
  with_problem(in, [&](const auto& g, const auto& l, const auto&) {
    const GFunction f = load_function(in.function, g);
    SeminormMode m = Symmetric{};
    if (mode == "sup") m = SupSource{};
    else if (starts_with(mode, "unit:")) m = AtUnit{to_size(mode.substr(5), "unit")};
    else require(mode == "symmetric", Errc::invalid_argument, "mode is symmetric, sup or unit:ID");
    for (double t : ts) csv.row({mode, io::fmt(t), io::fmt(weighted_seminorm(g, f, l, t, m))});
  });
  out.emit(csv);
  return 0;
}

int cmd_rd_scan(const Inputs& in, Common& c, const std::string& ts_s, const std::string& family,
                std::size_t trials) {
  Output out{c, "rd-scan", {}};
  const auto ts = parse_ts(ts_s);
  ScanOptions o;
  o.family = parse_family(family);
  o.trials = trials;
  o.seed = c.seed;
  o.norm = norm_options(c);
  g_digest.add("t", ts_s);
  g_digest.add("family", std::string(family_name(o.family)));
  g_digest.add("trials", std::to_string(trials));
  io::Csv csv = io::rd_csv_header();
  with_problem(in, [&](const auto& g, const auto& l, const auto& sigma) {
    for (const auto& res : rd_scan(g, sigma, l, ts, o)) {
      for (const auto& r : res.rows)
        csv.row({std::string(family_name(res.family)), io::fmt(res.t), r.param, io::fmt(r.ratio),
                 io::fmt(r.bound), io::fmt(r.residual)});
      out.manifest.set("max_ratio[t=" + io::fmt(res.t) + "]", io::fmt(res.max_ratio));
      out.manifest.set("argmax[t=" + io::fmt(res.t) + "]", res.rows.empty() ? "" : res.rows[0].param);
      for (const auto& r : res.rows)
        if (r.id == res.argmax) out.manifest.set("argmax[t=" + io::fmt(res.t) + "]", r.param);
    }
  });
  out.emit(csv);
  return 0;
}

int cmd_witness(const Inputs& in, Common& c, std::size_t unit_index, double radius, const std::string& ts_s,
                double tol) {
  Output out{c, "witness", {}};
  const auto ts = parse_ts(ts_s);
  g_digest.add("unit", std::to_string(unit_index));
  g_digest.add("radius", io::fmt(radius));
  g_digest.add("t", ts_s);
  io::Csv csv = io::rd_csv_header();
  bool pass = true;
  with_problem(in, [&](const auto& g, const auto& l, const auto& sigma) {
    require(unit_index < g.unit_count(), Errc::not_a_unit, "unit index out of range", {unit_index});
    const auto w = witness_construct(g, sigma, l, g.unit(unit_index), radius);
    const auto checks = verify_witness(g, sigma, l, w, ts, norm_options(c), tol);
    const double size = static_cast<double>(w.F.size());
    const std::string param = "x=" + std::to_string(w.unit) + ";R=" + io::fmt(radius) +
                              ";F=" + std::to_string(w.F.size());
    for (const auto& k : checks) {
      csv.row({"norm", io::fmt(k.t), param, io::fmt(k.norm), io::fmt(size), io::fmt(k.norm_residual)});
      csv.row({"seminorm", io::fmt(k.t), param, io::fmt(k.seminorm), io::fmt(k.seminorm_bound), "0"});
      csv.row({"ratio", io::fmt(k.t), param, io::fmt(k.norm / k.seminorm), io::fmt(w.ratio_lower_bound(k.t)),
               io::fmt(k.norm_residual)});
      pass = pass && k.norm_ok && k.seminorm_ok;
    }
    out.manifest.set("witness_size", std::to_string(w.F.size()));
    out.manifest.set("certified_norm_lower_bound", io::fmt(w.norm_lower_bound));
    out.manifest.set("witness_tol", io::fmt(tol));
  });
  out.manifest.set("pass", pass ? "true" : "false");
  out.emit(csv);
  return pass ? 0 : 2;
}

int cmd_dichotomy(Common& c, const std::string& family, const std::string& sizes, const std::string& ts_s,
                  const std::string& scan_family, std::size_t trials) {
  Output out{c, "dichotomy", {}};
  DichotomyOptions o;
  o.family = parse_model(family);
  for (const auto& s : split(sizes, ',')) o.sizes.push_back(to_size(s, "size"));
  o.ts = parse_ts(ts_s);
  o.scan.family = parse_family(scan_family);
  o.scan.trials = trials;
  o.scan.seed = c.seed;
  o.scan.norm = norm_options(c);
  g_digest.add("family", std::string(model_name(o.family)));
  g_digest.add("sizes", sizes);
  g_digest.add("t", ts_s);
  g_digest.add("scan_family", std::string(family_name(o.scan.family)));
  g_digest.add("trials", std::to_string(trials));
  const DichotomyReport rep = dichotomy_experiment(o);
  io::Csv csv({"family", "size", "t", "growth_exponent", "scan_max", "witness_bound", "witness_radius",
               "witness_size"});
  for (const auto& r : rep.rows)
    csv.row({std::string(model_name(rep.family)), std::to_string(r.size), io::fmt(r.t),
             io::fmt(r.growth_exponent), io::fmt(r.scan_max), io::fmt(r.witness_bound),
             io::fmt(r.witness_radius), std::to_string(r.witness_size)});
  for (const auto& k : rep.classes) {
    out.manifest.set("class[t=" + io::fmt(k.t) + "]", k.label);
    std::cerr << model_name(rep.family) << " t=" << io::fmt(k.t) << ": " << k.label << "\n";
  }
  out.emit(csv);
  return 0;
}

struct PermanenceArgs {
  std::string units;
  std::string factor;
  std::string hom;
  std::string domain;
  std::size_t unit = 0;
  double C = 1.0;
  std::string ts = "1";
  std::size_t samples = 8;
  CheckTolerances tol;
};

GroupoidHom load_hom(const std::string& spec, const std::string& domain, const GroupoidPtr& cod) {
  require(!spec.empty(), Errc::invalid_argument, "--hom is required");
  if (auto b = builtin(spec, "hom")) {
    require(starts_with(*b, "blowup:"), Errc::invalid_argument, "unknown builtin hom '" + spec + "'");
    const std::size_t k = to_size(b->substr(7), "multiplicity");
    require(k >= 1, Errc::invalid_argument, "blow-up multiplicity must be positive");
    std::vector<ArrowId> p;
    for (ArrowId x : cod->units())
      for (std::size_t i = 0; i < k; ++i) p.push_back(x);
    return blow_up(cod, p).projection;
  }
  require(!domain.empty(), Errc::invalid_argument, "--hom FILE needs --domain");
  const GroupoidPtr dom = load_groupoid(domain, "domain");
  return io::hom_from_json(load_json(spec, "hom"), dom, cod);
}

int cmd_permanence(const std::string& which, const Inputs& in, Common& c, const PermanenceArgs& a) {
  Output out{c, "check-permanence " + which, {}};
  const auto ts = parse_ts(a.ts);
  g_digest.add("t", a.ts);
  g_digest.add("C", io::fmt(a.C));
  require(!in.groupoid.empty(), Errc::invalid_argument, "--groupoid is required");
  std::vector<PermanenceReport> reps;
  const GroupoidPtr G = load_groupoid(in.groupoid);
  const LengthFunction lg = load_length(in.length, *G);
  const TableCocycle sigma_v = load_table_cocycle(in.cocycle, G);
  std::visit(
      [&](const auto& sigma) {
        if (which == "subgroupoid") {
          std::vector<ArrowId> U;
          for (const auto& s : split(a.units, ',')) U.push_back(to_size(s, "unit"));
          g_digest.add("units", a.units);
          const GFunction f = load_function(in.function, *G);
          reps.push_back(check_subgroupoid(*G, sigma, U, f, lg, ts, norm_options(c), a.tol));
        } else if (which == "product") {
          require(!a.factor.empty(), Errc::invalid_argument, "--factor is required");
          const GroupoidPtr H = load_groupoid(a.factor, "factor");
          const Groupoid P = product_groupoid(*G, *H);
          const GFunction f = load_function(in.function, P);
          for (double t : ts)
            reps.push_back(check_product({G, H, a.C, t}, sigma, lg, f, a.samples, c.seed, norm_options(c), a.tol));
        } else {
          // --groupoid is the codomain G carrying sigma, l and f; the
          // homomorphism comes from --hom with --domain, or from
          // builtin:blowup:K (each unit of G repeated K times).
          const GroupoidHom phi = load_hom(a.hom, a.domain, G);
          const GFunction f = load_function(in.function, *G);
          if (which == "pullback") {
            const Groupoid& H = *phi.dom;
            require(a.unit < H.unit_count(), Errc::not_a_unit, "unit index out of range", {a.unit});
            const ArrowId y = H.unit(a.unit);
            const GFunction xi_f = random_function(G->source_fiber(phi(y)).size(), c.seed);
            Eigen::VectorXcd xi(static_cast<Eigen::Index>(xi_f.size()));
            for (std::size_t i = 0; i < xi_f.size(); ++i) xi(i) = xi_f[i];
            reps.push_back(check_lemma(phi, sigma, lg, f, y, xi, ts, a.tol));
          } else {
            require(which == "transfer", Errc::invalid_argument, "unknown check '" + which + "'");
            for (double t : ts) reps.push_back(check_rd_transfer(phi, sigma, lg, f, a.C, t, norm_options(c), a.tol));
          }
        }
      },
      sigma_v);
  io::Csv csv = io::permanence_csv(reps);
  bool pass = true;
  for (const auto& r : reps) pass = pass && r.pass();
  out.manifest.set("pass", pass ? "true" : "false");
  out.emit(csv);
  return pass ? 0 : 2;
}

int cmd_metric_rd(Common& c, const std::string& space, const std::string& ts_s, const std::string& family,
                  std::size_t trials, const std::string& radii, const std::string& growth_out) {
  Output out{c, "metric-rd", {}};
  require(!space.empty(), Errc::invalid_argument, "--space is required");
  const auto ts = parse_ts(ts_s);
  ScanOptions o;
  o.family = parse_family(family);
  o.trials = trials;
  o.seed = c.seed;
  o.norm = norm_options(c);
  g_digest.add("t", ts_s);
  g_digest.add("family", std::string(family_name(o.family)));
  g_digest.add("trials", std::to_string(trials));
  const Space X = load_space(space);
  io::Csv csv = io::rd_csv_header();
  std::visit(
      [&](const auto& metric) {
        if constexpr (std::is_same_v<std::decay_t<decltype(metric)>, HeapTreeMetric>) {
          // Kernels are dense n x n matrices; the implicit tree is only for groupoid runs.
          require(metric.size() <= 4096, Errc::invalid_argument, "metric-rd needs at most 4096 points");
        }
        for (const auto& res : mrd_scan(metric, ts, o)) {
          for (const auto& r : res.rows)
            csv.row({std::string(family_name(res.family)), io::fmt(res.t), r.param, io::fmt(r.ratio),
                     io::fmt(r.ratio), "0"});
          out.manifest.set("max_ratio[t=" + io::fmt(res.t) + "]", io::fmt(res.max_ratio));
        }
        std::vector<double> rs;
        if (radii.empty()) {
          double diam = 0;
          for (std::size_t y = 0; y < metric.size(); ++y) diam = std::max(diam, metric.distance(0, y));
          for (double r = 1; r <= diam; ++r) rs.push_back(r);
          if (rs.empty()) rs = {1.0};
        } else {
          rs = parse_doubles(radii, "radius");
        }
        g_digest.add("radii", radii);
        const SpaceGrowth gr = space_growth(metric, rs);
        out.manifest.set("growth_exponent", io::fmt(gr.exponent));
        if (!growth_out.empty()) {
          io::Csv gcsv({"unit", "r", "count"});
          for (const auto& r : gr.rows) gcsv.row({std::to_string(r.unit), io::fmt(r.r), std::to_string(r.count)});
          io::write_text(growth_out, gcsv.str());
        }
      },
      X);
  out.emit(csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rdg: rapid decay diagnostics for finite twisted groupoids"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rdg::io::kVersion));

  Inputs in;
  Common common;
  std::string hom, codomain, radii = "1,2,3,4", ts = "1", mode = "symmetric", family = "balls";
  std::string model = "paths", sizes = "8,16,32", space, growth_out;
  std::size_t trials = 16, unit = 0;
  double radius = 1.0, witness_tol = kWitnessTolerance;
  bool all_units = false;
  PermanenceArgs perm;

  auto* validate_cmd = app.add_subcommand("validate", "validate a groupoid with its length and cocycle, or a homomorphism");
  add_inputs(validate_cmd, in, true, true, false);
  validate_cmd->add_option("--hom", hom, "homomorphism file (domain is --groupoid)");
  validate_cmd->add_option("--codomain", codomain, "codomain groupoid for --hom");

  auto* info_cmd = app.add_subcommand("info", "size, orbit and principality summary");
  add_inputs(info_cmd, in, false, false, false);
  add_common(info_cmd, common);

  auto* growth_cmd = app.add_subcommand("growth", "ball counts per unit and radius");
  add_inputs(growth_cmd, in, true, false, false);
  add_common(growth_cmd, common);
  growth_cmd->add_option("--radii", radii, "comma-separated radii")->default_val(radii);

  auto* norm_cmd = app.add_subcommand("norm", "reduced norm by fiber");
  add_inputs(norm_cmd, in, false, true, true);
  add_common(norm_cmd, common);
  norm_cmd->add_flag("--all-units", all_units, "evaluate every fiber, not one per orbit");

  auto* semi_cmd = app.add_subcommand("seminorm", "weighted seminorms");
  add_inputs(semi_cmd, in, true, false, true);
  add_common(semi_cmd, common);
  semi_cmd->add_option("--t", ts, "comma-separated exponents")->default_val(ts);
  semi_cmd->add_option("--mode", mode, "symmetric, sup or unit:ID")->default_val(mode);

  auto* scan_cmd = app.add_subcommand("rd-scan", "max norm/seminorm ratio over a test family");
  add_inputs(scan_cmd, in, true, true, false);
  add_common(scan_cmd, common);
  scan_cmd->add_option("--t", ts, "comma-separated exponents")->default_val(ts);
  scan_cmd->add_option("--family", family, "balls, random or witness")->default_val(family);
  scan_cmd->add_option("--trials", trials, "sampled members")->default_val(trials);

  auto* witness_cmd = app.add_subcommand("witness", "construct and verify a witness function");
  add_inputs(witness_cmd, in, true, true, false);
  add_common(witness_cmd, common);
  witness_cmd->add_option("--unit", unit, "index of the center unit")->default_val(unit);
  witness_cmd->add_option("--radius", radius, "ball radius")->default_val(radius);
  witness_cmd->add_option("--t", ts, "comma-separated exponents")->default_val(ts);
  witness_cmd->add_option("--tol", witness_tol, "slack on both certified bounds")->default_val(witness_tol);

  auto* dich_cmd = app.add_subcommand("dichotomy", "growth versus rapid decay across a model family");
  add_common(dich_cmd, common);
  dich_cmd->add_option("--family", model, "paths, trees or cyclic")->default_val(model);
  dich_cmd->add_option("--sizes", sizes, "points, depths or orders")->default_val(sizes);
  dich_cmd->add_option("--t", ts, "comma-separated exponents")->default_val(ts);
  dich_cmd->add_option("--scan-family", family, "balls, random or witness")->default_val(family);
  dich_cmd->add_option("--trials", trials, "sampled members per size")->default_val(trials);

  auto* perm_cmd = app.add_subcommand("check-permanence", "subgroupoid, product, pullback and transfer checks");
  perm_cmd->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> perm_subs;
  for (const char* name : {"subgroupoid", "product", "pullback", "transfer"}) {
    auto* sub = perm_cmd->add_subcommand(name);
    add_inputs(sub, in, true, true, true);
    add_common(sub, common);
    sub->add_option("--t", perm.ts, "comma-separated exponents")->default_val(perm.ts);
    sub->add_option("--identity-tol", perm.tol.identity, "relative tolerance for identities")
        ->default_val(perm.tol.identity);
    sub->add_option("--norm-tol", perm.tol.norm, "relative tolerance for norm inequalities")
        ->default_val(perm.tol.norm);
    perm_subs.emplace_back(name, sub);
  }
  perm_subs[0].second->add_option("--units", perm.units, "comma-separated unit ids")->required();
  perm_subs[1].second->add_option("--factor", perm.factor, "finite factor H")->required();
  perm_subs[1].second->add_option("--C", perm.C, "RD constant for G")->default_val(perm.C);
  perm_subs[1].second->add_option("--samples", perm.samples, "sampled vectors")->default_val(perm.samples);
  for (int k : {2, 3}) {
    perm_subs[k].second->add_option("--hom", perm.hom, "homomorphism file or builtin:blowup:K")->required();
    perm_subs[k].second->add_option("--domain", perm.domain, "domain groupoid for a --hom file");
  }
  perm_subs[2].second->add_option("--unit", perm.unit, "index of the domain unit")->default_val(perm.unit);
  perm_subs[3].second->add_option("--C", perm.C, "RD constant valid on the domain")->default_val(perm.C);

  auto* metric_cmd = app.add_subcommand("metric-rd", "Roe versus BS norms and growth on a metric space");
  add_common(metric_cmd, common);
  metric_cmd->add_option("--space", space, "space file or builtin:path:N|grid:WxH|tree:D")->required();
  metric_cmd->add_option("--t", ts, "comma-separated exponents")->default_val(ts);
  metric_cmd->add_option("--family", family, "balls or random")->default_val(family);
  metric_cmd->add_option("--trials", trials, "sampled members")->default_val(trials);
  metric_cmd->add_option("--radii", radii, "growth radii (default 1..eccentricity of point 0)");
  metric_cmd->add_option("--growth-out", growth_out, "growth CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*validate_cmd) return cmd_validate(in, hom, codomain);
    if (*info_cmd) return cmd_info(in, common);
    if (*growth_cmd) return cmd_growth(in, common, radii);
    if (*norm_cmd) return cmd_norm(in, common, all_units);
    if (*semi_cmd) return cmd_seminorm(in, common, ts, mode);
    if (*scan_cmd) return cmd_rd_scan(in, common, ts, family, trials);
    if (*witness_cmd) return cmd_witness(in, common, unit, radius, ts, witness_tol);
    if (*dich_cmd) return cmd_dichotomy(common, model, sizes, ts, family, trials);
    if (*metric_cmd) {
      radii = metric_cmd->count("--radii") ? radii : "";
      return cmd_metric_rd(common, space, ts, family, trials, radii, growth_out);
    }
    for (const auto& [name, sub] : perm_subs)
      if (*sub) return cmd_permanence(name, in, common, perm);
  } catch (const rdg::Error& e) {
    std::cerr << "error: " << e.what();
    if (!e.witness().empty() && e.violations().empty()) {
      std::cerr << " (witness";
      for (std::size_t id : e.witness()) std::cerr << ' ' << id;
      std::cerr << ')';
    }
    std::cerr << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
