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

#pragma once

// File formats: strict JSON loaders for groupoids, homomorphisms, lengths,
// cocycles, functions and metric spaces; CSV report writers; and the
// key=value manifest written next to every report.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rdg/cocycle.hpp"
#include "rdg/function.hpp"
#include "rdg/groupoid.hpp"
#include "rdg/homomorphism.hpp"
#include "rdg/length.hpp"
#include "rdg/metric_space.hpp"
#include "rdg/norms.hpp"
#include "rdg/permanence.hpp"

namespace rdg::io {

using json = nlohmann::json;

inline constexpr std::string_view kVersion = "0.3.0";

// ---------------------------------------------------------------------------
// Digests and formatting

/// 64-bit FNV-1a. Not cryptographic; it only ties reports to inputs.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Shortest form that round-trips a double.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Reading

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), Errc::parse_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse(std::string_view text, const std::string& source = "input") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse_error, source + ": " + e.what());
  }
}

namespace detail {

inline void object_keys(const json& j, std::initializer_list<const char*> required,
                        std::initializer_list<const char*> optional, const char* what) {
  require(j.is_object(), Errc::schema_error, std::string(what) + " must be a JSON object");
  std::set<std::string> known;
  for (const char* k : required) {
    known.insert(k);
    require(j.contains(k), Errc::schema_error, std::string(what) + " is missing key '" + k + "'");
  }
  for (const char* k : optional) known.insert(k);
  for (const auto& item : j.items())
    require(known.count(item.key()) > 0, Errc::schema_error,
            std::string(what) + " has unknown key '" + item.key() + "'");
}

inline const json& array_at(const json& j, const char* key, const char* what) {
  const json& a = j.at(key);
  require(a.is_array(), Errc::schema_error, std::string(what) + "." + key + " must be an array");
  return a;
}

inline std::size_t id(const json& v, const char* what) {
  require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0),
          Errc::schema_error, std::string(what) + " must be a nonnegative integer id");
  return v.get<std::size_t>();
}

inline double number(const json& v, const char* what) {
  require(v.is_number(), Errc::schema_error, std::string(what) + " must be a number");
  return v.get<double>();
}

inline const json& tuple(const json& v, std::size_t n, const char* what) {
  require(v.is_array() && v.size() == n, Errc::schema_error,
          std::string(what) + " entries must be arrays of length " + std::to_string(n));
  return v;
}

/// Runs `body`, turning dangling-id errors into schema errors.
template <class Body>
auto as_schema(Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    if (e.code() == Errc::dangling_id) throw Error(Errc::schema_error, e.what(), e.witness());
    throw;
  }
}

}  // namespace detail

/// {"units":[ids], "arrows":[{"id","src","rng","inv"}], "product":[[a,b,ab]]}
inline Groupoid groupoid_from_json(const json& j) {
  detail::object_keys(j, {"units", "arrows", "product"}, {}, "groupoid");
  GroupoidTables t;
  for (const json& u : detail::array_at(j, "units", "groupoid")) t.units.push_back(detail::id(u, "unit"));
  for (const json& a : detail::array_at(j, "arrows", "groupoid")) {
    detail::object_keys(a, {"id", "src", "rng", "inv"}, {}, "arrow");
    t.arrows.push_back({detail::id(a["id"], "id"), detail::id(a["src"], "src"), detail::id(a["rng"], "rng"),
                        detail::id(a["inv"], "inv")});
  }
  for (const json& p : detail::array_at(j, "product", "groupoid")) {
    detail::tuple(p, 3, "product");
    t.product.push_back({detail::id(p[0], "product"), detail::id(p[1], "product"), detail::id(p[2], "product")});
  }
  return detail::as_schema([&] { return Groupoid::from_tables(t); });
}

inline json to_json(const Groupoid& g) {
  json j;
  j["units"] = json::array();
  for (ArrowId u : g.units()) j["units"].push_back(u);
  j["arrows"] = json::array();
  for (ArrowId a = 0; a < g.arrow_count(); ++a)
    j["arrows"].push_back({{"id", a}, {"src", g.src(a)}, {"rng", g.rng(a)}, {"inv", g.inv(a)}});
  j["product"] = json::array();
  for (ArrowId a = 0; a < g.arrow_count(); ++a)
    for (ArrowId b : g.range_fiber(g.src(a))) j["product"].push_back({a, b, g.product(a, b)});
  return j;
}

/// {"map":[[h,g]]}, total on the domain arrows; validated as a functor.
inline GroupoidHom hom_from_json(const json& j, const GroupoidPtr& dom, const GroupoidPtr& cod) {
  detail::object_keys(j, {"map"}, {}, "homomorphism");
  std::vector<ArrowId> m(dom->arrow_count(), npos);
  for (const json& e : detail::array_at(j, "map", "homomorphism")) {
    detail::tuple(e, 2, "map");
    const std::size_t h = detail::id(e[0], "map"), g = detail::id(e[1], "map");
    require(h < m.size(), Errc::schema_error, "map references missing domain arrow", {h});
    require(g < cod->arrow_count(), Errc::schema_error, "map references missing codomain arrow", {g});
    require(m[h] == npos, Errc::schema_error, "map lists an arrow twice", {h});
    m[h] = g;
  }
  for (ArrowId h = 0; h < m.size(); ++h) require(m[h] != npos, Errc::schema_error, "map is not total", {h});
  GroupoidHom phi{dom, cod, std::move(m)};
  Violations v = validate(phi);
  if (!v.empty()) throw Error(Errc::validation_error, "not a homomorphism", std::move(v));
  return phi;
}

inline json to_json(const GroupoidHom& phi) {
  json j;
  j["map"] = json::array();
  for (ArrowId h = 0; h < phi.map.size(); ++h) j["map"].push_back({h, phi.map[h]});
  return j;
}

/// {"values":[[id, value]]} listing every arrow once; validated as a length.
inline LengthFunction length_from_json(const json& j, const Groupoid& g) {
  detail::object_keys(j, {"values"}, {}, "length");
  LengthFunction l;
  l.values.assign(g.arrow_count(), std::nan(""));
  std::vector<char> seen(g.arrow_count(), 0);
  for (const json& e : detail::array_at(j, "values", "length")) {
    detail::tuple(e, 2, "values");
    const std::size_t a = detail::id(e[0], "values");
    require(a < g.arrow_count(), Errc::schema_error, "length references missing arrow", {a});
    require(!seen[a], Errc::schema_error, "length lists an arrow twice", {a});
    seen[a] = 1;
    l.values[a] = detail::number(e[1], "length value");
  }
  for (ArrowId a = 0; a < g.arrow_count(); ++a)
    require(seen[a], Errc::schema_error, "length is missing arrow " + std::to_string(a), {a});
  Violations v = validate_length(g, l);
  if (!v.empty()) throw Error(Errc::validation_error, "not a length function", std::move(v));
  return l;
}

inline json to_json(const LengthFunction& l) {
  json j;
  j["values"] = json::array();
  for (ArrowId a = 0; a < l.values.size(); ++a) j["values"].push_back({a, l.values[a]});
  return j;
}

/// Unit-modulus deviations up to this size are renormalized on load.
inline constexpr double kModulusRenormalize = 1e-6;

/// {"default": re or [re, im], "entries":[[a, b, re, im]]}. Unlisted
/// composable pairs take the default (1 if absent).
inline Cocycle cocycle_from_json(const json& j, const GroupoidPtr& g) {
  detail::object_keys(j, {}, {"default", "entries"}, "cocycle");
  Complex dflt = 1.0;
  if (j.contains("default")) {
    const json& d = j["default"];
    if (d.is_array()) {
      detail::tuple(d, 2, "default");
      dflt = {detail::number(d[0], "default"), detail::number(d[1], "default")};
    } else {
      dflt = detail::number(d, "default");
    }
  }
  std::vector<Complex> v(g->composable_pair_count(), dflt);
  std::vector<char> seen(v.size(), 0);
  if (j.contains("entries")) {
    for (const json& e : detail::array_at(j, "entries", "cocycle")) {
      detail::tuple(e, 4, "entries");
      const std::size_t a = detail::id(e[0], "entries"), b = detail::id(e[1], "entries");
      require(a < g->arrow_count() && b < g->arrow_count(), Errc::schema_error,
              "cocycle references missing arrow", {a, b});
      require(composable(*g, a, b), Errc::schema_error, "cocycle entry on a non-composable pair", {a, b});
      const std::size_t k = g->pair_index(a, b);
      require(!seen[k], Errc::schema_error, "cocycle lists a pair twice", {a, b});
      seen[k] = 1;
      v[k] = {detail::number(e[2], "entries"), detail::number(e[3], "entries")};
    }
  }
  Violations bad;
  for (ArrowId a = 0; a < g->arrow_count(); ++a)
    for (ArrowId b : g->range_fiber(g->src(a))) {
      Complex& c = v[g->pair_index(a, b)];
      const double m = std::abs(c);
      if (!std::isfinite(m) || std::abs(m - 1.0) > kModulusRenormalize)
        bad.push_back({"MODULUS", {a, b}, fmt(m)});
      else
        c /= m;
    }
  if (!bad.empty()) throw Error(Errc::validation_error, "cocycle values must have modulus 1", std::move(bad));
  Cocycle sigma(g, std::move(v));
  Violations vs = validate_cocycle(*g, sigma);
  if (!vs.empty()) throw Error(Errc::validation_error, "not a normalized 2-cocycle", std::move(vs));
  return sigma;
}

/// Writes every pair that differs from 1.
inline json to_json(const Cocycle& sigma) {
  const Groupoid& g = sigma.groupoid();
  json j;
  j["default"] = 1;
  j["entries"] = json::array();
  for (ArrowId a = 0; a < g.arrow_count(); ++a)
    for (ArrowId b : g.range_fiber(g.src(a))) {
      const Complex c = sigma(a, b);
      if (c != Complex(1.0, 0.0)) j["entries"].push_back({a, b, c.real(), c.imag()});
    }
  return j;
}

/// {"coeffs":[[id, re, im]]}; omitted arrows are 0.
inline GFunction function_from_json(const json& j, std::size_t arrows) {
  detail::object_keys(j, {"coeffs"}, {}, "function");
  GFunction f(arrows);
  std::vector<char> seen(arrows, 0);
  for (const json& e : detail::array_at(j, "coeffs", "function")) {
    detail::tuple(e, 3, "coeffs");
    const std::size_t a = detail::id(e[0], "coeffs");
    require(a < arrows, Errc::schema_error, "function references missing arrow", {a});
    require(!seen[a], Errc::schema_error, "function lists an arrow twice", {a});
    seen[a] = 1;
    f[a] = {detail::number(e[1], "coeffs"), detail::number(e[2], "coeffs")};
    require(std::isfinite(f[a].real()) && std::isfinite(f[a].imag()), Errc::validation_error,
            "function coefficients must be finite", {a});
  }
  return f;
}

inline json to_json(const GFunction& f) {
  json j;
  j["coeffs"] = json::array();
  for (ArrowId a = 0; a < f.size(); ++a)
    if (f[a] != Complex{}) j["coeffs"].push_back({a, f[a].real(), f[a].imag()});
  return j;
}

/// {"points":[ids], "edges":[[a, b, w]]} with positive integer weights, or
/// {"dist":[[...]]} with optional "points" labels.
inline FiniteMetricSpace space_from_json(const json& j) {
  require(j.is_object(), Errc::schema_error, "space must be a JSON object");
  std::vector<std::int64_t> labels;
  if (j.contains("points")) {
    require(j["points"].is_array(), Errc::schema_error, "space.points must be an array");
    for (const json& p : j["points"]) {
      require(p.is_number_integer(), Errc::schema_error, "point ids must be integers");
      labels.push_back(p.get<std::int64_t>());
    }
  }
  if (j.contains("dist")) {
    detail::object_keys(j, {"dist"}, {"points"}, "space");
    std::vector<std::vector<double>> d;
    for (const json& row : detail::array_at(j, "dist", "space")) {
      require(row.is_array(), Errc::schema_error, "space.dist rows must be arrays");
      d.emplace_back();
      for (const json& v : row) d.back().push_back(detail::number(v, "distance"));
    }
    return FiniteMetricSpace::from_matrix(std::move(d), std::move(labels));
  }
  detail::object_keys(j, {"points", "edges"}, {}, "space");
  std::map<std::int64_t, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    require(index.emplace(labels[i], i).second, Errc::schema_error, "point ids must be distinct", {i});
  }
  std::vector<FiniteMetricSpace::Edge> edges;
  for (const json& e : detail::array_at(j, "edges", "space")) {
    detail::tuple(e, 3, "edges");
    require(e[0].is_number_integer() && e[1].is_number_integer(), Errc::schema_error,
            "edge endpoints must be point ids");
    auto a = index.find(e[0].get<std::int64_t>()), b = index.find(e[1].get<std::int64_t>());
    require(a != index.end() && b != index.end(), Errc::schema_error, "edge references a missing point");
    const double w = detail::number(e[2], "edge weight");
    require(w > 0 && w == std::floor(w) && w < 9.0e15, Errc::validation_error,
            "edge weights must be positive integers", {a->second, b->second});
    edges.push_back({a->second, b->second, static_cast<std::uint64_t>(w)});
  }
  const std::size_t n = labels.size();
  return FiniteMetricSpace::from_edges(n, edges, std::move(labels));
}

inline json to_json(const FiniteMetricSpace& X) {
  json j;
  j["points"] = X.labels();
  j["dist"] = json::array();
  for (std::size_t i = 0; i < X.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < X.size(); ++k) row.push_back(X.distance(i, k));
    j["dist"].push_back(std::move(row));
  }
  return j;
}

// ---------------------------------------------------------------------------
// Reports

/// Minimal CSV: fields never contain commas or quotes in these reports, so
/// no quoting is needed; a field that does is rejected.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : width_(header.size()) { row(header); }

  Csv& row(const std::vector<std::string>& fields) {
    require(fields.size() == width_, Errc::invalid_argument, "csv row has the wrong width");
    for (std::size_t i = 0; i < fields.size(); ++i) {
      require(fields[i].find_first_of(",\"\n") == std::string::npos, Errc::invalid_argument,
              "csv field needs quoting: " + fields[i]);
      if (i) out_ += ',';
      out_ += fields[i];
    }
    out_ += '\n';
    return *this;
  }

  const std::string& str() const { return out_; }

 private:
  std::size_t width_;
  std::string out_;
};

inline Csv growth_csv(const GrowthProfile& p) {
  Csv c({"unit", "r", "count"});
  for (const auto& r : p.rows) c.row({std::to_string(r.unit), fmt(r.r), std::to_string(r.count)});
  return c;
}

inline Csv norm_csv(const NormReport& n) {
  Csv c({"unit", "dim", "spectral_norm", "residual"});
  for (const auto& f : n.fibers)
    c.row({std::to_string(f.unit), std::to_string(f.dim), fmt(f.norm.value), fmt(f.norm.residual)});
  return c;
}

inline Csv rd_csv_header() { return Csv({"kind", "t", "param", "ratio", "bound", "residual"}); }

inline Csv permanence_csv(const std::vector<PermanenceReport>& reps) {
  Csv c({"check", "lhs", "rhs", "pass", "tol"});
  for (const auto& rep : reps)
    for (const auto& r : rep.rows)
      c.row({rep.name + "." + r.check, fmt(r.lhs), fmt(r.rhs), r.pass ? "true" : "false", fmt(r.tol)});
  return c;
}

/// Flat key=value sidecar. Keys keep insertion order.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value) {
    for (auto& kv : entries_)
      if (kv.first == key) {
        kv.second = value;
        return;
      }
    entries_.emplace_back(key, value);
  }

  std::string str() const {
    std::string s;
    for (const auto& [k, v] : entries_) s += k + "=" + v + "\n";
    return s;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), Errc::invalid_argument, "cannot write " + path);
  out << text;
  require(static_cast<bool>(out), Errc::invalid_argument, "write failed for " + path);
}

}  // namespace rdg::io
