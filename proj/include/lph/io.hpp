#pragma once

// File formats: JSON headers (nlohmann/json) and raw little-endian float64
// sidecars for bulk values. Paths inside a header are relative to it.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lph/checks.hpp"

namespace lph {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace detail {

inline json real_to_json(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double real_from_json(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    fail(ErrorKind::parse_error, "bad real '" + s + "'");
  }
  require(j.is_number(), ErrorKind::parse_error, "expected a number");
  return j.get<double>();
}

inline std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

}  // namespace detail

inline void write_f64le(const fs::path& path, const std::vector<double>& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::io_error, "cannot write " + path.string());
  for (double x : data) {
    std::uint64_t u = detail::to_le(std::bit_cast<std::uint64_t>(x));
    char buf[8];
    std::memcpy(buf, &u, 8);
    out.write(buf, 8);
  }
  require(static_cast<bool>(out), ErrorKind::io_error, "write failed for " + path.string());
}

inline std::vector<double> read_f64le(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::io_error, "cannot read " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  require(bytes.size() % 8 == 0, ErrorKind::parse_error, path.string() + ": size is not a multiple of 8");
  std::vector<double> out(bytes.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t u;
    std::memcpy(&u, bytes.data() + 8 * i, 8);
    out[i] = std::bit_cast<double>(detail::to_le(u));
  }
  return out;
}

inline json read_json(const fs::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::io_error, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::parse_error, path.string() + ": " + e.what());
  }
}

inline void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::io_error, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  require(static_cast<bool>(out), ErrorKind::io_error, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Spaces, domains, points

/// Short command-line name of a space (inverse of parse_space_name for
/// uniform histogram grids).
inline std::string space_name(const SpaceDescriptor& d) {
  if (d.tag == "euclidean") return "r" + std::to_string(d.dim);
  if (d.tag == "spd") return "spd" + std::to_string(d.dim);
  if (d.tag == "simplex") return "simplex" + std::to_string(d.dim);
  if (d.tag == "hist_w1") return "hist" + std::to_string(d.dim);
  return d.tag;
}

inline json space_to_json(const SpaceDescriptor& d) {
  json j{{"tag", d.tag}, {"dim", d.dim}};
  if (!d.grid.empty()) j["grid"] = d.grid;
  return j;
}

/// Accepts a descriptor object or a short name.
inline SpaceDescriptor space_from_json(const json& j) {
  try {
    if (j.is_string()) return parse_space_name(j.get<std::string>());
    SpaceDescriptor d{j.at("tag").get<std::string>(), j.at("dim").get<std::size_t>(), {}};
    if (j.contains("grid")) d.grid = j.at("grid").get<std::vector<double>>();
    return d;
  } catch (const json::exception& e) {
    fail(ErrorKind::parse_error, std::string("space descriptor: ") + e.what());
  }
}

inline json domain_to_json(const Domain& d) {
  json w = json::array();
  for (double x : d.weights()) w.push_back(detail::real_to_json(x));
  json geo = nullptr;
  if (d.geometry()) geo = json{{"dim", d.geometry()->dim}, {"cell_size", d.geometry()->cell_size}};
  return json{{"atoms", d.atom_count()}, {"weights", std::move(w)}, {"geometry", std::move(geo)}};
}

inline Domain domain_from_json(const json& j) {
  try {
    const auto n = j.at("atoms").get<std::size_t>();
    std::vector<double> w;
    for (const auto& x : j.at("weights")) w.push_back(detail::real_from_json(x));
    require(w.size() == n, ErrorKind::dimension_mismatch, "domain: weights length != atoms");
    std::optional<GridGeometry> geo;
    if (j.contains("geometry") && !j.at("geometry").is_null())
      geo = GridGeometry{j.at("geometry").at("dim").get<std::size_t>(), j.at("geometry").at("cell_size").get<double>()};
    return Domain(std::move(w), geo);
  } catch (const json::exception& e) {
    fail(ErrorKind::parse_error, std::string("domain: ") + e.what());
  }
}

inline json point_to_json(const MetricSpace& s, const Point& p) {
  return json{{"space", space_to_json(s.descriptor())}, {"payload", p.payload}};
}

inline std::pair<SpaceHandle, Point> point_from_json(const json& j) {
  try {
    auto s = make_space(space_from_json(j.at("space")));
    Point p(j.at("payload").get<std::vector<double>>());
    s->validate(p);
    return {std::move(s), std::move(p)};
  } catch (const json::exception& e) {
    fail(ErrorKind::parse_error, std::string("point: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Maps

inline json values_to_json(const std::vector<Point>& v) {
  json a = json::array();
  for (const auto& p : v) a.push_back(p.payload);
  return a;
}

inline std::vector<Point> values_from_json(const json& a) {
  std::vector<Point> out;
  for (const auto& p : a) out.emplace_back(p.get<std::vector<double>>());
  return out;
}

inline std::vector<double> flatten(const std::vector<Point>& v) {
  std::vector<double> out;
  for (const auto& p : v) out.insert(out.end(), p.payload.begin(), p.payload.end());
  return out;
}

inline std::vector<Point> unflatten(const std::vector<double>& raw, std::size_t count, std::size_t width) {
  require(raw.size() == count * width, ErrorKind::dimension_mismatch,
          "sidecar holds " + std::to_string(raw.size()) + " reals, expected " + std::to_string(count * width));
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.emplace_back(std::vector<double>(raw.begin() + static_cast<std::ptrdiff_t>(i * width),
                                         raw.begin() + static_cast<std::ptrdiff_t>((i + 1) * width)));
  return out;
}

/// Writes a map file. With `sidecar`, values go to <stem>.f64 next to it; a
/// non-empty `domain_ref` names a domain file instead of inlining the domain.
inline void save_map(const fs::path& path, const MeasurableMap& f, bool sidecar = false,
                     const std::string& domain_ref = {}) {
  json j{{"domain", domain_ref.empty() ? domain_to_json(*f.domain) : json(domain_ref)},
         {"space", space_to_json(f.space->descriptor())}};
  if (sidecar) {
    const auto side = path.stem().string() + ".f64";
    write_f64le(path.parent_path() / side, flatten(f.values));
    j["values"] = json{{"sidecar", side}, {"payload_size", f.space->dimension()}};
  } else {
    j["values"] = values_to_json(f.values);
  }
  write_json(path, j);
}

inline MeasurableMap map_from_json(const json& j, const fs::path& base_dir) {
  try {
    const json& dj = j.at("domain");
    auto d = std::make_shared<const Domain>(dj.is_string() ? domain_from_json(read_json(base_dir / dj.get<std::string>()))
                                                           : domain_from_json(dj));
    auto s = make_space(space_from_json(j.at("space")));
    const json& vj = j.at("values");
    std::vector<Point> v;
    if (vj.is_object()) {
      const auto width = vj.at("payload_size").get<std::size_t>();
      v = unflatten(read_f64le(base_dir / vj.at("sidecar").get<std::string>()), d->atom_count(), width);
    } else {
      v = values_from_json(vj);
    }
    return MeasurableMap(std::move(d), std::move(s), std::move(v));
  } catch (const json::exception& e) {
    fail(ErrorKind::parse_error, std::string("map: ") + e.what());
  }
}

inline MeasurableMap load_map(const fs::path& path) { return map_from_json(read_json(path), path.parent_path()); }

inline json simple_map_to_json(const SimpleMap& g) {
  json j{{"domain", domain_to_json(*g.domain)},
         {"space", space_to_json(g.space->descriptor())},
         {"labels", g.labels},
         {"values", values_to_json(g.values)},
         {"base_flag", g.base_flag ? json(*g.base_flag) : json(nullptr)}};
  if (g.base) j["base"] = values_to_json(g.base->values);
  return j;
}

inline SimpleMap simple_map_from_json(const json& j) {
  try {
    auto d = std::make_shared<const Domain>(domain_from_json(j.at("domain")));
    auto s = make_space(space_from_json(j.at("space")));
    SimpleMap g{d, s, j.at("labels").get<std::vector<std::int64_t>>(), values_from_json(j.at("values")),
                std::nullopt, nullptr};
    if (j.contains("base_flag") && !j.at("base_flag").is_null()) g.base_flag = j.at("base_flag").get<std::int64_t>();
    if (j.contains("base") && !j.at("base").is_null())
      g.base = std::make_shared<const MeasurableMap>(d, s, values_from_json(j.at("base")));
    g.validate();
    return g;
  } catch (const json::exception& e) {
    fail(ErrorKind::parse_error, std::string("simple map: ") + e.what());
  }
}

inline void save_simple_map(const fs::path& path, const SimpleMap& g) { write_json(path, simple_map_to_json(g)); }
inline SimpleMap load_simple_map(const fs::path& path) { return simple_map_from_json(read_json(path)); }

// ---------------------------------------------------------------------------
// Reports, fields, ledgers

inline json metrics_to_json(const std::map<std::string, double>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = detail::real_to_json(v);
  return j;
}

inline json report_to_json(const ApproxReport& r) {
  json steps = json::array();
  for (double x : r.step_breakdown) steps.push_back(detail::real_to_json(x));
  return json{{"target_eps", r.target_eps},
              {"achieved_error", detail::real_to_json(r.achieved_error)},
              {"p", r.p.str()},
              {"range_size", r.range_size},
              {"altered_measure", detail::real_to_json(r.altered_measure)},
              {"step_breakdown", std::move(steps)},
              {"success", r.success},
              {"stats", metrics_to_json(r.stats)}};
}

/// Header <path> plus <stem>.values.f64 (evaluation cache, atom-major) and
/// <stem>.transitions.f64 (one real field per piece, piece-major).
inline void export_field(const fs::path& path, const ContinuousField& f) {
  const auto stem = path.stem().string();
  const auto values_file = stem + ".values.f64", trans_file = stem + ".transitions.f64";
  write_f64le(path.parent_path() / values_file, flatten(f.values));
  std::vector<double> trans;
  json pieces = json::array();
  for (const auto& pc : f.pieces) {
    trans.insert(trans.end(), pc.transition.begin(), pc.transition.end());
    pieces.push_back(json{{"endpoint", pc.endpoint.payload},
                          {"width", detail::real_to_json(pc.width)},
                          {"length", pc.length},
                          {"region_atoms", pc.region.size()},
                          {"core_atoms", pc.core.size()},
                          {"inner_over_budget", pc.inner_over_budget},
                          {"outer_over_budget", pc.outer_over_budget}});
  }
  write_f64le(path.parent_path() / trans_file, trans);
  write_json(path, json{{"domain", domain_to_json(*f.domain)},
                        {"space", space_to_json(f.space->descriptor())},
                        {"anchor", f.anchor.payload},
                        {"order", f.order},
                        {"pieces", std::move(pieces)},
                        {"values", {{"sidecar", values_file}, {"payload_size", f.space->dimension()}}},
                        {"transitions", {{"sidecar", trans_file}, {"fields", f.pieces.size()}}}});
}

inline json ledger_to_json(const std::vector<CheckResult>& ledger) {
  json a = json::array();
  for (const auto& r : ledger) {
    json e{{"check_id", r.check_id},
           {"paper_ref", r.paper_ref},
           {"status", r.passed ? "pass" : "fail"},
           {"metrics", metrics_to_json(r.metrics)}};
    if (!r.detail.empty()) e["detail"] = r.detail;
    a.push_back(std::move(e));
  }
  return a;
}

inline SuiteSizes sizes_from_json(const json& j, SuiteSizes z = {}) {
  auto get = [&](const char* k, std::size_t& v) {
    if (j.contains(k)) v = j.at(k).get<std::size_t>();
  };
  try {
    get("metric_triples", z.metric_triples);
    get("geodesic_pairs", z.geodesic_pairs);
    get("measure_cases", z.measure_cases);
    get("dp_triples", z.dp_triples);
    get("dp_atoms", z.dp_atoms);
    get("embed_pairs", z.embed_pairs);
    get("holder_cases", z.holder_cases);
    get("lp_cases", z.lp_cases);
    get("almost_simple_side", z.almost_simple_side);
    get("sup_side", z.sup_side);
    get("relax_side_1d", z.relax_side_1d);
    get("relax_side_2d", z.relax_side_2d);
    get("rf_sequences", z.rf_sequences);
    get("rf_atoms", z.rf_atoms);
    get("separability_fixtures", z.separability_fixtures);
  } catch (const json::exception& e) {
    fail(ErrorKind::parse_error, std::string("suite sizes: ") + e.what());
  }
  return z;
}

inline json sizes_to_json(const SuiteSizes& z) {
  return json{{"metric_triples", z.metric_triples}, {"geodesic_pairs", z.geodesic_pairs},
              {"measure_cases", z.measure_cases},   {"dp_triples", z.dp_triples},
              {"dp_atoms", z.dp_atoms},             {"embed_pairs", z.embed_pairs},
              {"holder_cases", z.holder_cases},     {"lp_cases", z.lp_cases},
              {"almost_simple_side", z.almost_simple_side}, {"sup_side", z.sup_side},
              {"relax_side_1d", z.relax_side_1d},   {"relax_side_2d", z.relax_side_2d},
              {"rf_sequences", z.rf_sequences},     {"rf_atoms", z.rf_atoms},
              {"separability_fixtures", z.separability_fixtures}};
}

}  // namespace lph
