// lph: dataset generation, distances, quantization, relaxation and the
// verification suite.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 verification failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lph/lph.hpp"

namespace {

using lph::json;
namespace fs = std::filesystem;

constexpr int kUsage = 1, kData = 2, kVerify = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string space = "r2";
  std::string grid = "32x32";
  std::string kind = "smooth";
  std::string p = "2";
  double eps = 0.1;
  std::uint64_t seed = 1;
  std::string out;
  std::string config;
  std::string value;
  std::string z0;
  std::string in, in2, base;
  std::string suite = "all";
  std::string mode;
  std::string name;
  int order = 0;
  std::size_t n = 8, dim = 16, refinement = 6, regions = 2;
  bool all_p = false, sidecar = false, mutate = false;
};

// Flags given on the command line win over the config file.
void apply_config(CLI::App* cmd, Options& o) {
  if (o.config.empty()) return;
  const json j = lph::read_json(o.config);
  lph::require(j.is_object(), lph::ErrorKind::parse_error, "config file must hold a JSON object");
  auto set = [&](const char* key, auto& var) {
    if (!j.contains(key)) return;
    auto* opt = cmd->get_option_no_throw(std::string("--") + key);
    if (opt && opt->count() > 0) return;
    try {
      if constexpr (std::is_same_v<std::decay_t<decltype(var)>, std::string>) {
        var = j.at(key).is_string() ? j.at(key).get<std::string>() : j.at(key).dump();
      } else {
        var = j.at(key).get<std::decay_t<decltype(var)>>();
      }
    } catch (const json::exception& e) {
      throw UsageError(std::string("config key '") + key + "': " + e.what());
    }
  };
  set("space", o.space);
  set("grid", o.grid);
  set("kind", o.kind);
  set("p", o.p);
  set("eps", o.eps);
  set("seed", o.seed);
  set("out", o.out);
  set("value", o.value);
  set("z0", o.z0);
  set("suite", o.suite);
  set("mode", o.mode);
  set("order", o.order);
  set("n", o.n);
  set("dim", o.dim);
  set("refinement", o.refinement);
  set("regions", o.regions);
  set("name", o.name);
}

fs::path out_dir(const Options& o) {
  fs::path d = o.out;
  if (d.empty()) {
    const char* env = std::getenv("LPH_OUT_DIR");
    d = env && *env ? env : ".";
  }
  std::error_code ec;
  fs::create_directories(d, ec);
  lph::require(!ec, lph::ErrorKind::io_error, "cannot create output directory " + d.string());
  return d;
}

lph::SpaceHandle parse_space(const std::string& s) {
  try {
    return lph::make_space(lph::parse_space_name(s));
  } catch (const lph::Error& e) {
    throw UsageError(e.what());
  }
}

// "W", "WxH" or "WxHxD"; the grid is a cube, so the sides must agree.
lph::DomainHandle parse_grid(const std::string& g) {
  std::vector<std::size_t> sides;
  std::stringstream ss(g);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("bad grid '" + g + "'");
    sides.push_back(std::stoul(part));
  }
  if (sides.empty() || sides.size() > 3) throw UsageError("bad grid '" + g + "'");
  for (auto s : sides)
    if (s != sides[0] || s == 0) throw UsageError("grid sides must be equal and positive: '" + g + "'");
  return lph::grid_domain(sides.size(), sides[0]);
}

lph::Exponent parse_p(const std::string& p) {
  try {
    return lph::Exponent::parse(p);
  } catch (const lph::Error& e) {
    throw UsageError(e.what());
  }
}

lph::Point parse_payload(const std::string& s) {
  std::vector<double> v;
  std::string t = s;
  for (char& c : t)
    if (c == '[' || c == ']' || c == ',') c = ' ';
  std::stringstream ss(t);
  double x;
  while (ss >> x) v.push_back(x);
  if (!ss.eof()) throw UsageError("bad payload '" + s + "'");
  return lph::Point(std::move(v));
}

json base_config(const std::string& command, const Options& o) {
  return json{{"command", command}, {"seed", o.seed}};
}

void echo_config(const json& cfg) { std::cout << "config " << cfg.dump() << '\n'; }

void emit(const fs::path& path, const json& j) {
  lph::write_json(path, j);
  std::cout << path.string() << '\n';
}

int cmd_gen(const Options& o) {
  const auto dir = out_dir(o);
  const std::string name = o.name.empty() ? o.kind : o.name;
  json cfg = base_config("gen", o);
  cfg["kind"] = o.kind;
  std::optional<lph::MeasurableMap> f;
  std::optional<lph::SimpleMap> simple;
  if (o.kind == "hilbert-ce") {
    f = lph::hilbert_fixture(o.n, o.dim);
    cfg["n"] = o.n;
    cfg["dim"] = o.dim;
  } else if (o.kind == "unbounded-base" || o.kind == "exponential-base") {
    const auto p = parse_p(o.p);
    if (p.is_infinite()) throw UsageError("divergence fixtures need finite p");
    f = lph::divergence_base(lph::parse_divergence_kind(o.kind), o.refinement, p.value());
    cfg["refinement"] = o.refinement;
    cfg["p"] = p.str();
  } else {
    const auto s = parse_space(o.space);
    const auto d = parse_grid(o.grid);
    cfg["space"] = o.space;
    cfg["grid"] = o.grid;
    if (o.kind == "smooth") {
      f = lph::smooth_field(d, s, o.seed);
    } else if (o.kind == "quantized") {
      f = lph::quantized_field(d, s, o.seed);
    } else if (o.kind == "random") {
      auto rng = lph::seeded_rng(o.seed, 0x9e2);
      f = lph::random_map(d, s, rng);
    } else if (o.kind == "constant") {
      const auto y = o.value.empty() ? s->dense_sequence(1).front() : parse_payload(o.value);
      f = lph::constant_embed(d, s, y);
      cfg["value"] = y.payload;
    } else if (o.kind == "piecewise") {
      simple = lph::striped_simple_map(d, s, o.regions, o.seed);
      f = simple->to_map();
      cfg["regions"] = o.regions;
    } else {
      throw UsageError("unknown --kind '" + o.kind + "'");
    }
  }
  cfg["sidecar"] = o.sidecar;
  echo_config(cfg);
  emit(dir / (name + ".domain.json"), lph::domain_to_json(*f->domain));
  lph::save_map(dir / (name + ".map.json"), *f, o.sidecar, name + ".domain.json");
  std::cout << (dir / (name + ".map.json")).string() << '\n';
  if (simple) {
    auto j = lph::simple_map_to_json(*simple);
    j["config"] = cfg;
    emit(dir / (name + ".simple.json"), j);
  }
  emit(dir / (name + ".config.json"), cfg);
  return 0;
}

int cmd_distance(const Options& o) {
  if (o.in.empty() || o.in2.empty()) throw UsageError("distance needs two map files");
  const auto f = lph::load_map(o.in);
  const auto g = lph::load_map(o.in2);
  std::vector<lph::Exponent> ps;
  if (o.all_p) ps = {1.0, 2.0, lph::Exponent::infinity()};
  else ps = {parse_p(o.p)};
  json cfg = base_config("distance", o);
  cfg["inputs"] = {o.in, o.in2};
  cfg["p"] = json::array();
  for (const auto& p : ps) cfg["p"].push_back(p.str());
  echo_config(cfg);
  json dist = json::object();
  for (const auto& p : ps) {
    const double d = lph::dp_distance(f, g, p);
    dist[p.str()] = std::isinf(d) ? json("inf") : json(d);
    std::cout << "D_" << p.str() << " = " << json(dist[p.str()]).dump() << '\n';
  }
  emit(out_dir(o) / (o.name.empty() ? "distance.json" : o.name + ".json"), json{{"config", cfg}, {"distances", dist}});
  return 0;
}

int cmd_quantize(const Options& o) {
  if (o.in.empty()) throw UsageError("quantize needs --in <map file>");
  const auto f = lph::load_map(o.in);
  const auto p = parse_p(o.p);
  const auto h = o.base.empty() ? lph::constant_embed(f.domain, f.space, f[0]) : lph::load_map(o.base);
  const std::string mode = !o.mode.empty() ? o.mode : p.is_infinite() ? "sup" : "almost-simple";
  json cfg = base_config("quantize", o);
  cfg["input"] = o.in;
  cfg["base"] = o.base.empty() ? json("constant f(atom 0)") : json(o.base);
  cfg["p"] = p.str();
  cfg["eps"] = o.eps;
  cfg["mode"] = mode;
  echo_config(cfg);
  std::pair<lph::SimpleMap, lph::ApproxReport> res;
  if (mode == "sup") res = lph::simple_approx_sup(f, h, o.eps);
  else if (mode == "almost-simple") res = lph::almost_simple_approx(f, h, p, o.eps);
  else if (mode == "countable")
    res = lph::countable_quantize(f, o.eps, lph::QuantizeOptions{!p.is_infinite(), p});
  else throw UsageError("unknown --mode '" + mode + "'");
  const auto dir = out_dir(o);
  const std::string name = o.name.empty() ? "quantized" : o.name;
  auto sj = lph::simple_map_to_json(res.first);
  sj["config"] = cfg;
  emit(dir / (name + ".simple.json"), sj);
  emit(dir / (name + ".report.json"), json{{"config", cfg}, {"report", lph::report_to_json(res.second)}});
  std::cout << "achieved_error = " << res.second.achieved_error << " (eps " << o.eps << ")\n";
  return res.second.success ? 0 : kVerify;
}

int cmd_continuify(const Options& o) {
  if (o.in.empty()) throw UsageError("continuify needs --in <simple map file>");
  const auto g = lph::load_simple_map(o.in);
  const auto p = parse_p(o.p);
  if (p.is_infinite()) throw UsageError("continuify needs finite p");
  std::optional<lph::Point> z0;
  if (!o.z0.empty()) z0 = parse_payload(o.z0);
  json cfg = base_config("continuify", o);
  cfg["input"] = o.in;
  cfg["p"] = p.str();
  cfg["eps"] = o.eps;
  cfg["order"] = o.order;
  if (z0) cfg["z0"] = z0->payload;
  echo_config(cfg);
  const auto [field, rep] = o.order == 0 ? lph::continuous_from_simple(g, p, o.eps, z0)
                                         : lph::smooth_from_simple(g, p, o.eps, o.order, z0);
  const auto dir = out_dir(o);
  const std::string name = o.name.empty() ? "field" : o.name;
  lph::export_field(dir / (name + ".json"), field);
  std::cout << (dir / (name + ".json")).string() << '\n';
  auto rj = lph::report_to_json(rep);
  rj["modulus_ratio"] = lph::modulus_ratio(field);
  rj["endpoints_exact"] = lph::endpoints_exact(field);
  emit(dir / (name + ".report.json"), json{{"config", cfg}, {"report", rj}});
  std::cout << "achieved_error = " << rep.achieved_error << " (eps " << o.eps << ")\n";
  return rep.success ? 0 : kVerify;
}

int cmd_verify(const Options& o) {
  lph::SuiteConfig sc;
  sc.seed = o.seed;
  sc.suite = o.suite;
  sc.mutate_metric = o.mutate;
  if (std::find(lph::suite_names().begin(), lph::suite_names().end(), o.suite) == lph::suite_names().end())
    throw UsageError("unknown --suite '" + o.suite + "'");
  if (!o.config.empty()) {
    const json j = lph::read_json(o.config);
    if (j.contains("sizes")) sc.sizes = lph::sizes_from_json(j.at("sizes"));
  }
  json cfg = base_config("verify", o);
  cfg["suite"] = sc.suite;
  cfg["mutate_metric"] = sc.mutate_metric;
  cfg["sizes"] = lph::sizes_to_json(sc.sizes);
  echo_config(cfg);
  const auto ledger = lph::run_theorem_suite(sc);
  std::size_t failed = 0;
  for (const auto& r : ledger) {
    std::cout << (r.passed ? "pass " : "FAIL ") << r.check_id << '\n';
    failed += !r.passed;
  }
  const auto dir = out_dir(o);
  const std::string name = o.name.empty() ? "ledger" : o.name;
  emit(dir / (name + ".json"), lph::ledger_to_json(ledger));
  emit(dir / (name + ".config.json"), cfg);
  std::cout << ledger.size() - failed << "/" << ledger.size() << " checks passed\n";
  return lph::all_passed(ledger) ? 0 : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear Lebesgue spaces L^p_h(M, N): data, distances, approximation, verification"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "RNG seed");
    c->add_option("--out", o.out, "Output directory (default: $LPH_OUT_DIR or .)");
    c->add_option("--config", o.config, "JSON config file; flags override it");
    c->add_option("--name", o.name, "Output file stem");
  };

  auto* gen = app.add_subcommand("gen", "Write a domain file and a map file");
  common(gen);
  gen->add_option("--space", o.space, "Target space: r<d>, spd<n>, simplex<d>, hist<m>, circle");
  gen->add_option("--grid", o.grid, "Grid W, WxH or WxHxD (equal sides)");
  gen->add_option("--kind", o.kind,
                  "smooth, quantized, random, constant, piecewise, hilbert-ce, unbounded-base, exponential-base");
  gen->add_option("--value", o.value, "Payload for --kind constant, e.g. 1,0,0,1");
  gen->add_option("--regions", o.regions, "Region count for --kind piecewise");
  gen->add_option("--n", o.n, "Interval count for hilbert-ce");
  gen->add_option("--dim", o.dim, "Ambient dimension for hilbert-ce");
  gen->add_option("--refinement", o.refinement, "Refinement level for divergence fixtures");
  gen->add_option("--p", o.p, "Exponent for divergence fixtures");
  gen->add_flag("--sidecar", o.sidecar, "Store values in a little-endian float64 sidecar");

  auto* dist = app.add_subcommand("distance", "D_p between two maps on the same domain");
  common(dist);
  dist->add_option("f", o.in, "First map file")->required();
  dist->add_option("g", o.in2, "Second map file")->required();
  dist->add_option("--p", o.p, "Exponent (number or inf)");
  dist->add_flag("--all", o.all_p, "Report p = 1, 2 and inf");

  auto* quant = app.add_subcommand("quantize", "Simple or countably-valued approximation of a map");
  common(quant);
  quant->add_option("--in", o.in, "Map file")->required();
  quant->add_option("--base", o.base, "Base map file (default: constant at the first atom's value)");
  quant->add_option("--p", o.p, "Exponent (number or inf)");
  quant->add_option("--eps", o.eps, "Target accuracy");
  quant->add_option("--mode", o.mode, "almost-simple (finite p), sup (p = inf) or countable");

  auto* cont = app.add_subcommand("continuify", "Continuous or smooth relaxation of a simple map");
  common(cont);
  cont->add_option("--in", o.in, "Simple map file")->required();
  cont->add_option("--p", o.p, "Finite exponent");
  cont->add_option("--eps", o.eps, "Target accuracy");
  cont->add_option("--order", o.order, "0 for continuous, 1..5 for smoothstep order");
  cont->add_option("--z0", o.z0, "Background payload (default: the constant base)");

  auto* ver = app.add_subcommand("verify", "Run the property suite and write a ledger");
  common(ver);
  ver->add_option("--suite", o.suite, "all, metric, measure, lp, approx, interp, verify");
  ver->add_flag("--mutate-metric", o.mutate, "Add a deliberately broken metric (self-test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  try {
    apply_config(cmd, o);
    if (cmd == gen) return cmd_gen(o);
    if (cmd == dist) return cmd_distance(o);
    if (cmd == quant) return cmd_quantize(o);
    if (cmd == cont) return cmd_continuify(o);
    return cmd_verify(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const lph::Error& e) {
    std::cerr << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
}
