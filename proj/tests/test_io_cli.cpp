#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "lph/lph.hpp"

#ifndef LPH_CLI_PATH
#error "LPH_CLI_PATH must point at the built CLI"
#endif

using namespace lph;

namespace {

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("lph_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stdout and stderr captured to a file.
Run cli(const std::string& args, const std::string& env = {}) {
  const auto log = fs::temp_directory_path() / ("lph_cli_" + std::to_string(::getpid()) + ".log");
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" LPH_CLI_PATH "' " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }

struct CleanScratch : ::testing::Environment {
  void TearDown() override {
    std::error_code ec;
    fs::remove_all(fs::temp_directory_path() / ("lph_test_" + std::to_string(::getpid())), ec);
    fs::remove(fs::temp_directory_path() / ("lph_cli_" + std::to_string(::getpid()) + ".log"), ec);
  }
};

const auto* const kCleanup = ::testing::AddGlobalTestEnvironment(new CleanScratch);

}  // namespace

TEST(Io, RealsWithInfinityAndNan) {
  EXPECT_EQ(detail::real_to_json(kInf), "inf");
  EXPECT_EQ(detail::real_from_json("-inf"), -kInf);
  EXPECT_TRUE(std::isnan(detail::real_from_json(nullptr)));
  EXPECT_EQ(detail::real_from_json(json(0.1)), 0.1);
}

TEST(Io, F64SidecarIsLittleEndianAndExact) {
  const auto dir = scratch("f64");
  const std::vector<double> xs{1.0, -0.0, 5e-324, 0.1, -kInf, 1.7976931348623157e308};
  write_f64le(dir / "x.f64", xs);
  const auto raw = slurp(dir / "x.f64");
  ASSERT_EQ(raw.size(), 48u);
  // 1.0 = 0x3FF0000000000000, lowest byte first.
  EXPECT_EQ(static_cast<unsigned char>(raw[7]), 0x3F);
  EXPECT_EQ(static_cast<unsigned char>(raw[6]), 0xF0);
  EXPECT_EQ(static_cast<unsigned char>(raw[0]), 0x00);
  const auto back = read_f64le(dir / "x.f64");
  ASSERT_EQ(back.size(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(bits(back[i]), bits(xs[i]));
  std::ofstream(dir / "bad.f64", std::ios::binary) << "1234567";
  EXPECT_THROW(read_f64le(dir / "bad.f64"), Error);
}

TEST(Io, MapRoundTripInlineAndSidecar) {
  const auto dir = scratch("maps");
  for (const auto& s : concrete_spaces()) {
    const auto d = grid_domain(2, 8);
    const auto f = smooth_field(d, s, 3);
    for (bool sidecar : {false, true}) {
      const auto path = dir / (s->tag() + (sidecar ? "_sc" : "_in") + ".map.json");
      save_map(path, f, sidecar);
      const auto g = load_map(path);
      EXPECT_EQ(*g.domain, *f.domain);
      EXPECT_EQ(g.space->descriptor(), s->descriptor());
      ASSERT_EQ(g.values.size(), f.values.size());
      for (std::size_t a = 0; a < f.size(); ++a)
        for (std::size_t k = 0; k < f[a].size(); ++k) EXPECT_EQ(bits(g[a][k]), bits(f[a][k]));
    }
  }
}

TEST(Io, MapWithDomainReference) {
  const auto dir = scratch("ref");
  const auto s = make_space(parse_space_name("circle"));
  const auto f = smooth_field(grid_domain(1, 32), s, 1);
  write_json(dir / "grid.domain.json", domain_to_json(*f.domain));
  save_map(dir / "f.map.json", f, true, "grid.domain.json");
  EXPECT_TRUE(read_json(dir / "f.map.json").at("domain").is_string());
  EXPECT_EQ(load_map(dir / "f.map.json").values, f.values);
}

TEST(Io, InfiniteWeightsSurvive) {
  const Domain d({1.0, kInf, 0.0});
  EXPECT_EQ(domain_from_json(domain_to_json(d)), d);
}

TEST(Io, SimpleMapRoundTrip) {
  const auto dir = scratch("simple");
  const auto s = make_space(parse_space_name("spd2"));
  const auto g = striped_simple_map(grid_domain(2, 16), s, 3, 2);
  save_simple_map(dir / "g.simple.json", g);
  const auto back = load_simple_map(dir / "g.simple.json");
  EXPECT_EQ(back.labels, g.labels);
  EXPECT_EQ(back.values, g.values);
  EXPECT_EQ(back.base_flag, g.base_flag);
  EXPECT_EQ(back.to_map().values, g.to_map().values);
}

TEST(Io, MalformedFilesAreParseErrors) {
  const auto dir = scratch("bad");
  std::ofstream(dir / "x.json") << "{ not json";
  try {
    read_json(dir / "x.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse_error);
  }
  try {
    read_json(dir / "missing.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io_error);
  }
}

TEST(Io, LedgerShape) {
  const auto j = ledger_to_json({{"a.b", "ref", true, {{"m", 1.5}}, ""}, {"c", "r2", false, {}, "why"}});
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0].at("status"), "pass");
  EXPECT_EQ(j[0].at("metrics").at("m"), 1.5);
  EXPECT_EQ(j[1].at("status"), "fail");
  EXPECT_EQ(j[1].at("detail"), "why");
  for (const auto& e : j)
    for (const char* k : {"check_id", "paper_ref", "status", "metrics"}) EXPECT_TRUE(e.contains(k));
}

// ---------------------------------------------------------------------------
// CLI

TEST(Cli, ExitCodes) {
  const auto dir = scratch("codes");
  const std::string out = " --out '" + dir.string() + "'";
  EXPECT_EQ(cli("").code, 1);
  EXPECT_EQ(cli("frobnicate").code, 1);
  EXPECT_EQ(cli("gen --kind nope" + out).code, 1);
  EXPECT_EQ(cli("gen --grid 4x5" + out).code, 1);
  EXPECT_EQ(cli("gen --space torus" + out).code, 1);
  EXPECT_EQ(cli("gen --kind constant --space spd2 --value 1,0,0" + out).code, 2);
  EXPECT_EQ(cli("distance '" + (dir / "missing.json").string() + "' '" + (dir / "missing.json").string() + "'" + out).code, 2);
  EXPECT_EQ(cli("gen --help").code, 0);
}

TEST(Cli, GenExamplesAndEcho) {
  const auto dir = scratch("gen");
  const std::string out = " --out '" + dir.string() + "'";
  auto r = cli("gen --space spd2 --grid 32x32 --kind smooth --seed 7" + out);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("config {"), std::string::npos);
  const auto f = load_map(dir / "smooth.map.json");
  EXPECT_EQ(f.size(), 1024u);
  EXPECT_EQ(f.values, smooth_field(grid_domain(2, 32), make_space(parse_space_name("spd2")), 7).values);

  r = cli("gen --kind hilbert-ce --n 8 --dim 16" + out);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(load_map(dir / "hilbert-ce.map.json").values, hilbert_fixture(8, 16).values);

  r = cli("gen --kind constant --space spd2 --grid 8 --value 2,0,0,3" + out);
  ASSERT_EQ(r.code, 0) << r.out;
  for (const auto& v : load_map(dir / "constant.map.json").values) EXPECT_EQ(v, (Point{2, 0, 0, 3}));
}

TEST(Cli, OutputsAreByteIdentical) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  for (const auto& d : {a, b}) {
    ASSERT_EQ(cli("gen --space simplex3 --grid 16x16 --kind smooth --seed 4 --sidecar --out '" + d.string() + "'").code, 0);
    ASSERT_EQ(cli("quantize --in '" + (d / "smooth.map.json").string() + "' --eps 0.1 --p 2 --out '" + d.string() + "'").code, 0);
    ASSERT_EQ(cli("verify --suite measure --out '" + d.string() + "'").code, 0);
  }
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    const auto other = b / e.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    const auto x = slurp(e.path()), y = slurp(other);
    // Echoed configs carry the output path; everything else must match exactly.
    if (x.find(a.string()) != std::string::npos) continue;
    EXPECT_EQ(x, y) << e.path().filename();
    ++compared;
  }
  EXPECT_GE(compared, 5u);
}

TEST(Cli, DistanceMatchesLibraryBitForBit) {
  const auto dir = scratch("dist");
  const char* spaces[] = {"r2", "spd2", "simplex3", "hist8", "circle"};
  for (int i = 0; i < 20; ++i) {
    const std::string space = spaces[i % 5];
    const std::string kind = i % 2 ? "random" : "smooth";
    const std::string grid = i % 3 ? "16x16" : "64";
    const auto pd = dir / ("pair" + std::to_string(i));
    for (int k : {0, 1}) {
      const auto r = cli("gen --space " + space + " --grid " + grid + " --kind " + kind + " --seed " +
                         std::to_string(100 + 2 * i + k) + " --name m" + std::to_string(k) + (k ? " --sidecar" : "") +
                         " --out '" + pd.string() + "'");
      ASSERT_EQ(r.code, 0) << r.out;
    }
    const auto r = cli("distance '" + (pd / "m0.map.json").string() + "' '" + (pd / "m1.map.json").string() +
                       "' --all --out '" + pd.string() + "'");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = read_json(pd / "distance.json").at("distances");
    const auto f = load_map(pd / "m0.map.json"), g = load_map(pd / "m1.map.json");
    for (Exponent p : {Exponent(1.0), Exponent(2.0), Exponent::infinity()})
      EXPECT_EQ(bits(detail::real_from_json(j.at(p.str()))), bits(dp_distance(f, g, p))) << i << " p=" << p.str();
  }
}

TEST(Cli, DistanceExamples) {
  const auto dir = scratch("dist_ex");
  const std::string out = " --out '" + dir.string() + "'";
  ASSERT_EQ(cli("gen --space simplex3 --grid 8x8 --kind random" + out).code, 0);
  const auto f = (dir / "random.map.json").string();
  ASSERT_EQ(cli("distance '" + f + "' '" + f + "' --all" + out).code, 0);
  for (const auto& [p, v] : read_json(dir / "distance.json").at("distances").items()) EXPECT_EQ(v, 0.0) << p;

  // Constant maps on the unit grid: D_p equals the point distance for every p.
  ASSERT_EQ(cli("gen --space r2 --grid 16x16 --kind constant --value 0,0 --name a" + out).code, 0);
  ASSERT_EQ(cli("gen --space r2 --grid 16x16 --kind constant --value 3,4 --name b" + out).code, 0);
  ASSERT_EQ(cli("distance '" + (dir / "a.map.json").string() + "' '" + (dir / "b.map.json").string() + "' --all" + out).code, 0);
  for (const auto& [p, v] : read_json(dir / "distance.json").at("distances").items())
    EXPECT_NEAR(v.get<double>(), 5.0, 5e-15) << p;
}

TEST(Cli, QuantizeSmoothSpd) {
  const auto dir = scratch("quant");
  const std::string out = " --out '" + dir.string() + "'";
  ASSERT_EQ(cli("gen --space spd2 --grid 32x32 --kind smooth --seed 7" + out).code, 0);
  const auto r = cli("quantize --in '" + (dir / "smooth.map.json").string() + "' --eps 0.1 --p 2" + out);
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rep = read_json(dir / "quantized.report.json").at("report");
  EXPECT_LT(rep.at("achieved_error").get<double>(), 0.1);
  const auto g = load_simple_map(dir / "quantized.simple.json");
  EXPECT_LT(dp_distance(load_map(dir / "smooth.map.json"), g.to_map(), 2.0), 0.1);
}

TEST(Cli, ContinuifyTwoRegions) {
  const auto dir = scratch("cont");
  const std::string out = " --out '" + dir.string() + "'";
  ASSERT_EQ(cli("gen --space r2 --grid 256x256 --kind piecewise --regions 2 --seed 3" + out).code, 0);
  const auto r = cli("continuify --in '" + (dir / "piecewise.simple.json").string() + "' --eps 0.2 --p 1" + out);
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rep = read_json(dir / "field.report.json").at("report");
  EXPECT_LT(rep.at("achieved_error").get<double>(), 0.2);
  EXPECT_TRUE(rep.at("endpoints_exact").get<bool>());
  EXPECT_LE(rep.at("modulus_ratio").get<double>(), 1.0);
  EXPECT_EQ(fs::file_size(dir / "field.values.f64"), 256u * 256u * 2u * 8u);
}

TEST(Cli, ConfigFileAndEnvironment) {
  const auto dir = scratch("cfg");
  std::ofstream(dir / "c.json") << R"({"space": "circle", "grid": "8", "kind": "random", "seed": 5})";
  auto r = cli("gen --config '" + (dir / "c.json").string() + "' --seed 6", "LPH_OUT_DIR='" + dir.string() + "'");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto cfg = read_json(dir / "random.config.json");
  EXPECT_EQ(cfg.at("space"), "circle");
  EXPECT_EQ(cfg.at("seed"), 6);
  EXPECT_EQ(load_map(dir / "random.map.json").size(), 8u);
  std::ofstream(dir / "bad.json") << R"({"seed": "many"})";
  EXPECT_EQ(cli("gen --config '" + (dir / "bad.json").string() + "' --out '" + dir.string() + "'").code, 1);
}

TEST(Cli, VerifyPassesAndCatchesMutation) {
  const auto dir = scratch("verify");
  auto r = cli("verify --suite all --seed 1 --out '" + dir.string() + "'");
  EXPECT_EQ(r.code, 0) << r.out;
  const auto ledger = read_json(dir / "ledger.json");
  EXPECT_GT(ledger.size(), 40u);
  for (const auto& e : ledger) EXPECT_EQ(e.at("status"), "pass") << e.at("check_id");

  r = cli("verify --suite metric --mutate-metric --name mutated --out '" + dir.string() + "'");
  EXPECT_EQ(r.code, 3);
  bool caught = false;
  for (const auto& e : read_json(dir / "mutated.json"))
    if (e.at("check_id") == "metric.axioms.broken_euclidean") caught = e.at("status") == "fail";
  EXPECT_TRUE(caught);
}
