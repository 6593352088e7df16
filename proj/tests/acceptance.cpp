// Acceptance gate: one PASS/FAIL line per criterion, at full size. Exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "lph/lph.hpp"

using namespace lph;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool ok = true;
  std::string note;
  void need(const CheckResult& r) {
    if (!r.passed) {
      ok = false;
      note += " [failed " + r.check_id + (r.detail.empty() ? "" : ": " + r.detail) + "]";
    }
  }
  void need(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note += " [" + what + "]";
    }
  }
};

double metric(const CheckResult& r, const std::string& k) {
  auto it = r.metrics.find(k);
  return it == r.metrics.end() ? 0.0 : it->second;
}

}  // namespace

int main() {
  const std::uint64_t seed = 1;
  const auto spaces = concrete_spaces();
  int failures = 0;
  auto report = [&](int id, const std::string& name, const std::function<Outcome()>& fn) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string(" [exception: ") + e.what() + "]";
    }
    failures += !o.ok;
    std::printf("criterion %2d %s  %s (%.1f s)%s\n", id, o.ok ? "PASS" : "FAIL", name.c_str(), seconds_since(t0),
                o.note.c_str());
    std::fflush(stdout);
  };

  report(1, "D_p semimetric axioms, 10^4 triples per space, p in {1,1.5,2,4,inf}", [&] {
    Outcome o;
    const auto t0 = Clock::now();
    for (const auto& s : spaces) o.need(check_dp_axioms(s, 10000, 8, seed));
    const double t = seconds_since(t0);
    o.need(t < 30.0, "took " + std::to_string(t) + " s, limit 30 s");
    return o;
  });

  report(2, "constant embedding scales by mu(M)^{1/p}, 10^3 pairs, mu in {0.5,1,4}", [&] {
    Outcome o;
    for (const auto& s : spaces) o.need(check_constant_embedding(s, 1000, seed));
    return o;
  });

  report(3, "almost-simple approximation on 64x64 SPD and simplex fields", [&] {
    Outcome o;
    const auto t0 = Clock::now();
    for (const char* n : {"spd2", "simplex3"}) o.need(check_almost_simple(make_space(parse_space_name(n)), 64, seed));
    const double t = seconds_since(t0);
    o.need(t < 60.0, "took " + std::to_string(t) + " s, limit 60 s");
    return o;
  });

  report(4, "sup density on circle and r2, circle range bound, hist refuses", [&] {
    Outcome o;
    for (const char* n : {"circle", "r2"}) o.need(check_sup_density(make_space(parse_space_name(n)), 64, seed));
    o.need(check_sup_refusal(make_space(parse_space_name("hist8")), seed));
    return o;
  });

  report(5, "Hilbert counterexample bound >= sqrt(2)/2 for (2,1), (4,3), (8,7)", [&] {
    Outcome o;
    for (auto [n, k] : {std::pair<std::size_t, std::size_t>{2, 1}, {4, 3}, {8, 7}}) o.need(check_hilbert(n, k));
    return o;
  });

  report(6, "divergence fixtures strictly increase over >= 5 refinements", [&] {
    Outcome o;
    o.need(check_divergence(DivergenceKind::unbounded_base_p, {4, 5, 6, 7, 8, 9, 10}, 2.0));
    o.need(check_divergence(DivergenceKind::exponential_base, {1, 2, 3, 4, 5}, 1.0));
    return o;
  });

  CheckResult continuous;
  report(7, "continuous relaxation: 2 and 5 regions, 1-D/2-D grids, eps in {0.2,0.05}", [&] {
    Outcome o;
    continuous = check_relaxation(0, 1024, 256, seed);
    o.need(continuous);
    return o;
  });

  report(8, "smooth relaxation order 2 within 10 h^2; order 0 bit-identical", [&] {
    Outcome o;
    o.need(check_relaxation(2, 1024, 256, seed));
    o.need(!continuous.check_id.empty() && metric(continuous, "order0_mismatch") == 0.0,
           "order 0 smooth field differs from the continuous field");
    return o;
  });

  report(9, "Riesz-Fischer: 100 sequences per complete space; rationals diverge", [&] {
    Outcome o;
    for (const auto& s : spaces) o.need(check_riesz_fischer(s, 100, 8, seed));
    o.need(check_incomplete_target());
    return o;
  });

  report(10, "separability probes reach every quantized fixture at eps 0.05", [&] {
    Outcome o;
    const auto r = check_separability(40, seed);
    o.need(r);
    o.need(metric(r, "success_rate") == 1.0, "success rate below 100%");
    return o;
  });

  report(11, "Hoelder inclusion and base invariance, 10^3 cases", [&] {
    Outcome o;
    o.need(check_holder(1000, seed));
    o.need(check_base_invariance(1000, seed));
    return o;
  });

  report(12, "full suite passes for seeds 1..5 (seed 1 re-run identical) within 10 minutes", [&] {
    Outcome o;
    const auto t0 = Clock::now();
    std::string first;
    for (std::uint64_t sd = 1; sd <= 5; ++sd) {
      SuiteConfig cfg;
      cfg.seed = sd;
      const auto ledger = run_theorem_suite(cfg);
      for (const auto& r : ledger)
        if (!r.passed) o.need(r);
      o.need(all_passed(ledger), "seed " + std::to_string(sd));
      if (sd == 1) first = ledger_to_json(ledger).dump();
    }
    SuiteConfig again;
    o.need(ledger_to_json(run_theorem_suite(again)).dump() == first, "seed 1 ledger changed on re-run");
    const double t = seconds_since(t0);
    o.need(t < 600.0, "took " + std::to_string(t) + " s, limit 600 s");
    return o;
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
