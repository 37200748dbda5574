// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ocb/config.hpp"
#include "ocb/error.hpp"
#include "ocb/experiment.hpp"
#include "ocb/generator.hpp"
#include "ocb/metrics.hpp"
#include "ocb/presets.hpp"
#include "ocb/traversal.hpp"
#include "ocb/workload.hpp"
#include "oracles.hpp"

namespace {

using namespace ocb;
using Clock = std::chrono::steady_clock;

// Pinned tolerances.
constexpr double kClosureTolerance = 1e-12;
constexpr double kGenerationBudgetSeconds = 60.0;
constexpr double kMinRSquared = 0.99;
constexpr double kSlotFrequencyTolerance = 0.01;
constexpr int kStochasticSteps = 100000;
constexpr double kMinClusteringGain = 1.5;
constexpr double kClusterExperimentBudgetSeconds = 300.0;
constexpr double kDefaultGenerationBudgetSeconds = 300.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

Outcome probability_closure() {
  const WorkloadParams w;
  double sum = 0.0;
  for (double p : w.probabilities) sum += p;
  bool accepted = true;
  bool rejected = false;
  WorkloadParams near = w;
  near.probabilities[3] += 0.5e-9;
  try {
    validate(near);
  } catch (const ConfigError&) {
    accepted = false;
  }
  WorkloadParams far = w;
  far.probabilities[3] += 2e-9;
  try {
    validate(far);
  } catch (const ConfigError&) {
    rejected = true;
  }
  std::ostringstream d;
  d.precision(17);
  d << "sum=" << sum << ", +5e-10 accepted=" << accepted << ", +2e-9 rejected=" << rejected;
  return {std::abs(sum - 1.0) <= kClosureTolerance && accepted && rejected, d.str()};
}

Outcome structural_invariants() {
  bool ok = true;
  double worst = 0.0;
  std::ostringstream d;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto start = Clock::now();
    const auto base = generate_base(DatabaseParams{}, seed);
    const double t = seconds_since(start);
    worst = std::max(worst, t);
    const bool sym = oracle::backrefs_symmetric(base);
    const auto window = oracle::locality_violations(base);
    bool acyclic = true;
    for (auto type : base.params.acyclic_types) acyclic = acyclic && oracle::class_graph_is_acyclic(base, type);
    if (!sym || window != 0 || !acyclic || t >= kGenerationBudgetSeconds) {
      ok = false;
      d << "seed " << seed << ": symmetric=" << sym << " window_violations=" << window
        << " acyclic=" << acyclic << "; ";
    }
  }
  d << "10 seeds, slowest generation " << worst << " s";
  return {ok, d.str()};
}

Outcome size_linearity() {
  const std::vector<std::int64_t> sizes = {500, 1000, 2000, 5000, 10000, 15000, 20000};
  bool ok = true;
  std::ostringstream d;
  for (std::int32_t nc : {20, 50}) {
    std::vector<double> x, y;
    for (auto no : sizes) {
      DatabaseParams p;
      p.nc = nc;
      p.no = no;
      const auto base = generate_base(p, kDefaultSeed);
      x.push_back(static_cast<double>(no));
      y.push_back(static_cast<double>(base.total_bytes()));
    }
    const double r2 = oracle::r_squared(x, y);
    ok = ok && r2 >= kMinRSquared;
    d << "NC=" << nc << " R^2=" << r2 << "; ";
  }
  return {ok, d.str()};
}

Outcome stochastic_law() {
  bool ok = true;
  std::ostringstream d;
  for (std::int32_t m : {1, 4, 10}) {
    auto base = ObjectBase{};
    base.params.nreft = 1;
    const ClassId c = base.append_class(std::vector<ClassRef>(static_cast<std::size_t>(m), {0, 0}), 10);
    base.append_object(c, {0});
    base.append_object(c, {0});
    for (std::uint32_t k = 0; k < static_cast<std::uint32_t>(m); ++k) {
      base.link(0, k, 1);
      base.link(1, k, 0);
    }
    std::vector<std::int64_t> counts(static_cast<std::size_t>(m), 0);
    TraversalObserver obs;
    obs.cross = [&](const AccessEvent& e) { ++counts[e.slot]; };
    RandomState rng(kDefaultSeed);
    stochastic_traversal(base, 0, kStochasticSteps, rng, Direction::kForward, &obs);
    const double norm = 1.0 - std::ldexp(1.0, -m);
    double worst = 0.0;
    for (std::int32_t n = 0; n < m; ++n) {
      const double expected = std::ldexp(1.0, -(n + 1)) / norm;
      const double observed = static_cast<double>(counts[static_cast<std::size_t>(n)]) / kStochasticSteps;
      worst = std::max(worst, std::abs(observed - expected));
    }
    ok = ok && worst <= kSlotFrequencyTolerance;
    d << "maxnref=" << m << " max|dev|=" << worst << "; ";
  }
  return {ok, d.str()};
}

Outcome oracle_equivalence() {
  DatabaseParams p;
  p.nc = 10;
  p.no = 200;
  const auto base = generate_base(p, kDefaultSeed);
  RandomState rng(17);
  int mismatches = 0;
  for (int i = 0; i < 50; ++i) {
    const Oid root = rng.next_int(0, 199);
    const auto bfs = set_access(base, root, 3);
    if (std::set<Oid>(bfs.begin(), bfs.end()) != oracle::bfs_set(base, root, 3, false) ||
        std::set<Oid>(bfs.begin(), bfs.end()).size() != bfs.size()) {
      ++mismatches;
    }
    if (simple_traversal(base, root, 3) != oracle::path_enumeration(base, root, 3, -1, false)) {
      ++mismatches;
    }
    const auto tref = static_cast<std::int32_t>(rng.next_int(0, p.nreft - 1));
    if (hierarchy_traversal(base, root, tref, 5) != oracle::path_enumeration(base, root, 5, tref, false)) {
      ++mismatches;
    }
  }
  return {mismatches == 0, "200 objects, 50 roots x 3 traversals, mismatches=" + std::to_string(mismatches)};
}

WorkloadParams read_only_mix() {
  WorkloadParams w;
  w.probabilities = {0.1, 0.05, 0.05, 0.25, 0.25, 0.2, 0.1, 0, 0, 0, 0, 0, 0};
  w.coldn = 1000;
  w.hotn = 10000;
  return w;
}

Outcome cold_warm() {
  RunConfig c;
  c.workload = read_only_mix();
  auto base = generate_base(c.database, kDefaultSeed);
  const auto pages = Store::place_initial(base, c.store).page_count();
  c.store.buffer_pages = pages;
  const auto m = run_replicate(base, c, kDefaultSeed);
  const auto per_tx = [](const PhaseTotals& p) {
    const auto g = p.global();
    return g.count ? static_cast<double>(g.page_reads) / static_cast<double>(g.count) : 0.0;
  };
  const double cold = per_tx(m.cold);
  const double warm = per_tx(m.warm);

  // Buffer >= total pages and every page already touched: no further reads.
  Store store = Store::place_initial(base, c.store);
  for (Oid oid : base.live_oids()) store.read_object(oid);
  NoClustering none;
  WorkloadEngine engine(base, store, none, c.workload);
  RandomState rng(kDefaultSeed);
  std::int64_t reads_after_touch = 0;
  for (int i = 0; i < 2000; ++i) reads_after_touch += engine.execute(engine.draw_kind(rng), rng).page_reads;

  std::ostringstream d;
  d << "buffer=" << pages << " pages, cold " << cold << " reads/tx, warm " << warm
    << " reads/tx; reads after full touch=" << reads_after_touch;
  return {warm <= cold && reads_after_touch == 0, d.str()};
}

Outcome clustering_effectiveness() {
  const auto start = Clock::now();
  const auto base = generate_base(DatabaseParams{}, kDefaultSeed);
  ClusteringConfig heat;
  heat.policy = ClusteringPolicyKind::kHeat;
  ClusterExperimentOptions options;  // 100 roots x 10 repeats, depths 3 and 2, buffers 100% and 10%
  const auto report = run_cluster_experiment(base, StoreConfig{}, heat, options, kDefaultSeed);
  const double elapsed = seconds_since(start);
  bool ok = elapsed < kClusterExperimentBudgetSeconds;
  std::ostringstream d;
  for (const auto& col : report.columns) {
    const double full = col.cells.at(0).io_gain;
    const double small = col.cells.at(1).io_gain;
    ok = ok && col.clustered && col.overhead_page_ios > 0 && small > kMinClusteringGain && small > full;
    d << to_string(col.kind) << " gain(10%)=" << small << " gain(100%)=" << full
      << " overhead=" << col.overhead_page_ios << " I/Os; ";
  }
  d << elapsed << " s";
  return {ok, d.str()};
}

Outcome preset_fidelity() {
  const auto oo1 = generate_base(load_preset("oo1").config.database, kDefaultSeed);
  const auto hyper = generate_base(load_preset("hypermodel").config.database, kDefaultSeed);
  std::ostringstream d;
  d << "oo1 " << oo1.live_class_count() << "/" << oo1.live_object_count() << ", hypermodel "
    << hyper.live_class_count() << "/" << hyper.live_object_count();
  return {oo1.live_class_count() == 2 && oo1.live_object_count() == 80000 &&
              hyper.live_class_count() == 3 && hyper.live_object_count() == 19531,
          d.str()};
}

Outcome determinism() {
  const RunConfig c;
  const auto a = strip_timing(to_json(run_benchmark(c)));
  const auto b = strip_timing(to_json(run_benchmark(c)));
  const auto text_a = a.dump();
  const auto text_b = b.dump();
  return {text_a == text_b, "two default runs, " + std::to_string(text_a.size()) +
                                " bytes of non-time report fields, identical=" +
                                std::to_string(text_a == text_b)};
}

Outcome evolution_safety() {
  // Evolution kinds only, in their default relative proportions.
  RunConfig c;
  const auto defaults = c.workload.probabilities;
  c.workload.probabilities.fill(0.0);
  double total = 0.0;
  for (std::size_t i = 7; i < 11; ++i) total += defaults[i];
  for (std::size_t i = 7; i < 11; ++i) c.workload.probabilities[i] = defaults[i] / total;
  auto base = generate_base(c.database, kDefaultSeed);
  Store store = Store::place_initial(base, c.store);
  NoClustering none;
  WorkloadEngine engine(base, store, none, c.workload);
  RandomState rng(kDefaultSeed);
  std::int64_t dangling = 0;
  bool sym = true;
  bool stored = true;
  int scans = 0;
  for (int i = 1; i <= 1000; ++i) {
    engine.execute(engine.draw_kind(rng), rng);
    if (i % 100 != 0) continue;
    ++scans;
    dangling += oracle::dangling_references(base);
    sym = sym && oracle::backrefs_symmetric(base);
    stored = stored && store.live_objects() == base.live_object_count();
  }
  std::ostringstream d;
  d << "1000 evolutions, " << scans << " full scans, " << base.live_class_count() << " classes / "
    << base.live_object_count() << " objects left, dangling=" << dangling << " symmetric=" << sym;
  return {dangling == 0 && sym && stored, d.str()};
}

Outcome desk_scale() {
  const auto start = Clock::now();
  const auto base = generate_base(DatabaseParams{}, kDefaultSeed);
  const double t = seconds_since(start);
  std::ostringstream d;
  d << "default base (" << base.live_object_count() << " objects, " << base.total_bytes()
    << " bytes) in " << t << " s";
  return {t < kDefaultGenerationBudgetSeconds, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"probability closure", probability_closure},
      {"structural invariants", structural_invariants},
      {"size linearity", size_linearity},
      {"stochastic traversal law", stochastic_law},
      {"traversal oracle equivalence", oracle_equivalence},
      {"cold/warm buffer behaviour", cold_warm},
      {"clustering effectiveness", clustering_effectiveness},
      {"preset fidelity", preset_fidelity},
      {"report determinism", determinism},
      {"evolution safety", evolution_safety},
      {"desk-scale generation", desk_scale},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += !outcome.pass;
    std::printf("[%s] %2zu %s: %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed;
}
