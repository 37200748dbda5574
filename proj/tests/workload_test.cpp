#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "ocb/error.hpp"
#include "ocb/workload.hpp"
#include "oracles.hpp"

namespace ocb {
namespace {

struct Harness {
  explicit Harness(ObjectBase b, WorkloadParams p = {}, std::int64_t buffer_pages = 64)
      : base(std::move(b)),
        store(Store::place_initial(base, StoreConfig{4096, buffer_pages, ReplacementPolicy::kLru})),
        engine(base, store, policy, std::move(p)) {}

  ObjectBase base;
  Store store;
  NoClustering policy;
  WorkloadEngine engine;
};

WorkloadParams only(TransactionKind kind) {
  WorkloadParams p;
  p.probabilities.fill(0.0);
  p.probabilities[index_of(kind)] = 1.0;
  return p;
}

TEST(Workload, RandomAccessReadsNrndObjects) {
  Harness h(fixture::small_base());
  RandomState rng(1);
  EXPECT_EQ(h.engine.execute(TransactionKind::kRandomAccess, rng).objects_accessed, 50);
  WorkloadParams p;
  p.nrnd = 0;
  Harness zero(fixture::small_base(), p);
  EXPECT_EQ(zero.engine.execute(TransactionKind::kRandomAccess, rng).objects_accessed, 0);
}

TEST(Workload, ScanReadsWholeIterator) {
  WorkloadParams p;
  p.dist6 = Distribution::constant(3);
  Harness h(fixture::small_base(), p);
  RandomState rng(1);
  const auto r = h.engine.execute(TransactionKind::kSimpleScan, rng);
  EXPECT_EQ(r.class_id, 3);
  EXPECT_EQ(r.objects_accessed, static_cast<std::int64_t>(h.base.classes[3].iterator.size()));
  EXPECT_EQ(r.page_writes, 0);
}

TEST(Workload, RangeLookupCountsMatches) {
  WorkloadParams p;
  p.dist6 = Distribution::constant(2);
  Harness h(fixture::small_base(), p);
  RandomState rng(17);
  RandomState replay = rng;
  const auto threshold = replay.next_int(0, 100);
  std::int64_t expected = 0;
  for (Oid oid : h.base.classes[2].iterator) expected += h.base.objects[oid].attributes[0] < threshold;
  const auto r = h.engine.execute(TransactionKind::kRangeLookup, rng);
  EXPECT_EQ(r.matches, expected);
  EXPECT_EQ(r.objects_accessed, static_cast<std::int64_t>(h.base.classes[2].iterator.size()));
}

TEST(Workload, KindFrequenciesFollowProbabilities) {
  Harness h(fixture::small_base());
  RandomState rng(kDefaultSeed);
  std::array<std::int64_t, kTransactionKindCount> counts{};
  const int n = 11000;
  for (int i = 0; i < n; ++i) ++counts[index_of(h.engine.draw_kind(rng))];
  for (auto kind : kAllTransactionKinds) {
    EXPECT_NEAR(static_cast<double>(counts[index_of(kind)]) / n,
                h.engine.params().probability(kind), 0.01)
        << to_string(kind);
  }
}

TEST(Workload, ReadOnlyKindsLeaveGraphUnchanged) {
  WorkloadParams p;
  p.reverse_fraction = 0.5;
  Harness h(fixture::small_base(), p);
  const auto before = h.base;
  RandomState rng(5);
  for (auto kind : kAllTransactionKinds) {
    if (!is_read_only(kind)) continue;
    for (int i = 0; i < 100; ++i) {
      const auto r = h.engine.execute(kind, rng);
      ASSERT_EQ(r.page_writes, 0);
    }
  }
  EXPECT_EQ(h.base, before);
}

TEST(Workload, ReverseFraction) {
  WorkloadParams p;
  Harness forward(fixture::small_base(), p);
  p.reverse_fraction = 1.0;
  Harness reverse(fixture::small_base(), p);
  RandomState rng(3);
  for (int i = 0; i < 50; ++i) {
    EXPECT_FALSE(forward.engine.execute(TransactionKind::kSetAccess, rng).reversed);
    EXPECT_TRUE(reverse.engine.execute(TransactionKind::kSetAccess, rng).reversed);
  }
}

TEST(Workload, EvolutionsKeepGraphConsistent) {
  WorkloadParams p;
  p.probabilities.fill(0.0);
  for (auto kind : {TransactionKind::kClassInsert, TransactionKind::kClassDelete,
                    TransactionKind::kObjectInsert, TransactionKind::kObjectDelete}) {
    p.probabilities[index_of(kind)] = 0.25;
  }
  Harness h(fixture::small_base(1000), p);
  RandomState rng(8);
  for (int i = 0; i < 300; ++i) h.engine.execute(h.engine.draw_kind(rng), rng);
  EXPECT_TRUE(oracle::backrefs_symmetric(h.base));
  EXPECT_EQ(oracle::dangling_references(h.base), 0);
  EXPECT_EQ(h.store.live_objects(), h.base.live_object_count());
  for (auto t : h.base.params.acyclic_types) EXPECT_TRUE(oracle::class_graph_is_acyclic(h.base, t));
}

TEST(Workload, ClassDeleteRemovesInstances) {
  WorkloadParams p;
  p.dist8 = Distribution::constant(4);
  Harness h(fixture::small_base(), p);
  const auto instances = static_cast<std::int64_t>(h.base.classes[4].iterator.size());
  const auto before = h.base.live_object_count();
  RandomState rng(1);
  const auto r = h.engine.execute(TransactionKind::kClassDelete, rng);
  EXPECT_EQ(r.class_id, 4);
  EXPECT_EQ(h.base.live_object_count(), before - instances);
  EXPECT_EQ(oracle::dangling_references(h.base), 0);
  for (const auto& cls : h.base.classes) {
    for (const auto& ref : cls.crefs) EXPECT_NE(ref.target, 4);
  }
}

TEST(Workload, DeletesOnEmptyBaseAreSkipped) {
  Harness h(fixture::small_base(20));
  RandomState rng(1);
  while (h.base.live_class_count() > 0) h.engine.execute(TransactionKind::kClassDelete, rng);
  EXPECT_TRUE(h.engine.execute(TransactionKind::kClassDelete, rng).skipped);
  EXPECT_TRUE(h.engine.execute(TransactionKind::kObjectDelete, rng).skipped);
  EXPECT_TRUE(h.engine.execute(TransactionKind::kObjectInsert, rng).skipped);
  EXPECT_TRUE(h.engine.execute(TransactionKind::kSetAccess, rng).skipped);
}

TEST(Workload, ObjectInsertAllocatesInStore) {
  Harness h(fixture::small_base());
  RandomState rng(2);
  const auto r = h.engine.execute(TransactionKind::kObjectInsert, rng);
  ASSERT_FALSE(r.skipped);
  EXPECT_EQ(r.root, 200);
  EXPECT_TRUE(h.store.contains(200));
  EXPECT_TRUE(oracle::backrefs_symmetric(h.base));
}

TEST(Workload, SequentialUpdateWritesEveryInstance) {
  WorkloadParams p;
  p.distB = Distribution::constant(1);
  Harness h(fixture::small_base(), p);
  const auto before = h.base;
  RandomState rng(2);
  const auto r = h.engine.execute(TransactionKind::kSequentialUpdate, rng);
  const auto& it = h.base.classes[1].iterator;
  EXPECT_EQ(r.objects_accessed, static_cast<std::int64_t>(it.size()));
  for (Oid oid : it) {
    EXPECT_EQ(h.base.objects[oid].attributes[0], (before.objects[oid].attributes[0] + 1) % 100);
  }
}

TEST(Workload, UpdatesCauseWriteBackUnderSmallBuffer) {
  Harness h(fixture::small_base(1000), only(TransactionKind::kRandomUpdate), 2);
  RandomState rng(2);
  std::int64_t writes = 0;
  for (int i = 0; i < 10; ++i) writes += h.engine.execute(TransactionKind::kRandomUpdate, rng).page_writes;
  EXPECT_GT(writes, 0);
  WorkloadParams p;
  p.nupdt = 0;
  Harness none(fixture::small_base(), p);
  EXPECT_EQ(none.engine.execute(TransactionKind::kRandomUpdate, rng).objects_accessed, 0);
}

RunConfig small_run() {
  RunConfig c;
  c.database.no = 2000;
  c.database.nc = 20;
  c.workload.coldn = 100;
  c.workload.hotn = 300;
  return c;
}

TEST(RunBenchmark, EmptyProtocol) {
  auto c = small_run();
  c.workload.coldn = 0;
  c.workload.hotn = 0;
  const auto report = run_benchmark(c);
  EXPECT_EQ(report.cold.global.count.mean, 0.0);
  EXPECT_EQ(report.warm.global.count.mean, 0.0);
}

TEST(RunBenchmark, CountsAndThinkTime) {
  auto c = small_run();
  c.workload.think = 0.5;
  const auto report = run_benchmark(c);
  const auto& run = report.runs.at(0);
  const auto cold = run.cold.global();
  const auto warm = run.warm.global();
  EXPECT_EQ(cold.count + cold.skipped, 100);
  EXPECT_EQ(warm.count + warm.skipped, 300);
  EXPECT_GE(run.warm.elapsed_seconds(), 150.0);
  EXPECT_LT(report.throughput.mean, 2.0 + 1e-9);
}

TEST(RunBenchmark, ReplicatesUseConsecutiveSeeds) {
  auto c = small_run();
  c.replicate = 3;
  const auto report = run_benchmark(c);
  ASSERT_EQ(report.runs.size(), 3u);
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(report.runs[r].seed, c.workload.rseed + r);
  EXPECT_TRUE(report.warm.global.page_reads.ci95.has_value());
}

TEST(RunBenchmark, WarmReadsNoMoreThanColdForReadOnlyMix) {
  auto c = small_run();
  c.workload.probabilities = {0.2, 0.1, 0.1, 0.2, 0.2, 0.1, 0.1, 0, 0, 0, 0, 0, 0};
  c.store.buffer_pages = 100000;
  const auto report = run_benchmark(c);
  EXPECT_LE(report.warm.global.page_reads.mean, report.cold.global.page_reads.mean);
}

TEST(RunBenchmark, TransactionTraceHasOneLinePerTransaction) {
  auto c = small_run();
  std::ostringstream tx, pages;
  run_benchmark(c, std::nullopt, RunOutputs{&pages, &tx});
  std::istringstream lines(tx.str());
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) ++n;
  EXPECT_EQ(n, 400);
  EXPECT_NE(pages.str().find("read"), std::string::npos);
}

TEST(RunBenchmark, HeatPolicyRecordsOverhead) {
  auto c = small_run();
  c.clustering.policy = ClusteringPolicyKind::kHeat;
  const auto report = run_benchmark(c);
  EXPECT_TRUE(report.runs[0].clustered);
  EXPECT_GT(report.clustering_page_ios.mean, 0.0);
}

TEST(RunBenchmark, InvalidProbabilitiesRejected) {
  auto c = small_run();
  c.workload.probabilities[0] += 0.01;
  EXPECT_THROW(run_benchmark(c), ConfigError);
}

}  // namespace
}  // namespace ocb
