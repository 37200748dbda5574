#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>

#include "ocb/clustering.hpp"
#include "ocb/config.hpp"
#include "ocb/metrics.hpp"
#include "ocb/object_base.hpp"
#include "ocb/store.hpp"
#include "ocb/traversal.hpp"

namespace ocb {

struct TransactionResult {
  TransactionKind kind = TransactionKind::kRandomAccess;
  bool skipped = false;
  bool reversed = false;
  Oid root = kNilOid;           // traversal root, or the object inserted/deleted
  ClassId class_id = kNilClass;  // scanned, inserted or deleted class
  std::int64_t objects_accessed = 0;
  std::int64_t matches = 0;  // range lookup only
  std::int64_t page_reads = 0;
  std::int64_t page_writes = 0;
  double seconds = 0.0;
};

// Executes OCB transactions against one base and store. Every object read or
// written goes through the store; traversal edges are reported to the policy.
class WorkloadEngine {
 public:
  WorkloadEngine(ObjectBase& base, Store& store, ClusteringPolicy& policy, WorkloadParams params);

  const WorkloadParams& params() const noexcept { return params_; }

  // One PRNG draw against the cumulative probability table.
  TransactionKind draw_kind(RandomState& rng) const;

  TransactionResult execute(TransactionKind kind, RandomState& rng);
  // Traversal of the given kind from a caller-chosen root.
  TransactionResult traverse_from(TransactionKind kind, Oid root, RandomState& rng);

 private:
  void read(Oid oid);
  void write(Oid oid);
  void remove(Oid oid);

  std::optional<Oid> draw_object(const Distribution& dist, RandomState& rng);
  std::optional<ClassId> draw_class(const Distribution& dist, RandomState& rng);
  std::int32_t draw_hierarchy_type(RandomState& rng) const;

  void random_access(RandomState& rng);
  void scan(RandomState& rng, bool range);
  void traversal(TransactionKind kind, Oid root, RandomState& rng);
  void class_insert(RandomState& rng);
  void class_delete(RandomState& rng);
  void object_insert(RandomState& rng);
  void object_delete(RandomState& rng);
  void random_update(RandomState& rng);
  void sequential_update(RandomState& rng);

  ObjectBase& base_;
  Store& store_;
  ClusteringPolicy& policy_;
  WorkloadParams params_;
  std::array<double, kTransactionKindCount> cumulative_{};
  std::uint64_t constant_key_ = 0;
  TransactionResult current_;
  TraversalObserver observer_;
};

struct RunOutputs {
  std::ostream* page_trace = nullptr;
  std::ostream* transaction_trace = nullptr;
};

// Cold run, optional clustering, warm run on one base. The policy observes
// the cold run; a plan it proposes is applied before the warm run and its
// I/Os are recorded as clustering overhead.
ReplicateMetrics run_replicate(ObjectBase& base, const RunConfig& config, std::uint64_t seed,
                               const RunOutputs& outputs = {});

// Whole protocol: config.replicate runs on bases generated from rseed, rseed+1, ...
// A preloaded base replaces the first generated one.
MetricsReport run_benchmark(const RunConfig& config, std::optional<ObjectBase> preloaded = {},
                            const RunOutputs& outputs = {});

}  // namespace ocb
