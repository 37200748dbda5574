#include "ocb/workload.hpp"

#include <algorithm>
#include <chrono>

#include "ocb/error.hpp"
#include "ocb/generator.hpp"

namespace ocb {
namespace {

constexpr int kMaxRedraws = 64;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// First live id at or after `start`, wrapping around.
template <typename IsLive>
std::optional<std::int64_t> nearest_live(std::int64_t start, std::int64_t count, IsLive&& is_live) {
  if (count <= 0) return std::nullopt;
  start = ((start % count) + count) % count;
  for (std::int64_t i = 0; i < count; ++i) {
    const std::int64_t id = (start + i) % count;
    if (is_live(id)) return id;
  }
  return std::nullopt;
}

}  // namespace

WorkloadEngine::WorkloadEngine(ObjectBase& base, Store& store, ClusteringPolicy& policy,
                               WorkloadParams params)
    : base_(base), store_(store), policy_(policy), params_(std::move(params)) {
  validate(params_);
  double sum = 0.0;
  for (std::size_t i = 0; i < kTransactionKindCount; ++i) {
    sum += params_.probabilities[i];
    cumulative_[i] = sum;
  }
  observer_.visit = [this](Oid oid) { read(oid); };
  observer_.cross = [this](const AccessEvent& e) { policy_.observe(e); };
}

TransactionKind WorkloadEngine::draw_kind(RandomState& rng) const {
  const double u = rng.next_unit();
  std::size_t last = 0;
  for (std::size_t i = 0; i < kTransactionKindCount; ++i) {
    if (params_.probabilities[i] <= 0.0) continue;
    last = i;
    if (u < cumulative_[i]) return kAllTransactionKinds[i];
  }
  return kAllTransactionKinds[last];
}

void WorkloadEngine::read(Oid oid) {
  store_.read_object(oid);
  ++current_.objects_accessed;
}

void WorkloadEngine::write(Oid oid) {
  store_.write_object(oid);
  ++current_.objects_accessed;
}

void WorkloadEngine::remove(Oid oid) {
  for (Oid touched : base_.remove_object(oid)) {
    if (base_.is_live(touched)) write(touched);
  }
  store_.free_object(oid);
}

std::optional<Oid> WorkloadEngine::draw_object(const Distribution& dist, RandomState& rng) {
  if (base_.live_object_count() == 0) return std::nullopt;
  const Oid count = base_.next_oid();
  if (dist.is_constant()) {
    return nearest_live(dist.constant_at(constant_key_++), count,
                        [this](Oid id) { return base_.is_live(id); });
  }
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    const Oid oid = sample(dist, rng, 0, count - 1);
    if (base_.is_live(oid)) return oid;
  }
  const auto live = base_.live_oids();
  return live[static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(live.size()) - 1))];
}

std::optional<ClassId> WorkloadEngine::draw_class(const Distribution& dist, RandomState& rng) {
  if (base_.live_class_count() == 0) return std::nullopt;
  if (dist.is_constant()) {
    auto id = nearest_live(dist.constant_at(constant_key_++), base_.next_class_id(),
                           [this](std::int64_t c) { return base_.is_live_class(static_cast<ClassId>(c)); });
    if (!id) return std::nullopt;
    return static_cast<ClassId>(*id);
  }
  if (dist.range()) {
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
      const auto id = static_cast<ClassId>(sample(dist, rng));
      if (base_.is_live_class(id)) return id;
    }
  }
  const auto live = base_.live_class_ids();
  return live[static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(live.size()) - 1))];
}

std::int32_t WorkloadEngine::draw_hierarchy_type(RandomState& rng) const {
  const auto& acyclic = base_.params.acyclic_types;
  if (acyclic.empty()) return static_cast<std::int32_t>(rng.next_int(0, base_.params.nreft - 1));
  return acyclic[static_cast<std::size_t>(
      rng.next_int(0, static_cast<std::int64_t>(acyclic.size()) - 1))];
}

TransactionResult WorkloadEngine::execute(TransactionKind kind, RandomState& rng) {
  current_ = TransactionResult{};
  current_.kind = kind;
  const StoreStats before = store_.stats();
  const auto start = Clock::now();
  switch (kind) {
    case TransactionKind::kRandomAccess:
      random_access(rng);
      break;
    case TransactionKind::kSimpleScan:
      scan(rng, false);
      break;
    case TransactionKind::kRangeLookup:
      scan(rng, true);
      break;
    case TransactionKind::kSetAccess:
    case TransactionKind::kSimpleTraversal:
    case TransactionKind::kHierarchyTraversal:
    case TransactionKind::kStochasticTraversal:
      if (auto root = draw_object(params_.dist7, rng)) {
        traversal(kind, *root, rng);
      } else {
        current_.skipped = true;
      }
      break;
    case TransactionKind::kClassInsert:
      class_insert(rng);
      break;
    case TransactionKind::kClassDelete:
      class_delete(rng);
      break;
    case TransactionKind::kObjectInsert:
      object_insert(rng);
      break;
    case TransactionKind::kObjectDelete:
      object_delete(rng);
      break;
    case TransactionKind::kRandomUpdate:
      random_update(rng);
      break;
    case TransactionKind::kSequentialUpdate:
      sequential_update(rng);
      break;
  }
  current_.seconds = seconds_since(start);
  current_.page_reads = store_.stats().transaction_page_reads - before.transaction_page_reads;
  current_.page_writes = store_.stats().transaction_page_writes - before.transaction_page_writes;
  if (!current_.skipped) policy_.end_transaction();
  return current_;
}

TransactionResult WorkloadEngine::traverse_from(TransactionKind kind, Oid root, RandomState& rng) {
  if (!is_traversal(kind)) throw ConfigError(std::string(to_string(kind)) + " is not a traversal");
  base_.object(root);
  current_ = TransactionResult{};
  current_.kind = kind;
  const StoreStats before = store_.stats();
  const auto start = Clock::now();
  traversal(kind, root, rng);
  current_.seconds = seconds_since(start);
  current_.page_reads = store_.stats().transaction_page_reads - before.transaction_page_reads;
  current_.page_writes = store_.stats().transaction_page_writes - before.transaction_page_writes;
  policy_.end_transaction();
  return current_;
}

void WorkloadEngine::random_access(RandomState& rng) {
  if (base_.live_object_count() == 0) {
    current_.skipped = true;
    return;
  }
  for (std::int64_t i = 0; i < params_.nrnd; ++i) read(*draw_object(params_.dist5, rng));
}

void WorkloadEngine::scan(RandomState& rng, bool range) {
  const auto cls = draw_class(params_.dist6, rng);
  if (!cls) {
    current_.skipped = true;
    return;
  }
  current_.class_id = *cls;
  const auto threshold = range ? rng.next_int(0, kAttributeValueRange) : 0;
  const auto tests = static_cast<std::size_t>(std::min(params_.ntest, base_.params.attrange));
  for (Oid oid : base_.class_at(*cls).iterator) {
    read(oid);
    if (!range) continue;
    const auto& attrs = base_.objects[static_cast<std::size_t>(oid)].attributes;
    const auto n = std::min(tests, attrs.size());
    if (std::all_of(attrs.begin(), attrs.begin() + static_cast<std::ptrdiff_t>(n),
                    [threshold](std::int32_t a) { return a < threshold; })) {
      ++current_.matches;
    }
  }
}

void WorkloadEngine::traversal(TransactionKind kind, Oid root, RandomState& rng) {
  current_.root = root;
  current_.reversed = params_.reverse_fraction > 0.0 && rng.next_unit() < params_.reverse_fraction;
  const Direction dir = current_.reversed ? Direction::kReverse : Direction::kForward;
  policy_.observe_root(root);
  switch (kind) {
    case TransactionKind::kSetAccess:
      set_access(base_, root, params_.setdepth, dir, &observer_);
      break;
    case TransactionKind::kSimpleTraversal:
      simple_traversal(base_, root, params_.simdepth, dir, &observer_);
      break;
    case TransactionKind::kHierarchyTraversal:
      hierarchy_traversal(base_, root, draw_hierarchy_type(rng), params_.hiedepth, dir, &observer_);
      break;
    case TransactionKind::kStochasticTraversal:
      stochastic_traversal(base_, root, params_.stodepth, rng, dir, &observer_);
      break;
    default:
      break;
  }
}

void WorkloadEngine::class_insert(RandomState& rng) {
  current_.class_id = insert_class(base_, rng);
}

void WorkloadEngine::class_delete(RandomState& rng) {
  const auto cls = draw_class(params_.dist8, rng);
  if (!cls) {
    current_.skipped = true;
    return;
  }
  current_.class_id = *cls;
  const auto instances = base_.class_at(*cls).iterator;
  for (Oid oid : instances) remove(oid);
  base_.remove_class(*cls);
  compute_instance_sizes(base_);
}

void WorkloadEngine::object_insert(RandomState& rng) {
  const auto oid = insert_object(base_, rng);
  if (!oid) {
    current_.skipped = true;
    return;
  }
  current_.root = *oid;
  const auto& obj = base_.objects[static_cast<std::size_t>(*oid)];
  current_.class_id = obj.class_id;
  store_.allocate_object(*oid, obj.filler_size);
  write(*oid);
  std::vector<Oid> targets;
  for (Oid target : obj.orefs) {
    if (target != kNilOid && target != *oid) targets.push_back(target);
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  for (Oid target : targets) write(target);
}

void WorkloadEngine::object_delete(RandomState& rng) {
  const auto oid = draw_object(params_.dist9, rng);
  if (!oid) {
    current_.skipped = true;
    return;
  }
  current_.root = *oid;
  current_.class_id = base_.objects[static_cast<std::size_t>(*oid)].class_id;
  remove(*oid);
}

namespace {

void bump_attribute(ObjectInstance& obj) {
  if (obj.attributes.empty()) return;
  obj.attributes[0] = (obj.attributes[0] + 1) % kAttributeValueRange;
}

}  // namespace

void WorkloadEngine::random_update(RandomState& rng) {
  if (base_.live_object_count() == 0) {
    current_.skipped = true;
    return;
  }
  for (std::int64_t i = 0; i < params_.nupdt; ++i) {
    const Oid oid = *draw_object(params_.distA, rng);
    write(oid);
    bump_attribute(base_.objects[static_cast<std::size_t>(oid)]);
  }
}

void WorkloadEngine::sequential_update(RandomState& rng) {
  const auto cls = draw_class(params_.distB, rng);
  if (!cls) {
    current_.skipped = true;
    return;
  }
  current_.class_id = *cls;
  for (Oid oid : base_.class_at(*cls).iterator) {
    write(oid);
    bump_attribute(base_.objects[static_cast<std::size_t>(oid)]);
  }
}

ReplicateMetrics run_replicate(ObjectBase& base, const RunConfig& config, std::uint64_t seed,
                               const RunOutputs& outputs) {
  Store store = Store::place_initial(base, config.store);
  store.set_trace(outputs.page_trace);
  auto policy = make_policy(config.clustering, config.store);
  WorkloadEngine engine(base, store, *policy, config.workload);
  const auto& w = config.workload;

  std::vector<RandomState> clients;
  for (std::int32_t c = 0; c < w.clientn; ++c) {
    clients.emplace_back(derive_seed(seed, static_cast<std::uint64_t>(c)));
  }

  MetricsRecorder recorder(seed);
  std::int64_t index = 0;
  auto run_phase = [&](Phase phase, std::int64_t count) {
    recorder.begin_phase(phase);
    for (std::int64_t i = 0; i < count; ++i, ++index) {
      auto& rng = clients[static_cast<std::size_t>(index % w.clientn)];
      const auto result = engine.execute(engine.draw_kind(rng), rng);
      if (result.skipped) {
        recorder.record_skipped(result.kind);
      } else {
        recorder.record_transaction(result.kind, result.seconds, result.objects_accessed,
                                    result.page_reads, result.page_writes);
      }
      recorder.add_think(w.think);
      if (outputs.transaction_trace) {
        *outputs.transaction_trace << index << ' ' << to_string(phase) << ' '
                                   << index % w.clientn << ' ' << to_string(result.kind) << ' '
                                   << (result.skipped ? "skipped" : "done") << ' '
                                   << (result.reversed ? "reverse" : "forward") << ' ' << result.root
                                   << ' ' << result.class_id << ' ' << result.objects_accessed << ' '
                                   << result.page_reads << ' ' << result.page_writes << ' '
                                   << result.seconds << '\n';
      }
    }
  };

  run_phase(Phase::kCold, w.coldn);
  if (auto plan = policy->propose(base)) {
    const auto ios_before = store.stats().clustering_page_ios;
    const auto start = Clock::now();
    store.apply_placement(*plan);
    recorder.record_clustering(store.stats().clustering_page_ios - ios_before, seconds_since(start));
  }
  policy->reset();
  run_phase(Phase::kWarm, w.hotn);
  return recorder.take();
}

MetricsReport run_benchmark(const RunConfig& config, std::optional<ObjectBase> preloaded,
                            const RunOutputs& outputs) {
  validate(config);
  std::vector<ReplicateMetrics> runs;
  for (std::int32_t r = 0; r < config.replicate; ++r) {
    const std::uint64_t seed = config.workload.rseed + static_cast<std::uint64_t>(r);
    ObjectBase base = (r == 0 && preloaded) ? std::move(*preloaded)
                                            : generate_base(config.database, seed);
    runs.push_back(run_replicate(base, config, seed, outputs));
  }
  return finalize(std::move(runs), to_json(config));
}

}  // namespace ocb
