#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>

#include "ocb/object_base.hpp"
#include "ocb/params.hpp"
#include "ocb/store.hpp"

namespace ocb {

// One reference crossing: `source`'s slot `slot` led to `target`.
struct AccessEvent {
  Oid source = kNilOid;
  std::uint32_t slot = 0;
  Oid target = kNilOid;
};

struct AccessStats {
  std::map<std::pair<Oid, std::uint32_t>, std::int64_t> edge_heat;
  std::map<Oid, std::int64_t> object_heat;
  std::int64_t window = 0;  // transactions observed since the last reset

  bool empty() const noexcept { return edge_heat.empty() && object_heat.empty(); }
  std::int64_t heat(Oid source, std::uint32_t slot) const;
};

// Edge crossing: the edge and the object it departs from both heat up.
void observe_access(AccessStats& stats, const AccessEvent& event);
// Direct access to an object (e.g. a traversal root).
void observe_object(AccessStats& stats, Oid oid);

struct HeatPolicyParams {
  std::int64_t threshold = 2;           // minimum edge heat followed when growing clusters
  std::int64_t max_cluster_bytes = 16 * 4096;
  std::int64_t min_window = 100;        // transactions required before proposing
};

// Reference-heat placement. Seeds are objects by descending heat (ties by
// OID); each seed grows a cluster depth-first over edges whose heat reaches
// the threshold, hottest edge first, until max_cluster_bytes. The plan is the
// clusters in order followed by every remaining live object in OID order.
// Returns nullopt when the window is too short or no edge is hot.
std::optional<PlacementPlan> propose_placement(const AccessStats& stats, const ObjectBase& base,
                                               const HeatPolicyParams& params);

class ClusteringPolicy {
 public:
  virtual ~ClusteringPolicy() = default;

  virtual void observe(const AccessEvent& event) = 0;
  virtual void observe_root(Oid oid) = 0;
  virtual void end_transaction() = 0;
  virtual std::optional<PlacementPlan> propose(const ObjectBase& base) = 0;
  // Opens a new observation window.
  virtual void reset() = 0;
  virtual const char* name() const noexcept = 0;
};

class NoClustering final : public ClusteringPolicy {
 public:
  void observe(const AccessEvent&) override {}
  void observe_root(Oid) override {}
  void end_transaction() override {}
  std::optional<PlacementPlan> propose(const ObjectBase&) override { return std::nullopt; }
  void reset() override {}
  const char* name() const noexcept override { return "none"; }
};

class HeatClustering final : public ClusteringPolicy {
 public:
  explicit HeatClustering(HeatPolicyParams params) : params_(params) {}

  void observe(const AccessEvent& event) override { observe_access(stats_, event); }
  void observe_root(Oid oid) override { observe_object(stats_, oid); }
  void end_transaction() override { ++stats_.window; }
  std::optional<PlacementPlan> propose(const ObjectBase& base) override {
    return propose_placement(stats_, base, params_);
  }
  void reset() override { stats_ = {}; }
  const char* name() const noexcept override { return "heat"; }

  const AccessStats& stats() const noexcept { return stats_; }
  const HeatPolicyParams& params() const noexcept { return params_; }

 private:
  HeatPolicyParams params_;
  AccessStats stats_;
};

std::unique_ptr<ClusteringPolicy> make_policy(const ClusteringConfig& config,
                                              const StoreConfig& store);

}  // namespace ocb
