#include "ocb/clustering.hpp"

#include <algorithm>
#include <vector>

namespace ocb {

std::int64_t AccessStats::heat(Oid source, std::uint32_t slot) const {
  auto it = edge_heat.find({source, slot});
  return it == edge_heat.end() ? 0 : it->second;
}

void observe_access(AccessStats& stats, const AccessEvent& event) {
  ++stats.edge_heat[{event.source, event.slot}];
  ++stats.object_heat[event.source];
}

void observe_object(AccessStats& stats, Oid oid) { ++stats.object_heat[oid]; }

std::optional<PlacementPlan> propose_placement(const AccessStats& stats, const ObjectBase& base,
                                               const HeatPolicyParams& params) {
  if (stats.empty() || stats.window < params.min_window) return std::nullopt;
  const bool any_hot = std::any_of(stats.edge_heat.begin(), stats.edge_heat.end(),
                                   [&](const auto& e) { return e.second >= params.threshold; });
  if (!any_hot) return std::nullopt;

  std::vector<std::pair<Oid, std::int64_t>> seeds;
  for (const auto& [oid, heat] : stats.object_heat) {
    if (base.is_live(oid)) seeds.emplace_back(oid, heat);
  }
  std::stable_sort(seeds.begin(), seeds.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<char> placed(base.objects.size(), 0);
  PlacementPlan plan;
  plan.ordering.reserve(static_cast<std::size_t>(base.live_object_count()));

  struct HotEdge {
    std::int64_t heat;
    std::uint32_t slot;
    Oid target;
  };
  std::vector<HotEdge> edges;
  std::vector<Oid> stack;

  for (const auto& entry : seeds) {
    const Oid seed = entry.first;
    if (placed[static_cast<std::size_t>(seed)]) continue;
    std::int64_t bytes = 0;
    stack.assign(1, seed);
    while (!stack.empty()) {
      const Oid current = stack.back();
      stack.pop_back();
      if (placed[static_cast<std::size_t>(current)]) continue;
      const auto& obj = base.objects[static_cast<std::size_t>(current)];
      if (current != seed && bytes + obj.filler_size > params.max_cluster_bytes) continue;
      placed[static_cast<std::size_t>(current)] = 1;
      plan.ordering.push_back(current);
      bytes += obj.filler_size;

      edges.clear();
      for (std::uint32_t slot = 0; slot < obj.orefs.size(); ++slot) {
        const Oid target = obj.orefs[slot];
        if (target == kNilOid || placed[static_cast<std::size_t>(target)]) continue;
        const auto h = stats.heat(current, slot);
        if (h >= params.threshold) edges.push_back({h, slot, target});
      }
      std::stable_sort(edges.begin(), edges.end(),
                       [](const HotEdge& a, const HotEdge& b) { return a.heat > b.heat; });
      // Push coldest first so the hottest edge is expanded next.
      for (auto it = edges.rbegin(); it != edges.rend(); ++it) stack.push_back(it->target);
    }
  }

  for (const auto& obj : base.objects) {
    if (obj.live && !placed[static_cast<std::size_t>(obj.oid)]) plan.ordering.push_back(obj.oid);
  }
  return plan;
}

std::unique_ptr<ClusteringPolicy> make_policy(const ClusteringConfig& config,
                                              const StoreConfig& store) {
  if (config.policy == ClusteringPolicyKind::kNone) return std::make_unique<NoClustering>();
  return std::make_unique<HeatClustering>(
      HeatPolicyParams{config.threshold, config.cluster_bytes_for(store), config.window});
}

}  // namespace ocb
