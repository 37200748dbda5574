#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocb/object_base.hpp"
#include "ocb/params.hpp"

namespace ocb {

struct ClusterExperimentOptions {
  std::int32_t roots = 100;
  std::int32_t repeats = 10;
  std::int32_t hierarchy_depth = 3;
  std::int32_t simple_depth = 2;
  // Buffer sizes evaluated, as fractions of the base's page count.
  std::vector<double> buffer_fractions = {1.0, 0.1};
};

struct UsageSample {
  double mean_page_reads = 0.0;  // per traversal
  double mean_ms = 0.0;          // per traversal
};

struct ExperimentCell {
  UsageSample pre;
  UsageSample post;
  double io_gain = 1.0;  // pre / post page reads
  double time_gain = 1.0;
};

// One traversal kind: its plan is computed once and evaluated at every
// buffer size.
struct ExperimentColumn {
  TransactionKind kind = TransactionKind::kHierarchyTraversal;
  std::int32_t depth = 0;
  bool clustered = false;
  std::int64_t overhead_page_ios = 0;
  double overhead_ms = 0.0;
  std::vector<ExperimentCell> cells;  // aligned with ClusterExperimentReport::buffer_pages
};

struct ClusterExperimentReport {
  std::string policy;
  std::int64_t base_pages = 0;
  std::int64_t traversals_per_run = 0;
  std::vector<double> buffer_fractions;
  std::vector<std::int64_t> buffer_pages;
  std::vector<ExperimentColumn> columns;
};

// The `count` lowest live OIDs that have at least one non-NIL reference.
std::vector<Oid> select_roots(const ObjectBase& base, std::int32_t count);

// For hierarchy and simple traversals: run every root `repeats` times on a
// cold store in initial placement while the policy observes, apply its plan,
// and rerun the identical sequence on a cold store. Repeated per buffer size.
ClusterExperimentReport run_cluster_experiment(const ObjectBase& base, const StoreConfig& store,
                                               const ClusteringConfig& clustering,
                                               const ClusterExperimentOptions& options,
                                               std::uint64_t seed);

std::string format_table(const ClusterExperimentReport& report);
nlohmann::json to_json(const ClusterExperimentReport& report);

}  // namespace ocb
