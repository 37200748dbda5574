#include "ocb/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ocb/error.hpp"

namespace ocb {
namespace {

struct KindNames {
  std::string_view name;
  std::string_view probability;
};

constexpr std::array<KindNames, kTransactionKindCount> kKindNames = {{
    {"random_access", "prnd"},
    {"simple_scan", "pscan"},
    {"range_lookup", "prange"},
    {"set_access", "pset"},
    {"simple_traversal", "psimple"},
    {"hierarchy_traversal", "phier"},
    {"stochastic_traversal", "pstoch"},
    {"class_insert", "pcinsert"},
    {"class_delete", "pcdel"},
    {"object_insert", "poinsert"},
    {"object_delete", "podel"},
    {"random_update", "prndup"},
    {"sequential_update", "psequp"},
}};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

// Constant tables must stay inside [low, high]; uniform ranges too.
void check_values(const Distribution& dist, std::int64_t low, std::int64_t high,
                  const std::string& what) {
  if (dist.is_constant()) {
    for (const auto& run : dist.runs()) {
      require(run.value >= low && run.value <= high,
              what + ": constant value " + std::to_string(run.value) + " outside [" +
                  std::to_string(low) + ", " + std::to_string(high) + "]");
    }
  } else if (dist.range()) {
    require(dist.range()->first >= low && dist.range()->second <= high,
            what + ": uniform range outside [" + std::to_string(low) + ", " +
                std::to_string(high) + "]");
  }
}

void check_values(const SlotDistributions& dists, std::int64_t low, std::int64_t high,
                  const std::string& what) {
  check_values(dists.fallback, low, high, what);
  for (const auto& [cls, list] : dists.per_class) {
    require(cls >= 0, what + ": negative class id in override");
    for (const auto& d : list) check_values(d, low, high, what);
  }
}

}  // namespace

std::string_view to_string(TransactionKind kind) { return kKindNames[index_of(kind)].name; }

std::string_view probability_key(TransactionKind kind) {
  return kKindNames[index_of(kind)].probability;
}

std::optional<TransactionKind> parse_transaction_kind(std::string_view name) {
  for (auto kind : kAllTransactionKinds) {
    if (to_string(kind) == name || probability_key(kind) == name) return kind;
  }
  return std::nullopt;
}

bool is_traversal(TransactionKind kind) {
  switch (kind) {
    case TransactionKind::kSetAccess:
    case TransactionKind::kSimpleTraversal:
    case TransactionKind::kHierarchyTraversal:
    case TransactionKind::kStochasticTraversal:
      return true;
    default:
      return false;
  }
}

bool is_read_only(TransactionKind kind) {
  return index_of(kind) <= index_of(TransactionKind::kStochasticTraversal);
}

bool DatabaseParams::is_acyclic_type(std::int32_t tref) const {
  return std::find(acyclic_types.begin(), acyclic_types.end(), tref) != acyclic_types.end();
}

void validate(const DatabaseParams& p) {
  require(p.nc >= 1, "nc must be >= 1");
  require(p.no >= 0, "no must be >= 0");
  require(p.nreft >= 1, "nreft must be >= 1");
  require(p.attrange >= 1, "attrange must be >= 1");
  require(p.maxretry >= 0, "maxretry must be >= 0");
  require(!p.clocref || (*p.clocref >= 0 && *p.clocref <= p.nc), "clocref must lie in [0, nc]");
  require(!p.olocref || (*p.olocref >= 0 && *p.olocref <= p.no), "olocref must lie in [0, no]");
  require(p.pnil >= 0.0 && p.pnil <= 1.0, "pnil must lie in [0, 1]");

  require(p.maxnref.fallback >= 0, "maxnref must be >= 0");
  for (const auto& [cls, n] : p.maxnref.overrides) {
    require(cls >= 0 && n >= 0, "maxnref override must have class >= 0 and count >= 0");
  }
  require(p.basesize.fallback >= 0, "basesize must be >= 0");
  for (const auto& [cls, n] : p.basesize.overrides) {
    require(cls >= 0 && n >= 0, "basesize override must have class >= 0 and size >= 0");
  }

  for (auto t : p.acyclic_types) {
    require(t >= 0 && t < p.nreft, "acyclic reference type outside [0, nreft)");
  }
  require(!p.inheritance_type || (*p.inheritance_type >= 0 && *p.inheritance_type < p.nreft),
          "inheritance_type outside [0, nreft)");

  check_values(p.dist1, 0, p.nreft - 1, "dist1");
  check_values(p.dist2, kNilClass, p.nc - 1, "dist2");
  check_values(p.dist3, 0, p.nc - 1, "dist3");
  // dist4 constants are offsets into the candidate list; uniform ranges are indices.
  if (!p.dist4.fallback.is_constant() && p.dist4.fallback.range()) {
    require(p.dist4.fallback.range()->first >= 0, "dist4: uniform range must be >= 0");
  }
}

void validate(const WorkloadParams& p) {
  require(p.nrnd >= 0, "nrnd must be >= 0");
  require(p.ntest >= 0, "ntest must be >= 0");
  require(p.setdepth >= 0 && p.simdepth >= 0 && p.hiedepth >= 0 && p.stodepth >= 0,
          "traversal depths must be >= 0");
  require(p.nupdt >= 0, "nupdt must be >= 0");
  require(p.coldn >= 0 && p.hotn >= 0, "coldn and hotn must be >= 0");
  require(p.think >= 0.0, "think must be >= 0");
  require(p.clientn >= 1, "clientn must be >= 1");
  require(p.reverse_fraction >= 0.0 && p.reverse_fraction <= 1.0,
          "reverse_fraction must lie in [0, 1]");
  double sum = 0.0;
  for (auto kind : kAllTransactionKinds) {
    const double prob = p.probability(kind);
    require(std::isfinite(prob) && prob >= 0.0 && prob <= 1.0,
            std::string(probability_key(kind)) + " must lie in [0, 1]");
    sum += prob;
  }
  require(std::abs(sum - 1.0) <= kProbabilityTolerance,
          "occurrence probabilities sum to " + std::to_string(sum) + ", expected 1");
  for (const auto* d : {&p.dist5, &p.dist6, &p.dist7, &p.dist8, &p.dist9, &p.distA, &p.distB}) {
    if (d->is_constant()) {
      for (const auto& run : d->runs()) require(run.value >= 0, "constant OID/class id must be >= 0");
    }
  }
}

void validate(const StoreConfig& c) {
  require(c.page_size >= 1, "page_size must be >= 1");
  require(c.buffer_pages >= 1, "buffer_pages must be >= 1");
}

void validate(const ClusteringConfig& c) {
  require(c.threshold >= 1, "clustering.threshold must be >= 1");
  require(!c.max_cluster_bytes || *c.max_cluster_bytes >= 1,
          "clustering.max_cluster_bytes must be >= 1");
  require(c.window >= 0, "clustering.window must be >= 0");
}

}  // namespace ocb
