#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocb/prng.hpp"

namespace ocb {

using Oid = std::int64_t;
using ClassId = std::int32_t;

inline constexpr Oid kNilOid = -1;
inline constexpr ClassId kNilClass = -1;

// A per-class value: one default plus explicit overrides keyed by class id.
template <typename T>
struct PerClass {
  T fallback{};
  std::map<ClassId, T> overrides;

  PerClass() = default;
  PerClass(T value) : fallback(std::move(value)) {}  // NOLINT(google-explicit-constructor)

  const T& at(ClassId id) const {
    auto it = overrides.find(id);
    return it == overrides.end() ? fallback : it->second;
  }

  friend bool operator==(const PerClass&, const PerClass&) = default;
};

// Distribution per (class, slot). A class override is a per-slot list; slots
// past the end of a non-empty list fall back to the default.
struct SlotDistributions {
  Distribution fallback = Distribution::uniform();
  std::map<ClassId, std::vector<Distribution>> per_class;

  const Distribution& at(ClassId id, std::size_t slot) const {
    auto it = per_class.find(id);
    if (it == per_class.end() || slot >= it->second.size()) return fallback;
    return it->second[slot];
  }

  friend bool operator==(const SlotDistributions&, const SlotDistributions&) = default;
};

struct DatabaseParams {
  std::int32_t nc = 50;
  PerClass<std::int32_t> maxnref{10};
  PerClass<std::int64_t> basesize{50};
  std::int64_t no = 20000;
  std::int32_t nreft = 4;
  std::int32_t attrange = 1;
  std::optional<std::int32_t> clocref;  // unset means NC
  std::optional<std::int64_t> olocref;  // unset means NO
  std::int32_t maxretry = 3;
  SlotDistributions dist1;  // reference types
  SlotDistributions dist2;  // referenced classes; constant value -1 is NIL
  Distribution dist3 = Distribution::uniform();  // class of each object
  SlotDistributions dist4;  // referenced objects

  double pnil = 0.1;
  std::vector<std::int32_t> acyclic_types{0, 1};
  std::optional<std::int32_t> inheritance_type = 0;

  std::int32_t class_locality() const { return clocref.value_or(nc); }
  std::int64_t object_locality() const { return olocref.value_or(no); }
  bool is_acyclic_type(std::int32_t tref) const;

  friend bool operator==(const DatabaseParams&, const DatabaseParams&) = default;
};

enum class TransactionKind : std::uint8_t {
  kRandomAccess,
  kSimpleScan,
  kRangeLookup,
  kSetAccess,
  kSimpleTraversal,
  kHierarchyTraversal,
  kStochasticTraversal,
  kClassInsert,
  kClassDelete,
  kObjectInsert,
  kObjectDelete,
  kRandomUpdate,
  kSequentialUpdate,
};

inline constexpr std::size_t kTransactionKindCount = 13;

inline constexpr std::array<TransactionKind, kTransactionKindCount> kAllTransactionKinds = {
    TransactionKind::kRandomAccess,       TransactionKind::kSimpleScan,
    TransactionKind::kRangeLookup,        TransactionKind::kSetAccess,
    TransactionKind::kSimpleTraversal,    TransactionKind::kHierarchyTraversal,
    TransactionKind::kStochasticTraversal, TransactionKind::kClassInsert,
    TransactionKind::kClassDelete,        TransactionKind::kObjectInsert,
    TransactionKind::kObjectDelete,       TransactionKind::kRandomUpdate,
    TransactionKind::kSequentialUpdate,
};

std::string_view to_string(TransactionKind kind);
// Probability key used in configuration files ("prnd", "pscan", ...).
std::string_view probability_key(TransactionKind kind);
std::optional<TransactionKind> parse_transaction_kind(std::string_view name);

inline constexpr std::size_t index_of(TransactionKind kind) {
  return static_cast<std::size_t>(kind);
}

bool is_traversal(TransactionKind kind);
bool is_read_only(TransactionKind kind);

struct WorkloadParams {
  std::int64_t nrnd = 50;
  std::int32_t ntest = 1;
  std::int32_t setdepth = 3;
  std::int32_t simdepth = 3;
  std::int32_t hiedepth = 5;
  std::int32_t stodepth = 50;
  std::int64_t nupdt = 50;
  Distribution dist5 = Distribution::uniform();  // random access objects
  Distribution dist6 = Distribution::uniform();  // sequential scan classes
  Distribution dist7 = Distribution::uniform();  // transaction root objects
  Distribution dist8 = Distribution::uniform();  // schema evolution classes
  Distribution dist9 = Distribution::uniform();  // database evolution objects
  Distribution distA = Distribution::uniform();  // random update objects
  Distribution distB = Distribution::uniform();  // sequential update classes
  // Indexed by TransactionKind.
  std::array<double, kTransactionKindCount> probabilities = {
      0.1, 0.05, 0.05, 0.2, 0.2, 0.2, 0.1, 0.005, 0.005, 0.02, 0.02, 0.025, 0.025};
  std::int64_t coldn = 1000;
  std::int64_t hotn = 10000;
  double think = 0.0;  // seconds
  std::int32_t clientn = 1;
  std::uint64_t rseed = kDefaultSeed;
  double reverse_fraction = 0.0;

  double probability(TransactionKind kind) const { return probabilities[index_of(kind)]; }

  friend bool operator==(const WorkloadParams&, const WorkloadParams&) = default;
};

enum class ReplacementPolicy { kLru };

struct StoreConfig {
  std::int64_t page_size = 4096;
  std::int64_t buffer_pages = 1024;
  ReplacementPolicy replacement = ReplacementPolicy::kLru;

  friend bool operator==(const StoreConfig&, const StoreConfig&) = default;
};

enum class ClusteringPolicyKind { kNone, kHeat };

struct ClusteringConfig {
  ClusteringPolicyKind policy = ClusteringPolicyKind::kNone;
  std::int64_t threshold = 2;
  std::optional<std::int64_t> max_cluster_bytes;  // unset means 16 pages
  std::int64_t window = 100;

  std::int64_t cluster_bytes_for(const StoreConfig& store) const {
    return max_cluster_bytes.value_or(16 * store.page_size);
  }

  friend bool operator==(const ClusteringConfig&, const ClusteringConfig&) = default;
};

inline constexpr double kProbabilityTolerance = 1e-9;

// Each throws ConfigError describing the first violated constraint.
void validate(const DatabaseParams& params);
void validate(const WorkloadParams& params);
void validate(const StoreConfig& config);
void validate(const ClusteringConfig& config);

}  // namespace ocb
