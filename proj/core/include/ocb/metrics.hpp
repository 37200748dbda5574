#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocb/params.hpp"

namespace ocb {

inline constexpr int kReportSchemaVersion = 1;

enum class Phase { kCold, kWarm };

std::string_view to_string(Phase phase);

struct KindTotals {
  std::int64_t count = 0;
  double seconds = 0.0;
  std::int64_t objects_accessed = 0;
  std::int64_t page_reads = 0;
  std::int64_t page_writes = 0;
  std::int64_t skipped = 0;

  KindTotals& operator+=(const KindTotals& other);
  friend bool operator==(const KindTotals&, const KindTotals&) = default;
};

struct PhaseTotals {
  std::array<KindTotals, kTransactionKindCount> kinds{};
  double think_seconds = 0.0;  // simulated think time added to the phase clock

  KindTotals global() const;
  // Sum of transaction durations plus think time.
  double elapsed_seconds() const;
};

// Raw counters of one replicate.
struct ReplicateMetrics {
  std::uint64_t seed = 0;
  PhaseTotals cold;
  PhaseTotals warm;
  bool clustered = false;
  std::int64_t clustering_page_ios = 0;
  double clustering_seconds = 0.0;

  const PhaseTotals& phase(Phase p) const { return p == Phase::kCold ? cold : warm; }
  PhaseTotals& phase(Phase p) { return p == Phase::kCold ? cold : warm; }
};

class MetricsRecorder {
 public:
  explicit MetricsRecorder(std::uint64_t seed) { metrics_.seed = seed; }

  void begin_phase(Phase phase) { phase_ = phase; }
  Phase phase() const noexcept { return phase_; }

  void record_transaction(TransactionKind kind, double seconds, std::int64_t objects_accessed,
                          std::int64_t page_reads, std::int64_t page_writes);
  void record_skipped(TransactionKind kind);
  void add_think(double seconds);
  void record_clustering(std::int64_t page_ios, double seconds);

  const ReplicateMetrics& metrics() const noexcept { return metrics_; }
  ReplicateMetrics take() { return std::move(metrics_); }

 private:
  Phase phase_ = Phase::kCold;
  ReplicateMetrics metrics_;
};

// Mean across replicates with a two-sided 95% Student-t interval
// (n - 1 degrees of freedom). The half-width is absent below two samples.
struct Estimate {
  double mean = 0.0;
  std::optional<double> ci95;
  std::size_t samples = 0;
};

Estimate estimate(const std::vector<double>& samples);
double student_t_quantile(double probability, double degrees_of_freedom);

struct KindSummary {
  Estimate count;
  Estimate response_time;  // seconds per transaction
  Estimate objects_accessed;  // per transaction
  Estimate page_reads;
  Estimate page_writes;
};

struct PhaseSummary {
  std::array<KindSummary, kTransactionKindCount> kinds{};
  KindSummary global;
  Estimate elapsed_seconds;
};

struct MetricsReport {
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::string params_hash;
  nlohmann::json config;
  PhaseSummary cold;
  PhaseSummary warm;
  Estimate throughput;  // warm transactions per second
  Estimate clustering_page_ios;
  Estimate clustering_seconds;
  std::vector<ReplicateMetrics> runs;
};

// Throws EmptyReportError when `runs` is empty.
MetricsReport finalize(std::vector<ReplicateMetrics> runs, nlohmann::json config);

// 64-bit FNV-1a of the text, as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

nlohmann::json to_json(const MetricsReport& report);
// One row per replicate, phase and transaction kind.
std::string to_csv(const MetricsReport& report);

// Drops every wall-clock derived field so reports can be compared exactly.
nlohmann::json strip_timing(nlohmann::json report);

}  // namespace ocb
