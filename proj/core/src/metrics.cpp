#include "ocb/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "ocb/error.hpp"

namespace ocb {
namespace {

constexpr std::array<std::string_view, 6> kTimingKeys = {
    "response_time", "elapsed_seconds", "throughput",
    "seconds",       "clustering_seconds", "think_seconds"};

template <typename Fn>
Estimate estimate_over(const std::vector<ReplicateMetrics>& runs, Fn&& fn) {
  std::vector<double> samples;
  samples.reserve(runs.size());
  for (const auto& run : runs) {
    if (auto value = fn(run)) samples.push_back(*value);
  }
  return estimate(samples);
}

std::optional<double> per_transaction(double total, std::int64_t count) {
  if (count == 0) return std::nullopt;
  return total / static_cast<double>(count);
}

KindSummary summarize(const std::vector<ReplicateMetrics>& runs, Phase phase,
                      std::optional<TransactionKind> kind) {
  auto totals = [phase, kind](const ReplicateMetrics& run) {
    const auto& p = run.phase(phase);
    return kind ? p.kinds[index_of(*kind)] : p.global();
  };
  KindSummary s;
  s.count = estimate_over(runs, [&](const ReplicateMetrics& r) {
    return std::optional<double>(static_cast<double>(totals(r).count));
  });
  s.response_time = estimate_over(runs, [&](const ReplicateMetrics& r) {
    const auto t = totals(r);
    return per_transaction(t.seconds, t.count);
  });
  s.objects_accessed = estimate_over(runs, [&](const ReplicateMetrics& r) {
    const auto t = totals(r);
    return per_transaction(static_cast<double>(t.objects_accessed), t.count);
  });
  s.page_reads = estimate_over(runs, [&](const ReplicateMetrics& r) {
    const auto t = totals(r);
    return per_transaction(static_cast<double>(t.page_reads), t.count);
  });
  s.page_writes = estimate_over(runs, [&](const ReplicateMetrics& r) {
    const auto t = totals(r);
    return per_transaction(static_cast<double>(t.page_writes), t.count);
  });
  return s;
}

PhaseSummary summarize_phase(const std::vector<ReplicateMetrics>& runs, Phase phase) {
  PhaseSummary s;
  for (auto kind : kAllTransactionKinds) s.kinds[index_of(kind)] = summarize(runs, phase, kind);
  s.global = summarize(runs, phase, std::nullopt);
  s.elapsed_seconds = estimate_over(runs, [phase](const ReplicateMetrics& r) {
    return std::optional<double>(r.phase(phase).elapsed_seconds());
  });
  return s;
}

nlohmann::json to_json(const Estimate& e) {
  nlohmann::json j = {{"mean", e.mean}, {"samples", e.samples}};
  j["ci95"] = e.ci95 ? nlohmann::json(*e.ci95) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const KindSummary& s) {
  return {{"count", to_json(s.count)},
          {"response_time", to_json(s.response_time)},
          {"objects_accessed", to_json(s.objects_accessed)},
          {"page_reads", to_json(s.page_reads)},
          {"page_writes", to_json(s.page_writes)}};
}

nlohmann::json to_json(const PhaseSummary& s) {
  nlohmann::json kinds = nlohmann::json::object();
  for (auto kind : kAllTransactionKinds) {
    kinds[std::string(to_string(kind))] = to_json(s.kinds[index_of(kind)]);
  }
  return {{"global", to_json(s.global)},
          {"kinds", std::move(kinds)},
          {"elapsed_seconds", to_json(s.elapsed_seconds)}};
}

nlohmann::json to_json(const KindTotals& t) {
  return {{"count", t.count},
          {"skipped", t.skipped},
          {"objects_accessed", t.objects_accessed},
          {"page_reads", t.page_reads},
          {"page_writes", t.page_writes},
          {"seconds", t.seconds}};
}

nlohmann::json to_json(const PhaseTotals& p) {
  nlohmann::json kinds = nlohmann::json::object();
  for (auto kind : kAllTransactionKinds) {
    kinds[std::string(to_string(kind))] = to_json(p.kinds[index_of(kind)]);
  }
  return {{"global", to_json(p.global())},
          {"kinds", std::move(kinds)},
          {"think_seconds", p.think_seconds}};
}

std::string format_double(double value) {
  std::ostringstream out;
  out << std::setprecision(17) << value;
  return out.str();
}

void strip_in_place(nlohmann::json& j) {
  if (j.is_object()) {
    for (auto key : kTimingKeys) j.erase(std::string(key));
    for (auto& [key, value] : j.items()) strip_in_place(value);
  } else if (j.is_array()) {
    for (auto& value : j) strip_in_place(value);
  }
}

}  // namespace

std::string_view to_string(Phase phase) { return phase == Phase::kCold ? "cold" : "warm"; }

KindTotals& KindTotals::operator+=(const KindTotals& other) {
  count += other.count;
  seconds += other.seconds;
  objects_accessed += other.objects_accessed;
  page_reads += other.page_reads;
  page_writes += other.page_writes;
  skipped += other.skipped;
  return *this;
}

KindTotals PhaseTotals::global() const {
  KindTotals total;
  for (const auto& k : kinds) total += k;
  return total;
}

double PhaseTotals::elapsed_seconds() const { return global().seconds + think_seconds; }

void MetricsRecorder::record_transaction(TransactionKind kind, double seconds,
                                         std::int64_t objects_accessed, std::int64_t page_reads,
                                         std::int64_t page_writes) {
  auto& k = metrics_.phase(phase_).kinds[index_of(kind)];
  ++k.count;
  k.seconds += seconds;
  k.objects_accessed += objects_accessed;
  k.page_reads += page_reads;
  k.page_writes += page_writes;
}

void MetricsRecorder::record_skipped(TransactionKind kind) {
  ++metrics_.phase(phase_).kinds[index_of(kind)].skipped;
}

void MetricsRecorder::add_think(double seconds) { metrics_.phase(phase_).think_seconds += seconds; }

void MetricsRecorder::record_clustering(std::int64_t page_ios, double seconds) {
  metrics_.clustered = true;
  metrics_.clustering_page_ios += page_ios;
  metrics_.clustering_seconds += seconds;
}

double student_t_quantile(double probability, double degrees_of_freedom) {
  boost::math::students_t dist(degrees_of_freedom);
  return boost::math::quantile(dist, probability);
}

Estimate estimate(const std::vector<double>& samples) {
  Estimate e;
  e.samples = samples.size();
  if (samples.empty()) return e;
  const double n = static_cast<double>(samples.size());
  e.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  if (samples.size() < 2) return e;
  double ss = 0.0;
  for (double x : samples) ss += (x - e.mean) * (x - e.mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  e.ci95 = student_t_quantile(0.975, n - 1.0) * sd / std::sqrt(n);
  return e;
}

MetricsReport finalize(std::vector<ReplicateMetrics> runs, nlohmann::json config) {
  if (runs.empty()) throw EmptyReportError("no replicates to summarize");
  MetricsReport report;
  report.replicates = runs.size();
  report.seed = runs.front().seed;
  report.params_hash = fnv1a_hex(config.dump());
  report.config = std::move(config);
  report.cold = summarize_phase(runs, Phase::kCold);
  report.warm = summarize_phase(runs, Phase::kWarm);
  report.throughput = estimate_over(runs, [](const ReplicateMetrics& r) -> std::optional<double> {
    const double elapsed = r.warm.elapsed_seconds();
    if (elapsed <= 0.0) return std::nullopt;
    return static_cast<double>(r.warm.global().count) / elapsed;
  });
  report.clustering_page_ios = estimate_over(runs, [](const ReplicateMetrics& r) {
    return std::optional<double>(static_cast<double>(r.clustering_page_ios));
  });
  report.clustering_seconds = estimate_over(runs, [](const ReplicateMetrics& r) {
    return std::optional<double>(r.clustering_seconds);
  });
  report.runs = std::move(runs);
  return report;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

nlohmann::json to_json(const MetricsReport& report) {
  nlohmann::json runs = nlohmann::json::array();
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    const auto& r = report.runs[i];
    runs.push_back({{"replicate", i},
                    {"seed", r.seed},
                    {"cold", to_json(r.cold)},
                    {"warm", to_json(r.warm)},
                    {"clustered", r.clustered},
                    {"clustering_page_ios", r.clustering_page_ios},
                    {"clustering_seconds", r.clustering_seconds}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"replicates", report.replicates},
          {"seed", report.seed},
          {"params_hash", report.params_hash},
          {"config", report.config},
          {"phases", {{"cold", to_json(report.cold)}, {"warm", to_json(report.warm)}}},
          {"throughput", to_json(report.throughput)},
          {"clustering_overhead",
           {{"page_ios", to_json(report.clustering_page_ios)},
            {"clustering_seconds", to_json(report.clustering_seconds)}}},
          {"runs", std::move(runs)}};
}

std::string to_csv(const MetricsReport& report) {
  std::ostringstream out;
  out << "replicate,seed,phase,kind,count,skipped,objects_accessed,page_reads,page_writes,"
         "total_seconds,mean_response_seconds\n";
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    const auto& r = report.runs[i];
    for (auto phase : {Phase::kCold, Phase::kWarm}) {
      for (auto kind : kAllTransactionKinds) {
        const auto& k = r.phase(phase).kinds[index_of(kind)];
        out << i << ',' << r.seed << ',' << to_string(phase) << ',' << to_string(kind) << ','
            << k.count << ',' << k.skipped << ',' << k.objects_accessed << ',' << k.page_reads
            << ',' << k.page_writes << ',' << format_double(k.seconds) << ','
            << (k.count ? format_double(k.seconds / static_cast<double>(k.count)) : "") << '\n';
      }
    }
  }
  return out.str();
}

nlohmann::json strip_timing(nlohmann::json report) {
  strip_in_place(report);
  return report;
}

}  // namespace ocb
