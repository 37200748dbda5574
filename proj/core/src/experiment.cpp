#include "ocb/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include "ocb/clustering.hpp"
#include "ocb/error.hpp"
#include "ocb/store.hpp"
#include "ocb/workload.hpp"

namespace ocb {
namespace {

using Clock = std::chrono::steady_clock;

double gain(double pre, double post) {
  if (post == pre) return 1.0;
  if (post <= 0.0) return std::numeric_limits<double>::infinity();
  return pre / post;
}

WorkloadParams traversal_params(const ClusterExperimentOptions& options) {
  WorkloadParams p;
  p.hiedepth = options.hierarchy_depth;
  p.simdepth = options.simple_depth;
  return p;
}

// Every root `repeats` times, round after round, from one rng stream.
UsageSample run_series(ObjectBase& base, Store& store, ClusteringPolicy& policy,
                       const WorkloadParams& params, TransactionKind kind,
                       const std::vector<Oid>& roots, std::int32_t repeats, std::uint64_t seed) {
  WorkloadEngine engine(base, store, policy, params);
  RandomState rng(seed);
  std::int64_t reads = 0;
  double seconds = 0.0;
  std::int64_t n = 0;
  for (std::int32_t r = 0; r < repeats; ++r) {
    for (Oid root : roots) {
      const auto result = engine.traverse_from(kind, root, rng);
      reads += result.page_reads;
      seconds += result.seconds;
      ++n;
    }
  }
  if (n == 0) return {};
  return {static_cast<double>(reads) / static_cast<double>(n), seconds * 1e3 / static_cast<double>(n)};
}

std::string format_number(double value) {
  if (std::isinf(value)) return "inf";
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << value;
  return out.str();
}

nlohmann::json number_or_null(double value) {
  return std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr);
}

}  // namespace

std::vector<Oid> select_roots(const ObjectBase& base, std::int32_t count) {
  std::vector<Oid> roots;
  for (const auto& obj : base.objects) {
    if (static_cast<std::int32_t>(roots.size()) >= count) break;
    if (!obj.live) continue;
    if (std::any_of(obj.orefs.begin(), obj.orefs.end(), [](Oid r) { return r != kNilOid; })) {
      roots.push_back(obj.oid);
    }
  }
  return roots;
}

ClusterExperimentReport run_cluster_experiment(const ObjectBase& base, const StoreConfig& store,
                                               const ClusteringConfig& clustering,
                                               const ClusterExperimentOptions& options,
                                               std::uint64_t seed) {
  validate(store);
  validate(clustering);
  if (options.roots < 0 || options.repeats < 0) throw ConfigError("roots and repeats must be >= 0");
  // Traversals never mutate the base; the copy lets the engine take it by reference.
  ObjectBase work = base;
  const auto roots = select_roots(work, options.roots);
  const auto params = traversal_params(options);

  ClusterExperimentReport report;
  report.policy = make_policy(clustering, store)->name();
  report.base_pages = Store::place_initial(work, store).page_count();
  report.traversals_per_run = static_cast<std::int64_t>(roots.size()) * options.repeats;
  report.buffer_fractions = options.buffer_fractions;
  for (double fraction : options.buffer_fractions) {
    if (!(fraction > 0.0)) throw ConfigError("buffer fractions must be positive");
    report.buffer_pages.push_back(std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(fraction * static_cast<double>(report.base_pages)))));
  }

  const std::pair<TransactionKind, std::int32_t> kinds[] = {
      {TransactionKind::kHierarchyTraversal, options.hierarchy_depth},
      {TransactionKind::kSimpleTraversal, options.simple_depth}};
  for (const auto& [kind, depth] : kinds) {
    ExperimentColumn column;
    column.kind = kind;
    column.depth = depth;

    // Observation pass; the access pattern does not depend on the buffer.
    auto observer = make_policy(clustering, store);
    Store observed = Store::place_initial(work, store);
    run_series(work, observed, *observer, params, kind, roots, options.repeats, seed);
    const auto plan = observer->propose(work);
    if (plan) {
      const auto start = Clock::now();
      observed.apply_placement(*plan);
      column.overhead_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      column.overhead_page_ios = observed.stats().clustering_page_ios;
      column.clustered = true;
    }

    for (std::int64_t pages : report.buffer_pages) {
      StoreConfig sized = store;
      sized.buffer_pages = pages;
      NoClustering passive;
      ExperimentCell cell;
      Store before = Store::place_initial(work, sized);
      cell.pre = run_series(work, before, passive, params, kind, roots, options.repeats, seed);
      Store after = Store::place_initial(work, sized);
      if (plan) {
        after.apply_placement(*plan);
        cell.post = run_series(work, after, passive, params, kind, roots, options.repeats, seed);
      } else {
        cell.post = cell.pre;
      }
      cell.io_gain = gain(cell.pre.mean_page_reads, cell.post.mean_page_reads);
      cell.time_gain = gain(cell.pre.mean_ms, cell.post.mean_ms);
      column.cells.push_back(cell);
    }
    report.columns.push_back(std::move(column));
  }
  return report;
}

std::string format_table(const ClusterExperimentReport& report) {
  std::ostringstream out;
  out << "policy " << report.policy << ", base " << report.base_pages << " pages, "
      << report.traversals_per_run << " traversals per run\n";
  out << "mean page reads / mean response time (ms) per traversal\n\n";
  out << std::left << std::setw(26) << "";
  for (const auto& col : report.columns) {
    std::ostringstream head;
    head << (col.kind == TransactionKind::kHierarchyTraversal ? "Hierarchy" : "Simple")
         << " depth " << col.depth;
    out << std::setw(28) << head.str();
  }
  out << '\n';
  for (std::size_t b = 0; b < report.buffer_pages.size(); ++b) {
    std::ostringstream label;
    label << "buffer " << report.buffer_pages[b] << " pages ("
          << format_number(report.buffer_fractions[b] * 100.0) << "%)";
    out << label.str() << '\n';
    const char* rows[] = {"  Pre-clustering", "  Post-clustering", "  Gain factor"};
    for (int row = 0; row < 3; ++row) {
      out << std::setw(26) << rows[row];
      for (const auto& col : report.columns) {
        const auto& cell = col.cells[b];
        std::string text;
        if (row == 0) {
          text = format_number(cell.pre.mean_page_reads) + " / " + format_number(cell.pre.mean_ms);
        } else if (row == 1) {
          text = format_number(cell.post.mean_page_reads) + " / " + format_number(cell.post.mean_ms);
        } else {
          text = format_number(cell.io_gain) + " / " + format_number(cell.time_gain);
        }
        out << std::setw(28) << text;
      }
      out << '\n';
    }
  }
  out << std::setw(26) << "Clustering overhead";
  for (const auto& col : report.columns) {
    out << std::setw(28)
        << (std::to_string(col.overhead_page_ios) + " I/Os / " + format_number(col.overhead_ms) +
            " ms");
  }
  out << '\n';
  return out.str();
}

nlohmann::json to_json(const ClusterExperimentReport& report) {
  nlohmann::json columns = nlohmann::json::array();
  for (const auto& col : report.columns) {
    nlohmann::json cells = nlohmann::json::array();
    for (std::size_t b = 0; b < col.cells.size(); ++b) {
      const auto& c = col.cells[b];
      cells.push_back({{"buffer_pages", report.buffer_pages[b]},
                       {"buffer_fraction", report.buffer_fractions[b]},
                       {"pre", {{"page_reads", c.pre.mean_page_reads}, {"response_time_ms", c.pre.mean_ms}}},
                       {"post", {{"page_reads", c.post.mean_page_reads}, {"response_time_ms", c.post.mean_ms}}},
                       {"io_gain", number_or_null(c.io_gain)},
                       {"time_gain", number_or_null(c.time_gain)}});
    }
    columns.push_back({{"kind", to_string(col.kind)},
                       {"depth", col.depth},
                       {"clustered", col.clustered},
                       {"overhead", {{"page_ios", col.overhead_page_ios}, {"elapsed_ms", col.overhead_ms}}},
                       {"cells", std::move(cells)}});
  }
  return {{"schema_version", 1},
          {"policy", report.policy},
          {"base_pages", report.base_pages},
          {"traversals_per_run", report.traversals_per_run},
          {"columns", std::move(columns)}};
}

}  // namespace ocb
