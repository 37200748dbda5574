// ocb: generate object bases, run the OCB workload, compare clustering.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ocb/config.hpp"
#include "ocb/error.hpp"
#include "ocb/experiment.hpp"
#include "ocb/generator.hpp"
#include "ocb/metrics.hpp"
#include "ocb/presets.hpp"
#include "ocb/snapshot.hpp"
#include "ocb/workload.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Flag values; unset flags leave the layered configuration alone.
struct Overrides {
  std::optional<std::string> config_file;
  std::optional<std::string> preset;
  std::optional<std::string> preset_file;

  std::optional<std::int32_t> nc, maxnref, nreft, attrange, clocref, maxretry;
  std::optional<std::int64_t> basesize, no, olocref;
  std::optional<double> pnil;

  std::optional<std::int64_t> nrnd, nupdt, coldn, hotn;
  std::optional<std::int32_t> ntest, setdepth, simdepth, hiedepth, stodepth, clientn;
  std::optional<double> think, reverse_fraction;
  std::optional<std::uint64_t> rseed;

  std::optional<std::int64_t> page_size, buffer_pages;
  std::optional<std::string> policy;
  std::optional<std::int64_t> threshold, max_cluster_bytes, window;

  std::optional<std::int32_t> replicate;
  std::optional<std::string> out, base, trace, transaction_trace;
};

void add_config_flags(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config_file, "JSON configuration file")->check(CLI::ExistingFile);
  cmd.add_option("--preset", o.preset, "built-in preset (see `ocb presets list`)");
  cmd.add_option("--preset-file", o.preset_file, "preset JSON file")->check(CLI::ExistingFile);

  auto* db = "Database";
  cmd.add_option("--nc", o.nc, "number of classes")->group(db);
  cmd.add_option("--maxnref", o.maxnref, "references per class")->group(db);
  cmd.add_option("--basesize", o.basesize, "instance base size in bytes")->group(db);
  cmd.add_option("--no", o.no, "number of objects")->group(db);
  cmd.add_option("--nreft", o.nreft, "number of reference types")->group(db);
  cmd.add_option("--attrange", o.attrange, "attributes per object")->group(db);
  cmd.add_option("--clocref", o.clocref, "class locality of reference")->group(db);
  cmd.add_option("--olocref", o.olocref, "object locality of reference")->group(db);
  cmd.add_option("--maxretry", o.maxretry, "redraws before a reference is left NIL")->group(db);
  cmd.add_option("--pnil", o.pnil, "probability of a NIL class reference")->group(db);

  auto* wl = "Workload";
  cmd.add_option("--nrnd", o.nrnd, "objects per random access")->group(wl);
  cmd.add_option("--ntest", o.ntest, "attributes tested per range lookup")->group(wl);
  cmd.add_option("--setdepth", o.setdepth, "set access depth")->group(wl);
  cmd.add_option("--simdepth", o.simdepth, "simple traversal depth")->group(wl);
  cmd.add_option("--hiedepth", o.hiedepth, "hierarchy traversal depth")->group(wl);
  cmd.add_option("--stodepth", o.stodepth, "stochastic traversal depth")->group(wl);
  cmd.add_option("--nupdt", o.nupdt, "objects per random update")->group(wl);
  cmd.add_option("--coldn", o.coldn, "cold run transactions")->group(wl);
  cmd.add_option("--hotn", o.hotn, "warm run transactions")->group(wl);
  cmd.add_option("--think", o.think, "think time in seconds")->group(wl);
  cmd.add_option("--clientn", o.clientn, "client streams")->group(wl);
  cmd.add_option("--rseed,--seed", o.rseed, "random seed")->group(wl);
  cmd.add_option("--reverse-fraction", o.reverse_fraction, "share of reversed traversals")
      ->group(wl);

  auto* st = "Store";
  cmd.add_option("--page-size", o.page_size, "page size in bytes")->group(st);
  cmd.add_option("--buffer-pages", o.buffer_pages, "buffer pool size in pages")->group(st);
  cmd.add_option("--policy", o.policy, "clustering policy")
      ->check(CLI::IsMember({"none", "heat"}))
      ->group(st);
  cmd.add_option("--threshold", o.threshold, "minimum edge heat")->group(st);
  cmd.add_option("--max-cluster-bytes", o.max_cluster_bytes, "cluster size cap")->group(st);
  cmd.add_option("--window", o.window, "transactions observed before clustering")->group(st);
}

template <typename T, typename U>
void set_if(const std::optional<T>& flag, U& field) {
  if (flag) field = *flag;
}

ocb::RunConfig build_config(const Overrides& o,
                            std::optional<ocb::ClusteringPolicyKind> default_policy = {}) {
  ocb::RunConfig config;
  if (o.preset_file) {
    config = ocb::load_preset_file(*o.preset_file).config;
  } else if (o.preset) {
    config = ocb::load_preset(*o.preset).config;
  }
  if (default_policy) config.clustering.policy = *default_policy;
  if (o.config_file) ocb::apply_config_file(*o.config_file, config);

  auto& d = config.database;
  set_if(o.nc, d.nc);
  if (o.maxnref) d.maxnref = ocb::PerClass<std::int32_t>(*o.maxnref);
  if (o.basesize) d.basesize = ocb::PerClass<std::int64_t>(*o.basesize);
  set_if(o.no, d.no);
  set_if(o.nreft, d.nreft);
  set_if(o.attrange, d.attrange);
  if (o.clocref) d.clocref = *o.clocref;
  if (o.olocref) d.olocref = *o.olocref;
  set_if(o.maxretry, d.maxretry);
  set_if(o.pnil, d.pnil);

  auto& w = config.workload;
  set_if(o.nrnd, w.nrnd);
  set_if(o.ntest, w.ntest);
  set_if(o.setdepth, w.setdepth);
  set_if(o.simdepth, w.simdepth);
  set_if(o.hiedepth, w.hiedepth);
  set_if(o.stodepth, w.stodepth);
  set_if(o.nupdt, w.nupdt);
  set_if(o.coldn, w.coldn);
  set_if(o.hotn, w.hotn);
  set_if(o.think, w.think);
  set_if(o.clientn, w.clientn);
  set_if(o.rseed, w.rseed);
  set_if(o.reverse_fraction, w.reverse_fraction);

  set_if(o.page_size, config.store.page_size);
  set_if(o.buffer_pages, config.store.buffer_pages);
  if (o.policy) {
    config.clustering.policy =
        *o.policy == "heat" ? ocb::ClusteringPolicyKind::kHeat : ocb::ClusteringPolicyKind::kNone;
  }
  set_if(o.threshold, config.clustering.threshold);
  if (o.max_cluster_bytes) config.clustering.max_cluster_bytes = *o.max_cluster_bytes;
  set_if(o.window, config.clustering.window);

  set_if(o.replicate, config.replicate);
  if (o.out) config.output_dir = *o.out;
  if (o.base) config.base_path = *o.base;
  if (o.trace) config.trace_path = *o.trace;
  if (o.transaction_trace) config.transaction_trace = *o.transaction_trace;

  ocb::validate(config);
  return config;
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ocb::Error("cannot write " + path.string());
  out << text;
  if (!out) throw ocb::Error("write failed: " + path.string());
}

std::unique_ptr<std::ofstream> open_trace(const std::optional<std::filesystem::path>& path) {
  if (!path) return nullptr;
  if (path->has_parent_path()) std::filesystem::create_directories(path->parent_path());
  auto out = std::make_unique<std::ofstream>(*path);
  if (!*out) throw ocb::Error("cannot write " + path->string());
  return out;
}

ocb::ObjectBase obtain_base(ocb::RunConfig& config) {
  if (config.base_path) {
    auto base = ocb::load_base(*config.base_path);
    config.database = base.params;
    return base;
  }
  return ocb::generate_base(config.database, config.workload.rseed);
}

void print_structure(const ocb::ObjectBase& base, double seconds) {
  std::map<std::int32_t, std::int64_t> edges;
  for (const auto& obj : base.objects) {
    if (!obj.live) continue;
    const auto& crefs = base.classes[static_cast<std::size_t>(obj.class_id)].crefs;
    for (std::size_t k = 0; k < obj.orefs.size(); ++k) {
      if (obj.orefs[k] != ocb::kNilOid) ++edges[crefs[k].tref];
    }
  }
  std::printf("classes          %lld\n", static_cast<long long>(base.live_class_count()));
  std::printf("objects          %lld\n", static_cast<long long>(base.live_object_count()));
  std::printf("total bytes      %lld\n", static_cast<long long>(base.total_bytes()));
  for (std::int32_t t = 0; t < base.params.nreft; ++t) {
    std::printf("edges type %-5d %lld\n", t, static_cast<long long>(edges[t]));
  }
  std::printf("generation time  %.3f s\n", seconds);
}

int cmd_generate(ocb::RunConfig config, const std::string& output) {
  const auto start = std::chrono::steady_clock::now();
  const auto base = ocb::generate_base(config.database, config.workload.rseed);
  const double seconds = elapsed_since(start);
  ocb::save_base(base, output);
  print_structure(base, seconds);
  std::printf("snapshot         %s\n", output.c_str());
  return 0;
}

int cmd_run(ocb::RunConfig config) {
  std::optional<ocb::ObjectBase> preloaded;
  if (config.base_path) preloaded = obtain_base(config);
  auto page_trace = open_trace(config.trace_path);
  auto tx_trace = open_trace(config.transaction_trace);
  ocb::RunOutputs outputs{page_trace.get(), tx_trace.get()};

  const auto report = ocb::run_benchmark(config, std::move(preloaded), outputs);
  write_file(config.output_dir / "report.json", ocb::to_json(report).dump(2) + "\n");
  write_file(config.output_dir / "report.csv", ocb::to_csv(report));

  for (auto phase : {ocb::Phase::kCold, ocb::Phase::kWarm}) {
    const auto& s = phase == ocb::Phase::kCold ? report.cold : report.warm;
    std::printf("%s: %.0f transactions, %.4f ms/transaction, %.2f objects, %.2f page reads, "
                "%.2f page writes\n",
                std::string(ocb::to_string(phase)).c_str(), s.global.count.mean,
                s.global.response_time.mean * 1e3, s.global.objects_accessed.mean,
                s.global.page_reads.mean, s.global.page_writes.mean);
  }
  std::printf("throughput: %.1f transactions/s\n", report.throughput.mean);
  std::printf("clustering overhead: %.0f page I/Os, %.4f s\n", report.clustering_page_ios.mean,
              report.clustering_seconds.mean);
  std::printf("report: %s\n", (config.output_dir / "report.json").string().c_str());
  return 0;
}

int cmd_cluster(ocb::RunConfig config, const ocb::ClusterExperimentOptions& options) {
  auto base = obtain_base(config);
  const auto report = ocb::run_cluster_experiment(base, config.store, config.clustering, options,
                                                  config.workload.rseed);
  std::fputs(ocb::format_table(report).c_str(), stdout);
  auto json = ocb::to_json(report);
  json["config"] = ocb::to_json(config);
  write_file(config.output_dir / "cluster_report.json", json.dump(2) + "\n");
  return 0;
}

int cmd_presets_list() {
  for (const auto& name : ocb::preset_names()) {
    const auto preset = ocb::load_preset(name);
    std::printf("%-12s %s\n", name.c_str(), preset.notes.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OCB object database benchmark"};
  app.require_subcommand(1);

  Overrides gen_flags, run_flags, exp_flags;
  std::string snapshot_path = "ocb-base.snap";
  auto* generate = app.add_subcommand("generate", "generate an object base and save a snapshot");
  add_config_flags(*generate, gen_flags);
  generate->add_option("-o,--output", snapshot_path, "snapshot file")->capture_default_str();

  auto* run = app.add_subcommand("run", "run the cold/warm workload and write reports");
  add_config_flags(*run, run_flags);
  run->add_option("--replicate", run_flags.replicate, "replicated runs");
  run->add_option("--out,--report-dir", run_flags.out, "report directory");
  run->add_option("--base", run_flags.base, "snapshot to run against")->check(CLI::ExistingFile);
  run->add_option("--trace", run_flags.trace, "page I/O log file");
  run->add_option("--transaction-trace", run_flags.transaction_trace, "per-transaction log file");

  ocb::ClusterExperimentOptions exp_options;
  auto* cluster = app.add_subcommand("cluster-exp", "compare traversal I/O before and after clustering");
  add_config_flags(*cluster, exp_flags);
  cluster->add_option("--out,--report-dir", exp_flags.out, "report directory");
  cluster->add_option("--base", exp_flags.base, "snapshot to run against")->check(CLI::ExistingFile);
  cluster->add_option("--roots", exp_options.roots, "traversal roots")->capture_default_str();
  cluster->add_option("--repeats", exp_options.repeats, "passes over the roots")->capture_default_str();
  cluster->add_option("--hierarchy-depth", exp_options.hierarchy_depth)->capture_default_str();
  cluster->add_option("--simple-depth", exp_options.simple_depth)->capture_default_str();
  cluster->add_option("--buffer-fractions", exp_options.buffer_fractions,
                      "buffer sizes as fractions of the base")
      ->delimiter(',')
      ->capture_default_str();

  auto* presets = app.add_subcommand("presets", "built-in parameter presets");
  presets->require_subcommand(1);
  auto* list = presets->add_subcommand("list", "list preset names");
  std::string show_name;
  auto* show = presets->add_subcommand("show", "print a preset document");
  show->add_option("name", show_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*generate) return cmd_generate(build_config(gen_flags), snapshot_path);
    if (*run) return cmd_run(build_config(run_flags));
    if (*cluster) {
      return cmd_cluster(build_config(exp_flags, ocb::ClusteringPolicyKind::kHeat), exp_options);
    }
    if (*list) return cmd_presets_list();
    if (*show) {
      std::fputs(std::string(ocb::preset_source(show_name)).c_str(), stdout);
      return 0;
    }
  } catch (const ocb::ConfigError& e) {
    std::fprintf(stderr, "ocb: configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ocb: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
