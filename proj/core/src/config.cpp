#include "ocb/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ocb/error.hpp"
#include "ocb/expression.hpp"
#include "ocb/presets.hpp"

namespace ocb {
namespace {

using nlohmann::json;

void require_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                  std::string_view where) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto key : allowed) known = known || key == item.key();
    if (!known) {
      throw ConfigError(std::string(where) + ": unknown key '" + item.key() + "'");
    }
  }
}

std::int64_t integer(const json& j, const ExpressionScope& scope, std::string_view what) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (v == static_cast<double>(static_cast<std::int64_t>(v))) return static_cast<std::int64_t>(v);
  }
  if (j.is_string()) return evaluate_expression(j.get<std::string>(), scope);
  throw ConfigError(std::string(what) + ": expected an integer or expression");
}

double real(const json& j, std::string_view what) {
  if (j.is_number()) return j.get<double>();
  throw ConfigError(std::string(what) + ": expected a number");
}

Distribution distribution(const json& j, const ExpressionScope& scope) {
  if (j.is_string()) {
    if (j.get<std::string>() == "uniform") return Distribution::uniform();
    throw ConfigError("unknown distribution '" + j.get<std::string>() + "'");
  }
  if (!j.is_object() || j.size() != 1) {
    throw ConfigError("distribution must be \"uniform\" or a one-key object");
  }
  const auto& [key, value] = *j.items().begin();
  if (key == "uniform") {
    if (!value.is_array() || value.size() != 2) throw ConfigError("uniform range needs [lo, hi]");
    return Distribution::uniform(integer(value[0], scope, "uniform"),
                                 integer(value[1], scope, "uniform"));
  }
  if (key == "constant") return Distribution::constant(integer(value, scope, "constant"));
  if (key == "table") {
    if (!value.is_array()) throw ConfigError("table must be an array of [value, count]");
    std::vector<Distribution::Run> runs;
    for (const auto& entry : value) {
      if (entry.is_array() && entry.size() == 2) {
        runs.push_back({integer(entry[0], scope, "table"), integer(entry[1], scope, "table")});
      } else {
        runs.push_back({integer(entry, scope, "table"), 1});
      }
    }
    try {
      return Distribution::table(std::move(runs));
    } catch (const RangeError& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("unknown distribution kind '" + key + "'");
}

bool is_distribution_doc(const json& j) {
  if (j.is_string()) return true;
  return j.is_object() && j.size() == 1 &&
         (j.contains("uniform") || j.contains("constant") || j.contains("table"));
}

ClassId class_key(const std::string& key) {
  try {
    std::size_t used = 0;
    const int id = std::stoi(key, &used);
    if (used == key.size() && id >= 0) return id;
  } catch (const std::exception&) {
  }
  throw ConfigError("class key '" + key + "' is not a class id");
}

template <typename T>
void per_class(const json& j, PerClass<T>& out, const ExpressionScope& scope, std::string_view what) {
  if (!j.is_object()) {
    out = PerClass<T>(static_cast<T>(integer(j, scope, what)));
    return;
  }
  require_keys(j, {"default", "classes"}, what);
  if (j.contains("default")) out.fallback = static_cast<T>(integer(j["default"], scope, what));
  if (j.contains("classes")) {
    out.overrides.clear();
    for (const auto& [key, value] : j["classes"].items()) {
      out.overrides[class_key(key)] = static_cast<T>(integer(value, scope, what));
    }
  }
}

void slot_distributions(const json& j, SlotDistributions& out, const ExpressionScope& scope,
                        std::string_view what) {
  if (is_distribution_doc(j)) {
    out = SlotDistributions{distribution(j, scope), {}};
    return;
  }
  require_keys(j, {"default", "classes"}, what);
  if (j.contains("default")) out.fallback = distribution(j["default"], scope);
  if (j.contains("classes")) {
    out.per_class.clear();
    for (const auto& [key, value] : j["classes"].items()) {
      std::vector<Distribution> list;
      if (value.is_array()) {
        for (const auto& d : value) list.push_back(distribution(d, scope));
      } else {
        list.push_back(distribution(value, scope));
      }
      out.per_class[class_key(key)] = std::move(list);
    }
  }
}

// "slots": {"<class>": [{"count", "tref", "target", "dist4"}, ...]} expands to
// constant per-slot tables; slots not covered by a group are NIL.
void expand_slot_groups(const json& j, DatabaseParams& p, const ExpressionScope& scope) {
  if (!j.is_object()) throw ConfigError("slots: expected an object keyed by class id");
  for (const auto& [key, groups] : j.items()) {
    const ClassId cls = class_key(key);
    const auto width = static_cast<std::size_t>(p.maxnref.at(cls));
    std::vector<Distribution> trefs, targets, objects;
    for (const auto& group : groups) {
      require_keys(group, {"count", "tref", "target", "dist4", "comment"}, "slots");
      const auto count = group.contains("count") ? integer(group["count"], scope, "slots.count") : 1;
      const auto tref = integer(group.value("tref", json(0)), scope, "slots.tref");
      const auto target = group.contains("target") && !group["target"].is_null()
                              ? integer(group["target"], scope, "slots.target")
                              : std::int64_t{kNilClass};
      const auto d4 = group.contains("dist4") ? distribution(group["dist4"], scope) : p.dist4.fallback;
      for (std::int64_t i = 0; i < count; ++i) {
        trefs.push_back(Distribution::constant(tref));
        targets.push_back(Distribution::constant(target));
        objects.push_back(d4);
      }
    }
    if (trefs.size() > width) {
      throw ConfigError("slots for class " + key + " exceed maxnref (" +
                        std::to_string(trefs.size()) + " > " + std::to_string(width) + ")");
    }
    while (trefs.size() < width) {
      trefs.push_back(Distribution::constant(0));
      targets.push_back(Distribution::constant(kNilClass));
      objects.push_back(p.dist4.fallback);
    }
    p.dist1.per_class[cls] = std::move(trefs);
    p.dist2.per_class[cls] = std::move(targets);
    p.dist4.per_class[cls] = std::move(objects);
  }
}

ExpressionScope read_subparams(const json& j, ExpressionScope scope) {
  if (!j.is_object()) throw ConfigError("subparams: expected an object");
  // Sub-parameters may reference each other; resolve until a fixed point.
  std::set<std::string> pending;
  for (const auto& item : j.items()) pending.insert(item.key());
  while (!pending.empty()) {
    bool progress = false;
    for (auto it = pending.begin(); it != pending.end();) {
      try {
        scope[*it] = integer(j[*it], scope, "subparams." + *it);
        it = pending.erase(it);
        progress = true;
      } catch (const ConfigError&) {
        ++it;
      }
    }
    if (!progress) {
      // Re-raise the real error for the first unresolved entry.
      scope[*pending.begin()] = integer(j[*pending.begin()], scope, "subparams." + *pending.begin());
    }
  }
  return scope;
}

template <typename T>
json per_class_json(const PerClass<T>& v) {
  json classes = json::object();
  for (const auto& [id, value] : v.overrides) classes[std::to_string(id)] = value;
  return {{"default", v.fallback}, {"classes", classes}};
}

json slot_json(const SlotDistributions& v) {
  json classes = json::object();
  for (const auto& [id, list] : v.per_class) {
    json arr = json::array();
    for (const auto& d : list) arr.push_back(to_json(d));
    classes[std::to_string(id)] = arr;
  }
  return {{"default", to_json(v.fallback)}, {"classes", classes}};
}

void apply_database(const json& j, DatabaseParams& p, ExpressionScope scope) {
  require_keys(j,
               {"nc", "no", "nreft", "attrange", "clocref", "olocref", "maxretry", "pnil",
                "maxnref", "basesize", "dist1", "dist2", "dist3", "dist4", "slots",
                "acyclic_types", "inheritance_type", "comment"},
               "database");
  if (j.contains("nc")) p.nc = static_cast<std::int32_t>(integer(j["nc"], scope, "nc"));
  if (j.contains("no")) p.no = integer(j["no"], scope, "no");
  scope["NC"] = p.nc;
  scope["NO"] = p.no;
  if (j.contains("nreft")) p.nreft = static_cast<std::int32_t>(integer(j["nreft"], scope, "nreft"));
  if (j.contains("attrange")) {
    p.attrange = static_cast<std::int32_t>(integer(j["attrange"], scope, "attrange"));
  }
  if (j.contains("maxretry")) {
    p.maxretry = static_cast<std::int32_t>(integer(j["maxretry"], scope, "maxretry"));
  }
  if (j.contains("pnil")) p.pnil = real(j["pnil"], "pnil");
  const auto locality = [&](const json& v, auto& field, std::string_view symbolic) {
    using Field = typename std::remove_reference_t<decltype(field)>::value_type;
    if (v.is_null() || (v.is_string() && v.get<std::string>() == symbolic)) {
      field.reset();
    } else {
      field = static_cast<Field>(integer(v, scope, symbolic));
    }
  };
  if (j.contains("clocref")) locality(j["clocref"], p.clocref, "NC");
  if (j.contains("olocref")) locality(j["olocref"], p.olocref, "NO");
  if (j.contains("maxnref")) per_class(j["maxnref"], p.maxnref, scope, "maxnref");
  if (j.contains("basesize")) per_class(j["basesize"], p.basesize, scope, "basesize");
  if (j.contains("dist1")) slot_distributions(j["dist1"], p.dist1, scope, "dist1");
  if (j.contains("dist2")) slot_distributions(j["dist2"], p.dist2, scope, "dist2");
  if (j.contains("dist3")) p.dist3 = distribution(j["dist3"], scope);
  if (j.contains("dist4")) slot_distributions(j["dist4"], p.dist4, scope, "dist4");
  if (j.contains("slots")) expand_slot_groups(j["slots"], p, scope);
  if (j.contains("acyclic_types")) {
    p.acyclic_types.clear();
    for (const auto& t : j["acyclic_types"]) {
      p.acyclic_types.push_back(static_cast<std::int32_t>(integer(t, scope, "acyclic_types")));
    }
  }
  if (j.contains("inheritance_type")) {
    if (j["inheritance_type"].is_null()) {
      p.inheritance_type.reset();
    } else {
      p.inheritance_type =
          static_cast<std::int32_t>(integer(j["inheritance_type"], scope, "inheritance_type"));
    }
  }
}

constexpr std::pair<std::string_view, Distribution WorkloadParams::*> kWorkloadDists[] = {
    {"dist5", &WorkloadParams::dist5}, {"dist6", &WorkloadParams::dist6},
    {"dist7", &WorkloadParams::dist7}, {"dist8", &WorkloadParams::dist8},
    {"dist9", &WorkloadParams::dist9}, {"dista", &WorkloadParams::distA},
    {"distb", &WorkloadParams::distB},
};

void apply_workload(const json& j, WorkloadParams& p, const ExpressionScope& scope) {
  if (!j.is_object()) throw ConfigError("workload: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "nrnd") {
      p.nrnd = integer(value, scope, key);
    } else if (key == "ntest") {
      p.ntest = static_cast<std::int32_t>(integer(value, scope, key));
    } else if (key == "setdepth") {
      p.setdepth = static_cast<std::int32_t>(integer(value, scope, key));
    } else if (key == "simdepth") {
      p.simdepth = static_cast<std::int32_t>(integer(value, scope, key));
    } else if (key == "hiedepth") {
      p.hiedepth = static_cast<std::int32_t>(integer(value, scope, key));
    } else if (key == "stodepth") {
      p.stodepth = static_cast<std::int32_t>(integer(value, scope, key));
    } else if (key == "nupdt") {
      p.nupdt = integer(value, scope, key);
    } else if (key == "coldn") {
      p.coldn = integer(value, scope, key);
    } else if (key == "hotn") {
      p.hotn = integer(value, scope, key);
    } else if (key == "think") {
      p.think = real(value, key);
    } else if (key == "clientn") {
      p.clientn = static_cast<std::int32_t>(integer(value, scope, key));
    } else if (key == "rseed") {
      p.rseed = static_cast<std::uint64_t>(integer(value, scope, key));
    } else if (key == "reverse_fraction") {
      p.reverse_fraction = real(value, key);
    } else if (key == "comment") {
    } else {
      bool handled = false;
      for (const auto& [name, member] : kWorkloadDists) {
        if (name == key) {
          p.*member = distribution(value, scope);
          handled = true;
        }
      }
      if (!handled) {
        if (auto kind = parse_transaction_kind(key); kind && probability_key(*kind) == key) {
          p.probabilities[index_of(*kind)] = real(value, key);
          handled = true;
        }
      }
      if (!handled) throw ConfigError("workload: unknown key '" + key + "'");
    }
  }
}

void apply_store(const json& j, StoreConfig& c, const ExpressionScope& scope) {
  require_keys(j, {"page_size", "buffer_pages", "replacement"}, "store");
  if (j.contains("page_size")) c.page_size = integer(j["page_size"], scope, "page_size");
  if (j.contains("buffer_pages")) c.buffer_pages = integer(j["buffer_pages"], scope, "buffer_pages");
  if (j.contains("replacement")) {
    if (j["replacement"] != "lru") {
      throw ConfigError("store.replacement: only \"lru\" is supported");
    }
    c.replacement = ReplacementPolicy::kLru;
  }
}

void apply_clustering(const json& j, ClusteringConfig& c, const ExpressionScope& scope) {
  require_keys(j, {"policy", "threshold", "max_cluster_bytes", "window"}, "clustering");
  if (j.contains("policy")) {
    const auto name = j["policy"].get<std::string>();
    if (name == "none") {
      c.policy = ClusteringPolicyKind::kNone;
    } else if (name == "heat") {
      c.policy = ClusteringPolicyKind::kHeat;
    } else {
      throw ConfigError("clustering.policy must be \"none\" or \"heat\"");
    }
  }
  if (j.contains("threshold")) c.threshold = integer(j["threshold"], scope, "threshold");
  if (j.contains("max_cluster_bytes")) {
    if (j["max_cluster_bytes"].is_null()) {
      c.max_cluster_bytes.reset();
    } else {
      c.max_cluster_bytes = integer(j["max_cluster_bytes"], scope, "max_cluster_bytes");
    }
  }
  if (j.contains("window")) c.window = integer(j["window"], scope, "window");
}

json optional_path(const std::optional<std::filesystem::path>& p) {
  return p ? json(p->string()) : json(nullptr);
}

}  // namespace

json to_json(const Distribution& d) {
  if (!d.is_constant()) {
    if (d.range()) return {{"uniform", {d.range()->first, d.range()->second}}};
    return "uniform";
  }
  if (d.runs().size() == 1 && d.runs().front().count == 1) {
    return {{"constant", d.runs().front().value}};
  }
  json runs = json::array();
  for (const auto& r : d.runs()) runs.push_back({r.value, r.count});
  return {{"table", runs}};
}

json to_json(const DatabaseParams& p) {
  return {
      {"nc", p.nc},
      {"no", p.no},
      {"nreft", p.nreft},
      {"attrange", p.attrange},
      {"clocref", p.clocref ? json(*p.clocref) : json(nullptr)},
      {"olocref", p.olocref ? json(*p.olocref) : json(nullptr)},
      {"maxretry", p.maxretry},
      {"pnil", p.pnil},
      {"maxnref", per_class_json(p.maxnref)},
      {"basesize", per_class_json(p.basesize)},
      {"dist1", slot_json(p.dist1)},
      {"dist2", slot_json(p.dist2)},
      {"dist3", to_json(p.dist3)},
      {"dist4", slot_json(p.dist4)},
      {"acyclic_types", p.acyclic_types},
      {"inheritance_type", p.inheritance_type ? json(*p.inheritance_type) : json(nullptr)},
  };
}

json to_json(const WorkloadParams& p) {
  json j = {
      {"nrnd", p.nrnd},         {"ntest", p.ntest},       {"setdepth", p.setdepth},
      {"simdepth", p.simdepth}, {"hiedepth", p.hiedepth}, {"stodepth", p.stodepth},
      {"nupdt", p.nupdt},       {"coldn", p.coldn},       {"hotn", p.hotn},
      {"think", p.think},       {"clientn", p.clientn},   {"reverse_fraction", p.reverse_fraction},
  };
  for (const auto& [name, member] : kWorkloadDists) j[std::string(name)] = to_json(p.*member);
  for (auto kind : kAllTransactionKinds) j[std::string(probability_key(kind))] = p.probability(kind);
  return j;
}

json to_json(const StoreConfig& c) {
  return {{"page_size", c.page_size}, {"buffer_pages", c.buffer_pages}, {"replacement", "lru"}};
}

json to_json(const ClusteringConfig& c) {
  return {
      {"policy", c.policy == ClusteringPolicyKind::kHeat ? "heat" : "none"},
      {"threshold", c.threshold},
      {"max_cluster_bytes", c.max_cluster_bytes ? json(*c.max_cluster_bytes) : json(nullptr)},
      {"window", c.window},
  };
}

json to_json(const RunConfig& c) {
  return {
      {"preset", c.preset},
      {"rseed", c.workload.rseed},
      {"replicate", c.replicate},
      {"database", to_json(c.database)},
      {"workload", to_json(c.workload)},
      {"store", to_json(c.store)},
      {"clustering", to_json(c.clustering)},
      {"output",
       {{"dir", c.output_dir.string()},
        {"base", optional_path(c.base_path)},
        {"trace", optional_path(c.trace_path)},
        {"transaction_trace", optional_path(c.transaction_trace)}}},
  };
}

Distribution distribution_from_json(const json& j) { return distribution(j, {}); }

DatabaseParams database_from_json(const json& j) {
  DatabaseParams p;
  apply_database(j, p, {});
  return p;
}

void apply_json_document(const json& doc, RunConfig& c) {
  require_keys(doc,
               {"name", "notes", "preset", "subparams", "rseed", "replicate", "database",
                "workload", "store", "clustering", "output", "comment"},
               "config");
  ExpressionScope scope;
  if (doc.contains("subparams")) scope = read_subparams(doc["subparams"], scope);
  if (doc.contains("preset")) c.preset = doc["preset"].get<std::string>();
  if (doc.contains("name") && doc["name"].is_string()) c.preset = doc["name"].get<std::string>();
  if (doc.contains("database")) apply_database(doc["database"], c.database, scope);
  scope["NC"] = c.database.nc;
  scope["NO"] = c.database.no;
  if (doc.contains("workload")) apply_workload(doc["workload"], c.workload, scope);
  if (doc.contains("rseed")) c.workload.rseed = static_cast<std::uint64_t>(integer(doc["rseed"], scope, "rseed"));
  if (doc.contains("replicate")) {
    c.replicate = static_cast<std::int32_t>(integer(doc["replicate"], scope, "replicate"));
  }
  if (doc.contains("store")) apply_store(doc["store"], c.store, scope);
  if (doc.contains("clustering")) apply_clustering(doc["clustering"], c.clustering, scope);
  if (doc.contains("output")) {
    const auto& out = doc["output"];
    require_keys(out, {"dir", "base", "trace", "transaction_trace"}, "output");
    const auto path = [&](const char* key, std::optional<std::filesystem::path>& field) {
      if (!out.contains(key)) return;
      if (out[key].is_null()) {
        field.reset();
      } else {
        field = out[key].get<std::string>();
      }
    };
    if (out.contains("dir")) c.output_dir = out["dir"].get<std::string>();
    path("base", c.base_path);
    path("trace", c.trace_path);
    path("transaction_trace", c.transaction_trace);
  }
}

void apply_json(const json& doc, RunConfig& c) {
  try {
    apply_json_document(doc, c);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const RangeError& e) {
    throw ConfigError(e.what());
  }
}

void apply_config_file(const std::filesystem::path& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  if (doc.contains("preset")) {
    RunConfig fresh = load_preset(doc["preset"].get<std::string>()).config;
    fresh.output_dir = config.output_dir;
    config = std::move(fresh);
  }
  apply_json(doc, config);
}

void validate(const RunConfig& c) {
  validate(c.database);
  validate(c.workload);
  validate(c.store);
  validate(c.clustering);
  if (c.replicate < 1) throw ConfigError("replicate must be >= 1");
}

}  // namespace ocb
