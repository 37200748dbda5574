#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ocb/config.hpp"
#include "ocb/error.hpp"
#include "ocb/expression.hpp"
#include "ocb/generator.hpp"
#include "ocb/presets.hpp"

namespace ocb {
namespace {

using nlohmann::json;

TEST(Expression, Arithmetic) {
  ExpressionScope scope{{"N", 5}, {"M", 3}};
  EXPECT_EQ(evaluate_expression("1 + 2 * 3", scope), 7);
  EXPECT_EQ(evaluate_expression("(1 + 2) * 3", scope), 9);
  EXPECT_EQ(evaluate_expression("N ^ 2 - M", scope), 22);
  EXPECT_EQ(evaluate_expression("2 ^ 3 ^ 2", scope), 512);
  EXPECT_EQ(evaluate_expression("-N + 17 % 5", scope), -3);
  EXPECT_EQ(evaluate_expression("N * 100 / 3", scope), 166);
  EXPECT_EQ(evaluate_expression("sum(i, 0, 5, 5 ^ i)", scope), 3906);
  EXPECT_EQ(evaluate_expression("sum(i, 1, M, i * N)", scope), 30);
}

TEST(Expression, Errors) {
  ExpressionScope scope;
  EXPECT_THROW(evaluate_expression("1 +", scope), ConfigError);
  EXPECT_THROW(evaluate_expression("X", scope), ConfigError);
  EXPECT_THROW(evaluate_expression("1 / 0", scope), ConfigError);
  EXPECT_THROW(evaluate_expression("(1", scope), ConfigError);
}

TEST(Config, ProbabilitiesSumToOne) {
  const WorkloadParams w;
  double sum = 0;
  for (double p : w.probabilities) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_NO_THROW(validate(w));
}

TEST(Config, ProbabilityToleranceEnforced) {
  WorkloadParams w;
  w.probabilities[0] += 5e-10;
  EXPECT_NO_THROW(validate(w));
  w.probabilities[0] += 2e-9;
  EXPECT_THROW(validate(w), ConfigError);
}

TEST(Config, ValidationRejectsBadValues) {
  RunConfig c;
  c.workload.coldn = -1;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.database.olocref = c.database.no + 1;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.replicate = 0;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.store.buffer_pages = 0;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Config, JsonOverlayWithExpressions) {
  RunConfig c;
  apply_json(json::parse(R"({
    "subparams": {"Parts": 100, "Conn": "Parts * 3"},
    "database": {"nc": 2, "no": "Parts + Conn", "olocref": "NO / 100",
                 "maxnref": {"default": 3, "classes": {"1": 2}}},
    "workload": {"coldn": 5, "hotn": "NO", "dist7": {"uniform": [0, 9]}, "prnd": 1.0,
                 "pscan": 0, "prange": 0, "pset": 0, "psimple": 0, "phier": 0, "pstoch": 0,
                 "pcinsert": 0, "pcdel": 0, "poinsert": 0, "podel": 0, "prndup": 0, "psequp": 0},
    "store": {"buffer_pages": 10},
    "clustering": {"policy": "heat"}
  })"), c);
  EXPECT_EQ(c.database.no, 400);
  EXPECT_EQ(c.database.olocref, 4);
  EXPECT_EQ(c.database.maxnref.at(1), 2);
  EXPECT_EQ(c.database.maxnref.at(0), 3);
  EXPECT_EQ(c.workload.hotn, 400);
  EXPECT_EQ(c.workload.dist7, Distribution::uniform(0, 9));
  EXPECT_EQ(c.store.buffer_pages, 10);
  EXPECT_EQ(c.clustering.policy, ClusteringPolicyKind::kHeat);
  EXPECT_NO_THROW(validate(c));
}

TEST(Config, SymbolicLocalityTracksCounts) {
  RunConfig c;
  c.database.olocref = 5;
  apply_json(json::parse(R"({"database": {"olocref": "NO", "clocref": "NC"}})"), c);
  EXPECT_FALSE(c.database.olocref.has_value());
  EXPECT_FALSE(c.database.clocref.has_value());
}

TEST(Config, SlotGroupsExpandToConstantTables) {
  RunConfig c;
  apply_json(json::parse(R"({"database": {"nc": 2, "maxnref": 4,
    "slots": {"0": [{"count": 2, "tref": 1, "target": 1}, {"tref": 2, "target": 0}]}}})"), c);
  const auto& p = c.database;
  ASSERT_EQ(p.dist2.per_class.at(0).size(), 4u);
  EXPECT_EQ(p.dist1.at(0, 1), Distribution::constant(1));
  EXPECT_EQ(p.dist2.at(0, 1), Distribution::constant(1));
  EXPECT_EQ(p.dist2.at(0, 2), Distribution::constant(0));
  EXPECT_EQ(p.dist2.at(0, 3), Distribution::constant(-1));
  EXPECT_THROW(apply_json(json::parse(R"({"database": {"nc": 2, "maxnref": 1,
    "slots": {"0": [{"count": 2, "target": 1}]}}})"), c), ConfigError);
}

TEST(Config, UnknownKeysRejected) {
  RunConfig c;
  EXPECT_THROW(apply_json(json::parse(R"({"databse": {}})"), c), ConfigError);
  EXPECT_THROW(apply_json(json::parse(R"({"database": {"ncc": 1}})"), c), ConfigError);
  EXPECT_THROW(apply_json(json::parse(R"({"workload": {"pfoo": 1}})"), c), ConfigError);
  EXPECT_THROW(apply_json(json::parse(R"({"database": {"dist3": {"normal": 1}}})"), c), ConfigError);
  EXPECT_THROW(apply_json(json::parse(R"({"database": {"nc": "x"}})"), c), ConfigError);
}

TEST(Config, RoundTripThroughJson) {
  for (const auto& name : preset_names()) {
    const auto original = load_preset(name).config;
    RunConfig copy;
    apply_json(to_json(original), copy);
    EXPECT_EQ(copy, original) << name;
  }
}

TEST(Config, FileWithPresetThenOverrides) {
  const auto path = std::filesystem::temp_directory_path() / "ocb_config_test.json";
  {
    std::ofstream out(path);
    out << R"({"preset": "oo1", "workload": {"coldn": 7}})";
  }
  RunConfig c;
  apply_config_file(path, c);
  EXPECT_EQ(c.database.nc, 2);
  EXPECT_EQ(c.workload.coldn, 7);
  EXPECT_EQ(c.preset, "oo1");
  std::filesystem::remove(path);
  EXPECT_THROW(apply_config_file(path, c), ConfigError);
}

TEST(Presets, NamesAndUnknown) {
  const auto names = preset_names();
  for (const char* n : {"default", "oo1", "hypermodel", "oo7", "justitia"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
  }
  EXPECT_THROW(load_preset("tpc"), ConfigError);
}

TEST(Presets, DefaultMatchesBuiltInDefaults) {
  const auto preset = load_preset("default").config;
  EXPECT_EQ(preset.database, DatabaseParams{});
  EXPECT_EQ(preset.workload, WorkloadParams{});
}

TEST(Presets, Oo1Shape) {
  const auto base = generate_base(load_preset("oo1").config.database, kDefaultSeed);
  EXPECT_EQ(base.live_class_count(), 2);
  EXPECT_EQ(base.live_object_count(), 80000);
  EXPECT_EQ(base.classes[0].iterator.size(), 20000u);
  EXPECT_EQ(base.classes[1].iterator.size(), 60000u);
}

TEST(Presets, HyperModelShape) {
  const auto base = generate_base(load_preset("hypermodel").config.database, kDefaultSeed);
  EXPECT_EQ(base.live_class_count(), 3);
  EXPECT_EQ(base.live_object_count(), 19531);
}

TEST(Presets, Oo7AndJustitiaGenerate) {
  const auto oo7 = generate_base(load_preset("oo7").config.database, kDefaultSeed);
  EXPECT_EQ(oo7.live_class_count(), 10);
  EXPECT_EQ(oo7.live_object_count(), 44282);
  const auto jus = generate_base(load_preset("justitia").config.database, kDefaultSeed);
  EXPECT_EQ(jus.live_class_count(), 6);
  EXPECT_EQ(jus.live_object_count(), 20000);
}

}  // namespace
}  // namespace ocb
