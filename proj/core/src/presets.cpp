#include "ocb/presets.hpp"

#include <fstream>
#include <sstream>

#include "ocb/error.hpp"

namespace ocb {
namespace detail {
extern const std::pair<std::string_view, std::string_view> kEmbeddedPresets[];
extern const std::size_t kEmbeddedPresetCount;
}  // namespace detail

namespace {

Preset parse_preset(std::string_view text, std::string_view origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("preset " + std::string(origin) + ": " + e.what());
  }
  Preset preset;
  preset.name = doc.value("name", std::string(origin));
  preset.notes = doc.value("notes", std::string());
  apply_json(doc, preset.config);
  preset.config.preset = preset.name;
  validate(preset.config);
  return preset;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < detail::kEmbeddedPresetCount; ++i) {
    names.emplace_back(detail::kEmbeddedPresets[i].first);
  }
  return names;
}

std::string_view preset_source(std::string_view name) {
  for (std::size_t i = 0; i < detail::kEmbeddedPresetCount; ++i) {
    if (detail::kEmbeddedPresets[i].first == name) return detail::kEmbeddedPresets[i].second;
  }
  std::string valid;
  for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ConfigError("unknown preset '" + std::string(name) + "' (valid: " + valid + ")");
}

Preset load_preset(std::string_view name) { return parse_preset(preset_source(name), name); }

Preset load_preset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open preset file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_preset(buffer.str(), path.stem().string());
}

}  // namespace ocb
