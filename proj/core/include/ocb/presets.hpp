#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ocb/config.hpp"

namespace ocb {

// A parameter bundle imitating another benchmark's object base.
struct Preset {
  std::string name;
  std::string notes;
  RunConfig config;  // defaults with the preset overlaid
};

// Built-in names: default, oo1, hypermodel, oo7, justitia.
std::vector<std::string> preset_names();

// Throws ConfigError listing the valid names when `name` is unknown.
Preset load_preset(std::string_view name);

// A user-supplied preset document in the same format as the built-ins.
Preset load_preset_file(const std::filesystem::path& path);

// Raw JSON text of a built-in preset.
std::string_view preset_source(std::string_view name);

}  // namespace ocb
