#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ocb/object_base.hpp"

namespace ocb {

// Binary object-base snapshot. Layout is documented in docs/snapshot-format.md.
inline constexpr std::uint32_t kSnapshotVersion = 1;

std::vector<std::uint8_t> encode_base(const ObjectBase& base);
// Throws ParseError (with byte offset) or VersionError. Nothing is returned
// unless the whole buffer decodes.
ObjectBase decode_base(const std::vector<std::uint8_t>& bytes);

void save_base(const ObjectBase& base, const std::filesystem::path& path);
ObjectBase load_base(const std::filesystem::path& path);

}  // namespace ocb
