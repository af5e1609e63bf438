#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "memdomain/memory_codes.hpp"

namespace memdomain::io {

using Json = nlohmann::ordered_json;

inline constexpr int kRegistrySchema = 1;

/// Round-trippable decimal form of a double: 17 significant digits,
/// "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double value);

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view data);

Json registry_to_json(const memory::Registry& registry);
memory::Registry registry_from_json(const Json& doc);

/// Serialised registry text (two-space indent, trailing newline).
std::string dump_registry(const memory::Registry& registry);
memory::Registry parse_registry(std::string_view text);

/// {"components": [{"k": .., "n": .., "intensity": ..}, ...]}
memory::StimulusSpectrum parse_spectrum(std::string_view text);
Json spectrum_to_json(const memory::StimulusSpectrum& spectrum);

}  // namespace memdomain::io
