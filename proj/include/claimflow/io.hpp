#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

namespace claimflow {

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Opens `path` for reading or throws IoError.
std::ifstream open_input(const std::filesystem::path& path);

/// Shortest decimal text that round-trips to the same double.
std::string format_real(double value);

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fingerprint(std::string_view bytes);

}  // namespace claimflow
