#pragma once

#include <filesystem>
#include <string>

namespace airhockey {

// Writes to a sibling temp file and renames it over `path`, so readers never
// observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace airhockey
