#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace nshomog {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double x);

/// Writes `content` to a sibling temp file and renames it over `path`, so an
/// interrupted run never leaves a partial file behind.
void write_file_atomically(const std::filesystem::path& path,
                           std::string_view content);

}  // namespace nshomog
