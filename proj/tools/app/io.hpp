#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace sweepfocus::app {

std::string read_text(const std::filesystem::path& path);
/// Writes atomically enough for our purposes: truncate and write in binary mode.
void write_text(const std::filesystem::path& path, std::string_view text);
void ensure_dir(const std::filesystem::path& dir);

} // namespace sweepfocus::app
