#pragma once

#include <filesystem>

#include "scanfig/raster.hpp"

namespace scanfig {

// Reads an 8-bit gray or RGB PNG. Palette, 16-bit and alpha inputs are
// converted (alpha is dropped). Throws IoError.
PageImage read_png(const std::filesystem::path& path);

// Writes without timestamps or text chunks, so equal images give equal files.
void write_png(const std::filesystem::path& path, const PageImage& img);

}  // namespace scanfig
