#pragma once

#include <filesystem>
#include <string>

#include "vinsp/shapley.hpp"

namespace vinsp {

/// image_index,row,col,phi with one row per feature.
void write_heatmap_csv(const ExplanationMap& map, const std::filesystem::path& path);

/// Binary PPM showing both images side by side, each cell scaled to
/// `cell_pixels`, blue for negative and red for positive attributions.
void write_heatmap_ppm(const ExplanationMap& map, const std::filesystem::path& path, std::uint32_t cell_pixels = 16);

}  // namespace vinsp
