#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "srlab/dataset.hpp"
#include "srlab/image.hpp"

namespace srlab {

/// Procedural image categories with distinct local statistics:
///   stripes  warped high-contrast bands over fine fur-like noise
///   petals   radial flowers with soft shading over foliage noise
///   blocks   sky gradient and flat facades with window grids
///   mosaic   randomly coloured Voronoi cells with grain
const std::vector<std::string>& synth_categories();

/// Renders one image with 4x4 supersampling per pixel. Throws ValueError for
/// an unknown category and DimensionError for a zero size.
RgbImage synthesize(std::string_view category, std::size_t width, std::size_t height, std::uint64_t seed);

/// Writes `per_category` PNGs per category to dir/<category>/<category>_<k>.png
/// and returns the manifest entries in write order.
std::vector<CorpusEntry> write_synthetic_corpus(const std::filesystem::path& dir,
                                                const std::vector<std::string>& categories, std::size_t per_category,
                                                std::size_t size, std::uint64_t seed);

}  // namespace srlab
