#pragma once

#include <cstdint>
#include <filesystem>

#include "srlab/image.hpp"

namespace srlab {

/// Reads an 8-bit PNG (gray, gray+alpha, RGB, RGBA, palette) or a binary
/// PPM (P6, maxval 255). Alpha is dropped; gray is replicated into R, G, B.
/// The format is detected from the file signature, not the extension.
RgbImage load_image(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG. Each intensity v is stored as round(v * 255),
/// rounding halves away from zero, clamped to [0, 255].
void save_image(const RgbImage& img, const std::filesystem::path& path);

/// Writes a binary P6 PPM with the same quantization as save_image.
void save_ppm(const RgbImage& img, const std::filesystem::path& path);

/// Quantizes one normalized intensity to an 8-bit code.
std::uint8_t to_byte(double v) noexcept;

/// Rounds every intensity to the nearest 8-bit level (what a save/load
/// round trip produces, without touching the filesystem).
RgbImage quantize_8bit(const RgbImage& img);

/// 64-bit FNV-1a hash over the dimensions and quantized pixel bytes.
std::uint64_t content_hash(const RgbImage& img);

}  // namespace srlab
