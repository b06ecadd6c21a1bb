#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "srlab/image.hpp"

namespace srlab {

/// Every 2x upscaler known to the harness. `mlp` is served by upscale_with_mlp().
enum class MethodId { nearest, bilinear, bicubic, fcbi, icbi, mlp };

struct UpscaleMethod {
  MethodId id = MethodId::bicubic;
  double bicubic_a = -0.5;
  std::size_t icbi_iterations = 10;
  double icbi_step = 0.1;
};

std::string_view to_string(MethodId id) noexcept;
/// Parses one of nearest|bilinear|bicubic|fcbi|icbi|mlp; throws ValueError otherwise.
MethodId parse_method(std::string_view name);

// Output pixel x of a 2x upscale sits at source coordinate (x + 0.5) / 2 - 0.5
// for bilinear and bicubic; samples outside the grid are edge-replicated.

ImagePlane upscale_nearest(const ImagePlane& plane);
RgbImage upscale_nearest(const RgbImage& img);

ImagePlane upscale_bilinear(const ImagePlane& plane);
RgbImage upscale_bilinear(const RgbImage& img);

/// Keys cubic-convolution weight for offset t and free parameter a.
double keys_kernel(double t, double a) noexcept;

/// Separable Keys cubic convolution; a must lie in [-1, 0]. Output is clamped to [0, 1].
ImagePlane upscale_bicubic(const ImagePlane& plane, double a = -0.5);
RgbImage upscale_bicubic(const RgbImage& img, double a = -0.5);

/// Two-step directional grid fill. Source pixels land on even coordinates;
/// odd/odd holes are filled along the diagonal with the smaller curvature,
/// then the remaining holes along the horizontal or vertical pair.
ImagePlane upscale_fcbi(const ImagePlane& plane);
RgbImage upscale_fcbi(const RgbImage& img);

/// Iterative correction trace for one plane.
struct IcbiTrace {
  ImagePlane result;
  /// energies[0] is the FCBI starting energy; one entry per completed iteration follows.
  std::vector<double> energies;
  /// Step size in effect after the last iteration (halved on every rejected step).
  double final_step = 0.0;
};

/// Curvature energy minimized by ICBI: the sum, over interpolated pixels
/// with a full 3x3 neighbourhood, of squared second differences along the
/// horizontal, vertical and both diagonal directions.
double icbi_energy(const ImagePlane& hr);

IcbiTrace upscale_icbi_traced(const ImagePlane& plane, std::size_t iterations, double step);
ImagePlane upscale_icbi(const ImagePlane& plane, std::size_t iterations = 10, double step = 0.1);
RgbImage upscale_icbi(const RgbImage& img, std::size_t iterations = 10, double step = 0.1);

/// Dispatches to a classical method. Throws ValueError for MethodId::mlp.
RgbImage upscale(const RgbImage& img, const UpscaleMethod& method);

}  // namespace srlab
