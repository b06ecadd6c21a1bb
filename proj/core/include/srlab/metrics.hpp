#pragma once

#include <cstddef>
#include <vector>

#include "srlab/image.hpp"

namespace srlab {

// All metrics work in 8-bit units: intensities are scaled by 255 (without
// rounding) before differencing, so MSE is in squared 8-bit levels.

/// Windowed SSIM settings. The window is an isotropic Gaussian, normalized to unit sum.
struct SsimParams {
  std::size_t window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;

  void validate() const;
  /// One-dimensional window taps; the 2-D window is their outer product.
  std::vector<double> window_taps() const;
};

double mse(const ImagePlane& a, const ImagePlane& b);
/// Pooled over all 3 * W * H channel samples.
double mse(const RgbImage& a, const RgbImage& b);

/// 10 log10(MAX^2 / mse); +infinity when mse == 0. Throws ValueError on negative mse.
double psnr(double mse_value, PixelDepth depth = kEightBit);

/// Mean of the per-window SSIM map over every window position that fits
/// inside the image (no padding). Throws DimensionError when the shapes
/// differ or the image is smaller than the window.
double ssim(const ImagePlane& a, const ImagePlane& b, const SsimParams& params = {});
/// Arithmetic mean of the three per-channel SSIM values.
double ssim_rgb(const RgbImage& a, const RgbImage& b, const SsimParams& params = {});

struct MetricValues {
  double mse = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
};

/// MSE, PSNR and RGB-mean SSIM of `candidate` against `reference`. With
/// `quantize` both images are first rounded to 8-bit levels.
MetricValues evaluate(const RgbImage& reference, const RgbImage& candidate, const SsimParams& params = {},
                      bool quantize = false);

}  // namespace srlab
