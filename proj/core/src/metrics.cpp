#include "srlab/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "srlab/error.hpp"
#include "srlab/image_io.hpp"

namespace srlab {

namespace {

void require_same_shape(const ImagePlane& a, const ImagePlane& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionError("image shapes differ: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                         " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
}

double squared_error_sum(const ImagePlane& a, const ImagePlane& b) {
  const auto da = a.data();
  const auto db = b.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = (da[i] - db[i]) * 255.0;
    acc += d * d;
  }
  return acc;
}

/// Valid-mode separable filtering of a row-major w x h field.
std::vector<double> filter_valid(const std::vector<double>& field, std::size_t w, std::size_t h,
                                 const std::vector<double>& taps) {
  const std::size_t n = taps.size();
  const std::size_t ow = w - n + 1;
  const std::size_t oh = h - n + 1;
  std::vector<double> rows(ow * h);
  for (std::size_t y = 0; y < h; ++y) {
    const double* src = &field[y * w];
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += taps[k] * src[x + k];
      rows[y * ow + x] = acc;
    }
  }
  std::vector<double> out(ow * oh);
  for (std::size_t y = 0; y < oh; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += taps[k] * rows[(y + k) * ow + x];
      out[y * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

void SsimParams::validate() const {
  if (window == 0) throw ValueError("SSIM window must be positive");
  if (!(sigma > 0.0)) throw ValueError("SSIM sigma must be positive");
  if (!(k1 > 0.0) || !(k2 > 0.0)) throw ValueError("SSIM k1 and k2 must be positive");
  if (!(dynamic_range > 0.0)) throw ValueError("SSIM dynamic range must be positive");
}

std::vector<double> SsimParams::window_taps() const {
  validate();
  std::vector<double> taps(window);
  const double centre = (static_cast<double>(window) - 1.0) / 2.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < window; ++i) {
    const double d = static_cast<double>(i) - centre;
    taps[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

double mse(const ImagePlane& a, const ImagePlane& b) {
  require_same_shape(a, b);
  if (a.empty()) throw DimensionError("MSE of empty images");
  return squared_error_sum(a, b) / static_cast<double>(a.size());
}

double mse(const RgbImage& a, const RgbImage& b) {
  require_same_shape(a.plane(0), b.plane(0));
  if (a.plane(0).empty()) throw DimensionError("MSE of empty images");
  double acc = 0.0;
  for (std::size_t c = 0; c < 3; ++c) acc += squared_error_sum(a.plane(c), b.plane(c));
  return acc / static_cast<double>(3 * a.plane(0).size());
}

double psnr(double mse_value, PixelDepth depth) {
  if (depth.max_value <= 0) throw ValueError("pixel depth must be positive");
  if (!(mse_value >= 0.0)) throw ValueError("MSE must be non-negative");
  if (mse_value == 0.0) return std::numeric_limits<double>::infinity();
  const double peak = static_cast<double>(depth.max_value);
  return 10.0 * std::log10(peak * peak / mse_value);
}

double ssim(const ImagePlane& a, const ImagePlane& b, const SsimParams& params) {
  require_same_shape(a, b);
  const auto taps = params.window_taps();
  const std::size_t w = a.width();
  const std::size_t h = a.height();
  if (w < taps.size() || h < taps.size()) {
    throw DimensionError("image " + std::to_string(w) + "x" + std::to_string(h) + " is smaller than the " +
                         std::to_string(taps.size()) + "x" + std::to_string(taps.size()) + " SSIM window");
  }

  const std::size_t n = w * h;
  std::vector<double> fa(n), fb(n), faa(n), fbb(n), fab(n);
  for (std::size_t i = 0; i < n; ++i) {
    fa[i] = a.data()[i] * 255.0;
    fb[i] = b.data()[i] * 255.0;
    faa[i] = fa[i] * fa[i];
    fbb[i] = fb[i] * fb[i];
    fab[i] = fa[i] * fb[i];
  }
  const auto mu_a = filter_valid(fa, w, h, taps);
  const auto mu_b = filter_valid(fb, w, h, taps);
  const auto e_aa = filter_valid(faa, w, h, taps);
  const auto e_bb = filter_valid(fbb, w, h, taps);
  const auto e_ab = filter_valid(fab, w, h, taps);

  const double c1 = (params.k1 * params.dynamic_range) * (params.k1 * params.dynamic_range);
  const double c2 = (params.k2 * params.dynamic_range) * (params.k2 * params.dynamic_range);
  double acc = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double var_a = e_aa[i] - ma * ma;
    const double var_b = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    const double num = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
    const double den = (ma * ma + mb * mb + c1) * (var_a + var_b + c2);
    acc += num / den;
  }
  return acc / static_cast<double>(mu_a.size());
}

double ssim_rgb(const RgbImage& a, const RgbImage& b, const SsimParams& params) {
  double acc = 0.0;
  for (std::size_t c = 0; c < 3; ++c) acc += ssim(a.plane(c), b.plane(c), params);
  return acc / 3.0;
}

MetricValues evaluate(const RgbImage& reference, const RgbImage& candidate, const SsimParams& params, bool quantize) {
  if (quantize) return evaluate(quantize_8bit(reference), quantize_8bit(candidate), params, false);
  MetricValues v;
  v.mse = mse(reference, candidate);
  v.psnr = psnr(v.mse);
  v.ssim = ssim_rgb(reference, candidate, params);
  return v;
}

}  // namespace srlab
