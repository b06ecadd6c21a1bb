#include "srlab/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "srlab/error.hpp"

namespace srlab {

namespace {

void check_range(std::span<const double> data) {
  for (double v : data) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValueError("intensity outside [0,1]: " + std::to_string(v));
    }
  }
}

}  // namespace

ImagePlane::ImagePlane(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), data_(width * height, fill) {
  if (!(fill >= 0.0 && fill <= 1.0)) throw ValueError("fill intensity outside [0,1]");
}

ImagePlane::ImagePlane(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (data_.size() != width * height) {
    throw DimensionError("plane data length " + std::to_string(data_.size()) + " != " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
  check_range(data_);
}

double ImagePlane::at_clamped(std::ptrdiff_t x, std::ptrdiff_t y) const noexcept {
  const auto w = static_cast<std::ptrdiff_t>(width_);
  const auto h = static_cast<std::ptrdiff_t>(height_);
  x = std::clamp<std::ptrdiff_t>(x, 0, w - 1);
  y = std::clamp<std::ptrdiff_t>(y, 0, h - 1);
  return data_[static_cast<std::size_t>(y * w + x)];
}

bool ImagePlane::is_normalized() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

RgbImage::RgbImage(std::size_t width, std::size_t height, double fill)
    : planes_{ImagePlane(width, height, fill), ImagePlane(width, height, fill),
              ImagePlane(width, height, fill)} {}

RgbImage::RgbImage(ImagePlane red, ImagePlane green, ImagePlane blue)
    : RgbImage(std::array<ImagePlane, 3>{std::move(red), std::move(green), std::move(blue)}) {}

RgbImage::RgbImage(std::array<ImagePlane, 3> planes) : planes_(std::move(planes)) {
  for (const auto& p : planes_) {
    if (p.width() != planes_[0].width() || p.height() != planes_[0].height()) {
      throw DimensionError("RGB planes have different dimensions");
    }
  }
}

bool RgbImage::is_normalized() const noexcept {
  return std::all_of(planes_.begin(), planes_.end(), [](const ImagePlane& p) { return p.is_normalized(); });
}

ImagePlane pad_replicate(const ImagePlane& plane, std::size_t margin) {
  const std::size_t w = plane.width() + 2 * margin;
  const std::size_t h = plane.height() + 2 * margin;
  ImagePlane out(w, h);
  const auto m = static_cast<std::ptrdiff_t>(margin);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      out(x, y) = plane.at_clamped(static_cast<std::ptrdiff_t>(x) - m, static_cast<std::ptrdiff_t>(y) - m);
    }
  }
  return out;
}

ImagePlane crop(const ImagePlane& plane, std::size_t x0, std::size_t y0, std::size_t w, std::size_t h) {
  if (x0 + w > plane.width() || y0 + h > plane.height()) {
    throw DimensionError("crop window exceeds plane bounds");
  }
  ImagePlane out(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) out(x, y) = plane(x0 + x, y0 + y);
  }
  return out;
}

RgbImage crop(const RgbImage& img, std::size_t x0, std::size_t y0, std::size_t w, std::size_t h) {
  return RgbImage(crop(img.plane(0), x0, y0, w, h), crop(img.plane(1), x0, y0, w, h),
                  crop(img.plane(2), x0, y0, w, h));
}

RgbImage crop_even(const RgbImage& img) {
  return crop(img, 0, 0, img.width() & ~std::size_t{1}, img.height() & ~std::size_t{1});
}

ImagePlane downsample_2x(const ImagePlane& plane) {
  if (plane.width() % 2 != 0 || plane.height() % 2 != 0) {
    throw DimensionError("downsample_2x needs even dimensions, got " + std::to_string(plane.width()) + "x" +
                         std::to_string(plane.height()));
  }
  const std::size_t w = plane.width() / 2;
  const std::size_t h = plane.height() / 2;
  ImagePlane out(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double sum = plane(2 * x, 2 * y) + plane(2 * x + 1, 2 * y) + plane(2 * x, 2 * y + 1) +
                         plane(2 * x + 1, 2 * y + 1);
      out(x, y) = sum * 0.25;
    }
  }
  return out;
}

RgbImage downsample_2x(const RgbImage& img) {
  return RgbImage(downsample_2x(img.plane(0)), downsample_2x(img.plane(1)), downsample_2x(img.plane(2)));
}

ImagePlane transpose(const ImagePlane& plane) {
  ImagePlane out(plane.height(), plane.width());
  for (std::size_t y = 0; y < plane.height(); ++y) {
    for (std::size_t x = 0; x < plane.width(); ++x) out(y, x) = plane(x, y);
  }
  return out;
}

RgbImage transpose(const RgbImage& img) {
  return RgbImage(transpose(img.plane(0)), transpose(img.plane(1)), transpose(img.plane(2)));
}

RgbImage permute_channels(const RgbImage& img, const std::array<std::size_t, 3>& order) {
  return RgbImage(img.plane(order[0]), img.plane(order[1]), img.plane(order[2]));
}

}  // namespace srlab
