#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace srlab {

/// A single colour channel: row-major intensities normalized to [0, 1].
///
/// Constructors validate the range. Mutable element access exists so that
/// algorithms can fill planes in place; callers writing through it are
/// responsible for keeping values in range (see is_normalized()).
class ImagePlane {
 public:
  ImagePlane() = default;
  ImagePlane(std::size_t width, std::size_t height, double fill = 0.0);
  ImagePlane(std::size_t width, std::size_t height, std::vector<double> data);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double operator()(std::size_t x, std::size_t y) const noexcept { return data_[y * width_ + x]; }
  double& operator()(std::size_t x, std::size_t y) noexcept { return data_[y * width_ + x]; }

  /// Replicate-clamped read; coordinates outside the grid snap to the nearest edge.
  double at_clamped(std::ptrdiff_t x, std::ptrdiff_t y) const noexcept;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  bool is_normalized() const noexcept;

  friend bool operator==(const ImagePlane&, const ImagePlane&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

enum class Channel : unsigned char { red = 0, green = 1, blue = 2 };

/// Three equally sized planes in R, G, B order.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(std::size_t width, std::size_t height, double fill = 0.0);
  RgbImage(ImagePlane red, ImagePlane green, ImagePlane blue);
  explicit RgbImage(std::array<ImagePlane, 3> planes);

  std::size_t width() const noexcept { return planes_[0].width(); }
  std::size_t height() const noexcept { return planes_[0].height(); }

  const ImagePlane& plane(std::size_t c) const { return planes_.at(c); }
  ImagePlane& plane(std::size_t c) { return planes_.at(c); }
  const ImagePlane& plane(Channel c) const { return planes_[static_cast<std::size_t>(c)]; }
  ImagePlane& plane(Channel c) { return planes_[static_cast<std::size_t>(c)]; }
  const std::array<ImagePlane, 3>& planes() const noexcept { return planes_; }

  bool is_normalized() const noexcept;

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::array<ImagePlane, 3> planes_;
};

/// Largest integer code of the source encoding (the MAX in PSNR).
struct PixelDepth {
  int max_value = 255;
};

inline constexpr PixelDepth kEightBit{255};

ImagePlane pad_replicate(const ImagePlane& plane, std::size_t margin);

/// Extracts the w x h window whose top-left corner is (x0, y0).
ImagePlane crop(const ImagePlane& plane, std::size_t x0, std::size_t y0, std::size_t w, std::size_t h);
RgbImage crop(const RgbImage& img, std::size_t x0, std::size_t y0, std::size_t w, std::size_t h);

/// Drops the last column and/or row when the corresponding dimension is odd.
RgbImage crop_even(const RgbImage& img);

/// 2x2 box-filter decimation. Throws DimensionError on odd dimensions.
ImagePlane downsample_2x(const ImagePlane& plane);
RgbImage downsample_2x(const RgbImage& img);

ImagePlane transpose(const ImagePlane& plane);
RgbImage transpose(const RgbImage& img);

/// Reorders channels: output channel i is input channel order[i].
RgbImage permute_channels(const RgbImage& img, const std::array<std::size_t, 3>& order);

}  // namespace srlab
