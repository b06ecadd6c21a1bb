#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include "srlab/image.hpp"
#include "srlab/random.hpp"

namespace srlab::testing {

inline ImagePlane random_plane(std::size_t w, std::size_t h, Rng& rng) {
  ImagePlane p(w, h);
  for (double& v : p.data()) v = rng.uniform01();
  return p;
}

inline RgbImage random_image(std::size_t w, std::size_t h, std::uint64_t seed) {
  Rng rng(seed);
  auto r = random_plane(w, h, rng);
  auto g = random_plane(w, h, rng);
  auto b = random_plane(w, h, rng);
  return RgbImage(std::move(r), std::move(g), std::move(b));
}

/// Smooth, mildly textured image; a stand-in for natural content.
inline RgbImage smooth_image(std::size_t w, std::size_t h, std::uint64_t seed) {
  Rng rng(seed);
  const double fx = rng.uniform(0.05, 0.2), fy = rng.uniform(0.05, 0.2), ph = rng.uniform(0, 6.28);
  RgbImage img(w, h);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const double v = 0.5 + 0.3 * std::sin(fx * x + ph + c) * std::cos(fy * y - c) + 0.1 * std::sin(0.7 * (x + y));
        img.plane(c)(x, y) = std::clamp(v, 0.0, 1.0);
      }
    }
  }
  return img;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("srlab_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace srlab::testing
