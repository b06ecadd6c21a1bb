#include "srlab/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "binary_io.hpp"
#include "srlab/error.hpp"

namespace srlab {

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

RgbImage from_interleaved(const std::uint8_t* px, std::size_t width, std::size_t height, std::size_t stride_px) {
  if (width == 0 || height == 0) {
    throw FormatError(FormatErrc::bad_dimensions, "zero-dimension image");
  }
  RgbImage img(width, height);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const std::uint8_t* p = px + (y * width + x) * stride_px;
      for (std::size_t c = 0; c < 3; ++c) img.plane(c)(x, y) = p[c] / 255.0;
    }
  }
  return img;
}

std::vector<std::uint8_t> to_interleaved(const RgbImage& img) {
  std::vector<std::uint8_t> out(img.width() * img.height() * 3);
  std::size_t i = 0;
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      for (std::size_t c = 0; c < 3; ++c) out[i++] = to_byte(img.plane(c)(x, y));
    }
  }
  return out;
}

RgbImage decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    throw FormatError(FormatErrc::unsupported_format, name + ": " + png.message);
  }
  png.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw FormatError(FormatErrc::truncated, name + ": " + msg);
  }
  return from_interleaved(buffer.data(), png.width, png.height, 4);
}

// Netpbm header tokens are separated by whitespace; '#' starts a comment
// that runs to the end of the line.
class PpmHeaderReader {
 public:
  PpmHeaderReader(const std::vector<std::uint8_t>& bytes, std::size_t pos) : bytes_(bytes), pos_(pos) {}

  std::size_t next_number(const std::string& name) {
    skip_separators();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw FormatError(FormatErrc::truncated, name + ": malformed PPM header");
    }
    std::size_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      if (value > (std::size_t{1} << 24)) {
        throw FormatError(FormatErrc::bad_dimensions, name + ": PPM header value too large");
      }
      ++pos_;
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset(const std::string& name) {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw FormatError(FormatErrc::truncated, name + ": PPM header not terminated");
    }
    return pos_ + 1;
  }

 private:
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_;
};

RgbImage decode_ppm(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  PpmHeaderReader header(bytes, 2);
  const std::size_t width = header.next_number(name);
  const std::size_t height = header.next_number(name);
  const std::size_t maxval = header.next_number(name);
  if (maxval != 255) {
    throw FormatError(FormatErrc::unsupported_format, name + ": only maxval 255 is supported");
  }
  const std::size_t offset = header.raster_offset(name);
  if (width == 0 || height == 0) {
    throw FormatError(FormatErrc::bad_dimensions, name + ": zero-dimension image");
  }
  if (bytes.size() - offset < width * height * 3) {
    throw FormatError(FormatErrc::truncated, name + ": PPM raster shorter than header declares");
  }
  return from_interleaved(bytes.data() + offset, width, height, 3);
}

}  // namespace

std::uint8_t to_byte(double v) noexcept {
  if (!(v > 0.0)) return 0;
  return static_cast<std::uint8_t>(std::clamp(std::round(v * 255.0), 0.0, 255.0));
}

RgbImage load_image(const std::filesystem::path& path) {
  const auto bytes = detail::read_binary_file(path);
  const std::string name = path.string();
  if (bytes.size() >= 8 && std::equal(std::begin(kPngSignature), std::end(kPngSignature), bytes.begin())) {
    return decode_png(bytes, name);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    return decode_ppm(bytes, name);
  }
  throw FormatError(FormatErrc::unsupported_format, name + ": not a PNG or binary PPM file");
}

void save_image(const RgbImage& img, const std::filesystem::path& path) {
  if (img.width() == 0 || img.height() == 0) throw DimensionError("cannot save an empty image");
  const auto pixels = to_interleaved(img);
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width());
  png.height = static_cast<png_uint_32>(img.height());
  png.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.string().c_str(), 0, pixels.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw IoError("cannot write " + path.string() + ": " + msg);
  }
}

void save_ppm(const RgbImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  const auto pixels = to_interleaved(img);
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

RgbImage quantize_8bit(const RgbImage& img) {
  RgbImage out = img;
  for (std::size_t c = 0; c < 3; ++c) {
    for (double& v : out.plane(c).data()) v = to_byte(v) / 255.0;
  }
  return out;
}

std::uint64_t content_hash(const RgbImage& img) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint8_t b) {
    h ^= b;
    h *= 0x100000001b3ULL;
  };
  for (std::uint64_t dim : {static_cast<std::uint64_t>(img.width()), static_cast<std::uint64_t>(img.height())}) {
    for (int i = 0; i < 8; ++i) mix(static_cast<std::uint8_t>(dim >> (8 * i)));
  }
  for (std::uint8_t b : to_interleaved(img)) mix(b);
  return h;
}

}  // namespace srlab
