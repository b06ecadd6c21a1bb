#include <gtest/gtest.h>

#include <png.h>

#include <cstdint>
#include <fstream>

#include "srlab/error.hpp"
#include "srlab/image.hpp"
#include "srlab/image_io.hpp"
#include "test_support.hpp"

using namespace srlab;
using srlab::testing::TempDir;

namespace {

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

double global_mean(const ImagePlane& p) {
  double s = 0.0;
  for (double v : p.data()) s += v;
  return s / static_cast<double>(p.size());
}

}  // namespace

TEST(ImagePlane, RejectsOutOfRangeAndMismatchedData) {
  EXPECT_THROW(ImagePlane(2, 2, std::vector<double>{0, 0.5, 1.5, 0}), ValueError);
  EXPECT_THROW(ImagePlane(2, 2, std::vector<double>{0, 0.5, 1}), DimensionError);
  EXPECT_THROW(ImagePlane(1, 1, -0.1), ValueError);
  EXPECT_THROW(RgbImage(ImagePlane(2, 2), ImagePlane(2, 2), ImagePlane(2, 3)), DimensionError);
}

TEST(PadReplicate, MarginZeroIsIdentity) {
  Rng rng(1);
  const auto p = srlab::testing::random_plane(5, 3, rng);
  EXPECT_EQ(pad_replicate(p, 0), p);
}

TEST(PadReplicate, SinglePixel) {
  const ImagePlane p(1, 1, 0.7);
  const auto out = pad_replicate(p, 1);
  ASSERT_EQ(out.width(), 3u);
  ASSERT_EQ(out.height(), 3u);
  for (double v : out.data()) EXPECT_EQ(v, 0.7);
}

TEST(PadReplicate, TwoByTwoEnumerated) {
  const ImagePlane p(2, 2, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  // Every cell of the 4x4 result, from the nearest-edge rule.
  const std::vector<double> expected{0.1, 0.1, 0.2, 0.2,  //
                                     0.1, 0.1, 0.2, 0.2,  //
                                     0.3, 0.3, 0.4, 0.4,  //
                                     0.3, 0.3, 0.4, 0.4};
  EXPECT_EQ(pad_replicate(p, 1), ImagePlane(4, 4, expected));
}

TEST(PadReplicate, CroppingRecoversInterior) {
  Rng rng(2);
  for (std::size_t margin : {1u, 2u, 5u}) {
    const auto p = srlab::testing::random_plane(7, 4, rng);
    EXPECT_EQ(crop(pad_replicate(p, margin), margin, margin, 7, 4), p);
  }
}

TEST(Downsample, ConstantAndPairMean) {
  EXPECT_EQ(downsample_2x(ImagePlane(2, 2, 0.3)), ImagePlane(1, 1, 0.3));
  EXPECT_EQ(downsample_2x(ImagePlane(2, 2, std::vector<double>{0, 1, 0, 1})), ImagePlane(1, 1, 0.5));
}

TEST(Downsample, RampBlockMeans) {
  std::vector<double> ramp(16);
  for (std::size_t i = 0; i < 16; ++i) ramp[i] = static_cast<double>(i) / 15.0;
  // Brute-force 2x2 block sums of the indices {0,1,4,5}, {2,3,6,7}, {8,9,12,13}, {10,11,14,15}.
  const auto out = downsample_2x(ImagePlane(4, 4, ramp));
  EXPECT_NEAR(out(0, 0), 2.5 / 15.0, 1e-15);
  EXPECT_NEAR(out(1, 0), 4.5 / 15.0, 1e-15);
  EXPECT_NEAR(out(0, 1), 10.5 / 15.0, 1e-15);
  EXPECT_NEAR(out(1, 1), 12.5 / 15.0, 1e-15);
}

TEST(Downsample, OddDimensionRejected) {
  EXPECT_THROW(downsample_2x(ImagePlane(3, 2)), DimensionError);
  EXPECT_THROW(downsample_2x(RgbImage(2, 5)), DimensionError);
}

TEST(Downsample, PreservesGlobalMean) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = srlab::testing::random_plane(2 * (1 + rng.below(16)), 2 * (1 + rng.below(16)), rng);
    EXPECT_NEAR(global_mean(downsample_2x(p)), global_mean(p), 1e-12);
  }
}

TEST(Downsample, ConstantImageStaysConstant) {
  const RgbImage img(8, 6, 0.42);
  EXPECT_EQ(downsample_2x(img), RgbImage(4, 3, 0.42));
}

TEST(Quantize, RoundsHalfUpAndClamps) {
  EXPECT_EQ(to_byte(1.0), 255);
  EXPECT_EQ(to_byte(0.5), 128);
  EXPECT_EQ(to_byte(0.0), 0);
  EXPECT_EQ(to_byte(127.5 / 255.0), 128);
  EXPECT_EQ(to_byte(2.0), 255);
  EXPECT_EQ(to_byte(-1.0), 0);
}

TEST(ImageIo, LoadsPpmPixelsNormalized) {
  TempDir dir("ppm");
  std::string bytes = "P6\n# comment\n1 1\n255\n";
  bytes += std::string{static_cast<char>(255), static_cast<char>(0), static_cast<char>(128)};
  write_bytes(dir / "one.ppm", bytes);
  const auto img = load_image(dir / "one.ppm");
  ASSERT_EQ(img.width(), 1u);
  EXPECT_EQ(img.plane(Channel::red)(0, 0), 1.0);
  EXPECT_EQ(img.plane(Channel::green)(0, 0), 0.0);
  EXPECT_EQ(img.plane(Channel::blue)(0, 0), 128.0 / 255.0);
}

TEST(ImageIo, AllBlackPng) {
  TempDir dir("black");
  save_image(RgbImage(2, 2, 0.0), dir / "black.png");
  const auto img = load_image(dir / "black.png");
  EXPECT_EQ(img, RgbImage(2, 2, 0.0));
}

TEST(ImageIo, PngAndPpmRoundTripWithinQuantization) {
  TempDir dir("rt");
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto img = srlab::testing::random_image(13 + seed, 7 + 2 * seed, seed);
    save_image(img, dir / "a.png");
    save_ppm(img, dir / "a.ppm");
    for (const char* name : {"a.png", "a.ppm"}) {
      const auto back = load_image(dir / name);
      ASSERT_EQ(back.width(), img.width());
      ASSERT_EQ(back.height(), img.height());
      EXPECT_TRUE(back.is_normalized());
      for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < img.plane(c).size(); ++i) {
          EXPECT_LE(std::abs(back.plane(c).data()[i] - img.plane(c).data()[i]), 1.0 / 510.0 + 1e-12);
        }
      }
      EXPECT_EQ(back, quantize_8bit(img));
    }
  }
}

TEST(ImageIo, GrayscalePngReplicatesPlane) {
  TempDir dir("gray");
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = 1;
  png.height = 2;
  png.format = PNG_FORMAT_GRAY;
  const std::uint8_t pixels[2] = {64, 192};
  const auto path = (dir / "g.png").string();
  ASSERT_TRUE(png_image_write_to_file(&png, path.c_str(), 0, pixels, 0, nullptr));
  const auto img = load_image(path);
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(img.plane(c)(0, 0), 64.0 / 255.0);
    EXPECT_EQ(img.plane(c)(0, 1), 192.0 / 255.0);
  }
}

TEST(ImageIo, ErrorsAreDistinct) {
  TempDir dir("err");
  EXPECT_THROW(load_image(dir / "missing.png"), IoError);

  write_bytes(dir / "junk.bin", "GIF89a....");
  try {
    load_image(dir / "junk.bin");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.code(), FormatErrc::unsupported_format);
  }

  write_bytes(dir / "zero.ppm", "P6\n0 4\n255\n");
  try {
    load_image(dir / "zero.ppm");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.code(), FormatErrc::bad_dimensions);
  }

  write_bytes(dir / "short.ppm", "P6\n2 2\n255\nabc");
  try {
    load_image(dir / "short.ppm");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.code(), FormatErrc::truncated);
  }

  write_bytes(dir / "deep.ppm", "P6\n1 1\n65535\n\0\0\0\0\0\0");
  try {
    load_image(dir / "deep.ppm");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.code(), FormatErrc::unsupported_format);
  }

  EXPECT_THROW(save_image(RgbImage(2, 2), dir / "no_such_dir" / "x.png"), IoError);
}

TEST(ImageIo, ContentHashSeesPixelsNotContainer) {
  TempDir dir("hash");
  const auto img = srlab::testing::random_image(9, 9, 4);
  save_image(img, dir / "a.png");
  save_ppm(img, dir / "a.ppm");
  EXPECT_EQ(content_hash(load_image(dir / "a.png")), content_hash(load_image(dir / "a.ppm")));
  EXPECT_NE(content_hash(img), content_hash(srlab::testing::random_image(9, 9, 5)));
}

TEST(Transform, TransposeAndPermute) {
  const auto img = srlab::testing::random_image(4, 3, 9);
  EXPECT_EQ(transpose(transpose(img)), img);
  const auto p = permute_channels(img, {2, 0, 1});
  EXPECT_EQ(p.plane(0), img.plane(2));
  EXPECT_EQ(p.plane(1), img.plane(0));
  EXPECT_EQ(crop_even(srlab::testing::random_image(5, 7, 1)).width(), 4u);
}
