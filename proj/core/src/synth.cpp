#include "srlab/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "srlab/error.hpp"
#include "srlab/image_io.hpp"
#include "srlab/random.hpp"

namespace srlab {

namespace {

using Rgb = std::array<double, 3>;

constexpr std::size_t kSupersample = 4;

Rgb mix(const Rgb& a, const Rgb& b, double t) {
  return {a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + (b[2] - a[2]) * t};
}

Rgb scale(const Rgb& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

double smoothstep(double e0, double e1, double x) {
  const double t = std::clamp((x - e0) / (e1 - e0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

Rgb hsv(double h, double s, double v) {
  h = std::fmod(h, 1.0) * 6.0;
  const double c = v * s;
  const double x = c * (1.0 - std::abs(std::fmod(h, 2.0) - 1.0));
  const double m = v - c;
  Rgb rgb{};
  switch (static_cast<int>(h)) {
    case 0: rgb = {c, x, 0}; break;
    case 1: rgb = {x, c, 0}; break;
    case 2: rgb = {0, c, x}; break;
    case 3: rgb = {0, x, c}; break;
    case 4: rgb = {x, 0, c}; break;
    default: rgb = {c, 0, x}; break;
  }
  return {rgb[0] + m, rgb[1] + m, rgb[2] + m};
}

/// Lattice value noise with smooth interpolation, summed over octaves.
class FractalNoise {
 public:
  FractalNoise(std::uint64_t seed, double base_cell, int octaves) : seed_(seed), cell_(base_cell), octaves_(octaves) {}

  /// Roughly zero-mean, in about [-1, 1].
  double operator()(double x, double y) const {
    double sum = 0.0;
    double amp = 1.0;
    double norm = 0.0;
    double cell = cell_;
    for (int o = 0; o < octaves_; ++o) {
      sum += amp * lattice(x / cell, y / cell, static_cast<std::uint64_t>(o));
      norm += amp;
      amp *= 0.5;
      cell *= 0.5;
    }
    return sum / norm;
  }

 private:
  double corner(std::int64_t ix, std::int64_t iy, std::uint64_t octave) const {
    const std::uint64_t h = mix_seed(mix_seed(seed_ ^ octave, static_cast<std::uint64_t>(ix)), static_cast<std::uint64_t>(iy));
    return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  }

  double lattice(double x, double y, std::uint64_t octave) const {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const auto ix = static_cast<std::int64_t>(fx);
    const auto iy = static_cast<std::int64_t>(fy);
    const double tx = smoothstep(0.0, 1.0, x - fx);
    const double ty = smoothstep(0.0, 1.0, y - fy);
    const double top = corner(ix, iy, octave) + (corner(ix + 1, iy, octave) - corner(ix, iy, octave)) * tx;
    const double bot =
        corner(ix, iy + 1, octave) + (corner(ix + 1, iy + 1, octave) - corner(ix, iy + 1, octave)) * tx;
    return top + (bot - top) * ty;
  }

  std::uint64_t seed_;
  double cell_;
  int octaves_;
};

using Shader = std::function<Rgb(double, double)>;

/// Coordinates passed to shaders are in pixels of the output image.
Shader stripes_shader(Rng& rng, double size) {
  const double angle = rng.uniform(0.0, std::numbers::pi);
  const double period = size * rng.uniform(0.035, 0.08);
  const double bend = rng.uniform(0.8, 1.6);
  const double sharp = rng.uniform(2.0, 6.0);
  const Rgb dark = hsv(rng.uniform(0.0, 0.12), rng.uniform(0.2, 0.6), rng.uniform(0.05, 0.2));
  const Rgb light = hsv(rng.uniform(0.05, 0.15), rng.uniform(0.1, 0.7), rng.uniform(0.75, 0.95));
  FractalNoise orient(rng.next(), size * 0.45, 2);
  FractalNoise fur(rng.next(), 2.5, 2);
  FractalNoise shade(rng.next(), size * 0.5, 2);
  const double half = 0.5 * size;
  return [=](double x, double y) {
    // Stripe direction drifts across the image so one picture covers many orientations.
    const double theta = angle + bend * orient(x, y);
    const double u = (x - half) * std::cos(theta) + (y - half) * std::sin(theta);
    const double band = 0.5 + 0.5 * std::tanh(sharp * std::sin(2.0 * std::numbers::pi * u / period));
    const Rgb c = mix(dark, light, band);
    return scale(c, 1.0 + 0.15 * fur(x, y) + 0.15 * shade(x, y));
  };
}

struct Flower {
  double cx, cy, radius, petals, twist;
  Rgb colour;
};

Shader petals_shader(Rng& rng, double size) {
  FractalNoise leaves(rng.next(), size * 0.12, 5);
  FractalNoise grain(rng.next(), 2.0, 2);
  const Rgb leaf_dark = hsv(rng.uniform(0.22, 0.33), 0.7, 0.18);
  const Rgb leaf_light = hsv(rng.uniform(0.22, 0.33), 0.55, 0.6);
  std::vector<Flower> flowers(3 + rng.below(4));
  const double hue = rng.uniform(0.0, 1.0);
  for (auto& f : flowers) {
    f.cx = rng.uniform(0.0, size);
    f.cy = rng.uniform(0.0, size);
    f.radius = size * rng.uniform(0.1, 0.22);
    f.petals = static_cast<double>(5 + rng.below(4));
    f.twist = rng.uniform(0.0, std::numbers::pi);
    f.colour = hsv(hue + rng.uniform(-0.08, 0.08), rng.uniform(0.55, 0.9), rng.uniform(0.75, 1.0));
  }
  return [=](double x, double y) {
    Rgb c = mix(leaf_dark, leaf_light, 0.5 + 0.5 * leaves(x, y));
    for (const auto& f : flowers) {
      const double dx = x - f.cx;
      const double dy = y - f.cy;
      const double r = std::hypot(dx, dy);
      const double theta = std::atan2(dy, dx) + f.twist;
      const double edge = f.radius * (0.55 + 0.45 * std::abs(std::cos(0.5 * f.petals * theta)));
      const double inside = 1.0 - smoothstep(edge - 1.0, edge + 1.0, r);
      if (inside <= 0.0) continue;
      const double veins = 0.08 * std::sin(6.0 * f.petals * theta);
      const double shading = 0.65 + 0.35 * (r / f.radius) + veins;
      Rgb petal = scale(f.colour, std::min(shading, 1.0));
      const double disc = 1.0 - smoothstep(0.16 * f.radius - 1.0, 0.16 * f.radius + 1.0, r);
      petal = mix(petal, Rgb{0.95, 0.78, 0.15}, disc);
      c = mix(c, petal, inside);
    }
    return scale(c, 1.0 + 0.1 * grain(x, y));
  };
}

struct Facade {
  double x0, x1, top;
  Rgb wall, glass;
  double win_w, win_h, pitch_x, pitch_y;
};

Shader blocks_shader(Rng& rng, double size) {
  const Rgb sky_top = hsv(rng.uniform(0.55, 0.62), rng.uniform(0.4, 0.7), 0.9);
  const Rgb sky_low = hsv(rng.uniform(0.55, 0.62), 0.15, 0.97);
  FractalNoise grime(rng.next(), 6.0, 2);
  std::vector<Facade> facades;
  double x = -size * 0.05;
  while (x < size) {
    Facade f;
    f.x0 = x;
    f.x1 = x + size * rng.uniform(0.15, 0.35);
    f.top = size * rng.uniform(0.1, 0.55);
    f.wall = hsv(rng.uniform(0.0, 0.15), rng.uniform(0.05, 0.35), rng.uniform(0.35, 0.85));
    f.glass = hsv(rng.uniform(0.5, 0.65), rng.uniform(0.2, 0.5), rng.uniform(0.1, 0.35));
    f.pitch_x = rng.uniform(6.0, 12.0);
    f.pitch_y = rng.uniform(7.0, 14.0);
    f.win_w = f.pitch_x * rng.uniform(0.4, 0.7);
    f.win_h = f.pitch_y * rng.uniform(0.4, 0.7);
    facades.push_back(f);
    x = f.x1 + size * rng.uniform(0.0, 0.04);
  }
  return [=](double px, double py) {
    for (auto it = facades.rbegin(); it != facades.rend(); ++it) {
      const Facade& f = *it;
      if (px < f.x0 || px >= f.x1 || py < f.top) continue;
      const double lx = std::fmod(px - f.x0, f.pitch_x);
      const double ly = std::fmod(py - f.top, f.pitch_y);
      const bool window = lx > 1.5 && lx < 1.5 + f.win_w && ly > 2.0 && ly < 2.0 + f.win_h;
      Rgb c = window ? f.glass : f.wall;
      return scale(c, 1.0 + 0.06 * grime(px, py));
    }
    return mix(sky_top, sky_low, std::clamp(py / size, 0.0, 1.0));
  };
}

Shader mosaic_shader(Rng& rng, double size) {
  const std::size_t cells = 20 + rng.below(30);
  std::vector<std::array<double, 2>> sites(cells);
  std::vector<Rgb> colours(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    sites[i] = {rng.uniform(0.0, size), rng.uniform(0.0, size)};
    colours[i] = hsv(rng.uniform(0.0, 1.0), rng.uniform(0.2, 0.9), rng.uniform(0.25, 0.95));
  }
  FractalNoise grain(rng.next(), 2.5, 3);
  return [=](double x, double y) {
    std::size_t best = 0;
    double best_d = INFINITY;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      const double d = std::hypot(x - sites[i][0], y - sites[i][1]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return scale(colours[best], 1.0 + 0.1 * grain(x, y));
  };
}

Shader make_shader(std::string_view category, Rng& rng, double size) {
  if (category == "stripes") return stripes_shader(rng, size);
  if (category == "petals") return petals_shader(rng, size);
  if (category == "blocks") return blocks_shader(rng, size);
  if (category == "mosaic") return mosaic_shader(rng, size);
  throw ValueError("unknown synthetic category '" + std::string(category) + "'");
}

}  // namespace

const std::vector<std::string>& synth_categories() {
  static const std::vector<std::string> names{"stripes", "petals", "blocks", "mosaic"};
  return names;
}

RgbImage synthesize(std::string_view category, std::size_t width, std::size_t height, std::uint64_t seed) {
  if (width == 0 || height == 0) throw DimensionError("synthetic image needs a positive size");
  Rng rng(seed);
  const Shader shader = make_shader(category, rng, static_cast<double>(std::max(width, height)));
  RgbImage img(width, height);
  constexpr double inv = 1.0 / static_cast<double>(kSupersample * kSupersample);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      Rgb acc{0, 0, 0};
      for (std::size_t sy = 0; sy < kSupersample; ++sy) {
        for (std::size_t sx = 0; sx < kSupersample; ++sx) {
          const Rgb c = shader(static_cast<double>(x) + (static_cast<double>(sx) + 0.5) / kSupersample,
                               static_cast<double>(y) + (static_cast<double>(sy) + 0.5) / kSupersample);
          for (std::size_t k = 0; k < 3; ++k) acc[k] += std::clamp(c[k], 0.0, 1.0);
        }
      }
      for (std::size_t k = 0; k < 3; ++k) img.plane(k)(x, y) = std::clamp(acc[k] * inv, 0.0, 1.0);
    }
  }
  return img;
}

std::vector<CorpusEntry> write_synthetic_corpus(const std::filesystem::path& dir,
                                                const std::vector<std::string>& categories, std::size_t per_category,
                                                std::size_t size, std::uint64_t seed) {
  std::vector<CorpusEntry> entries;
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const auto sub = dir / categories[c];
    std::filesystem::create_directories(sub);
    for (std::size_t k = 0; k < per_category; ++k) {
      const auto path = sub / (categories[c] + "_" + std::to_string(k) + ".png");
      save_image(synthesize(categories[c], size, size, mix_seed(mix_seed(seed, hash_name(categories[c])), k)), path);
      entries.push_back({categories[c], path});
    }
  }
  return entries;
}

}  // namespace srlab
