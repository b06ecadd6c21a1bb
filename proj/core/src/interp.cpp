#include "srlab/interp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "srlab/error.hpp"

namespace srlab {

namespace {

template <typename PlaneFn>
RgbImage per_channel(const RgbImage& img, PlaneFn&& fn) {
  return RgbImage(fn(img.plane(0)), fn(img.plane(1)), fn(img.plane(2)));
}

/// Taps and weights for resampling one axis by 2 under half-pixel alignment.
/// The first tap is the anchor: outputs are anchor + sum w_k (tap_k - anchor),
/// which equals sum w_k tap_k when the weights sum to one and keeps constant
/// inputs exact in floating point.
template <std::size_t Taps>
struct AxisFilter {
  std::vector<std::array<std::ptrdiff_t, Taps>> index;
  std::vector<std::array<double, Taps>> weight;
  std::vector<std::size_t> anchor;
};

template <std::size_t Taps, typename Kernel>
AxisFilter<Taps> make_axis_filter(std::size_t src_len, Kernel&& kernel) {
  constexpr auto lead = static_cast<std::ptrdiff_t>(Taps / 2 - 1);
  const std::size_t dst_len = 2 * src_len;
  const auto last = static_cast<std::ptrdiff_t>(src_len) - 1;
  AxisFilter<Taps> f;
  f.index.resize(dst_len);
  f.weight.resize(dst_len);
  f.anchor.resize(dst_len);
  for (std::size_t x = 0; x < dst_len; ++x) {
    const double s = (static_cast<double>(x) + 0.5) / 2.0 - 0.5;
    const double base = std::floor(s);
    const double frac = s - base;
    double best = -1.0;
    for (std::size_t k = 0; k < Taps; ++k) {
      const auto offset = static_cast<std::ptrdiff_t>(k) - lead;
      f.index[x][k] = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(base) + offset, 0, last);
      f.weight[x][k] = kernel(frac - static_cast<double>(offset));
      if (f.weight[x][k] > best) {
        best = f.weight[x][k];
        f.anchor[x] = k;
      }
    }
  }
  return f;
}

template <std::size_t Taps>
ImagePlane resample_separable(const ImagePlane& plane, const AxisFilter<Taps>& fx, const AxisFilter<Taps>& fy) {
  const std::size_t w = plane.width();
  const std::size_t h = plane.height();
  const std::size_t ow = 2 * w;
  const std::size_t oh = 2 * h;

  std::vector<double> rows(ow * h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      const auto& idx = fx.index[x];
      const auto& wt = fx.weight[x];
      const double anchor = plane(static_cast<std::size_t>(idx[fx.anchor[x]]), y);
      double acc = 0.0;
      for (std::size_t k = 0; k < Taps; ++k) acc += wt[k] * (plane(static_cast<std::size_t>(idx[k]), y) - anchor);
      rows[y * ow + x] = anchor + acc;
    }
  }

  ImagePlane out(ow, oh);
  for (std::size_t y = 0; y < oh; ++y) {
    const auto& idx = fy.index[y];
    const auto& wt = fy.weight[y];
    const auto anchor_row = static_cast<std::size_t>(idx[fy.anchor[y]]);
    for (std::size_t x = 0; x < ow; ++x) {
      const double anchor = rows[anchor_row * ow + x];
      double acc = 0.0;
      for (std::size_t k = 0; k < Taps; ++k) {
        acc += wt[k] * (rows[static_cast<std::size_t>(idx[k]) * ow + x] - anchor);
      }
      out(x, y) = std::clamp(anchor + acc, 0.0, 1.0);
    }
  }
  return out;
}

double triangle(double t) noexcept {
  t = std::abs(t);
  return t < 1.0 ? 1.0 - t : 0.0;
}

/// HR grid under construction. Reads outside the grid step back by two
/// pixels at a time, so they land on a pixel of the same parity class.
class HrGrid {
 public:
  HrGrid(std::size_t w, std::size_t h) : w_(w), h_(h), data_(w * h, 0.0) {}

  double get(std::ptrdiff_t x, std::ptrdiff_t y) const noexcept {
    return data_[index(fold(x, w_), fold(y, h_))];
  }
  void set(std::size_t x, std::size_t y, double v) noexcept { data_[y * w_ + x] = v; }

  std::vector<double>& data() noexcept { return data_; }

 private:
  static std::size_t fold(std::ptrdiff_t c, std::size_t n) noexcept {
    const auto len = static_cast<std::ptrdiff_t>(n);
    while (c < 0) c += 2;
    while (c >= len) c -= 2;
    return static_cast<std::size_t>(c);
  }
  std::size_t index(std::size_t x, std::size_t y) const noexcept { return y * w_ + x; }

  std::size_t w_;
  std::size_t h_;
  std::vector<double> data_;
};

using Offset = std::array<std::ptrdiff_t, 2>;

/// Summed |second difference| along direction e, taken with step 2e at each
/// of the hole's four neighbours h +- e1, h +- e2.
double directional_curvature(const HrGrid& g, std::ptrdiff_t x, std::ptrdiff_t y, Offset e1, Offset e2,
                             Offset e) noexcept {
  double sum = 0.0;
  for (const Offset& n : {e1, e2}) {
    for (std::ptrdiff_t sign : {-1, 1}) {
      const std::ptrdiff_t nx = x + sign * n[0];
      const std::ptrdiff_t ny = y + sign * n[1];
      sum += std::abs(g.get(nx - 2 * e[0], ny - 2 * e[1]) - 2.0 * g.get(nx, ny) + g.get(nx + 2 * e[0], ny + 2 * e[1]));
    }
  }
  return sum;
}

/// Mean of the neighbour pair along e1 or e2, whichever has the smaller
/// directional curvature; ties go to e1.
double directional_fill(const HrGrid& g, std::ptrdiff_t x, std::ptrdiff_t y, Offset e1, Offset e2) noexcept {
  const double c1 = directional_curvature(g, x, y, e1, e2, e1);
  const double c2 = directional_curvature(g, x, y, e1, e2, e2);
  const Offset& e = c1 <= c2 ? e1 : e2;
  return 0.5 * (g.get(x - e[0], y - e[1]) + g.get(x + e[0], y + e[1]));
}

constexpr std::array<Offset, 4> kCurvatureDirs{{{1, 0}, {0, 1}, {1, 1}, {1, -1}}};

bool is_source_pixel(std::size_t x, std::size_t y) noexcept { return x % 2 == 0 && y % 2 == 0; }

/// Energy and (optionally) its gradient over a w x h HR buffer.
double curvature_energy(const std::vector<double>& v, std::size_t w, std::size_t h, std::vector<double>* grad) {
  if (grad) std::fill(grad->begin(), grad->end(), 0.0);
  double energy = 0.0;
  if (w < 3 || h < 3) return energy;
  for (std::size_t y = 1; y + 1 < h; ++y) {
    for (std::size_t x = 1; x + 1 < w; ++x) {
      if (is_source_pixel(x, y)) continue;
      const std::size_t c = y * w + x;
      for (const auto& d : kCurvatureDirs) {
        const auto off = d[1] * static_cast<std::ptrdiff_t>(w) + d[0];
        const std::size_t lo = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(c) - off);
        const std::size_t hi = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(c) + off);
        const double second = v[lo] - 2.0 * v[c] + v[hi];
        energy += second * second;
        if (grad) {
          (*grad)[lo] += 2.0 * second;
          (*grad)[c] -= 4.0 * second;
          (*grad)[hi] += 2.0 * second;
        }
      }
    }
  }
  return energy;
}

constexpr int kMaxStepHalvings = 40;

}  // namespace

std::string_view to_string(MethodId id) noexcept {
  switch (id) {
    case MethodId::nearest: return "nearest";
    case MethodId::bilinear: return "bilinear";
    case MethodId::bicubic: return "bicubic";
    case MethodId::fcbi: return "fcbi";
    case MethodId::icbi: return "icbi";
    case MethodId::mlp: return "mlp";
  }
  return "unknown";
}

MethodId parse_method(std::string_view name) {
  for (MethodId id : {MethodId::nearest, MethodId::bilinear, MethodId::bicubic, MethodId::fcbi, MethodId::icbi,
                      MethodId::mlp}) {
    if (name == to_string(id)) return id;
  }
  throw ValueError("unknown upscale method '" + std::string(name) + "'");
}

ImagePlane upscale_nearest(const ImagePlane& plane) {
  ImagePlane out(2 * plane.width(), 2 * plane.height());
  for (std::size_t y = 0; y < out.height(); ++y) {
    for (std::size_t x = 0; x < out.width(); ++x) out(x, y) = plane(x / 2, y / 2);
  }
  return out;
}

RgbImage upscale_nearest(const RgbImage& img) {
  return per_channel(img, [](const ImagePlane& p) { return upscale_nearest(p); });
}

ImagePlane upscale_bilinear(const ImagePlane& plane) {
  const auto fx = make_axis_filter<2>(plane.width(), triangle);
  const auto fy = make_axis_filter<2>(plane.height(), triangle);
  return resample_separable(plane, fx, fy);
}

RgbImage upscale_bilinear(const RgbImage& img) {
  return per_channel(img, [](const ImagePlane& p) { return upscale_bilinear(p); });
}

double keys_kernel(double t, double a) noexcept {
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

ImagePlane upscale_bicubic(const ImagePlane& plane, double a) {
  if (!(a >= -1.0 && a <= 0.0)) throw ValueError("bicubic parameter a must lie in [-1, 0]");
  auto kernel = [a](double t) { return keys_kernel(t, a); };
  const auto fx = make_axis_filter<4>(plane.width(), kernel);
  const auto fy = make_axis_filter<4>(plane.height(), kernel);
  return resample_separable(plane, fx, fy);
}

RgbImage upscale_bicubic(const RgbImage& img, double a) {
  return per_channel(img, [a](const ImagePlane& p) { return upscale_bicubic(p, a); });
}

ImagePlane upscale_fcbi(const ImagePlane& plane) {
  const std::size_t w = 2 * plane.width();
  const std::size_t h = 2 * plane.height();
  HrGrid g(w, h);
  for (std::size_t y = 0; y < plane.height(); ++y) {
    for (std::size_t x = 0; x < plane.width(); ++x) g.set(2 * x, 2 * y, plane(x, y));
  }

  // Odd/odd holes: NW-SE diagonal versus NE-SW diagonal.
  for (std::size_t y = 1; y < h; y += 2) {
    for (std::size_t x = 1; x < w; x += 2) {
      const auto sx = static_cast<std::ptrdiff_t>(x);
      const auto sy = static_cast<std::ptrdiff_t>(y);
      g.set(x, y, directional_fill(g, sx, sy, {1, 1}, {1, -1}));
    }
  }

  // Remaining holes: horizontal pair versus vertical pair.
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = (y + 1) % 2; x < w; x += 2) {
      const auto sx = static_cast<std::ptrdiff_t>(x);
      const auto sy = static_cast<std::ptrdiff_t>(y);
      g.set(x, y, directional_fill(g, sx, sy, {1, 0}, {0, 1}));
    }
  }
  return ImagePlane(w, h, std::move(g.data()));
}

RgbImage upscale_fcbi(const RgbImage& img) {
  return per_channel(img, [](const ImagePlane& p) { return upscale_fcbi(p); });
}

double icbi_energy(const ImagePlane& hr) {
  const std::vector<double> v(hr.data().begin(), hr.data().end());
  return curvature_energy(v, hr.width(), hr.height(), nullptr);
}

IcbiTrace upscale_icbi_traced(const ImagePlane& plane, std::size_t iterations, double step) {
  if (!(step > 0.0)) throw ValueError("ICBI step must be positive");
  const ImagePlane start = upscale_fcbi(plane);
  const std::size_t w = start.width();
  const std::size_t h = start.height();
  std::vector<double> cur(start.data().begin(), start.data().end());
  std::vector<double> grad(cur.size());
  std::vector<double> trial(cur.size());

  IcbiTrace trace;
  double energy = curvature_energy(cur, w, h, &grad);
  trace.energies.push_back(energy);

  for (std::size_t it = 0; it < iterations; ++it) {
    bool accepted = false;
    for (int attempt = 0; attempt <= kMaxStepHalvings && !accepted; ++attempt) {
      for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
          const std::size_t i = y * w + x;
          trial[i] = is_source_pixel(x, y) ? cur[i] : std::clamp(cur[i] - step * grad[i], 0.0, 1.0);
        }
      }
      const double trial_energy = curvature_energy(trial, w, h, nullptr);
      if (trial_energy <= energy) {
        cur.swap(trial);
        energy = curvature_energy(cur, w, h, &grad);
        accepted = true;
      } else {
        step *= 0.5;
      }
    }
    trace.energies.push_back(energy);
  }
  trace.final_step = step;
  trace.result = ImagePlane(w, h, std::move(cur));
  return trace;
}

ImagePlane upscale_icbi(const ImagePlane& plane, std::size_t iterations, double step) {
  return upscale_icbi_traced(plane, iterations, step).result;
}

RgbImage upscale_icbi(const RgbImage& img, std::size_t iterations, double step) {
  return per_channel(img, [&](const ImagePlane& p) { return upscale_icbi(p, iterations, step); });
}

RgbImage upscale(const RgbImage& img, const UpscaleMethod& method) {
  switch (method.id) {
    case MethodId::nearest: return upscale_nearest(img);
    case MethodId::bilinear: return upscale_bilinear(img);
    case MethodId::bicubic: return upscale_bicubic(img, method.bicubic_a);
    case MethodId::fcbi: return upscale_fcbi(img);
    case MethodId::icbi: return upscale_icbi(img, method.icbi_iterations, method.icbi_step);
    case MethodId::mlp: break;
  }
  throw ValueError("the mlp method needs a trained model; use upscale_with_mlp");
}

}  // namespace srlab
