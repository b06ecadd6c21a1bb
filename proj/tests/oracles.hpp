#pragma once

// Independent reference implementations used only by tests. They share no
// code with the library routines they check: straight-line loops, no
// separable filtering, no cached activations.

#include <cmath>
#include <cstddef>
#include <vector>

#include "srlab/image.hpp"
#include "srlab/mlp.hpp"

namespace srlab::oracle {

inline double mse_naive(const RgbImage& a, const RgbImage& b) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t y = 0; y < a.height(); ++y) {
      for (std::size_t x = 0; x < a.width(); ++x) {
        const double d = 255.0 * a.plane(c)(x, y) - 255.0 * b.plane(c)(x, y);
        sum += d * d;
        ++count;
      }
    }
  }
  return sum / static_cast<double>(count);
}

/// Direct per-window SSIM: for every window position, weighted moments are
/// accumulated over the full 2-D Gaussian window.
inline double ssim_windowed(const ImagePlane& a, const ImagePlane& b, std::size_t win = 11, double sigma = 1.5,
                            double k1 = 0.01, double k2 = 0.03, double range = 255.0) {
  std::vector<double> w2(win * win);
  double total = 0.0;
  const double c = (static_cast<double>(win) - 1.0) / 2.0;
  for (std::size_t j = 0; j < win; ++j) {
    for (std::size_t i = 0; i < win; ++i) {
      const double dx = static_cast<double>(i) - c;
      const double dy = static_cast<double>(j) - c;
      w2[j * win + i] = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      total += w2[j * win + i];
    }
  }
  for (double& v : w2) v /= total;
  const double c1 = (k1 * range) * (k1 * range);
  const double c2 = (k2 * range) * (k2 * range);
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t y0 = 0; y0 + win <= a.height(); ++y0) {
    for (std::size_t x0 = 0; x0 + win <= a.width(); ++x0) {
      double ma = 0, mb = 0;
      for (std::size_t j = 0; j < win; ++j) {
        for (std::size_t i = 0; i < win; ++i) {
          ma += w2[j * win + i] * 255.0 * a(x0 + i, y0 + j);
          mb += w2[j * win + i] * 255.0 * b(x0 + i, y0 + j);
        }
      }
      double va = 0, vb = 0, cov = 0;
      for (std::size_t j = 0; j < win; ++j) {
        for (std::size_t i = 0; i < win; ++i) {
          const double da = 255.0 * a(x0 + i, y0 + j) - ma;
          const double db = 255.0 * b(x0 + i, y0 + j) - mb;
          va += w2[j * win + i] * da * da;
          vb += w2[j * win + i] * db * db;
          cov += w2[j * win + i] * da * db;
        }
      }
      acc += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++n;
    }
  }
  return acc / static_cast<double>(n);
}

/// Forward pass written out from the layer equations.
inline std::vector<double> forward_straight(const MlpModel& m, const std::vector<double>& x) {
  std::vector<double> h(m.hidden_size);
  for (std::size_t j = 0; j < m.hidden_size; ++j) {
    double z = 0.0;
    for (std::size_t i = 0; i < m.input_size; ++i) z += m.w1[j * m.input_size + i] * x[i];
    h[j] = std::tanh(z + m.b1[j]);
  }
  std::vector<double> o(m.output_size);
  for (std::size_t k = 0; k < m.output_size; ++k) {
    double z = 0.0;
    for (std::size_t j = 0; j < m.hidden_size; ++j) z += m.w2[k * m.hidden_size + j] * h[j];
    o[k] = 1.0 / (1.0 + std::exp(-(z + m.b2[k])));
  }
  return o;
}

inline double loss_straight(const MlpModel& m, const std::vector<double>& x, const std::vector<double>& t) {
  const auto o = forward_straight(m, x);
  double s = 0.0;
  for (std::size_t k = 0; k < o.size(); ++k) s += (o[k] - t[k]) * (o[k] - t[k]);
  return s / static_cast<double>(o.size());
}

/// Central finite differences of the loss with respect to every parameter,
/// flattened in w1, b1, w2, b2 order.
inline std::vector<double> numeric_gradient(MlpModel m, const std::vector<double>& x, const std::vector<double>& t,
                                            double h = 1e-5) {
  std::vector<double> g;
  for (auto* block : {&m.w1, &m.b1, &m.w2, &m.b2}) {
    for (double& p : *block) {
      const double saved = p;
      p = saved + h;
      const double up = loss_straight(m, x, t);
      p = saved - h;
      const double down = loss_straight(m, x, t);
      p = saved;
      g.push_back((up - down) / (2.0 * h));
    }
  }
  return g;
}

/// Relative error with a floor on the denominator, so that components that are
/// zero up to rounding are compared absolutely.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

}  // namespace srlab::oracle
