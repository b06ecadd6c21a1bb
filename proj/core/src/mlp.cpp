#include "srlab/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "binary_io.hpp"
#include "srlab/error.hpp"
#include "srlab/random.hpp"

namespace srlab {

namespace {

constexpr char kModelMagic[5] = {'M', 'L', 'P', 'S', 'R'};
constexpr std::uint8_t kModelVersion = 1;
constexpr std::size_t kModelHeaderBytes = 5 + 1 + 4 * 4;
constexpr std::uint32_t kMaxLayerWidth = 1u << 16;

// Keeps sigmoid strictly inside (0, 1) in double precision.
constexpr double kLogitLo = -700.0;
constexpr double kLogitHi = 36.0;

double sigmoid(double z) noexcept { return 1.0 / (1.0 + std::exp(-std::clamp(z, kLogitLo, kLogitHi))); }

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void check_io_sizes(const MlpModel& m, std::span<const double> input, std::span<const double> target) {
  if (input.size() != m.input_size) {
    throw DimensionError("input length " + std::to_string(input.size()) + " != " + std::to_string(m.input_size));
  }
  if (target.size() != m.output_size) {
    throw DimensionError("target length " + std::to_string(target.size()) + " != " + std::to_string(m.output_size));
  }
}

/// Output-layer error signal dL/dz2 for the current pass.
void output_delta(const MlpModel& m, const ForwardPass& pass, std::span<const double> target,
                  std::vector<double>& delta) {
  const double scale = 2.0 / static_cast<double>(m.output_size);
  for (std::size_t k = 0; k < m.output_size; ++k) {
    const double o = pass.output[k];
    delta[k] = scale * (o - target[k]) * o * (1.0 - o);
  }
}

/// Hidden-layer error signal dL/dz1, computed with the current W2.
void hidden_delta(const MlpModel& m, const ForwardPass& pass, const std::vector<double>& out_delta,
                  std::vector<double>& delta) {
  for (std::size_t j = 0; j < m.hidden_size; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < m.output_size; ++k) acc += m.w2[k * m.hidden_size + j] * out_delta[k];
    const double h = pass.hidden[j];
    delta[j] = acc * (1.0 - h * h);
  }
}

MlpGradient zero_gradient(const MlpModel& m) {
  return MlpGradient{std::vector<double>(m.w1.size(), 0.0), std::vector<double>(m.b1.size(), 0.0),
                     std::vector<double>(m.w2.size(), 0.0), std::vector<double>(m.b2.size(), 0.0)};
}

/// grad += d(loss)/d(theta) given the two error signals.
void accumulate(const MlpModel& m, std::span<const double> input, const ForwardPass& pass,
                const std::vector<double>& d_out, const std::vector<double>& d_hid, MlpGradient& g) {
  for (std::size_t k = 0; k < m.output_size; ++k) {
    g.b2[k] += d_out[k];
    for (std::size_t j = 0; j < m.hidden_size; ++j) g.w2[k * m.hidden_size + j] += d_out[k] * pass.hidden[j];
  }
  for (std::size_t j = 0; j < m.hidden_size; ++j) {
    g.b1[j] += d_hid[j];
    for (std::size_t i = 0; i < m.input_size; ++i) g.w1[j * m.input_size + i] += d_hid[j] * input[i];
  }
}

void apply(MlpModel& m, const MlpGradient& g, double rate) {
  auto step = [rate](std::vector<double>& p, const std::vector<double>& d) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= rate * d[i];
  };
  step(m.w1, g.w1);
  step(m.b1, g.b1);
  step(m.w2, g.w2);
  step(m.b2, g.b2);
}

double pass_loss(const ForwardPass& pass, std::span<const double> target) {
  double acc = 0.0;
  for (std::size_t k = 0; k < target.size(); ++k) {
    const double d = pass.output[k] - target[k];
    acc += d * d;
  }
  return acc / static_cast<double>(target.size());
}

}  // namespace

std::size_t MlpModel::parameter_count() const noexcept {
  return hidden_size * input_size + hidden_size + output_size * hidden_size + output_size;
}

void MlpModel::validate() const {
  if (input_size == 0 || hidden_size == 0 || output_size == 0) throw DimensionError("layer sizes must be positive");
  if (w1.size() != hidden_size * input_size || b1.size() != hidden_size || w2.size() != output_size * hidden_size ||
      b2.size() != output_size) {
    throw DimensionError("parameter arrays do not match layer sizes");
  }
  if (!all_finite(w1) || !all_finite(b1) || !all_finite(w2) || !all_finite(b2)) {
    throw ValueError("model has non-finite parameters");
  }
}

MlpModel init_model(std::size_t hidden_size, std::uint64_t rng_seed, std::size_t input_size,
                    std::size_t output_size) {
  if (hidden_size == 0 || input_size == 0 || output_size == 0) throw ValueError("layer sizes must be positive");
  MlpModel m;
  m.input_size = input_size;
  m.hidden_size = hidden_size;
  m.output_size = output_size;
  Rng rng(rng_seed);
  auto glorot = [&rng](std::size_t fan_in, std::size_t fan_out, std::size_t n) {
    const double r = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::vector<double> w(n);
    for (double& v : w) v = rng.uniform(-r, r);
    return w;
  };
  m.w1 = glorot(input_size, hidden_size, hidden_size * input_size);
  m.b1.assign(hidden_size, 0.0);
  m.w2 = glorot(hidden_size, output_size, output_size * hidden_size);
  m.b2.assign(output_size, 0.0);
  return m;
}

void forward_into(const MlpModel& m, std::span<const double> input, ForwardPass& pass) {
  if (input.size() != m.input_size) {
    throw DimensionError("input length " + std::to_string(input.size()) + " != " + std::to_string(m.input_size));
  }
  pass.hidden.resize(m.hidden_size);
  pass.output.resize(m.output_size);
  for (std::size_t j = 0; j < m.hidden_size; ++j) {
    const double* row = &m.w1[j * m.input_size];
    double z = m.b1[j];
    for (std::size_t i = 0; i < m.input_size; ++i) z += row[i] * input[i];
    pass.hidden[j] = std::tanh(z);
  }
  for (std::size_t k = 0; k < m.output_size; ++k) {
    const double* row = &m.w2[k * m.hidden_size];
    double z = m.b2[k];
    for (std::size_t j = 0; j < m.hidden_size; ++j) z += row[j] * pass.hidden[j];
    pass.output[k] = sigmoid(z);
  }
}

std::vector<double> forward(const MlpModel& model, std::span<const double> input) {
  ForwardPass pass;
  forward_into(model, input, pass);
  return std::move(pass.output);
}

double sample_loss(const MlpModel& model, std::span<const double> input, std::span<const double> target) {
  check_io_sizes(model, input, target);
  ForwardPass pass;
  forward_into(model, input, pass);
  return pass_loss(pass, target);
}

MlpGradient backward(const MlpModel& model, std::span<const double> input, std::span<const double> target) {
  check_io_sizes(model, input, target);
  ForwardPass pass;
  forward_into(model, input, pass);
  std::vector<double> d_out(model.output_size);
  std::vector<double> d_hid(model.hidden_size);
  output_delta(model, pass, target, d_out);
  hidden_delta(model, pass, d_out, d_hid);
  MlpGradient g = zero_gradient(model);
  accumulate(model, input, pass, d_out, d_hid, g);
  return g;
}

double mean_loss(const MlpModel& model, std::span<const PatchSample> samples) {
  if (samples.empty()) return 0.0;
  if (model.output_size != kPatchOutputs) throw DimensionError("patch evaluation needs a 4-output model");
  ForwardPass pass;
  double acc = 0.0;
  for (const auto& s : samples) {
    forward_into(model, s.input, pass);
    acc += pass_loss(pass, s.target);
  }
  return acc / static_cast<double>(samples.size());
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ValueError("learning_rate must be positive");
  if (max_epochs < 1) throw ValueError("max_epochs must be at least 1");
  if (patience < 1) throw ValueError("patience must be at least 1");
  if (batch_size < 1) throw ValueError("batch_size must be at least 1");
}

std::string_view to_string(StopReason r) noexcept {
  return r == StopReason::early_stop ? "early_stop" : "max_epochs";
}

TrainResult train(MlpModel model, const DatasetSplit& split, const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  model.validate();
  if (model.input_size != kPatchInputs || model.output_size != kPatchOutputs) {
    throw DimensionError("patch training needs a 9-input, 4-output model");
  }
  if (split.train.empty() || split.validation.empty()) {
    throw ValueError("training needs non-empty train and validation sets");
  }

  Rng rng(mix_seed(cfg.rng_seed, 1));
  std::vector<std::size_t> order(split.train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  ForwardPass pass;
  std::vector<double> d_out(model.output_size);
  std::vector<double> d_hid(model.hidden_size);
  MlpGradient batch_grad = zero_gradient(model);

  TrainResult result{model, {}};
  TrainReport& report = result.report;
  report.best_validation_mse = std::numeric_limits<double>::infinity();
  std::size_t stale_epochs = 0;

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    std::size_t in_batch = 0;
    for (std::size_t idx : order) {
      const PatchSample& s = split.train[idx];
      forward_into(model, s.input, pass);
      epoch_loss += pass_loss(pass, s.target);
      output_delta(model, pass, s.target, d_out);
      hidden_delta(model, pass, d_out, d_hid);
      accumulate(model, s.input, pass, d_out, d_hid, batch_grad);
      if (++in_batch == cfg.batch_size) {
        apply(model, batch_grad, cfg.learning_rate / static_cast<double>(in_batch));
        batch_grad = zero_gradient(model);
        in_batch = 0;
      }
    }
    if (in_batch > 0) {
      apply(model, batch_grad, cfg.learning_rate / static_cast<double>(in_batch));
      batch_grad = zero_gradient(model);
    }

    const double train_mse = epoch_loss / static_cast<double>(split.train.size());
    const double val_mse = mean_loss(model, split.validation);
    if (!std::isfinite(train_mse) || !std::isfinite(val_mse)) {
      throw DivergenceError("non-finite loss at epoch " + std::to_string(epoch) + " (train " +
                            std::to_string(train_mse) + ", validation " + std::to_string(val_mse) +
                            "); try a smaller learning rate");
    }
    report.train_mse.push_back(train_mse);
    report.validation_mse.push_back(val_mse);
    if (on_epoch) on_epoch(epoch, train_mse, val_mse);

    if (val_mse < report.best_validation_mse) {
      report.best_validation_mse = val_mse;
      report.best_epoch = epoch;
      result.model = model;
      stale_epochs = 0;
    } else if (++stale_epochs >= cfg.patience) {
      report.stop_reason = StopReason::early_stop;
      return result;
    }
  }
  report.stop_reason = StopReason::max_epochs;
  return result;
}

std::vector<std::uint8_t> encode_model(const MlpModel& model) {
  model.validate();
  detail::ByteWriter w;
  w.bytes(kModelMagic, sizeof(kModelMagic));
  w.u8(kModelVersion);
  w.u32(static_cast<std::uint32_t>(model.input_size));
  w.u32(static_cast<std::uint32_t>(model.hidden_size));
  w.u32(static_cast<std::uint32_t>(model.output_size));
  w.u32(0);
  for (const auto* block : {&model.w1, &model.b1, &model.w2, &model.b2}) {
    for (double v : *block) w.f64(v);
  }
  return std::move(w.buffer());
}

MlpModel decode_model(std::span<const std::uint8_t> bytes) {
  const std::size_t magic_len = std::min(bytes.size(), sizeof(kModelMagic));
  if (!std::equal(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(magic_len), kModelMagic)) {
    throw FormatError(FormatErrc::bad_magic, "not an MLPSR model file");
  }
  detail::ByteReader r(bytes, "model file");
  r.take(sizeof(kModelMagic));
  if (const auto version = r.u8(); version != kModelVersion) {
    throw FormatError(FormatErrc::unsupported_version, "model version " + std::to_string(version));
  }
  const std::uint32_t in = r.u32();
  const std::uint32_t hid = r.u32();
  const std::uint32_t out = r.u32();
  if (r.u32() != 0) throw FormatError(FormatErrc::bad_values, "reserved header field is not zero");
  for (std::uint32_t n : {in, hid, out}) {
    if (n == 0 || n > kMaxLayerWidth) {
      throw FormatError(FormatErrc::bad_dimensions, "layer size " + std::to_string(n) + " out of range");
    }
  }

  MlpModel m;
  m.input_size = in;
  m.hidden_size = hid;
  m.output_size = out;
  const std::size_t expected = m.parameter_count() * 8;
  if (r.remaining() < expected) {
    throw FormatError(FormatErrc::truncated, "model file holds " + std::to_string(r.remaining()) +
                                                 " parameter bytes, expected " + std::to_string(expected));
  }
  if (r.remaining() > expected) {
    throw FormatError(FormatErrc::trailing_bytes,
                      std::to_string(r.remaining() - expected) + " unexpected bytes after the parameters");
  }
  auto read_block = [&r](std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = r.f64();
    return v;
  };
  m.w1 = read_block(std::size_t{hid} * in);
  m.b1 = read_block(hid);
  m.w2 = read_block(std::size_t{out} * hid);
  m.b2 = read_block(out);
  if (!all_finite(m.w1) || !all_finite(m.b1) || !all_finite(m.w2) || !all_finite(m.b2)) {
    throw FormatError(FormatErrc::bad_values, "model file contains non-finite parameters");
  }
  return m;
}

void save_model(const MlpModel& model, const std::filesystem::path& path) {
  detail::write_binary_file(path, encode_model(model));
}

MlpModel load_model(const std::filesystem::path& path) { return decode_model(detail::read_binary_file(path)); }

}  // namespace srlab
