#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "srlab/dataset.hpp"

namespace srlab {

/// One-hidden-layer perceptron: hidden = tanh(W1 x + b1), out = sigmoid(W2 h + b2).
/// Matrices are row-major, one row per neuron of the receiving layer.
struct MlpModel {
  std::size_t input_size = kPatchInputs;
  std::size_t hidden_size = 20;
  std::size_t output_size = kPatchOutputs;
  std::vector<double> w1;  // hidden_size x input_size
  std::vector<double> b1;  // hidden_size
  std::vector<double> w2;  // output_size x hidden_size
  std::vector<double> b2;  // output_size

  std::size_t parameter_count() const noexcept;
  /// Throws DimensionError on inconsistent shapes and ValueError on non-finite parameters.
  void validate() const;

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

/// Same layout as MlpModel; holds dL/dtheta.
struct MlpGradient {
  std::vector<double> w1, b1, w2, b2;
};

/// Glorot-uniform weights in [-r, r], r = sqrt(6 / (fan_in + fan_out)); zero biases.
MlpModel init_model(std::size_t hidden_size, std::uint64_t rng_seed, std::size_t input_size = kPatchInputs,
                    std::size_t output_size = kPatchOutputs);

/// Activations of one forward pass.
struct ForwardPass {
  std::vector<double> hidden;
  std::vector<double> output;
};

void forward_into(const MlpModel& model, std::span<const double> input, ForwardPass& pass);
std::vector<double> forward(const MlpModel& model, std::span<const double> input);

/// L = (1 / output_size) * sum_i (out_i - target_i)^2.
double sample_loss(const MlpModel& model, std::span<const double> input, std::span<const double> target);

MlpGradient backward(const MlpModel& model, std::span<const double> input, std::span<const double> target);

/// Mean of sample_loss over the samples, summed in index order. Zero for an empty set.
double mean_loss(const MlpModel& model, std::span<const PatchSample> samples);

struct TrainConfig {
  double learning_rate = 0.05;
  std::size_t max_epochs = 200;
  std::size_t patience = 10;
  std::size_t batch_size = 1;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

enum class StopReason { max_epochs, early_stop };
std::string_view to_string(StopReason r) noexcept;

struct TrainReport {
  /// Mean per-sample loss seen during each epoch (before that sample's update).
  std::vector<double> train_mse;
  /// Mean loss on the validation set after each epoch.
  std::vector<double> validation_mse;
  std::size_t best_epoch = 0;
  double best_validation_mse = 0.0;
  StopReason stop_reason = StopReason::max_epochs;
};

struct TrainResult {
  MlpModel model;
  TrainReport report;
};

/// Called after each epoch with (epoch index, train mse, validation mse).
using EpochCallback = std::function<void(std::size_t, double, double)>;

/// Per-sample (or mini-batch averaged) SGD over a freshly shuffled training
/// set each epoch, keeping the parameters of the best validation epoch.
/// Throws ValueError on an empty train/validation set and DivergenceError on
/// a non-finite loss.
TrainResult train(MlpModel model, const DatasetSplit& split, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

/// Binary model format, little-endian: "MLPSR", version byte 0x01, four u32
/// (input, hidden, output, reserved = 0), then w1, b1, w2, b2 as f64.
std::vector<std::uint8_t> encode_model(const MlpModel& model);
/// Throws FormatError with a code identifying the defect.
MlpModel decode_model(std::span<const std::uint8_t> bytes);

void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace srlab
