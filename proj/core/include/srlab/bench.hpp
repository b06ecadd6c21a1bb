#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "srlab/dataset.hpp"
#include "srlab/image.hpp"
#include "srlab/interp.hpp"
#include "srlab/metrics.hpp"
#include "srlab/mlp.hpp"

namespace srlab {

/// Slides the network over every LR pixel of every channel: the padded 3x3
/// neighbourhood of (x, y) produces HR pixels (2x,2y), (2x+1,2y), (2x,2y+1),
/// (2x+1,2y+1). Throws DimensionError unless the model is 9 -> h -> 4.
RgbImage upscale_with_mlp(const MlpModel& model, const RgbImage& lr);

/// Inverted, gain-scaled residual: 1 - clamp(gain * |reference - candidate|, 0, 1).
RgbImage difference_image(const RgbImage& reference, const RgbImage& candidate, double gain = 4.0);

/// Methods the harness can run, by report label.
inline constexpr std::string_view kMethodLabels[] = {"nearest",    "bilinear",   "bicubic", "fcbi-style",
                                                     "icbi-style", "mlp_gen",    "mlp_sp"};

/// Accepts report labels and the short names fcbi / icbi; returns the report label.
std::string canonical_method_label(std::string_view name);

struct BenchConfig {
  /// Training images (category<TAB>path). MLP_gen pools all of them; one
  /// MLP_sp is trained per category.
  std::vector<CorpusEntry> train_entries;
  /// Held-out HR reference images, evaluated after 2x box downsampling.
  std::vector<CorpusEntry> test_entries;
  std::vector<std::string> methods{kMethodLabels, kMethodLabels + 7};

  UpscaleMethod interp;  // bicubic a, ICBI iterations and step
  std::size_t hidden_size = 20;
  TrainConfig train;
  /// Caps the pooled sample count of every corpus (0 = no cap), so MLP_gen
  /// and MLP_sp can be compared at equal budgets.
  std::size_t sample_budget = 0;

  SsimParams ssim;
  bool quantize_metrics = false;
  double diff_gain = 4.0;
  bool crop_even = false;
  bool save_images = true;

  std::filesystem::path out_dir = "bench_out";
  std::uint64_t seed = 1;

  void validate() const;
};

struct ReportRow {
  std::string image;
  std::string category;
  std::string method;
  MetricValues values;
};

struct TrainingSummary {
  std::string model;  // "mlp_gen" or "mlp_sp_<category>"
  std::size_t train_samples = 0;
  std::size_t validation_samples = 0;
  TrainReport report;
  double test_split_mse = 0.0;  // mean loss on the held-out 20 % sample split
};

struct BenchResult {
  std::vector<ReportRow> rows;
  std::vector<TrainingSummary> trainings;
};

using LogFn = std::function<void(const std::string&)>;

/// Trains MLP_gen and one MLP_sp per training category, upscales every test
/// image with every configured method, and writes to cfg.out_dir:
///   report.csv, report.md, training.csv, models/*.bin,
///   images/<image>/<method>.png, diffs/<image>/<method>.png.
/// Throws ValueError when a test image leaks into the training set (same
/// path or same pixel content).
BenchResult run_benchmark(const BenchConfig& cfg, const LogFn& log = {});

/// Leakage check alone; throws ValueError naming the offending image.
void check_no_leakage(const std::vector<CorpusEntry>& train, const std::vector<CorpusEntry>& test);

/// Columns: image,category,method,mse,psnr,ssim,mse_full,psnr_full,ssim_full.
/// The short columns are rounded to two decimals for display; the *_full
/// columns carry every digit ("inf" for an infinite PSNR).
void write_report_csv(const std::vector<ReportRow>& rows, const std::filesystem::path& path);
/// Reads the full-precision columns back.
std::vector<ReportRow> read_report_csv(const std::filesystem::path& path);
void write_report_markdown(const BenchResult& result, const BenchConfig& cfg, const std::filesystem::path& path);

/// Recomputes every row from the saved images against the reference images
/// in cfg.test_entries; returns the largest |delta MSE| in 8-bit^2 units.
double verify_report(const BenchConfig& cfg);

}  // namespace srlab
