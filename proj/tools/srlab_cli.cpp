// srlab: train, run and evaluate 2x super-resolution upscalers.
//
//   srlab synth      --out corpus --count 6 --test-count 1
//   srlab train      --manifest corpus/train.tsv --out gen.bin
//   srlab upscale    --method mlp --model gen.bin --input lr.png --output hr.png
//   srlab eval       --reference hr.png --candidate up.png
//   srlab bench      --config bench.ini
//   srlab downsample --input hr.png --output lr.png

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "srlab/bench.hpp"
#include "srlab/dataset.hpp"
#include "srlab/error.hpp"
#include "srlab/image_io.hpp"
#include "srlab/interp.hpp"
#include "srlab/metrics.hpp"
#include "srlab/mlp.hpp"
#include "srlab/random.hpp"
#include "srlab/synth.hpp"

namespace fs = std::filesystem;
using namespace srlab;

namespace {

struct TrainFlags {
  std::size_t hidden = 20;
  TrainConfig cfg;
  std::size_t sample_budget = 0;
  bool crop_even = false;
};

void add_train_flags(CLI::App* app, TrainFlags& f) {
  app->add_option("--hidden", f.hidden, "Hidden units")->capture_default_str();
  app->add_option("--lr", f.cfg.learning_rate, "SGD learning rate")->capture_default_str();
  app->add_option("--epochs", f.cfg.max_epochs, "Maximum epochs")->capture_default_str();
  app->add_option("--patience", f.cfg.patience, "Epochs without validation improvement before stopping")
      ->capture_default_str();
  app->add_option("--batch", f.cfg.batch_size, "Samples per SGD update")->capture_default_str();
  app->add_option("--sample-budget", f.sample_budget, "Cap on pooled samples (0 = all)")->capture_default_str();
  app->add_flag("--crop-even", f.crop_even, "Trim one row/column from odd-sized images");
}

struct InterpFlags {
  UpscaleMethod method;
};

void add_interp_flags(CLI::App* app, InterpFlags& f) {
  app->add_option("--bicubic-a", f.method.bicubic_a, "Keys kernel parameter in [-1, 0]")->capture_default_str();
  app->add_option("--icbi-iters", f.method.icbi_iterations, "ICBI correction iterations")->capture_default_str();
  app->add_option("--icbi-step", f.method.icbi_step, "ICBI initial step size")->capture_default_str();
}

void add_ssim_flags(CLI::App* app, SsimParams& p) {
  app->add_option("--ssim-window", p.window, "SSIM Gaussian window size")->capture_default_str();
  app->add_option("--ssim-sigma", p.sigma, "SSIM Gaussian sigma")->capture_default_str();
  app->add_option("--ssim-k1", p.k1, "SSIM k1")->capture_default_str();
  app->add_option("--ssim-k2", p.k2, "SSIM k2")->capture_default_str();
}

std::vector<CorpusEntry> resolve_corpus(const std::string& manifest, const std::string& dir) {
  if (!manifest.empty()) return read_manifest(manifest);
  if (!dir.empty()) return scan_directory(dir);
  throw ValueError("give --manifest or --dir");
}

void log_line(const std::string& s) { std::cerr << s << '\n'; }

std::string fmt_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

int run_train(const std::string& manifest, const std::string& dir, const std::string& category,
              const std::string& cache, const std::string& out, const std::string& log_csv, const TrainFlags& f,
              std::uint64_t seed) {
  std::vector<PatchSample> pooled;
  std::uint64_t split_seed = mix_seed(seed, 1);
  if (!cache.empty() && fs::exists(cache)) {
    auto loaded = load_samples(cache);
    pooled = std::move(loaded.samples);
    split_seed = loaded.rng_seed;
    log_line("loaded " + std::to_string(pooled.size()) + " samples from " + cache);
  } else {
    const auto entries = resolve_corpus(manifest, dir);
    CorpusSpec spec = category.empty() ? general_corpus(entries) : category_corpus(entries, category);
    spec.crop_even = f.crop_even;
    pooled = pool_corpus(spec, split_seed, f.sample_budget);
    log_line("extracted " + std::to_string(pooled.size()) + " samples from " + std::to_string(spec.entries.size()) +
             " images");
    if (!cache.empty()) save_samples(pooled, split_seed, cache);
  }
  const DatasetSplit split = build_split(std::move(pooled), split_seed);

  TrainConfig cfg = f.cfg;
  cfg.rng_seed = mix_seed(seed, 2);
  const auto start = std::chrono::steady_clock::now();
  auto result = train(init_model(f.hidden, mix_seed(seed, 3)), split, cfg, [](std::size_t e, double tr, double va) {
    log_line("epoch " + std::to_string(e) + " train " + std::to_string(tr) + " validation " + std::to_string(va));
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  save_model(result.model, out);

  if (!log_csv.empty()) {
    std::ofstream csv(log_csv);
    csv << "epoch,train_mse,validation_mse\n";
    for (std::size_t e = 0; e < result.report.train_mse.size(); ++e) {
      csv << e << ',' << result.report.train_mse[e] << ',' << result.report.validation_mse[e] << '\n';
    }
  }
  std::cout << "model: " << out << "\n"
            << "stop: " << to_string(result.report.stop_reason) << " after " << result.report.train_mse.size()
            << " epochs (" << secs << " s)\n"
            << "best epoch: " << result.report.best_epoch << "\n"
            << "best validation mse: " << result.report.best_validation_mse << "\n"
            << "test split mse: " << mean_loss(result.model, split.test) << "\n";
  return 0;
}

int run_upscale(const std::string& input, const std::string& output, const std::string& method_name,
                const std::string& model_path, bool from_hr, const InterpFlags& f) {
  RgbImage img = load_image(input);
  if (from_hr) img = downsample_2x(crop_even(img));
  UpscaleMethod m = f.method;
  m.id = parse_method(method_name);
  RgbImage up;
  if (m.id == MethodId::mlp) {
    if (model_path.empty()) throw ValueError("--method mlp needs --model");
    up = upscale_with_mlp(load_model(model_path), img);
  } else {
    up = upscale(img, m);
  }
  save_image(up, output);
  std::cout << img.width() << "x" << img.height() << " -> " << up.width() << "x" << up.height() << " (" << method_name
            << ") " << output << "\n";
  return 0;
}

int run_eval(const std::string& reference, const std::string& candidate, const SsimParams& ssim, bool quantize,
             const std::string& diff, double gain, bool csv) {
  const RgbImage ref = load_image(reference);
  const RgbImage cand = load_image(candidate);
  const MetricValues v = evaluate(ref, cand, ssim, quantize);
  if (csv) {
    std::cout << "mse,psnr,ssim\n" << v.mse << ',' << v.psnr << ',' << v.ssim << "\n";
  } else {
    std::cout << "MSE  " << fmt_metric(v.mse) << "\nPSNR " << fmt_metric(v.psnr) << " dB\nSSIM " << fmt_metric(v.ssim)
              << "\n";
  }
  if (!diff.empty()) save_image(difference_image(ref, cand, gain), diff);
  return 0;
}

int run_synth(const std::string& out, std::vector<std::string> categories, std::size_t count, std::size_t test_count,
              std::size_t size, std::uint64_t seed) {
  if (categories.empty()) categories = synth_categories();
  const auto entries = write_synthetic_corpus(out, categories, count + test_count, size, seed);
  std::vector<CorpusEntry> train_entries;
  std::vector<CorpusEntry> test_entries;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::size_t k = i % (count + test_count);
    auto e = entries[i];
    e.path = fs::relative(e.path, out);
    (k < count ? train_entries : test_entries).push_back(e);
  }
  write_manifest(train_entries, fs::path(out) / "train.tsv");
  if (!test_entries.empty()) write_manifest(test_entries, fs::path(out) / "test.tsv");
  std::cout << "wrote " << entries.size() << " images to " << out << " (train.tsv: " << train_entries.size()
            << ", test.tsv: " << test_entries.size() << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2x super-resolution lab: MLP patch upscaler vs classical interpolation"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;

  // train
  auto* train_cmd = app.add_subcommand("train", "Train an MLP on a corpus manifest or directory");
  std::string train_manifest, train_dir, train_category, train_cache, train_out = "model.bin", train_log;
  TrainFlags train_flags;
  train_cmd->add_option("--manifest", train_manifest, "category<TAB>path manifest");
  train_cmd->add_option("--dir", train_dir, "Image directory (subdirectories are categories)");
  train_cmd->add_option("--category", train_category, "Train on one category only (MLP_sp)");
  train_cmd->add_option("--dataset-cache", train_cache, "Sample cache: loaded if present, written otherwise");
  train_cmd->add_option("--out", train_out, "Model file to write")->capture_default_str();
  train_cmd->add_option("--log-csv", train_log, "Per-epoch loss curve");
  train_cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
  add_train_flags(train_cmd, train_flags);

  // upscale
  auto* up_cmd = app.add_subcommand("upscale", "Upscale an image 2x");
  std::string up_in, up_out, up_method = "bicubic", up_model;
  bool up_from_hr = false;
  InterpFlags up_flags;
  up_cmd->add_option("--input", up_in, "Input image")->required();
  up_cmd->add_option("--output", up_out, "Output PNG")->required();
  up_cmd->add_option("--method", up_method, "nearest|bilinear|bicubic|fcbi|icbi|mlp")->capture_default_str();
  up_cmd->add_option("--model", up_model, "Model file for --method mlp");
  up_cmd->add_flag("--from-hr", up_from_hr, "Box-downsample the input 2x first");
  up_cmd->add_option("--seed", seed, "Unused; accepted for uniformity");
  add_interp_flags(up_cmd, up_flags);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Compare an image against a reference");
  std::string ev_ref, ev_cand, ev_diff;
  double ev_gain = 4.0;
  bool ev_quant = false, ev_csv = false;
  SsimParams ev_ssim;
  eval_cmd->add_option("--reference", ev_ref, "Reference image")->required();
  eval_cmd->add_option("--candidate", ev_cand, "Image under test")->required();
  eval_cmd->add_flag("--quantize-metrics", ev_quant, "Round both images to 8-bit before measuring");
  eval_cmd->add_option("--diff", ev_diff, "Write the inverted difference image here");
  eval_cmd->add_option("--gain", ev_gain, "Difference image gain")->capture_default_str();
  eval_cmd->add_flag("--csv", ev_csv, "Machine-readable output");
  eval_cmd->add_option("--seed", seed, "Unused; accepted for uniformity");
  add_ssim_flags(eval_cmd, ev_ssim);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run every method on held-out images and write a report");
  bench_cmd->set_config("--config", "", "Key = value configuration file (keys are the long flag names)");
  std::string bench_train, bench_test, bench_out = "bench_out";
  std::vector<std::string> bench_methods{std::begin(kMethodLabels), std::end(kMethodLabels)};
  TrainFlags bench_train_flags;
  InterpFlags bench_interp;
  SsimParams bench_ssim;
  bool bench_quant = false, bench_no_images = false, bench_verify = false;
  double bench_gain = 4.0;
  bench_cmd->add_option("--train-manifest", bench_train, "Training images (category<TAB>path)");
  bench_cmd->add_option("--test-manifest", bench_test, "Held-out HR test images (category<TAB>path)")->required();
  bench_cmd->add_option("--methods", bench_methods, "Comma-separated methods")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--out", bench_out, "Report directory")->capture_default_str();
  bench_cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
  bench_cmd->add_option("--diff-gain", bench_gain, "Difference image gain")->capture_default_str();
  bench_cmd->add_flag("--quantize-metrics", bench_quant, "Round images to 8-bit before measuring");
  bench_cmd->add_flag("--no-images", bench_no_images, "Skip writing upscaled and difference images");
  bench_cmd->add_flag("--verify", bench_verify, "Recompute metrics from the saved images afterwards");
  add_train_flags(bench_cmd, bench_train_flags);
  add_interp_flags(bench_cmd, bench_interp);
  add_ssim_flags(bench_cmd, bench_ssim);

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a procedural multi-category corpus");
  std::string synth_out = "corpus";
  std::vector<std::string> synth_cats;
  std::size_t synth_count = 5, synth_test = 1, synth_size = 256;
  synth_cmd->add_option("--out", synth_out, "Output directory")->capture_default_str();
  synth_cmd->add_option("--categories", synth_cats, "stripes,petals,blocks,mosaic")->delimiter(',');
  synth_cmd->add_option("--count", synth_count, "Training images per category")->capture_default_str();
  synth_cmd->add_option("--test-count", synth_test, "Held-out images per category")->capture_default_str();
  synth_cmd->add_option("--size", synth_size, "Square HR image size")->capture_default_str();
  synth_cmd->add_option("--seed", seed, "Master seed")->capture_default_str();

  // downsample
  auto* down_cmd = app.add_subcommand("downsample", "2x box-filter downsample");
  std::string down_in, down_out;
  down_cmd->add_option("--input", down_in, "Input image")->required();
  down_cmd->add_option("--output", down_out, "Output PNG")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) {
      return run_train(train_manifest, train_dir, train_category, train_cache, train_out, train_log, train_flags, seed);
    }
    if (*up_cmd) return run_upscale(up_in, up_out, up_method, up_model, up_from_hr, up_flags);
    if (*eval_cmd) return run_eval(ev_ref, ev_cand, ev_ssim, ev_quant, ev_diff, ev_gain, ev_csv);
    if (*synth_cmd) return run_synth(synth_out, synth_cats, synth_count, synth_test, synth_size, seed);
    if (*down_cmd) {
      save_image(downsample_2x(load_image(down_in)), down_out);
      return 0;
    }
    if (*bench_cmd) {
      BenchConfig cfg;
      if (!bench_train.empty()) cfg.train_entries = read_manifest(bench_train);
      cfg.test_entries = read_manifest(bench_test);
      cfg.methods.clear();
      for (const auto& m : bench_methods) cfg.methods.push_back(canonical_method_label(m));
      cfg.interp = bench_interp.method;
      cfg.hidden_size = bench_train_flags.hidden;
      cfg.train = bench_train_flags.cfg;
      cfg.sample_budget = bench_train_flags.sample_budget;
      cfg.crop_even = bench_train_flags.crop_even;
      cfg.ssim = bench_ssim;
      cfg.quantize_metrics = bench_quant;
      cfg.diff_gain = bench_gain;
      cfg.save_images = !bench_no_images;
      cfg.out_dir = bench_out;
      cfg.seed = seed;
      const auto result = run_benchmark(cfg, log_line);
      std::cout << "wrote " << result.rows.size() << " rows to " << (cfg.out_dir / "report.csv").string() << "\n";
      if (bench_verify) {
        if (!cfg.save_images) throw ValueError("--verify needs the saved images");
        const double delta = verify_report(cfg);
        std::cout << "verify: max |delta MSE| from saved images = " << delta << "\n";
        if (delta > (cfg.quantize_metrics ? 1e-9 : 1.0)) return 2;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
