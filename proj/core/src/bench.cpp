#include "srlab/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "srlab/error.hpp"
#include "srlab/image_io.hpp"
#include "srlab/random.hpp"

namespace srlab {

namespace {

namespace fs = std::filesystem;

std::string fixed2(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string full(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string image_name(const CorpusEntry& e) { return e.path.stem().string(); }

RgbImage load_reference(const fs::path& path, bool crop) {
  RgbImage hr = load_image(path);
  if (crop) hr = crop_even(hr);
  if (hr.width() % 2 != 0 || hr.height() % 2 != 0) {
    throw DimensionError(path.string() + " has odd dimensions; use crop_even");
  }
  return hr;
}

bool wants(const BenchConfig& cfg, std::string_view label) {
  return std::find(cfg.methods.begin(), cfg.methods.end(), label) != cfg.methods.end();
}

std::vector<std::string> categories_of(const std::vector<CorpusEntry>& entries) {
  std::set<std::string> names;
  for (const auto& e : entries) names.insert(e.category);
  return {names.begin(), names.end()};
}

struct TrainedModel {
  MlpModel model;
  TrainingSummary summary;
};

TrainedModel train_corpus(const CorpusSpec& spec, const std::string& name, std::uint64_t seed,
                          const BenchConfig& cfg, const LogFn& log) {
  if (log) log("building corpus for " + name + " (" + std::to_string(spec.entries.size()) + " images)");
  const DatasetSplit split = build_corpus(spec, mix_seed(seed, 1), cfg.sample_budget);
  TrainConfig tc = cfg.train;
  tc.rng_seed = mix_seed(seed, 2);
  MlpModel init = init_model(cfg.hidden_size, mix_seed(seed, 3));
  EpochCallback on_epoch;
  if (log) {
    on_epoch = [&](std::size_t epoch, double tr, double va) {
      if (epoch % 10 == 0) log(name + " epoch " + std::to_string(epoch) + " train " + full(tr) + " val " + full(va));
    };
  }
  TrainResult result = train(std::move(init), split, tc, on_epoch);
  TrainedModel out;
  out.summary.model = name;
  out.summary.train_samples = split.train.size();
  out.summary.validation_samples = split.validation.size();
  out.summary.test_split_mse = mean_loss(result.model, split.test);
  out.summary.report = std::move(result.report);
  out.model = std::move(result.model);
  if (log) {
    log(name + " stopped (" + std::string(to_string(out.summary.report.stop_reason)) + ") best epoch " +
        std::to_string(out.summary.report.best_epoch) + " validation " + full(out.summary.report.best_validation_mse));
  }
  return out;
}

void write_training_csv(const std::vector<TrainingSummary>& trainings, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "model,epoch,train_mse,validation_mse\n";
  for (const auto& t : trainings) {
    for (std::size_t e = 0; e < t.report.train_mse.size(); ++e) {
      out << t.model << ',' << e << ',' << full(t.report.train_mse[e]) << ',' << full(t.report.validation_mse[e])
          << '\n';
    }
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw FormatError(FormatErrc::bad_values, "bad number '" + s + "' in report");
  return v;
}

}  // namespace

RgbImage upscale_with_mlp(const MlpModel& model, const RgbImage& lr) {
  model.validate();
  if (model.input_size != kPatchInputs || model.output_size != kPatchOutputs) {
    throw DimensionError("MLP upscaling needs a 9-input, 4-output model");
  }
  const std::size_t w = lr.width();
  const std::size_t h = lr.height();
  RgbImage hr(2 * w, 2 * h);
  ForwardPass pass;
  std::array<double, kPatchInputs> patch{};
  for (std::size_t c = 0; c < 3; ++c) {
    const ImagePlane& src = lr.plane(c);
    ImagePlane& dst = hr.plane(c);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        gather_patch(src, x, y, patch);
        forward_into(model, patch, pass);
        dst(2 * x, 2 * y) = pass.output[0];
        dst(2 * x + 1, 2 * y) = pass.output[1];
        dst(2 * x, 2 * y + 1) = pass.output[2];
        dst(2 * x + 1, 2 * y + 1) = pass.output[3];
      }
    }
  }
  return hr;
}

RgbImage difference_image(const RgbImage& reference, const RgbImage& candidate, double gain) {
  if (!(gain > 0.0)) throw ValueError("difference gain must be positive");
  if (reference.width() != candidate.width() || reference.height() != candidate.height()) {
    throw DimensionError("difference image needs equal dimensions");
  }
  RgbImage out(reference.width(), reference.height());
  for (std::size_t c = 0; c < 3; ++c) {
    const auto r = reference.plane(c).data();
    const auto k = candidate.plane(c).data();
    auto o = out.plane(c).data();
    for (std::size_t i = 0; i < r.size(); ++i) o[i] = 1.0 - std::clamp(gain * std::abs(r[i] - k[i]), 0.0, 1.0);
  }
  return out;
}

std::string canonical_method_label(std::string_view name) {
  if (name == "fcbi") return "fcbi-style";
  if (name == "icbi") return "icbi-style";
  for (auto label : kMethodLabels) {
    if (name == label) return std::string(label);
  }
  throw ValueError("unknown benchmark method '" + std::string(name) + "'");
}

void BenchConfig::validate() const {
  if (test_entries.empty()) throw ValueError("benchmark needs at least one test image");
  if (methods.empty()) throw ValueError("benchmark needs at least one method");
  for (const auto& m : methods) {
    if (canonical_method_label(m) != m) throw ValueError("method '" + m + "' is not a report label");
  }
  const bool mlp = std::find_if(methods.begin(), methods.end(), [](const std::string& m) {
                     return m.rfind("mlp", 0) == 0;
                   }) != methods.end();
  if (mlp && train_entries.empty()) throw ValueError("MLP methods need a training manifest");
  if (!(diff_gain > 0.0)) throw ValueError("difference gain must be positive");
  if (hidden_size == 0) throw ValueError("hidden size must be positive");
  train.validate();
  ssim.validate();
  std::set<std::string> names;
  for (const auto& e : test_entries) {
    if (!names.insert(image_name(e)).second) throw ValueError("duplicate test image name '" + image_name(e) + "'");
  }
}

void check_no_leakage(const std::vector<CorpusEntry>& train, const std::vector<CorpusEntry>& test) {
  std::set<fs::path> train_paths;
  std::set<std::uint64_t> train_hashes;
  for (const auto& e : train) {
    train_paths.insert(fs::weakly_canonical(e.path));
    train_hashes.insert(content_hash(load_image(e.path)));
  }
  for (const auto& e : test) {
    if (train_paths.count(fs::weakly_canonical(e.path))) {
      throw ValueError("test image " + e.path.string() + " is also a training image");
    }
    if (train_hashes.count(content_hash(load_image(e.path)))) {
      throw ValueError("test image " + e.path.string() + " has the same pixels as a training image");
    }
  }
}

BenchResult run_benchmark(const BenchConfig& cfg, const LogFn& log) {
  cfg.validate();
  check_no_leakage(cfg.train_entries, cfg.test_entries);
  fs::create_directories(cfg.out_dir / "models");

  BenchResult result;
  MlpModel gen_model;
  std::map<std::string, MlpModel> sp_models;

  if (wants(cfg, "mlp_gen")) {
    CorpusSpec spec = general_corpus(cfg.train_entries);
    spec.crop_even = cfg.crop_even;
    auto trained = train_corpus(spec, "mlp_gen", mix_seed(cfg.seed, hash_name("mlp_gen")), cfg, log);
    save_model(trained.model, cfg.out_dir / "models" / "mlp_gen.bin");
    gen_model = std::move(trained.model);
    result.trainings.push_back(std::move(trained.summary));
  }
  if (wants(cfg, "mlp_sp")) {
    for (const auto& category : categories_of(cfg.train_entries)) {
      CorpusSpec spec = category_corpus(cfg.train_entries, category);
      spec.crop_even = cfg.crop_even;
      const std::string name = "mlp_sp_" + category;
      auto trained = train_corpus(spec, name, mix_seed(cfg.seed, hash_name(name)), cfg, log);
      save_model(trained.model, cfg.out_dir / "models" / (name + ".bin"));
      sp_models.emplace(category, std::move(trained.model));
      result.trainings.push_back(std::move(trained.summary));
    }
  }

  for (const auto& entry : cfg.test_entries) {
    const std::string name = image_name(entry);
    const RgbImage hr = load_reference(entry.path, cfg.crop_even);
    const RgbImage lr = downsample_2x(hr);
    if (cfg.save_images) {
      fs::create_directories(cfg.out_dir / "images" / name);
      fs::create_directories(cfg.out_dir / "diffs" / name);
    }
    for (const auto& method : cfg.methods) {
      RgbImage up;
      if (method == "mlp_gen") {
        up = upscale_with_mlp(gen_model, lr);
      } else if (method == "mlp_sp") {
        const auto it = sp_models.find(entry.category);
        if (it == sp_models.end()) {
          if (log) log("no mlp_sp model for category '" + entry.category + "'; skipping " + name);
          continue;
        }
        up = upscale_with_mlp(it->second, lr);
      } else {
        UpscaleMethod m = cfg.interp;
        m.id = method == "fcbi-style" ? MethodId::fcbi : method == "icbi-style" ? MethodId::icbi : parse_method(method);
        up = upscale(lr, m);
      }
      ReportRow row{name, entry.category, method, evaluate(hr, up, cfg.ssim, cfg.quantize_metrics)};
      if (log) {
        log(name + " " + method + " mse " + fixed2(row.values.mse) + " psnr " + fixed2(row.values.psnr) + " ssim " +
            fixed2(row.values.ssim));
      }
      if (cfg.save_images) {
        save_image(up, cfg.out_dir / "images" / name / (method + ".png"));
        save_image(difference_image(hr, up, cfg.diff_gain), cfg.out_dir / "diffs" / name / (method + ".png"));
      }
      result.rows.push_back(std::move(row));
    }
  }

  write_report_csv(result.rows, cfg.out_dir / "report.csv");
  write_report_markdown(result, cfg, cfg.out_dir / "report.md");
  write_training_csv(result.trainings, cfg.out_dir / "training.csv");
  return result;
}

void write_report_csv(const std::vector<ReportRow>& rows, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "image,category,method,mse,psnr,ssim,mse_full,psnr_full,ssim_full\n";
  for (const auto& r : rows) {
    out << r.image << ',' << r.category << ',' << r.method << ',' << fixed2(r.values.mse) << ','
        << fixed2(r.values.psnr) << ',' << fixed2(r.values.ssim) << ',' << full(r.values.mse) << ','
        << full(r.values.psnr) << ',' << full(r.values.ssim) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<ReportRow> read_report_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("image,category,method,", 0) != 0) {
    throw FormatError(FormatErrc::bad_magic, path.string() + " is not a benchmark report");
  }
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 9) throw FormatError(FormatErrc::bad_values, "report row has " + std::to_string(cells.size()) + " cells");
    rows.push_back({cells[0], cells[1], cells[2],
                    {parse_number(cells[6]), parse_number(cells[7]), parse_number(cells[8])}});
  }
  return rows;
}

void write_report_markdown(const BenchResult& result, const BenchConfig& cfg, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "# 2x upscaling benchmark\n\n";
  out << "Each test image is reduced to half size with a 2x2 box filter, upscaled back by each method, and "
         "compared with the original.\n\n";
  out << "- MSE and PSNR (MAX = 255) pool all three colour channels"
      << (cfg.quantize_metrics ? ", after rounding both images to 8-bit levels" : ", on unquantized 8-bit-scaled values")
      << ".\n";
  out << "- SSIM is the mean of the R, G and B channel SSIM values (" << cfg.ssim.window << "x" << cfg.ssim.window
      << " Gaussian window, sigma " << cfg.ssim.sigma << ", k1 " << cfg.ssim.k1 << ", k2 " << cfg.ssim.k2 << ").\n";
  out << "- fcbi-style / icbi-style are directional grid filling and curvature-driven iterative correction ("
      << cfg.interp.icbi_iterations << " iterations, step " << cfg.interp.icbi_step << "); bicubic uses a = "
      << cfg.interp.bicubic_a << ".\n";
  out << "- mlp_gen is trained on every training category; mlp_sp on the test image's category only.\n\n";

  std::string current;
  for (const auto& r : result.rows) {
    if (r.image != current) {
      current = r.image;
      out << "\n## " << r.image << " (" << r.category << ")\n\n";
      out << "| Method | MSE | PSNR | SSIM |\n|---|---:|---:|---:|\n";
    }
    out << "| " << r.method << " | " << fixed2(r.values.mse) << " | " << fixed2(r.values.psnr) << " | "
        << fixed2(r.values.ssim) << " |\n";
  }

  std::vector<std::string> comparisons;
  for (const auto& r : result.rows) {
    if (r.method != "mlp_gen") continue;
    const auto sp = std::find_if(result.rows.begin(), result.rows.end(), [&](const ReportRow& o) {
      return o.image == r.image && o.method == "mlp_sp";
    });
    if (sp == result.rows.end()) continue;
    const bool sp_wins = sp->values.mse <= r.values.mse;
    comparisons.push_back("| " + r.image + " | " + fixed2(r.values.mse) + " | " + fixed2(sp->values.mse) + " | " +
                          (sp_wins ? "mlp_sp" : "mlp_gen") + " |");
  }
  if (!comparisons.empty()) {
    out << "\n## mlp_gen vs mlp_sp\n\n| Image | mlp_gen MSE | mlp_sp MSE | Lower |\n|---|---:|---:|---|\n";
    for (const auto& line : comparisons) out << line << '\n';
  }

  if (!result.trainings.empty()) {
    out << "\n## Training\n\n| Model | Train samples | Validation samples | Best epoch | Best validation MSE | "
           "Held-out sample MSE | Stop |\n|---|---:|---:|---:|---:|---:|---|\n";
    for (const auto& t : result.trainings) {
      out << "| " << t.model << " | " << t.train_samples << " | " << t.validation_samples << " | "
          << t.report.best_epoch << " | " << full(t.report.best_validation_mse) << " | " << full(t.test_split_mse)
          << " | " << to_string(t.report.stop_reason) << " |\n";
    }
    out << "\nTraining losses are mean squared errors of normalized [0,1] intensities.\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

double verify_report(const BenchConfig& cfg) {
  const auto rows = read_report_csv(cfg.out_dir / "report.csv");
  std::map<std::string, RgbImage> references;
  for (const auto& e : cfg.test_entries) references.emplace(image_name(e), load_reference(e.path, cfg.crop_even));
  double worst = 0.0;
  for (const auto& r : rows) {
    const auto ref = references.find(r.image);
    if (ref == references.end()) throw ValueError("report names unknown image '" + r.image + "'");
    const RgbImage saved = load_image(cfg.out_dir / "images" / r.image / (r.method + ".png"));
    const MetricValues v = evaluate(ref->second, saved, cfg.ssim, cfg.quantize_metrics);
    worst = std::max(worst, std::abs(v.mse - r.values.mse));
  }
  return worst;
}

}  // namespace srlab
