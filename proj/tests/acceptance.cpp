// Acceptance suite: one [PASS]/[FAIL] line per criterion, non-zero exit on any failure.
//
//   srlab_acceptance [--work-dir DIR] [--only N]...

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
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

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome(const fs::path&)> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ImagePlane random_plane(std::size_t w, std::size_t h, Rng& rng) {
  ImagePlane p(w, h);
  for (double& v : p.data()) v = rng.uniform01();
  return p;
}

RgbImage random_image(std::size_t w, std::size_t h, Rng& rng) {
  auto r = random_plane(w, h, rng);
  auto g = random_plane(w, h, rng);
  auto b = random_plane(w, h, rng);
  return RgbImage(std::move(r), std::move(g), std::move(b));
}

/// Writes `count` HR images of one category and returns their entries.
std::vector<CorpusEntry> synth_images(const fs::path& dir, const std::string& category, std::size_t count,
                                      std::size_t size, std::uint64_t seed) {
  return write_synthetic_corpus(dir, {category}, count, size, seed);
}

// 1. PSNR against three table rows.
Outcome psnr_table(const fs::path&) {
  const double rows[3][2] = {{20.61, 34.99}, {32.08, 33.07}, {60.22, 30.33}};
  Outcome o{true, ""};
  for (const auto& r : rows) {
    const double got = psnr(r[0], kEightBit);
    o.pass = o.pass && std::abs(got - r[1]) <= 0.01;
    o.detail += fmt("%.2f", r[0]) + "->" + fmt("%.4f", got) + " ";
  }
  o.detail += "(tol 0.01)";
  return o;
}

// 2. Backpropagation against central finite differences.
Outcome gradient_check(const fs::path&) {
  Rng rng(2024);
  double worst = 0.0;
  std::size_t components = 0;
  for (int trial = 0; trial < 100; ++trial) {
    MlpModel m = init_model(20, rng.next());
    for (auto* block : {&m.w1, &m.b1, &m.w2, &m.b2}) {
      for (double& p : *block) p = rng.uniform(-1.0, 1.0);
    }
    std::vector<double> x(9), t(4);
    for (double& v : x) v = rng.uniform01();
    for (double& v : t) v = rng.uniform01();
    const MlpGradient g = backward(m, x, t);
    std::vector<double> analytic;
    for (const auto* block : {&g.w1, &g.b1, &g.w2, &g.b2}) analytic.insert(analytic.end(), block->begin(), block->end());
    const auto numeric = oracle::numeric_gradient(m, x, t, 1e-5);
    if (analytic.size() != numeric.size()) return {false, "gradient size mismatch"};
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      worst = std::max(worst, oracle::relative_error(analytic[i], numeric[i]));
    }
    components += analytic.size();
  }
  return {worst < 1e-4, std::to_string(components) + " components, max rel err " + fmt("%.3g", worst) + " (< 1e-4)"};
}

// 3. Metric identities and oracle equivalence.
Outcome metric_identities(const fs::path&) {
  Rng rng(33);
  double worst_mse = 0.0, worst_ssim = 0.0;
  bool identities = true;
  for (int pair = 0; pair < 20; ++pair) {
    const RgbImage a = random_image(32, 32, rng);
    const RgbImage b = random_image(32, 32, rng);
    identities = identities && mse(a, a) == 0.0 && ssim_rgb(a, a) == 1.0;
    identities = identities && mse(a, b) == mse(b, a) && ssim_rgb(a, b) == ssim_rgb(b, a);
    worst_mse = std::max(worst_mse, std::abs(mse(a, b) - oracle::mse_naive(a, b)));
    for (std::size_t c = 0; c < 3; ++c) {
      identities = identities && ssim(a.plane(c), a.plane(c)) == 1.0;
      worst_ssim = std::max(worst_ssim, std::abs(ssim(a.plane(c), b.plane(c)) -
                                                 oracle::ssim_windowed(a.plane(c), b.plane(c))));
    }
  }
  const bool pass = identities && worst_mse <= 1e-6 && worst_ssim <= 1e-6;
  return {pass, std::string("identities ") + (identities ? "exact" : "BROKEN") + ", max |dMSE| " +
                    fmt("%.3g", worst_mse) + ", max |dSSIM| " + fmt("%.3g", worst_ssim) + " (<= 1e-6)"};
}

// 4. Upscaler invariants, the MLP path included.
Outcome upscaler_invariants(const fs::path& work) {
  std::vector<std::string> broken;
  Rng rng(44);
  const std::vector<std::pair<std::string, std::function<RgbImage(const RgbImage&)>>> methods{
      {"nearest", [](const RgbImage& i) { return upscale_nearest(i); }},
      {"bilinear", [](const RgbImage& i) { return upscale_bilinear(i); }},
      {"bicubic", [](const RgbImage& i) { return upscale_bicubic(i); }},
      {"fcbi", [](const RgbImage& i) { return upscale_fcbi(i); }},
      {"icbi", [](const RgbImage& i) { return upscale_icbi(i); }}};
  for (const auto& [name, fn] : methods) {
    bool ok = true;
    for (auto [w, h] : {std::pair<std::size_t, std::size_t>{1, 1}, {5, 3}, {17, 12}}) {
      const RgbImage up = fn(random_image(w, h, rng));
      ok = ok && up.width() == 2 * w && up.height() == 2 * h && up.is_normalized();
      for (double v : {0.0, 0.37, 1.0}) ok = ok && fn(RgbImage(w, h, v)) == RgbImage(2 * w, 2 * h, v);
    }
    if (!ok) broken.push_back(name);
  }

  bool icbi_ok = true;
  for (int t = 0; t < 5; ++t) {
    const ImagePlane p = t < 3 ? random_plane(12, 10, rng) : synthesize(t == 3 ? "petals" : "blocks", 48, 48, t).plane(0);
    icbi_ok = icbi_ok && upscale_icbi(p, 0, 0.1) == upscale_fcbi(p);
    const IcbiTrace trace = upscale_icbi_traced(p, 20, 0.1);
    for (std::size_t i = 1; i < trace.energies.size(); ++i) icbi_ok = icbi_ok && trace.energies[i] <= trace.energies[i - 1];
  }
  if (!icbi_ok) broken.push_back("icbi-vs-fcbi/energy");

  // MLP: for each level c, overfit a corpus of constant-c images, then upscale a constant-c image.
  const fs::path dir = work / "constant_corpus";
  fs::create_directories(dir);
  double worst = 0.0;
  bool mlp_shape = true;
  for (int level : {26, 128, 230}) {
    const double c = level / 255.0;
    const fs::path p = dir / ("level_" + std::to_string(level) + ".png");
    save_image(RgbImage(16, 16, c), p);
    TrainConfig cfg;
    cfg.rng_seed = 5;
    const auto trained = train(init_model(20, 6), build_corpus(general_corpus({{"constant", p}}), 7), cfg);
    const RgbImage up = upscale_with_mlp(trained.model, RgbImage(9, 7, c));
    mlp_shape = mlp_shape && up.width() == 18 && up.height() == 14 && up.is_normalized();
    for (const auto& plane : up.planes()) {
      for (double v : plane.data()) worst = std::max(worst, std::abs(v - c));
    }
  }
  if (!mlp_shape || worst >= 0.02) broken.push_back("mlp");

  std::string detail = "5 classical + mlp; mlp constant max |err| " + fmt("%.3g", worst) + " (< 0.02)";
  for (const auto& b : broken) detail += "; broken: " + b;
  return {broken.empty(), detail};
}

/// Trains the bench on `train` and evaluates the held-out `test` entries.
BenchResult run_bench(const std::vector<CorpusEntry>& train, const std::vector<CorpusEntry>& test,
                      const std::vector<std::string>& methods, std::size_t budget, const fs::path& out,
                      std::uint64_t seed) {
  BenchConfig cfg;
  cfg.train_entries = train;
  cfg.test_entries = test;
  cfg.methods = methods;
  cfg.sample_budget = budget;
  cfg.out_dir = out;
  cfg.seed = seed;
  return run_benchmark(cfg);
}

double row_mse(const BenchResult& r, const std::string& image, const std::string& method) {
  for (const auto& row : r.rows) {
    if (row.image == image && row.method == method) return row.values.mse;
  }
  throw Error("no report row for " + image + "/" + method);
}

// 5. MLP_sp beats bicubic on a held-out same-category image.
Outcome learning_beats_bicubic(const fs::path& work) {
  const fs::path dir = work / "c5";
  auto entries = synth_images(dir / "corpus", "petals", 6, 256, 505);
  const std::vector<CorpusEntry> test{entries.back()};
  entries.pop_back();
  const auto result = run_bench(entries, test, {"bicubic", "mlp_sp"}, 0, dir / "out", 5);
  const std::string image = test.front().path.stem().string();
  const double mlp = row_mse(result, image, "mlp_sp");
  const double bic = row_mse(result, image, "bicubic");
  return {mlp < bic, "petals, 5 train / 1 held-out, 128x128 LR: mlp_sp " + fmt("%.2f", mlp) + " vs bicubic " +
                         fmt("%.2f", bic)};
}

// 6. MLP_sp <= MLP_gen at equal sample budgets on at least 2 of 3 categories.
Outcome specialization(const fs::path& work) {
  const fs::path dir = work / "c6";
  const std::vector<std::string> cats{"stripes", "petals", "blocks"};
  const std::size_t size = 128;
  std::vector<CorpusEntry> train, test;
  for (std::size_t i = 0; i < cats.size(); ++i) {
    auto entries = synth_images(dir / "corpus", cats[i], 6, size, 606 + i);
    test.push_back(entries.back());
    entries.pop_back();
    train.insert(train.end(), entries.begin(), entries.end());
  }
  // Every corpus is capped at the sample count of one category corpus.
  const std::size_t budget = 5 * 3 * (size / 2) * (size / 2);
  const auto result = run_bench(train, test, {"bicubic", "mlp_gen", "mlp_sp"}, budget, dir / "out", 6);
  int wins = 0;
  std::string detail;
  for (std::size_t i = 0; i < cats.size(); ++i) {
    const std::string image = test[i].path.stem().string();
    const double sp = row_mse(result, image, "mlp_sp");
    const double gen = row_mse(result, image, "mlp_gen");
    const bool win = sp <= gen;
    wins += win ? 1 : 0;
    detail += cats[i] + " sp " + fmt("%.2f", sp) + (win ? " <= " : " > ") + "gen " + fmt("%.2f", gen) + "; ";
    if (!win) std::printf("  note: %s shows the inversion (mlp_sp %.2f > mlp_gen %.2f)\n", cats[i].c_str(), sp, gen);
  }
  detail += std::to_string(wins) + "/3 (need 2), budget " + std::to_string(budget);
  return {wins >= 2, detail};
}

// 7. Two identical bench runs produce byte-identical reports and models.
Outcome determinism(const fs::path& work) {
  const fs::path dir = work / "c7";
  const auto entries = write_synthetic_corpus(dir / "corpus", {"stripes", "mosaic"}, 3, 64, 707);
  std::vector<CorpusEntry> train, test;
  for (std::size_t i = 0; i < entries.size(); ++i) (i % 3 == 2 ? test : train).push_back(entries[i]);
  BenchConfig cfg;
  cfg.train_entries = train;
  cfg.test_entries = test;
  cfg.train.max_epochs = 8;
  cfg.seed = 7;
  std::vector<std::string> files{"report.csv", "training.csv", "models/mlp_gen.bin", "models/mlp_sp_mosaic.bin",
                                 "models/mlp_sp_stripes.bin"};
  for (const char* run : {"a", "b"}) {
    cfg.out_dir = dir / run;
    fs::remove_all(cfg.out_dir);
    run_benchmark(cfg);
  }
  std::size_t identical = 0;
  for (const auto& f : files) {
    const std::string a = slurp(dir / "a" / f);
    if (!a.empty() && a == slurp(dir / "b" / f)) ++identical;
  }
  return {identical == files.size(),
          std::to_string(identical) + "/" + std::to_string(files.size()) + " files byte-identical across two runs"};
}

template <typename Fn>
std::string error_code(Fn&& fn) {
  try {
    fn();
  } catch (const FormatError& e) {
    return e.code() == FormatErrc::bad_magic ? "bad_magic" : e.code() == FormatErrc::truncated ? "truncated" : "other";
  } catch (const std::exception& e) {
    return std::string("other: ") + e.what();
  }
  return "accepted";
}

// 8. Model and dataset-cache persistence.
Outcome persistence(const fs::path& work) {
  const fs::path dir = work / "c8";
  fs::create_directories(dir);
  Rng rng(88);
  MlpModel m = init_model(20, 8);
  for (double& b : m.b1) b = rng.uniform(-1.0, 1.0);
  save_model(m, dir / "model.bin");
  const bool model_exact = load_model(dir / "model.bin") == m;

  const auto samples = extract_samples(random_image(16, 12, rng), 0);
  save_samples(samples, 99, dir / "cache.srds");
  const SampleCache cache = load_samples(dir / "cache.srds");
  bool cache_exact = cache.rng_seed == 99 && cache.samples.size() == samples.size();
  for (std::size_t i = 0; cache_exact && i < samples.size(); ++i) {
    cache_exact = cache.samples[i].input == samples[i].input && cache.samples[i].target == samples[i].target;
  }

  auto model_bytes = encode_model(m);
  auto cache_bytes = encode_samples(samples, 99);
  auto bad_model_magic = model_bytes;
  bad_model_magic[0] ^= 0xFF;
  auto bad_cache_magic = cache_bytes;
  bad_cache_magic[0] ^= 0xFF;
  const std::vector<std::uint8_t> short_model(model_bytes.begin(), model_bytes.end() - 3);
  const std::vector<std::uint8_t> short_cache(cache_bytes.begin(), cache_bytes.end() - 3);

  const std::string mm = error_code([&] { decode_model(bad_model_magic); });
  const std::string mt = error_code([&] { decode_model(short_model); });
  const std::string cm = error_code([&] { decode_samples(bad_cache_magic); });
  const std::string ct = error_code([&] { decode_samples(short_cache); });
  const bool codes = mm == "bad_magic" && mt == "truncated" && cm == "bad_magic" && ct == "truncated";
  return {model_exact && cache_exact && codes,
          std::string("model ") + (model_exact ? "exact" : "DIFFERS") + ", cache " + (cache_exact ? "exact" : "DIFFERS") +
              "; model magic/trunc -> " + mm + "/" + mt + ", cache magic/trunc -> " + cm + "/" + ct};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"srlab acceptance suite"};
  std::string work_dir = (fs::temp_directory_path() / "srlab_acceptance").string();
  std::vector<int> only;
  app.add_option("--work-dir", work_dir, "Scratch directory (recreated)")->capture_default_str();
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "MSE<->PSNR table consistency", psnr_table},
      {2, "gradient correctness", gradient_check},
      {3, "metric identities", metric_identities},
      {4, "upscaler invariants", upscaler_invariants},
      {5, "learning beats bicubic", learning_beats_bicubic},
      {6, "specialization trend", specialization},
      {7, "determinism", determinism},
      {8, "persistence round trip", persistence},
  };

  const fs::path work(work_dir);
  fs::remove_all(work);
  fs::create_directories(work);

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(work);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
