#include "srlab/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "binary_io.hpp"
#include "srlab/error.hpp"
#include "srlab/image_io.hpp"
#include "srlab/random.hpp"

namespace srlab {

namespace {

constexpr char kCacheMagic[4] = {'S', 'R', 'D', 'S'};
constexpr std::uint32_t kCacheVersion = 1;
constexpr std::size_t kCacheHeaderBytes = 32;
constexpr std::size_t kRecordBytes = (kPatchInputs + kPatchOutputs) * 8;

bool is_image_file(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".ppm";
}

}  // namespace

void CorpusSpec::validate() const {
  if (entries.empty()) throw ValueError("corpus '" + label + "' has no images");
  if (mode == CorpusMode::specific) {
    for (const auto& e : entries) {
      if (e.category != entries.front().category) {
        throw ValueError("specific corpus '" + label + "' mixes categories '" + entries.front().category +
                         "' and '" + e.category + "'");
      }
    }
  }
}

void gather_patch(const ImagePlane& lr, std::size_t x, std::size_t y, std::span<double, kPatchInputs> input) {
  const auto cx = static_cast<std::ptrdiff_t>(x);
  const auto cy = static_cast<std::ptrdiff_t>(y);
  std::size_t k = 0;
  for (std::ptrdiff_t dy = -1; dy <= 1; ++dy) {
    for (std::ptrdiff_t dx = -1; dx <= 1; ++dx) input[k++] = lr.at_clamped(cx + dx, cy + dy);
  }
}

std::vector<PatchSample> extract_samples(const RgbImage& hr, std::uint32_t image_id) {
  const RgbImage lr = downsample_2x(hr);
  std::vector<PatchSample> out;
  out.reserve(3 * lr.width() * lr.height());
  for (std::size_t c = 0; c < 3; ++c) {
    const ImagePlane& lp = lr.plane(c);
    const ImagePlane& hp = hr.plane(c);
    for (std::size_t y = 0; y < lp.height(); ++y) {
      for (std::size_t x = 0; x < lp.width(); ++x) {
        PatchSample s;
        gather_patch(lp, x, y, s.input);
        s.target = {hp(2 * x, 2 * y), hp(2 * x + 1, 2 * y), hp(2 * x, 2 * y + 1), hp(2 * x + 1, 2 * y + 1)};
        s.provenance = {image_id, static_cast<std::uint8_t>(c), static_cast<std::uint32_t>(x),
                        static_cast<std::uint32_t>(y)};
        out.push_back(s);
      }
    }
  }
  return out;
}

DatasetSplit build_split(std::vector<PatchSample> samples, std::uint64_t rng_seed) {
  const std::size_t n = samples.size();
  if (n < 5) throw ValueError("a 6:2:2 split needs at least 5 samples, got " + std::to_string(n));
  Rng rng(rng_seed);
  rng.shuffle(std::span<PatchSample>(samples));
  const std::size_t n_train = n * 6 / 10;
  const std::size_t n_val = n * 2 / 10;
  DatasetSplit split;
  split.rng_seed = rng_seed;
  const auto first = samples.begin();
  split.train.assign(first, first + static_cast<std::ptrdiff_t>(n_train));
  split.validation.assign(first + static_cast<std::ptrdiff_t>(n_train),
                          first + static_cast<std::ptrdiff_t>(n_train + n_val));
  split.test.assign(first + static_cast<std::ptrdiff_t>(n_train + n_val), samples.end());
  return split;
}

std::vector<PatchSample> subsample(std::vector<PatchSample> samples, std::size_t budget, std::uint64_t rng_seed) {
  if (budget == 0 || samples.size() <= budget) return samples;
  std::vector<std::size_t> idx(samples.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(rng_seed);
  rng.shuffle(std::span<std::size_t>(idx));
  idx.resize(budget);
  std::sort(idx.begin(), idx.end());
  std::vector<PatchSample> kept;
  kept.reserve(budget);
  for (std::size_t i : idx) kept.push_back(samples[i]);
  return kept;
}

std::vector<PatchSample> pool_corpus(const CorpusSpec& spec, std::uint64_t rng_seed, std::size_t sample_budget) {
  spec.validate();
  std::vector<PatchSample> pooled;
  for (std::size_t i = 0; i < spec.entries.size(); ++i) {
    const auto& entry = spec.entries[i];
    RgbImage hr;
    try {
      hr = load_image(entry.path);
      if (spec.crop_even) hr = crop_even(hr);
      auto samples = extract_samples(hr, static_cast<std::uint32_t>(i));
      pooled.insert(pooled.end(), samples.begin(), samples.end());
    } catch (const Error& e) {
      throw Error("corpus image " + entry.path.string() + ": " + e.what());
    }
  }
  return subsample(std::move(pooled), sample_budget, mix_seed(rng_seed, 2));
}

DatasetSplit build_corpus(const CorpusSpec& spec, std::uint64_t rng_seed, std::size_t sample_budget) {
  return build_split(pool_corpus(spec, rng_seed, sample_budget), rng_seed);
}

std::vector<CorpusEntry> read_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IoError("cannot open manifest " + manifest.string());
  const auto base = manifest.parent_path();
  std::vector<CorpusEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw FormatError(FormatErrc::bad_values,
                        manifest.string() + ":" + std::to_string(line_no) + ": expected category<TAB>path");
    }
    std::filesystem::path p = line.substr(tab + 1);
    if (p.is_relative()) p = base / p;
    entries.push_back({line.substr(0, tab), p.lexically_normal()});
  }
  return entries;
}

void write_manifest(const std::vector<CorpusEntry>& entries, const std::filesystem::path& manifest) {
  std::ofstream out(manifest, std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + manifest.string());
  for (const auto& e : entries) out << e.category << '\t' << e.path.string() << '\n';
  if (!out) throw IoError("write failed: " + manifest.string());
}

std::vector<CorpusEntry> scan_directory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  const std::string dir_name = fs::canonical(dir).filename().string();
  std::vector<CorpusEntry> entries;
  for (const auto& item : fs::directory_iterator(dir)) {
    if (item.is_regular_file() && is_image_file(item.path())) {
      entries.push_back({dir_name, item.path()});
    } else if (item.is_directory()) {
      for (const auto& sub : fs::directory_iterator(item.path())) {
        if (sub.is_regular_file() && is_image_file(sub.path())) {
          entries.push_back({item.path().filename().string(), sub.path()});
        }
      }
    }
  }
  std::sort(entries.begin(), entries.end(), [](const CorpusEntry& a, const CorpusEntry& b) { return a.path < b.path; });
  return entries;
}

CorpusSpec category_corpus(const std::vector<CorpusEntry>& entries, const std::string& category) {
  CorpusSpec spec;
  spec.label = category;
  spec.mode = CorpusMode::specific;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(spec.entries),
               [&](const CorpusEntry& e) { return e.category == category; });
  return spec;
}

CorpusSpec general_corpus(const std::vector<CorpusEntry>& entries) {
  return CorpusSpec{"general", entries, CorpusMode::general, false};
}

std::vector<std::uint8_t> encode_samples(const std::vector<PatchSample>& samples, std::uint64_t rng_seed) {
  detail::ByteWriter w;
  w.bytes(kCacheMagic, sizeof(kCacheMagic));
  w.u32(kCacheVersion);
  w.u64(samples.size());
  w.u64(rng_seed);
  w.u64(0);
  for (const auto& s : samples) {
    for (double v : s.input) w.f64(v);
    for (double v : s.target) w.f64(v);
  }
  return std::move(w.buffer());
}

SampleCache decode_samples(std::span<const std::uint8_t> bytes) {
  const std::size_t magic_len = std::min(bytes.size(), sizeof(kCacheMagic));
  if (!std::equal(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(magic_len), kCacheMagic)) {
    throw FormatError(FormatErrc::bad_magic, "not an SRDS dataset cache");
  }
  detail::ByteReader r(bytes, "dataset cache");
  r.take(sizeof(kCacheMagic));
  if (const auto version = r.u32(); version != kCacheVersion) {
    throw FormatError(FormatErrc::unsupported_version, "dataset cache version " + std::to_string(version));
  }
  const std::uint64_t count = r.u64();
  SampleCache cache;
  cache.rng_seed = r.u64();
  r.u64();  // reserved
  static_assert(kCacheHeaderBytes == 32);
  if (count > r.remaining() / kRecordBytes) {
    throw FormatError(FormatErrc::truncated, "dataset cache declares " + std::to_string(count) +
                                                 " records but holds " + std::to_string(r.remaining() / kRecordBytes));
  }
  if (r.remaining() != count * kRecordBytes) {
    throw FormatError(FormatErrc::trailing_bytes, "dataset cache has bytes after the last record");
  }
  cache.samples.resize(count);
  for (auto& s : cache.samples) {
    for (double& v : s.input) v = r.f64();
    for (double& v : s.target) v = r.f64();
    const auto bad = [](double v) { return !(v >= 0.0 && v <= 1.0); };
    if (std::any_of(s.input.begin(), s.input.end(), bad) || std::any_of(s.target.begin(), s.target.end(), bad)) {
      throw FormatError(FormatErrc::bad_values, "dataset cache holds a value outside [0,1]");
    }
  }
  return cache;
}

void save_samples(const std::vector<PatchSample>& samples, std::uint64_t rng_seed, const std::filesystem::path& path) {
  detail::write_binary_file(path, encode_samples(samples, rng_seed));
}

SampleCache load_samples(const std::filesystem::path& path) {
  return decode_samples(detail::read_binary_file(path));
}

}  // namespace srlab
