#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "srlab/image.hpp"

namespace srlab {

inline constexpr std::size_t kPatchInputs = 9;
inline constexpr std::size_t kPatchOutputs = 4;

struct SampleProvenance {
  std::uint32_t image_id = 0;
  std::uint8_t channel = 0;
  std::uint32_t x = 0;  // LR column
  std::uint32_t y = 0;  // LR row

  friend auto operator<=>(const SampleProvenance&, const SampleProvenance&) = default;
};

/// One training example: the replicate-padded 3x3 LR neighbourhood (row-major,
/// centre at index 4) and the HR 2x2 block it maps to, ordered
/// (2x,2y), (2x+1,2y), (2x,2y+1), (2x+1,2y+1).
struct PatchSample {
  std::array<double, kPatchInputs> input{};
  std::array<double, kPatchOutputs> target{};
  SampleProvenance provenance;

  friend bool operator==(const PatchSample&, const PatchSample&) = default;
};

struct DatasetSplit {
  std::vector<PatchSample> train;
  std::vector<PatchSample> validation;
  std::vector<PatchSample> test;
  std::uint64_t rng_seed = 0;

  std::size_t total() const noexcept { return train.size() + validation.size() + test.size(); }
};

enum class CorpusMode { general, specific };

struct CorpusEntry {
  std::string category;
  std::filesystem::path path;
};

/// A set of training images. In specific mode every entry must share one category.
struct CorpusSpec {
  std::string label;
  std::vector<CorpusEntry> entries;
  CorpusMode mode = CorpusMode::general;
  bool crop_even = false;

  /// Throws ValueError when the corpus is empty or a specific corpus mixes categories.
  void validate() const;
};

/// Fills `input` with the 3x3 replicate-padded neighbourhood of LR pixel (x, y).
void gather_patch(const ImagePlane& lr, std::size_t x, std::size_t y, std::span<double, kPatchInputs> input);

/// Emits 3 * (W/2) * (H/2) samples in (channel, y, x) order. LR is the 2x2 box
/// downsample of `hr`. Throws DimensionError on odd dimensions.
std::vector<PatchSample> extract_samples(const RgbImage& hr, std::uint32_t image_id);

/// Seeded shuffle, then cuts at floor(0.6 n) and floor(0.6 n) + floor(0.2 n).
/// Throws ValueError when fewer than 5 samples are given.
DatasetSplit build_split(std::vector<PatchSample> samples, std::uint64_t rng_seed);

/// Seeded subsample without replacement down to at most `budget` samples,
/// returned in their original relative order. budget == 0 keeps everything.
std::vector<PatchSample> subsample(std::vector<PatchSample> samples, std::size_t budget, std::uint64_t rng_seed);

/// Loads, extracts and pools every image of the corpus (image ids follow entry
/// order), then applies the optional seeded sample budget. Load failures name
/// the offending path.
std::vector<PatchSample> pool_corpus(const CorpusSpec& spec, std::uint64_t rng_seed, std::size_t sample_budget = 0);

/// pool_corpus followed by build_split; the split is over pooled samples, not images.
DatasetSplit build_corpus(const CorpusSpec& spec, std::uint64_t rng_seed, std::size_t sample_budget = 0);

/// Parses `category<TAB>path` lines. Blank lines and lines starting with '#'
/// are skipped; relative paths resolve against the manifest's directory.
std::vector<CorpusEntry> read_manifest(const std::filesystem::path& manifest);
void write_manifest(const std::vector<CorpusEntry>& entries, const std::filesystem::path& manifest);

/// Collects *.png / *.ppm files. Images directly inside `dir` take the
/// directory's name as category; images in subdirectories take the
/// subdirectory name. Entries are sorted by path.
std::vector<CorpusEntry> scan_directory(const std::filesystem::path& dir);

/// Selects the entries of one category and marks the corpus specific.
CorpusSpec category_corpus(const std::vector<CorpusEntry>& entries, const std::string& category);
CorpusSpec general_corpus(const std::vector<CorpusEntry>& entries);

/// Dataset cache: 32-byte header ("SRDS", u32 version, u64 record count,
/// u64 seed, 8 reserved bytes) followed by 13 little-endian doubles per
/// record (9 inputs then 4 targets). Provenance is not stored.
struct SampleCache {
  std::vector<PatchSample> samples;
  std::uint64_t rng_seed = 0;
};

std::vector<std::uint8_t> encode_samples(const std::vector<PatchSample>& samples, std::uint64_t rng_seed);
SampleCache decode_samples(std::span<const std::uint8_t> bytes);
void save_samples(const std::vector<PatchSample>& samples, std::uint64_t rng_seed, const std::filesystem::path& path);
SampleCache load_samples(const std::filesystem::path& path);

}  // namespace srlab
