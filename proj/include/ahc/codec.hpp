#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ahc/container.hpp"
#include "ahc/transform.hpp"

namespace ahc {

// 8-bit image, row-major with interleaved channels (1 = gray, 3 = RGB).
struct ImageBuffer {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint8_t channels = 1;
  std::vector<std::uint8_t> samples;

  std::uint8_t at(std::uint32_t row, std::uint32_t col, int ch) const {
    return samples[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }
  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;
};

// Binary PGM (P5) / PPM (P6) with maxval 255. Comments and arbitrary
// whitespace in the header are accepted. Throws Error(image_format).
ImageBuffer load_image(std::span<const std::uint8_t> bytes);
// Writes "P5\n<w> <h>\n255\n" (or P6) followed by the samples.
std::vector<std::uint8_t> save_image(const ImageBuffer& img);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// A basis selection policy: fixed set1..set4, or adaptive per block/matrix.
struct BasisChoice {
  BasisMode mode = BasisMode::per_block;
  BasisId fixed_id = BasisId::set1;

  friend bool operator==(const BasisChoice&, const BasisChoice&) = default;
};

// "set1".."set4", "adaptive-block", "adaptive-global".
BasisChoice parse_basis_choice(std::string_view name);
std::string basis_choice_name(const BasisChoice& choice);
// All six choices in a stable order (fixed sets first).
std::vector<BasisChoice> all_basis_choices();

struct EncodeParams {
  int levels = 2;
  int quant_levels = 64;
  BasisChoice basis;
  SelectionObjective objective = SelectionObjective::literal;
};

inline constexpr int kApproximationQuantLevels = 256;

// Per channel: multi-level transform with scaled details, per-subband
// quantization (detail bands at quant_levels, the coarse approximation at
// 256), one canonical Huffman table, container assembly. Deterministic.
CompressedImage encode_image(const ImageBuffer& img, const EncodeParams& params);

// Inverse pipeline; samples are rounded half away from zero and clamped to
// [0, 255].
ImageBuffer decode_image(const CompressedImage& c);

// Transform and inverse transform only, quantization bypassed.
ImageBuffer transform_roundtrip(const ImageBuffer& img, const EncodeParams& params);

struct Metrics {
  std::size_t compressed_bytes = 0;
  std::size_t raw_bytes = 0;
  double compression_rate = 0.0;  // percent of raw size
  std::vector<double> mse_per_channel;
  double mse = 0.0;
  double psnr = 0.0;  // +infinity when mse == 0

  bool lossless() const { return mse == 0.0; }
};

Metrics compute_metrics(const ImageBuffer& orig, const ImageBuffer& recon, std::size_t compressed_bytes);

// "inf" for the lossless marker, otherwise fixed with 4 decimals.
std::string format_psnr(double psnr);

}  // namespace ahc
