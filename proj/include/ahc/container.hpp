#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ahc/entropy.hpp"
#include "ahc/filterbank.hpp"
#include "ahc/quantizer.hpp"
#include "ahc/transform.hpp"

namespace ahc {

// .ahc layout (all integers little-endian):
//
//   "AHC1" | version u8 (=1) | mode u8 | width u32 | height u32 |
//   channels u8 | levels u8 | quant_levels u16 | channel...
//
// mode: low nibble 0 fixed / 1 per-block / 2 global; high nibble holds the
// basis id in fixed mode and is zero otherwise.
//
// channel:
//   id maps, fine to coarse: per-block mode stores each level's grid as
//     2-bit ids, row-major, first id in the two most significant bits,
//     padded to a byte boundary with zero bits; global mode stores one id
//     byte per level; fixed mode stores nothing.
//   quantizers: level-1 V,H,D, ..., level-n V,H,D, coarse A; each is
//     binary32 min, binary32 step, u16 levels.
//   code lengths: 256 bytes.
//   payload bit length u64, then ceil(bits / 8) payload bytes (MSB-first,
//     zero padded). Symbols run coarse A, level-n V,H,D, ..., level-1 V,H,D,
//     each subband row-major.

inline constexpr std::array<std::uint8_t, 4> kMagic = {'A', 'H', 'C', '1'};
inline constexpr std::uint8_t kFormatVersion = 1;

struct ChannelStream {
  std::vector<BasisIdMap> id_maps;         // one per level, fine to coarse
  std::vector<QuantizerSpec> quantizers;   // 3 * levels + 1
  CodeLengths code_lengths{};
  std::uint64_t payload_bits = 0;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const ChannelStream&, const ChannelStream&) = default;
};

struct CompressedImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint8_t channels = 1;
  std::uint8_t levels = 1;
  std::uint16_t quant_levels = 64;
  BasisMode mode = BasisMode::fixed;
  BasisId fixed_id = BasisId::set1;  // meaningful in fixed mode only
  std::vector<ChannelStream> channel_data;

  friend bool operator==(const CompressedImage&, const CompressedImage&) = default;
};

// Number of quantization indices one channel carries.
std::size_t channel_symbol_count(std::uint32_t width, std::uint32_t height, int levels);

// Throws Error(invalid_argument) for a structurally inconsistent image,
// including quantizer bounds not representable as binary32.
std::vector<std::uint8_t> write_container(const CompressedImage& c);

// Strict parser: every field is validated before it is used and the whole
// input must be consumed. Failures are reported as Error with codes
// truncated, bad_magic, unsupported_version, invalid_basis_id,
// invalid_code_lengths or corrupt_stream.
CompressedImage read_container(std::span<const std::uint8_t> bytes);

// Header fields, per-level basis usage and payload sizes, without decoding
// payloads.
std::string inspect_container(std::span<const std::uint8_t> bytes);

}  // namespace ahc
