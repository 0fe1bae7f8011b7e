#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace ahc {

inline constexpr int kAlphabetSize = 256;
inline constexpr int kMaxCodeLength = 32;

using Frequencies = std::array<std::uint64_t, kAlphabetSize>;
using CodeLengths = std::array<std::uint8_t, kAlphabetSize>;

Frequencies histogram(std::span<const std::uint8_t> symbols);

// Canonical prefix code over byte symbols, fully determined by its lengths.
// Codes are assigned in (length, symbol) order.
class CodeTable {
 public:
  // Throws Error(invalid_code_lengths) if no symbol is present, a length
  // exceeds kMaxCodeLength, or the Kraft sum exceeds 1.
  static CodeTable from_lengths(const CodeLengths& lengths);

  const CodeLengths& lengths() const { return lengths_; }
  std::uint8_t length(std::uint8_t symbol) const { return lengths_[symbol]; }
  std::uint32_t code(std::uint8_t symbol) const { return codes_[symbol]; }
  int symbol_count() const { return static_cast<int>(sorted_.size()); }
  int max_length() const { return max_length_; }

  // Kraft sum scaled by 2^32.
  std::uint64_t kraft_numerator() const;

  // Decodes one symbol starting at the reader's position.
  template <class Reader>
  std::uint8_t decode_one(Reader& in) const;

 private:
  CodeLengths lengths_{};
  std::array<std::uint32_t, kAlphabetSize> codes_{};
  std::vector<std::uint8_t> sorted_;  // symbols ordered by (length, value)
  std::array<std::uint32_t, kMaxCodeLength + 1> first_code_{};
  std::array<std::uint32_t, kMaxCodeLength + 1> count_{};
  std::array<std::uint32_t, kMaxCodeLength + 1> first_index_{};
  int max_length_ = 0;
};

// Huffman lengths for the nonzero frequencies (ties ordered by frequency,
// then symbol). A lone symbol gets length 1. If the tree would be deeper than
// kMaxCodeLength, frequencies are halved until it fits. Throws
// Error(invalid_argument) when every count is zero.
CodeTable build_code(const Frequencies& freqs);

struct EncodedBits {
  std::vector<std::uint8_t> bytes;
  std::uint64_t bit_count = 0;
};

// Throws Error(invalid_argument) for a symbol absent from the table.
EncodedBits encode(std::span<const std::uint8_t> symbols, const CodeTable& table);

// Reads exactly n symbols. Throws Error(corrupt_stream) when bits run out or
// a prefix matches no code.
std::vector<std::uint8_t> decode(std::span<const std::uint8_t> bytes, std::uint64_t bit_count,
                                 const CodeTable& table, std::size_t n);

}  // namespace ahc

#include "ahc/bitio.hpp"

namespace ahc {

template <class Reader>
std::uint8_t CodeTable::decode_one(Reader& in) const {
  std::uint32_t code = 0;
  for (int len = 1; len <= max_length_; ++len) {
    code = (code << 1) | in.get_bit();
    if (count_[len] != 0 && code >= first_code_[len] && code - first_code_[len] < count_[len]) {
      return sorted_[first_index_[len] + (code - first_code_[len])];
    }
  }
  throw Error(ErrorCode::corrupt_stream, "bit pattern matches no code");
}

}  // namespace ahc
