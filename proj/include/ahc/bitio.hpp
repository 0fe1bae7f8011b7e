#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ahc/error.hpp"

namespace ahc {

// MSB-first bit packer. Unused low bits of the final byte stay zero.
class BitWriter {
 public:
  void put(std::uint32_t bits, int count) {
    for (int i = count - 1; i >= 0; --i) put_bit((bits >> i) & 1u);
  }

  void put_bit(std::uint32_t bit) {
    if (bit_count_ % 8 == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bit_count_ % 8));
    ++bit_count_;
  }

  std::uint64_t bit_count() const { return bit_count_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t bit_count_ = 0;
};

class BitReader {
 public:
  BitReader(std::span<const std::uint8_t> bytes, std::uint64_t bit_count)
      : bytes_(bytes), bit_count_(bit_count) {
    if (bit_count_ > static_cast<std::uint64_t>(bytes_.size()) * 8) {
      throw Error(ErrorCode::truncated, "bit length exceeds available bytes");
    }
  }

  std::uint32_t get_bit() {
    if (pos_ >= bit_count_) throw Error(ErrorCode::corrupt_stream, "bit stream exhausted");
    const std::uint32_t bit = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
    ++pos_;
    return bit;
  }

  std::uint32_t get(int count) {
    std::uint32_t v = 0;
    for (int i = 0; i < count; ++i) v = (v << 1) | get_bit();
    return v;
  }

  std::uint64_t position() const { return pos_; }
  std::uint64_t remaining() const { return bit_count_ - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t bit_count_;
  std::uint64_t pos_ = 0;
};

}  // namespace ahc
