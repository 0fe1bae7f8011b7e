#pragma once

#include <cstdint>

#include "ahc/grid.hpp"

namespace ahc {

// Uniform quantizer over [min, min + levels * step). min and step are always
// representable as binary32 so they survive serialization unchanged.
struct QuantizerSpec {
  double min = 0.0;
  double step = 1.0;
  int levels = 2;

  friend bool operator==(const QuantizerSpec&, const QuantizerSpec&) = default;
};

inline constexpr int kMinQuantLevels = 2;
inline constexpr int kMaxQuantLevels = 256;

struct QuantizedSubband {
  Grid<std::uint8_t> indices;
  QuantizerSpec spec;
};

// step = (max - min) / levels, or 1 for a constant matrix. min is rounded
// down and step rounded up to binary32 so every value of the input stays
// inside the covered range. Throws Error(invalid_argument) unless
// levels is in [2, 256].
QuantizedSubband quantize_subband(const Matrix& m, int levels);

// Index of a single value under `spec` (clamped to [0, levels - 1]).
int quantize_value(double x, const QuantizerSpec& spec);

// Midpoint reconstruction min + (index + 1/2) * step. Throws
// Error(corrupt_stream) for an index >= spec.levels.
Matrix dequantize(const Grid<std::uint8_t>& indices, const QuantizerSpec& spec);

}  // namespace ahc
