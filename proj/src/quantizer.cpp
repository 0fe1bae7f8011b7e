#include "ahc/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ahc/error.hpp"

namespace ahc {

namespace {

double float_down(double x) {
  float f = static_cast<float>(x);
  if (static_cast<double>(f) > x) f = std::nextafter(f, -std::numeric_limits<float>::infinity());
  return f;
}

double float_up(double x) {
  float f = static_cast<float>(x);
  if (static_cast<double>(f) < x) f = std::nextafter(f, std::numeric_limits<float>::infinity());
  return f;
}

}  // namespace

int quantize_value(double x, const QuantizerSpec& spec) {
  const double q = std::floor((x - spec.min) / spec.step);
  if (!(q > 0.0)) return 0;
  if (q >= spec.levels - 1) return spec.levels - 1;
  return static_cast<int>(q);
}

QuantizedSubband quantize_subband(const Matrix& m, int levels) {
  if (levels < kMinQuantLevels || levels > kMaxQuantLevels) {
    throw Error(ErrorCode::invalid_argument, "quantization levels must lie in [2, 256]");
  }
  if (m.empty()) throw Error(ErrorCode::invalid_argument, "cannot quantize an empty subband");
  const auto [lo_it, hi_it] = std::minmax_element(m.data().begin(), m.data().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::invalid_argument, "subband contains non-finite values");
  }

  QuantizedSubband out;
  out.spec.levels = levels;
  out.spec.min = float_down(lo);
  if (hi == lo) {
    out.spec.step = 1.0;
  } else {
    // Cover [min, hi] even after rounding min down.
    out.spec.step = float_up((hi - out.spec.min) / levels);
    if (out.spec.step <= 0.0) out.spec.step = std::numeric_limits<float>::denorm_min();
  }

  out.indices = Grid<std::uint8_t>(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i) {
    out.indices.data()[i] = static_cast<std::uint8_t>(quantize_value(m.data()[i], out.spec));
  }
  return out;
}

Matrix dequantize(const Grid<std::uint8_t>& indices, const QuantizerSpec& spec) {
  Matrix out(indices.rows(), indices.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const int q = indices.data()[i];
    if (q >= spec.levels) throw Error(ErrorCode::corrupt_stream, "quantization index out of range");
    out.data()[i] = spec.min + (q + 0.5) * spec.step;
  }
  return out;
}

}  // namespace ahc
