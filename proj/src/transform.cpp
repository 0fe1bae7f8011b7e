#include "ahc/transform.hpp"

#include <array>
#include <limits>

#include "ahc/error.hpp"

namespace ahc {

namespace {

constexpr std::array<BasisId, kBuiltinBasisCount> kBuiltinIds = {
    BasisId::set1, BasisId::set2, BasisId::set3, BasisId::set4};

double objective_value(const BlockCoeffs& c, const WaveletBasis& basis, SelectionObjective obj) {
  if (obj == SelectionObjective::literal) return c.detail_energy();
  const double details[3] = {c.v, c.h, c.d};
  double e = 0.0;
  for (int k = 0; k < 3; ++k) {
    double n = 0.0;
    for (double x : basis.psi(k)) n += x * x;
    e += details[k] * details[k] / n;
  }
  return e;
}

Block block_at(const Matrix& m, std::size_t br, std::size_t bc) {
  const std::size_t r = 2 * br;
  const std::size_t c = 2 * bc;
  return {m(r, c), m(r, c + 1), m(r + 1, c), m(r + 1, c + 1)};
}

void scale_details(BlockCoeffs& c, Scaling s) {
  if (s == Scaling::scaled) {
    c.v /= 4.0;
    c.h /= 4.0;
    c.d /= 4.0;
  }
}

Matrix inverse_impl(const Matrix& A, const Matrix& V, const Matrix& H, const Matrix& D,
                    const BasisIdMap& ids, Scaling scaling) {
  const Dims d = A.dims();
  if (V.dims() != d || H.dims() != d || D.dims() != d) {
    throw Error(ErrorCode::corrupt_stream, "subband dimensions disagree");
  }
  const bool per_block = ids.mode == BasisMode::per_block;
  const Dims expect = per_block ? d : Dims{1, 1};
  if (ids.ids.dims() != expect) {
    throw Error(ErrorCode::corrupt_stream, "basis id map does not match subband size");
  }
  for (auto id : ids.ids.data()) {
    if (id >= kBuiltinBasisCount) throw Error(ErrorCode::invalid_basis_id, "basis id out of range");
  }

  Matrix out(2 * d.rows, 2 * d.cols);
  for (std::size_t r = 0; r < d.rows; ++r) {
    for (std::size_t c = 0; c < d.cols; ++c) {
      const BasisId id = per_block ? static_cast<BasisId>(ids.ids(r, c)) : static_cast<BasisId>(ids.ids(0, 0));
      const BlockCoeffs coeffs{A(r, c), V(r, c), H(r, c), D(r, c), id};
      const Block b = block_inverse(coeffs, builtin_basis(id), scaling);
      out(2 * r, 2 * c) = b.m11;
      out(2 * r, 2 * c + 1) = b.m12;
      out(2 * r + 1, 2 * c) = b.m21;
      out(2 * r + 1, 2 * c + 1) = b.m22;
    }
  }
  return out;
}

Matrix crop(const Matrix& m, Dims d) {
  if (m.dims() == d) return m;
  Matrix out(d.rows, d.cols);
  for (std::size_t r = 0; r < d.rows; ++r) {
    for (std::size_t c = 0; c < d.cols; ++c) out(r, c) = m(r, c);
  }
  return out;
}

}  // namespace

BlockCoeffs block_forward(const Block& b, const WaveletBasis& basis, Scaling s) {
  const CellValues m = {b.m11, b.m12, b.m21, b.m22};
  auto dot = [&](const CellValues& psi) {
    return psi[0] * m[0] + psi[1] * m[1] + psi[2] * m[2] + psi[3] * m[3];
  };
  BlockCoeffs c;
  c.a = (m[0] + m[1] + m[2] + m[3]) / 4.0;
  c.v = dot(basis.psi(0));
  c.h = dot(basis.psi(1));
  c.d = dot(basis.psi(2));
  c.basis = basis.id();
  scale_details(c, s);
  return c;
}

Block block_inverse(const BlockCoeffs& c, const WaveletBasis& basis, Scaling s) {
  const double k = (s == Scaling::scaled) ? 4.0 : 1.0;
  const std::array<double, 4> x = {c.a, k * c.v, k * c.h, k * c.d};
  const Mat4& syn = basis.synthesis();
  std::array<double, 4> m{};
  for (int i = 0; i < 4; ++i) {
    m[i] = syn[i][0] * x[0] + syn[i][1] * x[1] + syn[i][2] * x[2] + syn[i][3] * x[3];
  }
  return {m[0], m[1], m[2], m[3]};
}

BlockCoeffs adaptive_block_forward(const Block& b, Scaling s, SelectionObjective obj) {
  BlockCoeffs best;
  double best_energy = std::numeric_limits<double>::infinity();
  for (BasisId id : kBuiltinIds) {
    const WaveletBasis& basis = builtin_basis(id);
    const BlockCoeffs c = block_forward(b, basis, Scaling::literal);
    const double e = objective_value(c, basis, obj);
    if (e < best_energy) {
      best_energy = e;
      best = c;
    }
  }
  scale_details(best, s);
  return best;
}

BasisId BasisIdMap::at(std::size_t block_row, std::size_t block_col) const {
  const std::uint8_t raw = mode == BasisMode::per_block ? ids(block_row, block_col) : ids(0, 0);
  return static_cast<BasisId>(raw);
}

SubbandSet subband_forward(const Matrix& m, const TransformOptions& opt) {
  if (m.rows() % 2 != 0 || m.cols() % 2 != 0 || m.empty()) {
    throw Error(ErrorCode::invalid_argument, "subband_forward needs non-empty even dimensions");
  }
  const std::size_t rows = m.rows() / 2;
  const std::size_t cols = m.cols() / 2;
  SubbandSet out;
  out.A = Matrix(rows, cols);
  out.V = Matrix(rows, cols);
  out.H = Matrix(rows, cols);
  out.D = Matrix(rows, cols);
  out.ids.mode = opt.mode;

  auto store = [&](std::size_t r, std::size_t c, BlockCoeffs coeffs) {
    scale_details(coeffs, opt.scaling);
    out.A(r, c) = coeffs.a;
    out.V(r, c) = coeffs.v;
    out.H(r, c) = coeffs.h;
    out.D(r, c) = coeffs.d;
  };

  if (opt.mode == BasisMode::per_block) {
    out.ids.ids = Grid<std::uint8_t>(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const BlockCoeffs coeffs =
            adaptive_block_forward(block_at(m, r, c), Scaling::literal, opt.objective);
        const WaveletBasis& basis = builtin_basis(coeffs.basis);
        out.detail_energy += objective_value(coeffs, basis, opt.objective);
        out.ids.ids(r, c) = static_cast<std::uint8_t>(coeffs.basis);
        store(r, c, coeffs);
      }
    }
    return out;
  }

  BasisId chosen = opt.fixed_id;
  if (opt.mode == BasisMode::global) {
    double best = std::numeric_limits<double>::infinity();
    for (BasisId id : kBuiltinIds) {
      const WaveletBasis& basis = builtin_basis(id);
      double e = 0.0;
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
          e += objective_value(block_forward(block_at(m, r, c), basis), basis, opt.objective);
        }
      }
      if (e < best) {
        best = e;
        chosen = id;
      }
    }
  }
  const WaveletBasis& basis = builtin_basis(chosen);
  out.ids.ids = Grid<std::uint8_t>(1, 1, static_cast<std::uint8_t>(chosen));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const BlockCoeffs coeffs = block_forward(block_at(m, r, c), basis);
      out.detail_energy += objective_value(coeffs, basis, opt.objective);
      store(r, c, coeffs);
    }
  }
  return out;
}

Matrix subband_inverse(const SubbandSet& s, Scaling scaling) {
  return inverse_impl(s.A, s.V, s.H, s.D, s.ids, scaling);
}

Matrix pad_even(const Matrix& m) {
  if (m.empty()) throw Error(ErrorCode::invalid_argument, "cannot pad an empty matrix");
  const std::size_t rows = m.rows() + (m.rows() % 2);
  const std::size_t cols = m.cols() + (m.cols() % 2);
  if (rows == m.rows() && cols == m.cols()) return m;
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t sr = r < m.rows() ? r : m.rows() - 1;
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t sc = c < m.cols() ? c : m.cols() - 1;
      out(r, c) = m(sr, sc);
    }
  }
  return out;
}

Dims subband_dims(Dims input) { return {(input.rows + 1) / 2, (input.cols + 1) / 2}; }

std::vector<Dims> pyramid_input_dims(Dims image, int levels) {
  if (levels < 1) throw Error(ErrorCode::invalid_argument, "decomposition needs at least one level");
  std::vector<Dims> out;
  out.reserve(static_cast<std::size_t>(levels));
  Dims cur = image;
  for (int k = 0; k < levels; ++k) {
    if (cur.rows < 2 || cur.cols < 2) {
      throw Error(ErrorCode::invalid_argument,
                  "too many decomposition levels for a " + std::to_string(image.rows) + "x" +
                      std::to_string(image.cols) + " input");
    }
    out.push_back(cur);
    cur = subband_dims(cur);
  }
  return out;
}

SubbandPyramid pyramid_forward(const Matrix& m, int levels, const TransformOptions& opt) {
  SubbandPyramid p;
  p.orig_dims = pyramid_input_dims(m.dims(), levels);
  p.scaling = opt.scaling;
  p.levels.reserve(p.orig_dims.size());
  const Matrix* cur = &m;
  for (int k = 0; k < levels; ++k) {
    p.levels.push_back(subband_forward(pad_even(*cur), opt));
    cur = &p.levels.back().A;
  }
  p.coarse_A = p.levels.back().A;
  return p;
}

Matrix pyramid_inverse(const SubbandPyramid& p) {
  if (p.levels.empty() || p.levels.size() != p.orig_dims.size()) {
    throw Error(ErrorCode::corrupt_stream, "pyramid has inconsistent level bookkeeping");
  }
  Matrix cur = p.coarse_A;
  for (std::size_t k = p.levels.size(); k-- > 0;) {
    const SubbandSet& s = p.levels[k];
    const Dims want = p.orig_dims[k];
    if (subband_dims(want) != cur.dims()) {
      throw Error(ErrorCode::corrupt_stream, "approximation size does not match level geometry");
    }
    cur = crop(inverse_impl(cur, s.V, s.H, s.D, s.ids, p.scaling), want);
  }
  return cur;
}

}  // namespace ahc
