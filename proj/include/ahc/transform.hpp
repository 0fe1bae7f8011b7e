#pragma once

#include <cstdint>
#include <vector>

#include "ahc/filterbank.hpp"
#include "ahc/grid.hpp"

namespace ahc {

struct Block {
  double m11 = 0.0;
  double m12 = 0.0;
  double m21 = 0.0;
  double m22 = 0.0;
};

// Approximation `a` and details (v, h, d) of one 2x2 block.
struct BlockCoeffs {
  double a = 0.0;
  double v = 0.0;
  double h = 0.0;
  double d = 0.0;
  BasisId basis = BasisId::set1;

  double detail_energy() const { return v * v + h * h + d * d; }
};

// `literal`: details are the raw sums psi . m. `scaled`: details are divided
// by 4 as well, which keeps set1 details of 8-bit data within [-255, 255].
enum class Scaling : std::uint8_t { literal, scaled };

// Objective for adaptive selection. `normalized` weights each detail by the
// inverse squared norm of its wavelet (experiment flag).
enum class SelectionObjective : std::uint8_t { literal, normalized };

BlockCoeffs block_forward(const Block& b, const WaveletBasis& basis, Scaling s = Scaling::literal);
Block block_inverse(const BlockCoeffs& c, const WaveletBasis& basis, Scaling s = Scaling::literal);

// Tries the four builtin banks and keeps the one with the smallest detail
// energy (computed on literal coefficients); ties go to the lowest id.
BlockCoeffs adaptive_block_forward(const Block& b, Scaling s = Scaling::literal,
                                   SelectionObjective obj = SelectionObjective::literal);

enum class BasisMode : std::uint8_t { fixed = 0, per_block = 1, global = 2 };

// Which bank produced each block. per_block: one id per 2x2 block (row-major
// grid). fixed/global: a single id (1x1 grid).
struct BasisIdMap {
  BasisMode mode = BasisMode::fixed;
  Grid<std::uint8_t> ids;

  BasisId at(std::size_t block_row, std::size_t block_col) const;
  friend bool operator==(const BasisIdMap&, const BasisIdMap&) = default;
};

struct TransformOptions {
  BasisMode mode = BasisMode::per_block;
  BasisId fixed_id = BasisId::set1;
  Scaling scaling = Scaling::literal;
  SelectionObjective objective = SelectionObjective::literal;
};

struct SubbandSet {
  Matrix A, V, H, D;
  BasisIdMap ids;
  // Selection objective value (sum of squared literal details) of the chosen
  // coefficients.
  double detail_energy = 0.0;
};

// Input must have even dimensions; throws Error(invalid_argument) otherwise.
SubbandSet subband_forward(const Matrix& m, const TransformOptions& opt);
// Throws Error(corrupt_stream) on inconsistent sizes or ids.
Matrix subband_inverse(const SubbandSet& s, Scaling scaling = Scaling::literal);

// Replicates the last row/column to reach even dimensions.
Matrix pad_even(const Matrix& m);

// Input dimensions of every level; entry k is the size of the matrix that
// level k decomposes. Throws Error(invalid_argument) when levels < 1 or some
// level input is narrower than 2 samples in either direction.
std::vector<Dims> pyramid_input_dims(Dims image, int levels);
// Subband dimensions for an input of the given size (ceil halving).
Dims subband_dims(Dims input);

struct SubbandPyramid {
  // Fine to coarse. Only the detail subbands and id maps are needed for
  // reconstruction; levels[k].A is the input of level k+1.
  std::vector<SubbandSet> levels;
  Matrix coarse_A;
  std::vector<Dims> orig_dims;  // unpadded input size of each level
  Scaling scaling = Scaling::literal;
};

SubbandPyramid pyramid_forward(const Matrix& m, int levels, const TransformOptions& opt);
// Unwinds coarse to fine starting from coarse_A; ignores levels[k].A.
Matrix pyramid_inverse(const SubbandPyramid& p);

}  // namespace ahc
