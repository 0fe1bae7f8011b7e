#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ahc {

// Identifier of a wavelet bank. The four builtin banks are the classical Haar
// set and its "vertical", "horizontal" and "diagonal" alternatives; the value
// doubles as the 2-bit id stored in compressed streams.
enum class BasisId : std::uint8_t { set1 = 0, set2 = 1, set3 = 2, set4 = 3, custom = 4 };

inline constexpr int kBuiltinBasisCount = 4;

std::string_view to_string(BasisId id) noexcept;
// Accepts "set1".."set4"; throws Error(invalid_argument) otherwise.
BasisId parse_basis_id(std::string_view name);

// Values of a piecewise-constant function on the four quarter cells of the
// unit square, flattened as a 2x2 block: {m11, m12, m21, m22}.
using CellValues = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

// The three detail functions of a bank, without any invertibility guarantee.
// Generated candidates and the as-printed tables live here.
struct WaveletTables {
  std::array<CellValues, 3> psi{};

  friend bool operator==(const WaveletTables&, const WaveletTables&) = default;
};

// Coefficients a_i1..a_i4 of the parametric families walk the quarter cells
// [0,1/2]x[0,1/2], [0,1/2]x[1/2,1], [1/2,1]x[1/2,1], [1/2,1]x[0,1/2]. With the
// first coordinate selecting the block row this is
//   a_i1 -> m11, a_i2 -> m12, a_i3 -> m22, a_i4 -> m21.
CellValues cells_from_coefficients(const std::array<double, 4>& a);
std::array<double, 4> coefficients_from_cells(const CellValues& cells);

// A wavelet bank with its 4x4 analysis matrix (row 0 averages the block, rows
// 1-3 are the flattened psi tables) and the exact inverse of that matrix.
class WaveletBasis {
 public:
  // Floating-point inversion; throws Error(singular_basis) when the analysis
  // matrix is singular or too badly conditioned to invert reliably.
  static WaveletBasis from_tables(const WaveletTables& tables,
                                  BasisId id = BasisId::custom);

  BasisId id() const { return id_; }
  const WaveletTables& tables() const { return tables_; }
  const CellValues& psi(int k) const { return tables_.psi[k]; }
  const Mat4& analysis() const { return analysis_; }
  const Mat4& synthesis() const { return synthesis_; }

 private:
  friend const WaveletBasis& builtin_basis(BasisId id);
  WaveletBasis() = default;
  static WaveletBasis exact_builtin(BasisId id);

  BasisId id_ = BasisId::custom;
  WaveletTables tables_;
  Mat4 analysis_{};
  Mat4 synthesis_{};
};

// The shipped banks. Their synthesis matrices are computed in exact rational
// arithmetic. Throws Error(invalid_argument) for BasisId::custom.
const WaveletBasis& builtin_basis(BasisId id);
const WaveletBasis& builtin_basis(std::string_view name);

// The banks exactly as typeset in the original tables. Sets 2-4 are not
// orthogonal in that form (set3 is not even invertible); kept for auditing.
WaveletTables printed_tables(BasisId id);

Mat4 analysis_matrix(const WaveletTables& tables);

struct ValidationReport {
  std::array<double, 3> sums{};                       // sum of cell values
  std::array<bool, 3> zero_mean{};
  std::array<std::array<double, 3>, 3> gram{};        // <psi_i, psi_j>
  std::array<std::array<bool, 3>, 3> pairwise_orthogonal{};
  std::array<double, 3> norms{};                      // squared L2 norms
  bool orthogonal = false;   // all cross products vanish
  bool orthonormal = false;  // orthogonal and every norm is 1
  double tolerance = 0.0;

  bool all_zero_mean() const { return zero_mean[0] && zero_mean[1] && zero_mean[2]; }
};

inline constexpr double kDefaultTolerance = 1e-9;

// Inner products on [0,1]^2: each quarter cell has area 1/4.
ValidationReport validate_orthogonality(const WaveletTables& tables,
                                        double tol = kDefaultTolerance);
ValidationReport validate_orthogonality(const WaveletBasis& basis,
                                        double tol = kDefaultTolerance);

// First parametric family: psi^1 = (l, l, -3l, l), psi^2 and psi^3 vanish on
// the fourth cell, have zero mean, and satisfy
//   2 a21 a31 + 2 a22 a32 + a21 a32 + a22 a31 = 0.
struct Family1Params {
  double lambda = 1.0;
  double a21 = 0.0;
  double a22 = 0.0;
  double a31 = 0.0;
};

// Solves for a32 and the remaining entries. Throws
// Error(degenerate_parameters) when |2 a22 + a21| <= 1e-12.
WaveletTables family1_tables(const Family1Params& p);
// Largest absolute violation of the family-1 equalities (lambda taken from a11).
double family1_residual(const WaveletTables& tables);
// family1_tables followed by WaveletBasis::from_tables.
WaveletBasis basis_from_family1(const Family1Params& p);

// Second parametric family, angles alpha_i in [0, pi] and beta_i in [0, 2 pi).
struct AngleParams {
  std::array<double, 3> alpha{};
  std::array<double, 3> beta{};
};

struct AngleCandidate {
  WaveletTables tables;
  ValidationReport report;
  std::optional<WaveletBasis> basis;  // empty when the tables are not invertible
};

// a_i4 closes each function to zero mean. Orthogonality is reported, not
// promised. Throws Error(invalid_argument) on out-of-range angles.
AngleCandidate basis_from_angles(const AngleParams& p, double tol = kDefaultTolerance);

// Classification of the zero pattern of a bank where every function has a
// single vanishing coefficient.
enum class CorollaryPattern { not_applicable, none, form1, form2, form3, form4 };

CorollaryPattern corollary_pattern_check(const WaveletTables& tables, double zero_tol = 1e-12);
// 1..4 for form1..form4, 0 otherwise.
int corollary_pattern_number(CorollaryPattern p) noexcept;

using Complex = std::complex<double>;
using ComplexMat4 = std::array<std::array<Complex, 4>, 4>;

// Rows are the masks m_0..m_3 evaluated at xi + s_k / 2 for the digit set
// s_k in {(0,0), (1,0), (0,1), (1,1)}. Mask coefficients follow the refinement
// relation for the dilation 2*I with the m^{-1/2} = 1/2 mask normalization.
ComplexMat4 modulation_matrix(const WaveletTables& tables, double xi1, double xi2);
// max |(M M^*)_{jk} - delta_jk|
double unitarity_deviation(const WaveletTables& tables, double xi1, double xi2);
// Evaluates the deviation at `samples` pseudo-random frequencies in [0,1)^2.
bool unitarity_check(const WaveletTables& tables, int samples, double tol,
                     std::uint64_t seed = 0x5eedULL);

}  // namespace ahc
