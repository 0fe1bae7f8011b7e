#include "ahc/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <random>

#include "ahc/error.hpp"

namespace ahc {

namespace {

// Exact fraction used to invert the builtin analysis matrices. Entries stay
// tiny (quarters and small integers), so int64 never overflows here.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  bool is_zero() const { return num == 0; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
  friend Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
};

using RationalMat4 = std::array<std::array<Rational, 4>, 4>;

std::optional<RationalMat4> invert_exact(RationalMat4 a) {
  RationalMat4 inv{};
  for (int i = 0; i < 4; ++i) inv[i][i] = Rational(1);
  for (int col = 0; col < 4; ++col) {
    int pivot = -1;
    for (int r = col; r < 4; ++r) {
      if (!a[r][col].is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return std::nullopt;
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const Rational p = a[col][col];
    for (int c = 0; c < 4; ++c) {
      a[col][c] = a[col][c] / p;
      inv[col][c] = inv[col][c] / p;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const Rational f = a[r][col];
      for (int c = 0; c < 4; ++c) {
        a[r][c] = a[r][c] - f * a[col][c];
        inv[r][c] = inv[r][c] - f * inv[col][c];
      }
    }
  }
  return inv;
}

double inf_norm(const Mat4& m) {
  double best = 0.0;
  for (const auto& row : m) {
    double s = 0.0;
    for (double v : row) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

// Gauss-Jordan with partial pivoting. Rejects matrices whose infinity-norm
// condition number exceeds 1e12.
Mat4 invert_checked(const Mat4& input) {
  Mat4 a = input;
  Mat4 inv{};
  for (int i = 0; i < 4; ++i) inv[i][i] = 1.0;
  const double scale = inf_norm(input);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::singular_basis, "analysis matrix is zero or non-finite");
  }
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) <= 1e-12 * scale) {
      throw Error(ErrorCode::singular_basis, "analysis matrix is singular");
    }
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double p = a[col][col];
    for (int c = 0; c < 4; ++c) {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (int c = 0; c < 4; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  if (scale * inf_norm(inv) > 1e12) {
    throw Error(ErrorCode::singular_basis, "analysis matrix is ill-conditioned");
  }
  return inv;
}

WaveletTables builtin_tables(BasisId id) {
  switch (id) {
    case BasisId::set1:
      return {{{{1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}}}};
    case BasisId::set2:
      return {{{{1, -1, 1, -1}, {1, 0, -1, 0}, {0, 1, 0, -1}}}};
    case BasisId::set3:
      return {{{{1, 1, -1, -1}, {1, -1, 0, 0}, {0, 0, 1, -1}}}};
    case BasisId::set4:
      return {{{{1, -1, -1, 1}, {1, 0, 0, -1}, {0, 1, -1, 0}}}};
    case BasisId::custom:
      break;
  }
  throw Error(ErrorCode::invalid_argument, "no builtin tables for a custom basis");
}

bool near_zero(double v, double tol) { return std::abs(v) <= tol; }

}  // namespace

std::string_view to_string(BasisId id) noexcept {
  switch (id) {
    case BasisId::set1: return "set1";
    case BasisId::set2: return "set2";
    case BasisId::set3: return "set3";
    case BasisId::set4: return "set4";
    case BasisId::custom: return "custom";
  }
  return "unknown";
}

BasisId parse_basis_id(std::string_view name) {
  for (int k = 0; k < kBuiltinBasisCount; ++k) {
    const auto id = static_cast<BasisId>(k);
    if (name == to_string(id)) return id;
  }
  throw Error(ErrorCode::invalid_argument, "unknown basis '" + std::string(name) + "'");
}

CellValues cells_from_coefficients(const std::array<double, 4>& a) {
  return {a[0], a[1], a[3], a[2]};
}

std::array<double, 4> coefficients_from_cells(const CellValues& cells) {
  return {cells[0], cells[1], cells[3], cells[2]};
}

Mat4 analysis_matrix(const WaveletTables& tables) {
  Mat4 m{};
  m[0] = {0.25, 0.25, 0.25, 0.25};
  for (int k = 0; k < 3; ++k) m[k + 1] = tables.psi[k];
  return m;
}

WaveletBasis WaveletBasis::from_tables(const WaveletTables& tables, BasisId id) {
  for (const auto& f : tables.psi) {
    for (double v : f) {
      if (!std::isfinite(v)) throw Error(ErrorCode::singular_basis, "non-finite wavelet coefficient");
    }
  }
  WaveletBasis b;
  b.id_ = id;
  b.tables_ = tables;
  b.analysis_ = analysis_matrix(tables);
  b.synthesis_ = invert_checked(b.analysis_);
  return b;
}

WaveletBasis WaveletBasis::exact_builtin(BasisId id) {
  WaveletBasis b;
  b.id_ = id;
  b.tables_ = builtin_tables(id);
  b.analysis_ = analysis_matrix(b.tables_);

  RationalMat4 exact{};
  exact[0] = {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) exact[r + 1][c] = Rational(static_cast<std::int64_t>(b.tables_.psi[r][c]));
  }
  const auto inv = invert_exact(exact);
  if (!inv) std::abort();  // builtin tables are invertible
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) b.synthesis_[r][c] = (*inv)[r][c].to_double();
  }
  return b;
}

const WaveletBasis& builtin_basis(BasisId id) {
  static const std::array<WaveletBasis, kBuiltinBasisCount> banks = {
      WaveletBasis::exact_builtin(BasisId::set1), WaveletBasis::exact_builtin(BasisId::set2),
      WaveletBasis::exact_builtin(BasisId::set3), WaveletBasis::exact_builtin(BasisId::set4)};
  if (id == BasisId::custom) {
    throw Error(ErrorCode::invalid_argument, "custom is not a builtin basis");
  }
  const auto k = static_cast<int>(id);
  if (k < 0 || k >= kBuiltinBasisCount) {
    throw Error(ErrorCode::invalid_basis_id, "basis id out of range");
  }
  return banks[k];
}

const WaveletBasis& builtin_basis(std::string_view name) {
  return builtin_basis(parse_basis_id(name));
}

WaveletTables printed_tables(BasisId id) {
  switch (id) {
    case BasisId::set1:
      return builtin_tables(BasisId::set1);
    case BasisId::set2:
      return {{{{1, -1, 1, -1}, {1, 0, -1, 0}, {0, 1, 0, 1}}}};
    case BasisId::set3:
      return {{{{1, -1, 1, -1}, {1, -1, 0, 0}, {0, 0, 1, -1}}}};
    case BasisId::set4:
      return {{{{1, -1, 1, -1}, {1, 0, 0, -1}, {0, 1, -1, -1}}}};
    case BasisId::custom:
      break;
  }
  throw Error(ErrorCode::invalid_argument, "no printed tables for a custom basis");
}

ValidationReport validate_orthogonality(const WaveletTables& tables, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
  ValidationReport r;
  r.tolerance = tol;
  for (int i = 0; i < 3; ++i) {
    const auto& f = tables.psi[i];
    r.sums[i] = f[0] + f[1] + f[2] + f[3];
    r.zero_mean[i] = near_zero(r.sums[i], tol);
    for (int j = 0; j < 3; ++j) {
      const auto& g = tables.psi[j];
      double dot = 0.0;
      for (int c = 0; c < 4; ++c) dot += f[c] * g[c];
      r.gram[i][j] = 0.25 * dot;
    }
    r.norms[i] = r.gram[i][i];
  }
  r.orthogonal = true;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r.pairwise_orthogonal[i][j] = (i == j) || near_zero(r.gram[i][j], tol);
      r.orthogonal = r.orthogonal && r.pairwise_orthogonal[i][j];
    }
  }
  r.orthonormal = r.orthogonal;
  for (double n : r.norms) r.orthonormal = r.orthonormal && near_zero(n - 1.0, tol);
  return r;
}

ValidationReport validate_orthogonality(const WaveletBasis& basis, double tol) {
  return validate_orthogonality(basis.tables(), tol);
}

WaveletTables family1_tables(const Family1Params& p) {
  const double values[] = {p.lambda, p.a21, p.a22, p.a31};
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "non-finite family-1 parameter");
  }
  const double denom = 2.0 * p.a22 + p.a21;
  if (std::abs(denom) <= 1e-12) {
    throw Error(ErrorCode::degenerate_parameters, "2*a22 + a21 vanishes; a32 is undetermined");
  }
  const double a32 = -p.a31 * (2.0 * p.a21 + p.a22) / denom;
  const double l = p.lambda;
  WaveletTables t;
  t.psi[0] = cells_from_coefficients({l, l, -3.0 * l, l});
  t.psi[1] = cells_from_coefficients({p.a21, p.a22, -p.a21 - p.a22, 0.0});
  t.psi[2] = cells_from_coefficients({p.a31, a32, -p.a31 - a32, 0.0});
  return t;
}

double family1_residual(const WaveletTables& tables) {
  const auto f1 = coefficients_from_cells(tables.psi[0]);
  const auto f2 = coefficients_from_cells(tables.psi[1]);
  const auto f3 = coefficients_from_cells(tables.psi[2]);
  const double l = f1[0];
  double worst = 0.0;
  auto track = [&](double v) { worst = std::max(worst, std::abs(v)); };
  track(f1[1] - l);
  track(f1[3] - l);
  track(f1[2] + 3.0 * l);
  for (const auto* f : {&f2, &f3}) {
    track((*f)[3]);
    track((*f)[2] + (*f)[0] + (*f)[1]);
  }
  track(2 * f2[0] * f3[0] + 2 * f2[1] * f3[1] + f2[0] * f3[1] + f2[1] * f3[0]);
  return worst;
}

WaveletBasis basis_from_family1(const Family1Params& p) {
  return WaveletBasis::from_tables(family1_tables(p));
}

AngleCandidate basis_from_angles(const AngleParams& p, double tol) {
  constexpr double pi = std::numbers::pi;
  for (int i = 0; i < 3; ++i) {
    if (!(p.alpha[i] >= 0.0 && p.alpha[i] <= pi)) {
      throw Error(ErrorCode::invalid_argument, "alpha must lie in [0, pi]");
    }
    if (!(p.beta[i] >= 0.0 && p.beta[i] < 2.0 * pi)) {
      throw Error(ErrorCode::invalid_argument, "beta must lie in [0, 2 pi)");
    }
  }
  const double s2 = std::sqrt(2.0);
  const double s3 = std::sqrt(3.0);
  const double s6 = std::sqrt(6.0);
  AngleCandidate out;
  for (int i = 0; i < 3; ++i) {
    const double ca = std::cos(p.alpha[i]);
    const double sa = std::sin(p.alpha[i]);
    const double cb = std::cos(p.beta[i]);
    const double sb = std::sin(p.beta[i]);
    const double a1 = ca / s3 - 2.0 * sa * cb / s6;
    const double a2 = ca / s3 + sa * cb / s2 + sa * sb / s6;
    const double a3 = ca / s3 - sa * cb / s2 + sa * sb / s6;
    const double a4 = -(a1 + a2 + a3);
    out.tables.psi[i] = cells_from_coefficients({a1, a2, a3, a4});
  }
  out.report = validate_orthogonality(out.tables, tol);
  try {
    out.basis = WaveletBasis::from_tables(out.tables);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::singular_basis) throw;
  }
  return out;
}

CorollaryPattern corollary_pattern_check(const WaveletTables& tables, double zero_tol) {
  // Position (1-based coefficient index) of the single zero of each function.
  std::array<int, 3> zero_at{};
  for (int i = 0; i < 3; ++i) {
    const auto a = coefficients_from_cells(tables.psi[i]);
    int count = 0;
    for (int j = 0; j < 4; ++j) {
      if (near_zero(a[j], zero_tol)) {
        ++count;
        zero_at[i] = j + 1;
      }
    }
    if (count != 1) return CorollaryPattern::not_applicable;
  }
  static constexpr std::array<std::array<int, 3>, 4> forms = {{
      {4, 1, 2},
      {2, 3, 4},
      {1, 2, 3},
      {3, 4, 1},
  }};
  for (int k = 0; k < 4; ++k) {
    if (zero_at == forms[k]) return static_cast<CorollaryPattern>(static_cast<int>(CorollaryPattern::form1) + k);
  }
  return CorollaryPattern::none;
}

int corollary_pattern_number(CorollaryPattern p) noexcept {
  switch (p) {
    case CorollaryPattern::form1: return 1;
    case CorollaryPattern::form2: return 2;
    case CorollaryPattern::form3: return 3;
    case CorollaryPattern::form4: return 4;
    default: return 0;
  }
}

ComplexMat4 modulation_matrix(const WaveletTables& tables, double xi1, double xi2) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  // Cell c = (row, col) of the 2x2 block sits at lattice offset n = (row, col).
  static constexpr std::array<std::array<int, 2>, 4> offsets = {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  static constexpr std::array<std::array<int, 2>, 4> digits = {{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};

  std::array<CellValues, 4> rows{};
  rows[0] = {1.0, 1.0, 1.0, 1.0};
  for (int k = 0; k < 3; ++k) rows[k + 1] = tables.psi[k];

  ComplexMat4 m{};
  for (int nu = 0; nu < 4; ++nu) {
    for (int k = 0; k < 4; ++k) {
      const double w1 = xi1 + 0.5 * digits[k][0];
      const double w2 = xi2 + 0.5 * digits[k][1];
      Complex acc{0.0, 0.0};
      for (int c = 0; c < 4; ++c) {
        // refinement coefficient h_n = value / 2, mask factor m^{-1/2} = 1/2
        const double coeff = rows[nu][c] / 4.0;
        const double phase = two_pi * (offsets[c][0] * w1 + offsets[c][1] * w2);
        acc += coeff * Complex(std::cos(phase), std::sin(phase));
      }
      m[nu][k] = acc;
    }
  }
  return m;
}

double unitarity_deviation(const WaveletTables& tables, double xi1, double xi2) {
  const auto m = modulation_matrix(tables, xi1, xi2);
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Complex acc{0.0, 0.0};
      for (int k = 0; k < 4; ++k) acc += m[i][k] * std::conj(m[j][k]);
      const double target = (i == j) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(acc - target));
    }
  }
  return worst;
}

bool unitarity_check(const WaveletTables& tables, int samples, double tol, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::invalid_argument, "need at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    const double x = u(rng);
    const double y = u(rng);
    if (!(unitarity_deviation(tables, x, y) <= tol)) return false;
  }
  return true;
}

}  // namespace ahc
