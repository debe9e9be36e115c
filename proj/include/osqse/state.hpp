#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "osqse/layout.hpp"

namespace osqse {

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

namespace tol {
inline constexpr double kNorm = 1e-9;
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-9;
inline constexpr double kZeroCutoff = 1e-12;
inline constexpr double kIsometry = 1e-10;
inline constexpr double kStateEquality = 1e-9;
}  // namespace tol

class StateError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class NotIsometryError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

/// Nonzero eigenvalues of a density operator, sorted descending. Values at or
/// below the zero cutoff are dropped, which fixes the numerical rank.
template <typename Real>
class BasicSpectrum {
public:
  BasicSpectrum() : values_{Real(1)} {}

  /// Sorts, drops values <= cutoff, and checks the remainder sums to one.
  static BasicSpectrum from_values(std::vector<Real> values, Real cutoff = Real(tol::kZeroCutoff)) {
    std::sort(values.begin(), values.end(), std::greater<Real>());
    values.erase(std::remove_if(values.begin(), values.end(), [&](Real v) { return !(v > cutoff); }),
                 values.end());
    if (values.empty()) throw StateError("spectrum has no values above the zero cutoff");
    Real sum = std::accumulate(values.begin(), values.end(), Real(0));
    if (std::abs(sum - Real(1)) > Real(tol::kNorm))
      throw StateError("spectrum sums to " + std::to_string(static_cast<double>(sum)) + ", expected 1");
    return BasicSpectrum(std::move(values), cutoff);
  }

  /// Same as from_values but rescales to unit sum first.
  static BasicSpectrum normalized(std::vector<Real> values, Real cutoff = Real(tol::kZeroCutoff)) {
    Real sum = std::accumulate(values.begin(), values.end(), Real(0));
    if (!(sum > Real(0))) throw StateError("cannot normalize a spectrum with nonpositive sum");
    for (auto& v : values) v /= sum;
    return from_values(std::move(values), cutoff);
  }

  static BasicSpectrum uniform(std::size_t rank) {
    if (rank == 0) throw StateError("uniform spectrum needs rank >= 1");
    return BasicSpectrum(std::vector<Real>(rank, Real(1) / Real(rank)), Real(tol::kZeroCutoff));
  }

  const std::vector<Real>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  std::size_t rank() const { return values_.size(); }
  Real operator[](std::size_t i) const { return values_[i]; }
  Real max() const { return values_.front(); }
  Real cutoff() const { return cutoff_; }

private:
  BasicSpectrum(std::vector<Real> values, Real cutoff) : values_(std::move(values)), cutoff_(cutoff) {}

  std::vector<Real> values_;
  Real cutoff_ = Real(tol::kZeroCutoff);
};

/// Spectrum of p ⊗ q.
template <typename Real>
BasicSpectrum<Real> tensor(const BasicSpectrum<Real>& p, const BasicSpectrum<Real>& q) {
  std::vector<Real> out;
  out.reserve(p.size() * q.size());
  for (Real a : p.values())
    for (Real b : q.values()) out.push_back(a * b);
  return BasicSpectrum<Real>::from_values(std::move(out), Real(0));
}

/// Elementwise comparison of two sorted spectra.
template <typename Real>
bool same_spectrum(const BasicSpectrum<Real>& p, const BasicSpectrum<Real>& q, Real tolerance = Real(tol::kNorm)) {
  if (p.size() != q.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (std::abs(p[i] - q[i]) > tolerance) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Pure states
// ---------------------------------------------------------------------------

template <typename Real>
class BasicPureState {
public:
  using Vector = ComplexVector<Real>;

  BasicPureState() = default;

  /// Throws StateError unless the amplitudes have unit norm within 1e-9.
  BasicPureState(SubsystemLayout layout, Vector amplitudes)
      : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total_dim())
      throw StateError("amplitude count " + std::to_string(amplitudes_.size()) + " does not match layout dimension " +
                       std::to_string(layout_.total_dim()));
    Real n = amplitudes_.squaredNorm();
    if (std::abs(n - Real(1)) > Real(tol::kNorm))
      throw StateError("state is not normalized (squared norm " + std::to_string(static_cast<double>(n)) + ")");
  }

  static BasicPureState normalized(SubsystemLayout layout, Vector amplitudes) {
    Real n = amplitudes.norm();
    if (!(n > Real(0))) throw StateError("cannot normalize the zero vector");
    amplitudes /= n;
    return BasicPureState(std::move(layout), std::move(amplitudes));
  }

  static BasicPureState basis(SubsystemLayout layout, const std::vector<std::size_t>& digits) {
    if (digits.size() != layout.size()) throw StateError("basis digits do not match layout");
    auto dims = layout.dims();
    for (std::size_t k = 0; k < dims.size(); ++k)
      if (digits[k] >= dims[k]) throw StateError("basis digit out of range");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
    v(static_cast<Eigen::Index>(encode_index(digits, dims))) = Real(1);
    return BasicPureState(std::move(layout), std::move(v));
  }

  const SubsystemLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return layout_.total_dim(); }

private:
  SubsystemLayout layout_;
  Vector amplitudes_;
};

/// Minimum over global phases of ||a - e^{iθ} b||.
template <typename Real>
Real phase_distance(const ComplexVector<Real>& a, const ComplexVector<Real>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("phase_distance: vector sizes differ");
  std::complex<Real> overlap = b.dot(a);  // <b|a>
  std::complex<Real> phase(1);
  if (std::abs(overlap) > Real(0)) phase = overlap / std::abs(overlap);
  return (a - phase * b).norm();
}

/// Global-phase equality of two states on identical layouts.
template <typename Real>
bool equal_up_to_phase(const BasicPureState<Real>& a, const BasicPureState<Real>& b,
                       Real tolerance = Real(tol::kStateEquality)) {
  if (!(a.layout() == b.layout())) return false;
  return phase_distance<Real>(a.amplitudes(), b.amplitudes()) <= tolerance;
}

/// View of a state vector as a matrix: rows index `row_names` (in that
/// order), columns the remaining subsystems in layout order.
template <typename Real>
ComplexMatrix<Real> group_matrix(const SubsystemLayout& layout, const ComplexVector<Real>& vec,
                                 const std::vector<std::string>& row_names) {
  auto split = split_indices(layout, row_names);
  ComplexMatrix<Real> m(static_cast<Eigen::Index>(split.rows), static_cast<Eigen::Index>(split.cols));
  for (std::size_t i = 0; i < layout.total_dim(); ++i)
    m(static_cast<Eigen::Index>(split.row[i]), static_cast<Eigen::Index>(split.col[i])) =
        vec(static_cast<Eigen::Index>(i));
  return m;
}

template <typename Real>
ComplexMatrix<Real> group_matrix(const BasicPureState<Real>& state, const std::vector<std::string>& row_names) {
  return group_matrix<Real>(state.layout(), state.amplitudes(), row_names);
}

/// Inverse of group_matrix.
template <typename Real>
ComplexVector<Real> from_group_matrix(const SubsystemLayout& layout, const std::vector<std::string>& row_names,
                                      const ComplexMatrix<Real>& m) {
  auto split = split_indices(layout, row_names);
  if (static_cast<std::size_t>(m.rows()) != split.rows || static_cast<std::size_t>(m.cols()) != split.cols)
    throw DimensionMismatch("from_group_matrix: matrix shape does not match layout");
  ComplexVector<Real> v(static_cast<Eigen::Index>(layout.total_dim()));
  for (std::size_t i = 0; i < layout.total_dim(); ++i)
    v(static_cast<Eigen::Index>(i)) =
        m(static_cast<Eigen::Index>(split.row[i]), static_cast<Eigen::Index>(split.col[i]));
  return v;
}

/// Same state with subsystems listed in `order` (a permutation of the layout).
template <typename Real>
BasicPureState<Real> permute(const BasicPureState<Real>& state, const std::vector<std::string>& order) {
  if (order.size() != state.layout().size()) throw LayoutError("permute: order must list every subsystem");
  auto m = group_matrix(state, order);  // single column
  return BasicPureState<Real>(state.layout().select(order), m.col(0));
}

/// |a> ⊗ |b> on the concatenated layout.
template <typename Real>
BasicPureState<Real> tensor(const BasicPureState<Real>& a, const BasicPureState<Real>& b) {
  std::vector<Subsystem> subs = a.layout().subsystems();
  for (const auto& s : b.layout()) subs.push_back(s);
  ComplexVector<Real> v(static_cast<Eigen::Index>(a.dim() * b.dim()));
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i)
    v.segment(i * b.amplitudes().size(), b.amplitudes().size()) = a.amplitudes()(i) * b.amplitudes();
  return BasicPureState<Real>(SubsystemLayout(std::move(subs)), std::move(v));
}

// ---------------------------------------------------------------------------
// Density operators
// ---------------------------------------------------------------------------

template <typename Real>
class BasicDensityOperator {
public:
  using Matrix = ComplexMatrix<Real>;

  /// Validates Hermiticity (1e-10), unit trace (1e-9) and eigenvalues >= -1e-10.
  BasicDensityOperator(SubsystemLayout layout, Matrix matrix) : layout_(std::move(layout)), matrix_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(layout_.total_dim());
    if (matrix_.rows() != d || matrix_.cols() != d) throw StateError("density matrix shape does not match layout");
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > Real(tol::kHermitian))
      throw StateError("density matrix is not Hermitian");
    if (std::abs(matrix_.trace() - std::complex<Real>(1)) > Real(tol::kTrace))
      throw StateError("density matrix trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw StateError("eigensolver failed on density matrix");
    if (es.eigenvalues().minCoeff() < Real(-tol::kHermitian))
      throw StateError("density matrix is not positive semidefinite");
  }

  const SubsystemLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }

private:
  SubsystemLayout layout_;
  Matrix matrix_;
};

/// Reduced state on `keep`, with kept subsystems in layout order.
template <typename Real>
BasicDensityOperator<Real> partial_trace(const BasicPureState<Real>& state, const std::vector<std::string>& keep) {
  if (keep.empty()) throw LayoutError("partial_trace: keep set is empty");
  auto ordered = state.layout().in_layout_order(keep);
  auto m = group_matrix(state, ordered);
  ComplexMatrix<Real> rho = m * m.adjoint();
  rho = Real(0.5) * (rho + rho.adjoint()).eval();
  return BasicDensityOperator<Real>(state.layout().select(ordered), std::move(rho));
}

template <typename Real>
BasicDensityOperator<Real> partial_trace(const BasicDensityOperator<Real>& rho, const std::vector<std::string>& keep) {
  if (keep.empty()) throw LayoutError("partial_trace: keep set is empty");
  const auto& layout = rho.layout();
  auto ordered = layout.in_layout_order(keep);
  auto split = split_indices(layout, ordered);
  ComplexMatrix<Real> out = ComplexMatrix<Real>::Zero(static_cast<Eigen::Index>(split.rows),
                                                      static_cast<Eigen::Index>(split.rows));
  const std::size_t d = layout.total_dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (split.col[i] == split.col[j])
        out(static_cast<Eigen::Index>(split.row[i]), static_cast<Eigen::Index>(split.row[j])) +=
            rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return BasicDensityOperator<Real>(layout.select(ordered), std::move(out));
}

/// Eigenvalues of a Hermitian matrix as a Spectrum (no renormalization).
template <typename Real>
BasicSpectrum<Real> spectrum_of_hermitian(const ComplexMatrix<Real>& m, Real cutoff = Real(tol::kZeroCutoff)) {
  if (m.rows() != m.cols() || (m - m.adjoint()).cwiseAbs().maxCoeff() > Real(tol::kHermitian))
    throw StateError("spectrum: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw StateError("spectrum: eigensolver failed");
  std::vector<Real> vals(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return BasicSpectrum<Real>::from_values(std::move(vals), cutoff);
}

template <typename Real>
BasicSpectrum<Real> spectrum(const BasicDensityOperator<Real>& rho, Real cutoff = Real(tol::kZeroCutoff)) {
  return spectrum_of_hermitian<Real>(rho.matrix(), cutoff);
}

/// Spectrum of the reduced state on `keep` via singular values of the
/// bipartite reshape; an empty keep set means the trivial system.
template <typename Real>
BasicSpectrum<Real> reduced_spectrum(const BasicPureState<Real>& state, const std::vector<std::string>& keep,
                                     Real cutoff = Real(tol::kZeroCutoff)) {
  if (keep.empty() || keep.size() == state.layout().size()) return BasicSpectrum<Real>::uniform(1);
  auto m = group_matrix(state, state.layout().in_layout_order(keep));
  Eigen::BDCSVD<ComplexMatrix<Real>> svd(m);
  std::vector<Real> vals;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    vals.push_back(svd.singularValues()(i) * svd.singularValues()(i));
  return BasicSpectrum<Real>::from_values(std::move(vals), cutoff);
}

// ---------------------------------------------------------------------------
// Schmidt decomposition
// ---------------------------------------------------------------------------

template <typename Real>
struct BasicSchmidtDecomposition {
  SubsystemLayout layout;  // of the decomposed state
  std::vector<std::string> left_names;
  std::vector<std::string> right_names;
  BasicSpectrum<Real> coefficients;  // squared Schmidt coefficients
  ComplexMatrix<Real> left;          // column i = |xi_i>
  ComplexMatrix<Real> right;         // column i = |iota_i>

  /// Σ_i sqrt(λ_i) |xi_i> ⊗ |iota_i>, reassembled in layout order.
  BasicPureState<Real> reconstruct() const {
    ComplexMatrix<Real> m = ComplexMatrix<Real>::Zero(left.rows(), right.rows());
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
      auto k = static_cast<Eigen::Index>(i);
      m += std::sqrt(coefficients[i]) * left.col(k) * right.col(k).transpose();
    }
    return BasicPureState<Real>::normalized(layout, from_group_matrix<Real>(layout, left_names, m));
  }
};

/// Schmidt decomposition across `left` | complement, both sides in layout order.
template <typename Real>
BasicSchmidtDecomposition<Real> schmidt_decompose(const BasicPureState<Real>& state,
                                                  const std::vector<std::string>& left,
                                                  Real cutoff = Real(tol::kZeroCutoff)) {
  const auto& layout = state.layout();
  auto left_names = layout.in_layout_order(left);
  auto right_names = layout.complement(left_names);
  if (left_names.empty() || right_names.empty()) throw LayoutError("schmidt_decompose: both sides must be nonempty");
  auto m = group_matrix(state, left_names);
  Eigen::BDCSVD<ComplexMatrix<Real>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  std::vector<Real> coeffs;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    Real s2 = svd.singularValues()(i) * svd.singularValues()(i);
    if (s2 > cutoff) {
      coeffs.push_back(s2);
      kept.push_back(i);
    }
  }
  BasicSchmidtDecomposition<Real> out{layout, left_names, right_names,
                                      BasicSpectrum<Real>::from_values(coeffs, cutoff),
                                      ComplexMatrix<Real>(m.rows(), static_cast<Eigen::Index>(kept.size())),
                                      ComplexMatrix<Real>(m.cols(), static_cast<Eigen::Index>(kept.size()))};
  // M = U S V^† so the right Schmidt vectors are the conjugated columns of V.
  for (std::size_t j = 0; j < kept.size(); ++j) {
    out.left.col(static_cast<Eigen::Index>(j)) = svd.matrixU().col(kept[j]);
    out.right.col(static_cast<Eigen::Index>(j)) = svd.matrixV().col(kept[j]).conjugate();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Local operations and relabeling
// ---------------------------------------------------------------------------

/// Applies `op` (rows = product of out_dims, cols = product of target dims) to
/// the targets of a raw vector. Targets keep their layout positions; their
/// dims become `out_dims` (defaults to unchanged). No normalization checks.
template <typename Real>
std::pair<SubsystemLayout, ComplexVector<Real>> apply_to_vector(const SubsystemLayout& layout,
                                                                const ComplexVector<Real>& vec,
                                                                const ComplexMatrix<Real>& op,
                                                                const std::vector<std::string>& targets,
                                                                std::vector<std::size_t> out_dims = {}) {
  if (targets.empty()) throw LayoutError("apply_local: no targets");
  const std::size_t in_dim = layout.dim_of(targets);
  if (out_dims.empty())
    for (const auto& t : targets) out_dims.push_back(layout.at(t).dim);
  if (out_dims.size() != targets.size()) throw DimensionMismatch("apply_local: out_dims must match target count");
  const std::size_t out_dim = std::accumulate(out_dims.begin(), out_dims.end(), std::size_t{1}, std::multiplies<>());
  if (static_cast<std::size_t>(op.cols()) != in_dim || static_cast<std::size_t>(op.rows()) != out_dim)
    throw DimensionMismatch("apply_local: operator is " + std::to_string(op.rows()) + "x" +
                            std::to_string(op.cols()) + ", targets need " + std::to_string(out_dim) + "x" +
                            std::to_string(in_dim));
  auto m = group_matrix<Real>(layout, vec, targets);
  ComplexMatrix<Real> out = op * m;
  std::vector<Subsystem> subs = layout.subsystems();
  for (std::size_t k = 0; k < targets.size(); ++k) subs[layout.require(targets[k])].dim = out_dims[k];
  SubsystemLayout new_layout(std::move(subs));
  auto v = from_group_matrix<Real>(new_layout, targets, out);
  return {std::move(new_layout), std::move(v)};
}

template <typename Real>
bool is_isometry(const ComplexMatrix<Real>& op, Real tolerance = Real(tol::kIsometry)) {
  if (op.rows() < op.cols()) return false;
  ComplexMatrix<Real> g = op.adjoint() * op;
  return (g - ComplexMatrix<Real>::Identity(op.cols(), op.cols())).cwiseAbs().maxCoeff() <= tolerance;
}

/// Applies an isometry on the ordered `targets`, identity elsewhere.
template <typename Real>
BasicPureState<Real> apply_local(const BasicPureState<Real>& state, const ComplexMatrix<Real>& op,
                                 const std::vector<std::string>& targets, std::vector<std::size_t> out_dims = {}) {
  if (!is_isometry<Real>(op)) throw NotIsometryError("apply_local: operator is not an isometry");
  auto [layout, vec] = apply_to_vector<Real>(state.layout(), state.amplitudes(), op, targets, std::move(out_dims));
  return BasicPureState<Real>::normalized(std::move(layout), std::move(vec));
}

/// State with the composite contents of X and Y swapped: the new amplitude at
/// (X = a, Y = b) is the old amplitude at (X = b, Y = a). Requires equal
/// composite dimensions.
template <typename Real>
BasicPureState<Real> exchange_subsystems(const BasicPureState<Real>& state, const std::vector<std::string>& x,
                                         const std::vector<std::string>& y) {
  const auto& layout = state.layout();
  const std::size_t dx = layout.dim_of(x), dy = layout.dim_of(y);
  if (dx != dy)
    throw DimensionMismatch("cannot exchange groups of dimension " + std::to_string(dx) + " and " +
                            std::to_string(dy));
  if (x.empty()) return state;
  std::vector<std::string> rows = x;
  rows.insert(rows.end(), y.begin(), y.end());
  auto m = group_matrix(state, rows);  // row index = x * dy + y
  ComplexMatrix<Real> swapped(m.rows(), m.cols());
  for (std::size_t a = 0; a < dx; ++a)
    for (std::size_t b = 0; b < dy; ++b)
      swapped.row(static_cast<Eigen::Index>(a * dy + b)) = m.row(static_cast<Eigen::Index>(b * dx + a));
  return BasicPureState<Real>(layout, from_group_matrix<Real>(layout, rows, swapped));
}

/// True iff swapping the contents of role groups X and Y leaves the state
/// unchanged up to a global phase.
template <typename Real>
bool swap_check(const BasicPureState<Real>& state, RoleGroup x, RoleGroup y,
                Real tolerance = Real(tol::kStateEquality)) {
  auto xs = state.layout().group(x);
  auto ys = state.layout().group(y);
  if (state.layout().dim_of(xs) != state.layout().dim_of(ys))
    throw DimensionMismatch("swap_check: role groups " + std::string(to_string(x)) + " and " +
                            std::string(to_string(y)) + " differ in dimension");
  return equal_up_to_phase(exchange_subsystems(state, xs, ys), state, tolerance);
}

using Spectrum = BasicSpectrum<double>;
using PureState = BasicPureState<double>;
using DensityOperator = BasicDensityOperator<double>;
using SchmidtDecomposition = BasicSchmidtDecomposition<double>;
using CVector = ComplexVector<double>;
using CMatrix = ComplexMatrix<double>;

/// Renormalized copy whose first amplitude above 1e-12 in magnitude is real
/// and positive; identical rays canonicalize to (numerically) identical vectors.
PureState canonicalize(const PureState& state);

/// 16-hex-digit FNV-1a hash of the layout and the canonicalized amplitudes
/// rounded to 1e-10.
std::string fingerprint(const PureState& state);

}  // namespace osqse
