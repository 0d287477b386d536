// Copyright 2026 The Pulsevo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace pulsevo {

using cplx = std::complex<double>;
using StateVector = std::vector<cplx>;

/// Tolerance used when validating norms, traces and Hermiticity of
/// user-supplied objects.
inline constexpr double kValidationTolerance = 1e-9;

/// Dense square complex matrix, row-major.
///
/// Holds operators, Hamiltonians and density matrices. Entries are in units
/// of angular frequency when the matrix is a Hamiltonian (hbar = 1).
class ComplexMatrix {
 public:
  /// Zero matrix of the given dimension. Throws DimensionError if dim == 0.
  explicit ComplexMatrix(std::size_t dim);

  /// Builds from nested rows; throws DimensionError unless square and
  /// ValidationError on non-finite entries.
  static ComplexMatrix from_rows(const std::vector<std::vector<cplx>>& rows);
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const cplx> diag);

  std::size_t dim() const noexcept { return dim_; }

  cplx& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * dim_ + col]; }
  const cplx& operator()(std::size_t row, std::size_t col) const noexcept {
    return data_[row * dim_ + col];
  }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx scale);

  /// this += scale * other, without temporaries.
  void add_scaled(const ComplexMatrix& other, cplx scale);
  void set_zero() noexcept;

  cplx trace() const noexcept;
  bool all_finite() const noexcept;
  /// max_ij |m_ij - conj(m_ji)|
  double hermiticity_defect() const noexcept;
  bool is_hermitian(double tol = kValidationTolerance) const noexcept {
    return hermiticity_defect() <= tol;
  }

  /// out = this * v. `out` must not alias `v`.
  void apply(std::span<const cplx> v, std::span<cplx> out) const noexcept;
  StateVector apply(std::span<const cplx> v) const;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, cplx scale);
ComplexMatrix operator*(cplx scale, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// out = a * b for matrices of equal dimension; `out` must alias neither.
void multiply_into(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out) noexcept;

/// Conjugate transpose.
ComplexMatrix dagger(const ComplexMatrix& m);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);
double norm2(std::span<const cplx> v) noexcept;

/// Two-level builtins. Index 0 is |0> = (1, 0) and sigma_z = diag(+1, -1).
namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
/// sigma_minus = [[0, 0], [1, 0]]
ComplexMatrix minus();
/// sigma_plus = [[0, 1], [0, 0]]
ComplexMatrix plus();
}  // namespace pauli

/// A ket or a density matrix.
///
/// The checked factories enforce unit norm / unit trace / Hermiticity to
/// kValidationTolerance. The `*_unchecked` factories only require finite
/// entries and exist for states produced by numerical evolution, which drift
/// within the integrator tolerance.
class QuantumState {
 public:
  enum class Kind { Ket, DensityMatrix };

  static QuantumState ket(StateVector amplitudes);
  static QuantumState density(ComplexMatrix rho);
  static QuantumState ket_unchecked(StateVector amplitudes);
  static QuantumState density_unchecked(ComplexMatrix rho);
  /// Computational basis ket |index>.
  static QuantumState basis(std::size_t dim, std::size_t index);

  Kind kind() const noexcept { return data_.index() == 0 ? Kind::Ket : Kind::DensityMatrix; }
  bool is_ket() const noexcept { return data_.index() == 0; }
  std::size_t dim() const noexcept { return dim_; }

  /// Throws KindError if this is a density matrix.
  const StateVector& amplitudes() const;
  /// Throws KindError if this is a ket.
  const ComplexMatrix& matrix() const;

  /// Ket amplitudes, or the density matrix flattened column-stacked
  /// (element (i, j) at i + j * dim).
  StateVector flatten() const;

  friend bool operator==(const QuantumState&, const QuantumState&) = default;

 private:
  QuantumState(std::size_t dim, std::variant<StateVector, ComplexMatrix> data)
      : dim_(dim), data_(std::move(data)) {}

  std::size_t dim_;
  std::variant<StateVector, ComplexMatrix> data_;
};

/// <psi|op|psi> for kets, trace(op * rho) for density matrices.
cplx expect(const ComplexMatrix& op, const QuantumState& state);

/// |psi><psi|. Throws KindError for density-matrix input.
QuantumState to_density(const QuantumState& ket);

/// Maps between a density matrix and its column-stacked vector form.
StateVector vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(std::span<const cplx> vec, std::size_t dim);

}  // namespace pulsevo
