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

#include "pulsevo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pulsevo/errors.hpp"

namespace pulsevo {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

bool finite(cplx z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
  if (dim == 0) throw DimensionError("matrix dimension must be positive");
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<cplx>>& rows) {
  ComplexMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw DimensionError("matrix row " + std::to_string(i) + " has " +
                           std::to_string(rows[i].size()) + " entries, expected " +
                           std::to_string(rows.size()));
    }
    std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<long>(i * m.dim_));
  }
  if (!m.all_finite()) throw ValidationError("", "matrix has non-finite entries");
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
  std::vector<std::vector<cplx>> nested;
  nested.reserve(rows.size());
  for (const auto& r : rows) nested.emplace_back(r);
  return from_rows(nested);
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_dim(dim_, other.dim_, "matrix addition");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_dim(dim_, other.dim_, "matrix subtraction");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

void ComplexMatrix::add_scaled(const ComplexMatrix& other, cplx scale) {
  require_same_dim(dim_, other.dim_, "matrix accumulation");
  const cplx* src = other.data_.data();
  cplx* dst = data_.data();
  const std::size_t n = data_.size();
  for (std::size_t k = 0; k < n; ++k) dst[k] += scale * src[k];
}

void ComplexMatrix::set_zero() noexcept { std::fill(data_.begin(), data_.end(), cplx{}); }

cplx ComplexMatrix::trace() const noexcept {
  cplx t{};
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), finite);
}

double ComplexMatrix::hermiticity_defect() const noexcept {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i; j < dim_; ++j) {
      worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    }
  }
  return worst;
}

void ComplexMatrix::apply(std::span<const cplx> v, std::span<cplx> out) const noexcept {
  const cplx* row = data_.data();
  for (std::size_t i = 0; i < dim_; ++i, row += dim_) {
    cplx acc{};
    for (std::size_t j = 0; j < dim_; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
}

StateVector ComplexMatrix::apply(std::span<const cplx> v) const {
  require_same_dim(dim_, v.size(), "matrix-vector product");
  StateVector out(dim_);
  apply(v, out);
  return out;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, cplx scale) { return a *= scale; }
ComplexMatrix operator*(cplx scale, ComplexMatrix a) { return a *= scale; }

void multiply_into(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out) noexcept {
  const std::size_t n = a.dim();
  out.set_zero();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  }
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "matrix product");
  ComplexMatrix out(a.dim());
  multiply_into(a, b, out);
  return out;
}

ComplexMatrix dagger(const ComplexMatrix& m) {
  ComplexMatrix out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) out(i, j) = std::conj(m(j, i));
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      for (std::size_t k = 0; k < nb; ++k) {
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
      }
    }
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "max_abs_diff");
  return max_abs_diff(a.data(), b.data());
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  require_same_dim(a.size(), b.size(), "max_abs_diff");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

double norm2(std::span<const cplx> v) noexcept {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

namespace pauli {
ComplexMatrix x() { return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
ComplexMatrix y() { return ComplexMatrix::from_rows({{0.0, cplx(0, -1)}, {cplx(0, 1), 0.0}}); }
ComplexMatrix z() { return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }
ComplexMatrix minus() { return ComplexMatrix::from_rows({{0.0, 0.0}, {1.0, 0.0}}); }
ComplexMatrix plus() { return ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}); }
}  // namespace pauli

QuantumState QuantumState::ket_unchecked(StateVector amplitudes) {
  if (amplitudes.empty()) throw DimensionError("ket must have at least one amplitude");
  if (!std::all_of(amplitudes.begin(), amplitudes.end(), finite)) {
    throw ValidationError("", "ket has non-finite amplitudes");
  }
  const std::size_t dim = amplitudes.size();
  return QuantumState(dim, std::move(amplitudes));
}

QuantumState QuantumState::density_unchecked(ComplexMatrix rho) {
  if (!rho.all_finite()) throw ValidationError("", "density matrix has non-finite entries");
  const std::size_t dim = rho.dim();
  return QuantumState(dim, std::move(rho));
}

QuantumState QuantumState::ket(StateVector amplitudes) {
  QuantumState s = ket_unchecked(std::move(amplitudes));
  const double n = norm2(s.amplitudes());
  if (std::abs(n - 1.0) > kValidationTolerance) {
    throw ValidationError("", "ket norm is " + std::to_string(n) + ", expected 1");
  }
  return s;
}

QuantumState QuantumState::density(ComplexMatrix rho) {
  QuantumState s = density_unchecked(std::move(rho));
  const ComplexMatrix& m = s.matrix();
  if (!m.is_hermitian()) throw ValidationError("", "density matrix is not Hermitian");
  if (std::abs(m.trace() - 1.0) > kValidationTolerance) {
    throw ValidationError("", "density matrix trace is not 1");
  }
  return s;
}

QuantumState QuantumState::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("basis index out of range");
  StateVector v(dim);
  v[index] = 1.0;
  return QuantumState(dim, std::move(v));
}

const StateVector& QuantumState::amplitudes() const {
  if (const auto* v = std::get_if<StateVector>(&data_)) return *v;
  throw KindError("state is a density matrix, not a ket");
}

const ComplexMatrix& QuantumState::matrix() const {
  if (const auto* m = std::get_if<ComplexMatrix>(&data_)) return *m;
  throw KindError("state is a ket, not a density matrix");
}

StateVector QuantumState::flatten() const {
  if (is_ket()) return amplitudes();
  return vectorize(matrix());
}

cplx expect(const ComplexMatrix& op, const QuantumState& state) {
  require_same_dim(op.dim(), state.dim(), "expect");
  const std::size_t n = op.dim();
  if (state.is_ket()) {
    const auto& psi = state.amplitudes();
    cplx acc{};
    for (std::size_t i = 0; i < n; ++i) {
      cplx row{};
      for (std::size_t j = 0; j < n; ++j) row += op(i, j) * psi[j];
      acc += std::conj(psi[i]) * row;
    }
    return acc;
  }
  // trace(op * rho) = sum_ij op_ij rho_ji
  const auto& rho = state.matrix();
  cplx acc{};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) acc += op(i, j) * rho(j, i);
  }
  return acc;
}

QuantumState to_density(const QuantumState& ket) {
  if (!ket.is_ket()) throw KindError("to_density: state is already a density matrix");
  const auto& psi = ket.amplitudes();
  ComplexMatrix rho(ket.dim());
  for (std::size_t i = 0; i < ket.dim(); ++i) {
    for (std::size_t j = 0; j < ket.dim(); ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
  }
  return QuantumState::density_unchecked(std::move(rho));
}

StateVector vectorize(const ComplexMatrix& rho) {
  const std::size_t n = rho.dim();
  StateVector v(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) v[i + j * n] = rho(i, j);
  }
  return v;
}

ComplexMatrix unvectorize(std::span<const cplx> vec, std::size_t dim) {
  require_same_dim(vec.size(), dim * dim, "unvectorize");
  ComplexMatrix rho(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < dim; ++i) rho(i, j) = vec[i + j * dim];
  }
  return rho;
}

}  // namespace pulsevo
