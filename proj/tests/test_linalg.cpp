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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pulsevo/errors.hpp"
#include "pulsevo/linalg.hpp"
#include "test_support.hpp"

namespace pulsevo {
namespace {

using testing::Rng;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

TEST(ComplexMatrix, RejectsZeroDimension) { EXPECT_THROW(ComplexMatrix(0), DimensionError); }

TEST(ComplexMatrix, FromRowsChecksShapeAndFiniteness) {
  EXPECT_THROW(ComplexMatrix::from_rows({{1.0, 2.0}, {3.0}}), DimensionError);
  EXPECT_THROW(ComplexMatrix::from_rows({{1.0, 2.0}}), DimensionError);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(ComplexMatrix::from_rows({{1.0, nan}, {0.0, 1.0}}), ValidationError);
}

TEST(ComplexMatrix, ProductAndKron) {
  const ComplexMatrix x = pauli::x(), y = pauli::y(), z = pauli::z();
  // xy = iz
  EXPECT_LE(max_abs_diff(x * y, cplx(0, 1) * z), 0.0);
  const ComplexMatrix xz = kron(x, z);
  ASSERT_EQ(xz.dim(), 4u);
  EXPECT_EQ(xz(0, 2), cplx(1.0));
  EXPECT_EQ(xz(1, 3), cplx(-1.0));
  EXPECT_EQ(xz(0, 0), cplx(0.0));
  EXPECT_THROW(x * ComplexMatrix::identity(3), DimensionError);
}

TEST(Dagger, Examples) {
  EXPECT_EQ(dagger(ComplexMatrix::identity(2)), ComplexMatrix::identity(2));
  EXPECT_EQ(dagger(pauli::minus()), pauli::plus());
  EXPECT_EQ(pauli::minus(), ComplexMatrix::from_rows({{0.0, 0.0}, {1.0, 0.0}}));
}

TEST(Dagger, ElementwiseDefinition) {
  Rng rng(11);
  const ComplexMatrix m = testing::random_matrix(rng, 4);
  const ComplexMatrix d = dagger(m);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(d(i, j), std::conj(m(j, i)));
  }
}

TEST(Dagger, InvolutionAndAntilinearity) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = testing::uniform_index(rng, 1, 6);
    const ComplexMatrix m = testing::random_matrix(rng, dim);
    const cplx alpha(testing::uniform(rng, -3, 3), testing::uniform(rng, -3, 3));
    EXPECT_EQ(dagger(dagger(m)), m);
    EXPECT_LE(max_abs_diff(dagger(alpha * m), std::conj(alpha) * dagger(m)), 1e-15);
  }
}

TEST(Expect, Examples) {
  EXPECT_EQ(expect(pauli::z(), QuantumState::basis(2, 0)), cplx(1.0));
  const auto plus = QuantumState::ket({kInvSqrt2, kInvSqrt2});
  EXPECT_NEAR(expect(pauli::x(), plus).real(), 1.0, 1e-15);
  EXPECT_NEAR(expect(pauli::x(), plus).imag(), 0.0, 1e-15);

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = testing::uniform_index(rng, 1, 6);
    const auto rho = QuantumState::density(testing::random_density(rng, dim));
    EXPECT_NEAR(std::abs(expect(ComplexMatrix::identity(dim), rho) - cplx(1.0)), 0.0, 1e-12);
  }
}

TEST(Expect, DimensionMismatch) {
  EXPECT_THROW(expect(ComplexMatrix::identity(3), QuantumState::basis(2, 0)), DimensionError);
  EXPECT_THROW(expect(ComplexMatrix::identity(3), to_density(QuantumState::basis(2, 0))), DimensionError);
}

TEST(Expect, RealForHermitian) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = testing::uniform_index(rng, 1, 8);
    const ComplexMatrix h = testing::random_hermitian(rng, dim, 3.0);
    const auto ket = QuantumState::ket(testing::random_ket_amplitudes(rng, dim));
    const auto rho = QuantumState::density(testing::random_density(rng, dim));
    EXPECT_LE(std::abs(expect(h, ket).imag()), 1e-12);
    EXPECT_LE(std::abs(expect(h, rho).imag()), 1e-12);
  }
}

TEST(ToDensity, Examples) {
  const auto rho0 = to_density(QuantumState::basis(2, 0));
  EXPECT_EQ(rho0.matrix(), ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}));

  const auto rho_plus = to_density(QuantumState::ket({kInvSqrt2, kInvSqrt2}));
  const auto half = ComplexMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
  EXPECT_LE(max_abs_diff(rho_plus.matrix(), half), 1e-15);

  EXPECT_THROW(to_density(rho0), KindError);
}

TEST(ToDensity, HermitianPsdUnitTraceIdempotent) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = testing::uniform_index(rng, 1, 8);
    const auto rho = to_density(QuantumState::ket(testing::random_ket_amplitudes(rng, dim)));
    const ComplexMatrix& m = rho.matrix();
    EXPECT_NEAR(std::abs(m.trace() - cplx(1.0)), 0.0, 1e-12);
    EXPECT_LE(m.hermiticity_defect(), 0.0);
    EXPECT_LE(max_abs_diff(m * m, m), 1e-12);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(testing::to_eigen(m));
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12);
  }
}

TEST(QuantumState, ConstructionChecks) {
  EXPECT_THROW(QuantumState::ket({1.0, 1.0}), ValidationError);
  EXPECT_THROW(QuantumState::ket({}), DimensionError);
  EXPECT_THROW(QuantumState::density(ComplexMatrix::from_rows({{0.5, 0.0}, {0.0, 0.4}})), ValidationError);
  EXPECT_THROW(QuantumState::density(ComplexMatrix::from_rows({{0.5, 0.1}, {0.0, 0.5}})), ValidationError);
  EXPECT_NO_THROW(QuantumState::ket({1.0 + 1e-10, 0.0}));
  EXPECT_THROW(QuantumState::basis(2, 2), DimensionError);
}

TEST(QuantumState, KindAccessors) {
  const auto k = QuantumState::basis(3, 1);
  EXPECT_TRUE(k.is_ket());
  EXPECT_THROW(k.matrix(), KindError);
  const auto r = to_density(k);
  EXPECT_EQ(r.kind(), QuantumState::Kind::DensityMatrix);
  EXPECT_THROW(r.amplitudes(), KindError);
}

TEST(Vectorize, ColumnStackingRoundTrip) {
  const auto m = ComplexMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  const StateVector v = vectorize(m);
  EXPECT_EQ(v, (StateVector{1.0, 3.0, 2.0, 4.0}));
  EXPECT_EQ(unvectorize(v, 2), m);
  EXPECT_EQ(to_density(QuantumState::basis(2, 1)).flatten(), (StateVector{0.0, 0.0, 0.0, 1.0}));
  EXPECT_THROW(unvectorize(v, 3), DimensionError);
}

}  // namespace
}  // namespace pulsevo
