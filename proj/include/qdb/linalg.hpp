// Copyright 2026 The qdb developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QDB_LINALG_HPP
#define QDB_LINALG_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qdb {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NotHermitian : Error {
  explicit NotHermitian(const std::string& what) : Error(what) {}
};
struct ShapeMismatch : Error {
  explicit ShapeMismatch(const std::string& what) : Error(what) {}
};
struct NotSymmetricUnitary : Error {
  explicit NotSymmetricUnitary(const std::string& what) : Error(what) {}
};
struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

/// Numerical thresholds shared across the toolkit.
/// psd_rel: relative eigenvalue floor for PSD verdicts.
/// rank_rel: relative singular-value floor for rank decisions.
/// eq_abs: absolute operator-norm threshold for equality tests,
/// used as eq_abs * (1 + ||.||).
struct Tolerances {
  double psd_rel = 1e-9;
  double rank_rel = 1e-10;
  double eq_abs = 1e-10;
};

/// Result of a Hermitian eigendecomposition. Eigenvalues descending;
/// eigenvector columns phase-fixed (first nonzero entry real positive).
struct HermEig {
  RVec eigenvalues;
  Mat eigenvectors;
};

/// PSD verdict plus the minimum-eigenvalue witness.
struct PsdResult {
  bool psd = false;
  double min_eigenvalue = 0.0;
  explicit operator bool() const { return psd; }
};

/// Spectral (operator) norm. Zero-size matrices have norm 0.
double operator_norm(const Mat& a);

/// True when ||a - b|| <= eq_abs * (1 + ||a||) in operator norm.
bool approx_equal(const Mat& a, const Mat& b, const Tolerances& tol = {});

/// True when ||a - a*|| <= eq_abs * (1 + ||a||).
bool is_hermitian_matrix(const Mat& a, const Tolerances& tol = {});

/// Eigendecomposition of a Hermitian matrix. Throws NotHermitian when the
/// symmetry check fails. Ties in eigenvalues are broken by lexicographic
/// order of the phase-fixed eigenvector entries, so outputs are deterministic.
HermEig hermitian_eig(const Mat& a, const Tolerances& tol = {});

/// PSD test with witness: true iff the minimum eigenvalue is at least
/// -psd_rel * max(1, max eigenvalue). Throws NotHermitian.
PsdResult is_psd(const Mat& a, const Tolerances& tol = {});

/// Rank of the Gram matrix of Hilbert-Schmidt inner products of `vectors`,
/// using the singular-value floor rank_rel * (largest singular value).
/// Throws ShapeMismatch on inconsistent shapes or an empty input.
int numerical_rank(const std::vector<Mat>& vectors, const Tolerances& tol = {});

/// Factor a symmetric unitary S as S = A * A^T with A unitary.
/// Throws NotSymmetricUnitary when the precondition fails.
Mat takagi_symmetric_unitary(const Mat& s, const Tolerances& tol = {});

/// Gram-Schmidt in the Hilbert-Schmidt inner product Tr[A* B].
/// Returns orthonormal matrices e_j and the invertible lower-triangular L
/// with v_i = sum_j L(i,j) e_j. Requires a linearly independent input.
struct GramSchmidtResult {
  std::vector<Mat> ortho;
  Mat lower;  // M x M lower triangular
};
GramSchmidtResult gram_schmidt_hs(const std::vector<Mat>& vectors,
                                  const Tolerances& tol = {});

/// Hilbert-Schmidt inner product Tr[a* b].
Cplx hs_inner(const Mat& a, const Mat& b);

}  // namespace qdb

#endif  // QDB_LINALG_HPP
