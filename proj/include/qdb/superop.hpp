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

#ifndef QDB_SUPEROP_HPP_
#define QDB_SUPEROP_HPP_

#include <functional>
#include <vector>

#include "qdb/state.hpp"

namespace qdb {

struct NotHermitianMap : Error {
  using Error::Error;
};
struct PreconditionViolated : Error {
  using Error::Error;
};
// Raised when two independently computed routes to the same quantity
// disagree, which indicates a bug rather than bad input.
struct InternalInconsistency : Error {
  using Error::Error;
};
struct NoUniqueState : Error {
  using Error::Error;
};
struct NotFaithful : Error {
  using Error::Error;
};

// Row-major vectorization: vec(A)[(i)*n + j] = A(i, j).
Vec vec_rm(const Mat& a);
Mat unvec_rm(const Vec& v, int n);
Mat kron(const Mat& a, const Mat& b);

enum class BasisKind { matrix_unit, unital, custom };

// Orthonormal basis of the N x N matrices under <B,A> = Tr[B*A]/N.
// Elements are indexed by the pair alpha = (i,j), 1 <= i,j <= N, flattened
// row-major to (i-1)*N + (j-1).  The pairing permutation realizes the index
// map alpha -> alpha' with F_alpha^* = F_{alpha'} for symmetric kinds; it is
// empty for custom bases that do not declare one.
struct MatrixBasis {
  int dim = 0;
  BasisKind kind = BasisKind::custom;
  std::vector<Mat> elements;
  std::vector<int> pairing;

  static int flatten(int i, int j, int n) { return (i - 1) * n + (j - 1); }
  int size() const { return dim * dim; }
  bool has_pairing() const { return !pairing.empty(); }
  // Checks 𝔥-orthonormality and, if declared, the pairing relation.
  void validate(const Tolerances& tol = Tolerances{}) const;
};

// E_(i,j) = sqrt(N) |u_i><u_j| from the eigenbasis of sigma.
MatrixBasis matrix_unit_basis(const DensityMatrix& sigma);
// Matrix unit basis of the standard coordinate basis; independent of any
// state.  Used where only orthonormality matters.
MatrixBasis canonical_matrix_unit_basis(int n);
// Householder-rotated basis with F_(1,1) = identity; the rotation acts on
// the span of the diagonal units E_(k,k) only.
MatrixBasis unital_basis(const DensityMatrix& sigma);

// Permutation p with p[k] = row-major index of the k-th element in the
// diagonal-first order (1,1),...,(N,N),(1,2),...  Several block arguments
// group the coefficient matrix this way.
std::vector<int> diagonal_first_permutation(int n);

// Linear map on N x N matrices, stored as its N^2 x N^2 matrix acting on
// row-major vectorizations.
class SuperOperator {
 public:
  SuperOperator(int n, Mat s);
  static SuperOperator zero(int n);
  static SuperOperator identity(int n);
  static SuperOperator from_apply(int n,
                                  const std::function<Mat(const Mat&)>& f);

  int dim() const { return n_; }
  const Mat& matrix() const { return s_; }
  Mat apply(const Mat& a) const;

  SuperOperator operator+(const SuperOperator& o) const;
  SuperOperator operator-(const SuperOperator& o) const;
  SuperOperator operator-() const;
  // Composition.
  SuperOperator operator*(const SuperOperator& o) const;
  SuperOperator operator*(Cplx c) const;

 private:
  int n_;
  Mat s_;
};

inline SuperOperator operator*(Cplx c, const SuperOperator& p) {
  return p * c;
}

// X |-> F X G.
SuperOperator sandwich(const Mat& f, const Mat& g);

// <Psi, Phi> = (1/N^2) Tr[S_Psi* S_Phi]; makes the sandwich maps of an
// orthonormal pair of bases orthonormal.
Cplx inner_hat(const SuperOperator& a, const SuperOperator& b);

// L(A) = G*A + AG + sum_j V_j* A V_j.
SuperOperator lindblad_superoperator(const Mat& g, const std::vector<Mat>& vs);

struct CharacteristicMatrix {
  Mat c;
  MatrixBasis basis;
};

// c_{ab} = <#(F_a* (x) F_b), Phi> in the superoperator inner product.
CharacteristicMatrix characteristic_matrix(const SuperOperator& phi,
                                           const MatrixBasis& basis);
// Phi(A) = sum_{ab} c_{ab} F_a* A F_b.
SuperOperator from_characteristic(const CharacteristicMatrix& cm);
// Coefficients of the same map in another basis of equal dimension.
CharacteristicMatrix change_basis(const CharacteristicMatrix& cm,
                                  const MatrixBasis& target);

// Phi(A*)* = Phi(A), equivalently C self-adjoint in any orthonormal basis.
bool is_hermitian_map(const SuperOperator& phi,
                      const Tolerances& tol = Tolerances{});

struct CpResult {
  bool cp = false;
  double min_eigenvalue = 0.0;
  explicit operator bool() const { return cp; }
};
CpResult is_cp(const SuperOperator& phi, const Tolerances& tol = Tolerances{});

// Adjoint for <B,A> = Tr[B*A]/N.
SuperOperator dagger(const SuperOperator& phi);

// Adjoint for the sigma-weighted inner product of the measure m; defined
// for Hermitian maps only.
SuperOperator adjoint_m(const SuperOperator& phi, const DensityMatrix& sigma,
                        const Measure& m,
                        const Tolerances& tol = Tolerances{});

struct SelfAdjointResult {
  bool selfadjoint = false;
  // Operator-norm defect of M_m Phi = Phi^dagger M_m, relative.
  double residual = 0.0;
  // Defect of the coefficient identity b_{ab} = conj(b_{a'b'}).
  double coefficient_residual = 0.0;
  explicit operator bool() const { return selfadjoint; }
};
SelfAdjointResult is_selfadjoint_m(const SuperOperator& phi,
                                   const DensityMatrix& sigma,
                                   const Measure& m,
                                   const Tolerances& tol = Tolerances{});

enum class UnitalityClass { unital, annihilates_one, neither };
// Classifies via direct application to the identity and, independently,
// via the coefficient column sums; the two routes must agree.
UnitalityClass unitality_class(const SuperOperator& phi,
                               const Tolerances& tol = Tolerances{});

// Lower-right (N^2-1) x (N^2-1) block of the coefficients in the unital
// basis of sigma.  Requires a Hermitian map annihilating the identity.
Mat reduced_characteristic(const SuperOperator& phi,
                           const DensityMatrix& sigma,
                           const Tolerances& tol = Tolerances{});

// Hermitian, annihilates the identity, and PSD reduced coefficients.
bool is_qms_generator(const SuperOperator& l, const DensityMatrix& sigma,
                      const Tolerances& tol = Tolerances{});

// Splitting of Phi into A |-> XA + AY plus a component whose coefficient
// matrix has vanishing first row and column in the unital basis.  The
// scalar gauge is fixed by making Tr[X] real.
struct HsDecomposition {
  Mat x;
  Mat y;
  SuperOperator perp;
};
HsDecomposition decompose_HS(const SuperOperator& phi,
                             const DensityMatrix& sigma,
                             const Tolerances& tol = Tolerances{});

// Unique faithful fixed point of Phi^dagger (for unital Phi) or unique
// kernel element of L^dagger (when L annihilates the identity).
DensityMatrix stationary_state(const SuperOperator& phi,
                               const Tolerances& tol = Tolerances{});

}  // namespace qdb

#endif  // QDB_SUPEROP_HPP_
