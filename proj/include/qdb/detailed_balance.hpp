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

#ifndef QDB_DETAILED_BALANCE_HPP_
#define QDB_DETAILED_BALANCE_HPP_

#include <optional>
#include <vector>

#include "qdb/kraus.hpp"

namespace qdb {

struct NotKmsSelfAdjoint : Error {
  using Error::Error;
};
struct NotDeltaSSelfAdjoint : Error {
  using Error::Error;
};
struct RealnessViolated : Error {
  using Error::Error;
};

// Entrywise rescaled coefficient matrix over the matrix unit basis of
// sigma: b_{ab} = c_{ab} (lambda_{a2}, lambda_{b2})_m.  For a map that is
// self-adjoint in the m inner product, B commutes with the antiunitary
// (Uv)_a = conj(v_{a'}), equivalently b_{ab} = conj(b_{a'b'}).
struct BMatrix {
  Mat b;
  DensityMatrix sigma;
  Measure m;
  // || B - P conj(B) P ||_F, the commutation defect with U.
  double commutation_residual = 0.0;
};
BMatrix b_matrix(const SuperOperator& phi, const DensityMatrix& sigma,
                 const Measure& m, const Tolerances& tol = Tolerances{});

// Membership in the real space {V : Delta^{-1/2} V = V*}.
struct KmsMembership {
  bool member = false;
  double residual = 0.0;
  explicit operator bool() const { return member; }
};
KmsMembership kms_space_member(const Mat& v, const DensityMatrix& sigma,
                               const Tolerances& tol = Tolerances{});

// Real-orthonormal basis of the space above, indexed like matrix units.
// Diagonal indices keep G_a = E_a; off-diagonal indices combine E_a and
// E_a* with weights e^{omega_a/4} where omega_a = log l_{a1} - log l_{a2}.
struct KmsSpaceBasis {
  DensityMatrix sigma;
  std::vector<Mat> g;
  RVec omega;
  // Membership and real-orthonormality invariants.
  void validate(const Tolerances& tol = Tolerances{}) const;
};
KmsSpaceBasis kms_space_basis(const DensityMatrix& sigma);

// One conjugation term of a decomposition into extremal directions.
struct KmsExtremalTerm {
  double weight = 0.0;
  Mat v;  // Frobenius-normalized member of the real space, sign-fixed
};
// Phi(A) = sum_r w_r V_r* A V_r with every V_r in the real space, at most
// N^2 terms.  Diagonalizes B over the U-fixed real subspace so the
// eigenvectors satisfy Uu = u exactly.  Throws NotCP, NotKmsSelfAdjoint.
std::vector<KmsExtremalTerm> kms_extremal_decomposition(
    const SuperOperator& phi, const DensityMatrix& sigma,
    const Tolerances& tol = Tolerances{});

// Radon-Nikodym order test specialized to KMS detailed balance: the
// derivative T must come out real.  A T with imaginary part above 1e-8
// signals that psi is not KMS self-adjoint or some V_j is outside the
// real space, and raises RealnessViolated.
struct KmsRnResult {
  bool dominated = false;
  RMat t;
  double imag_residual = 0.0;
  double span_residual = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  explicit operator bool() const { return dominated; }
};
KmsRnResult kms_rn_test(const KrausRep& phi, const SuperOperator& psi,
                        const Tolerances& tol = Tolerances{});

// Extremality in the unital KMS-self-adjoint CP cone: true iff the
// M(M+1)/2 symmetrized products V_i*V_j + V_j*V_i (i <= j) are linearly
// independent over the reals.  When sigma is given, every V_j must lie in
// the real space of sigma.  Throws NotMinimal, NotUnital,
// NotKmsSelfAdjoint.
bool kms_unital_extremal(
    const KrausRep& phi,
    const std::optional<DensityMatrix>& sigma = std::nullopt,
    const Tolerances& tol = Tolerances{});

// One Delta-eigenvalue family of a canonical minimal Kraus representation.
// The canonical scaling is absorbed into the operators: the map restores
// as sum_k mu^{1/2} V_k* A V_k + mu^{-1/2} V_k A V_k* per family with
// mu > 1, and sum_k W_k A W_k for the self-adjoint mu = 1 family.
struct DeltaSFamily {
  double mu = 1.0;
  double omega = 0.0;
  std::vector<Mat> v;
};

struct CanonicalDeltaS {
  int dim = 0;
  // Families ordered by ascending mu, all mu >= 1; eigenvalues mu < 1 are
  // folded into their 1/mu partners.
  std::vector<DeltaSFamily> families;
  bool mu_one_selfadjoint = false;
  // The alpha -> alpha' index map used for the mu = 1 block; recorded
  // because repeated sigma eigenvalues leave a choice here.
  std::vector<int> pairing;
  double reconstruction_residual = 0.0;

  SuperOperator to_superoperator() const;
  KrausRep to_kraus() const;
};

// Block structure of a CP Hermitian map that is self-adjoint for the
// one-atom measure at s (any s != 1/2 gives the same verdict): the
// coefficients vanish across distinct Delta-eigenvalues and satisfy the
// pairing relation within each block.  The verdict is cross-checked
// against the residual test at two values of s; disagreement raises
// InternalInconsistency.  Throws NotDeltaSSelfAdjoint with the violating
// index pair, NotCP, NotHermitianMap, PreconditionViolated (s = 1/2).
CanonicalDeltaS delta_s_structure(const SuperOperator& phi,
                                  const DensityMatrix& sigma, double s,
                                  const Tolerances& tol = Tolerances{});

// Per-family Radon-Nikodym derivatives: psi is dominated by the canonical
// map iff psi matches the two-sided family form with 0 <= T^(j) <= 1 for
// every family, T real on the mu = 1 family (RealnessViolated otherwise).
struct DeltaSOrderResult {
  bool dominated = false;
  std::vector<Mat> t;
  double span_residual = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  explicit operator bool() const { return dominated; }
};
DeltaSOrderResult delta_s_order_test(const CanonicalDeltaS& phi,
                                     const SuperOperator& psi,
                                     const DensityMatrix& sigma, double s,
                                     const Tolerances& tol = Tolerances{});

// Extremality in the unital delta_s-self-adjoint CP cone: linear
// independence of the products
// X^(j)_{kl} = mu_j^{1/2} V_k* V_l + mu_j^{-1/2} V_l V_k*.
// The mu = 1 family contributes only its k <= l symmetrized products;
// the X there are self-adjoint, so complex and real independence agree.
// Throws NotUnital.
bool delta_s_unital_extremal(const CanonicalDeltaS& phi,
                             const Tolerances& tol = Tolerances{});

// Measures used by gns_universal_check when no family is supplied.
std::vector<Measure> default_universality_family();

// True iff phi is self-adjoint for the point measure at 0 and stays
// self-adjoint for every measure in the sample family.
bool gns_universal_check(const SuperOperator& phi, const DensityMatrix& sigma,
                         const std::vector<Measure>& sample_measures,
                         const Tolerances& tol = Tolerances{});
bool gns_universal_check(const SuperOperator& phi, const DensityMatrix& sigma,
                         const Tolerances& tol = Tolerances{});

}  // namespace qdb

#endif  // QDB_DETAILED_BALANCE_HPP_
