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

#ifndef QDB_KRAUS_HPP_
#define QDB_KRAUS_HPP_

#include <vector>

#include "qdb/superop.hpp"

namespace qdb {

struct NotPSD : Error {
  using Error::Error;
};
struct NotMinimal : Error {
  using Error::Error;
};
struct NotCP : Error {
  using Error::Error;
};
struct NotEquivalent : Error {
  using Error::Error;
};
struct NotUnital : Error {
  using Error::Error;
};

// Kraus representation Phi(A) = sum_j V_j* A V_j.  An empty operator list
// is the zero map.  The `minimal` flag asserts linear independence of the
// V_j; validate() verifies it.
struct KrausRep {
  int dim = 0;
  std::vector<Mat> operators;
  bool minimal = false;

  int size() const { return static_cast<int>(operators.size()); }
  // Shape checks, and the rank invariant when `minimal` is set.
  void validate(const Tolerances& tol = Tolerances{}) const;
  SuperOperator to_superoperator() const;
  // sum_j V_j* V_j; equals the identity exactly when the map is unital,
  // for any representation of it.
  Mat conservation() const;
  bool is_unital(const Tolerances& tol = Tolerances{}) const;
};

// Minimal Kraus operators from the eigendecomposition of a PSD coefficient
// matrix: V_gamma = sqrt(l_gamma) sum_alpha conj(w_gamma[alpha]) F_alpha.
// Each operator's largest-magnitude entry is rotated to be real positive.
// Throws NotPSD when C has an eigenvalue below -psd_rel * max(1, l_max).
KrausRep kraus_from_characteristic(const CharacteristicMatrix& cm,
                                   const Tolerances& tol = Tolerances{});

// Minimal representation of the same map, via the coefficient-matrix
// roundtrip in the canonical matrix unit basis.
KrausRep minimalize(const KrausRep& k, const Tolerances& tol = Tolerances{});

// The M x M unitary U with k2.operators[j] = sum_k U(j,k) k1.operators[k].
// Both inputs must be minimal representations of the same map.  Throws
// NotMinimal, or NotEquivalent when cardinalities differ, some W_j leaves
// span{V_k}, or the recovered coefficient matrix is not unitary.
Mat kraus_unitary_equivalence(const KrausRep& k1, const KrausRep& k2,
                              const Tolerances& tol = Tolerances{});

// Outcome of the Radon-Nikodym order test.  When `dominated`, t is the
// unique M x M matrix with 0 <= t <= 1 and
// Psi(A) = sum_{ij} t(i,j) V_i* A V_j; otherwise t is empty and
// span_residual records how far Psi sticks out of span{V_i* . V_j}.
struct ArvesonResult {
  bool dominated = false;
  Mat t;
  double span_residual = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  explicit operator bool() const { return dominated; }
};

// Decides phi >= psi in the CP order.  T is recovered as (L^-1)* R L^-1
// where L is the Gram-Schmidt factor of {V_j} and R the coefficient matrix
// of psi over the orthonormalized family.  Eigenvalues of T must lie in
// [-1e-8, 1 + 1e-8].  Throws NotMinimal and NotCP.
ArvesonResult arveson_T(const KrausRep& phi, const SuperOperator& psi,
                        const Tolerances& tol = Tolerances{});

// Extremality in the convex set of unital CP maps: true iff the M^2
// products {V_i* V_j} are linearly independent.  Throws NotMinimal and
// NotUnital.
bool choi_extremal_unital(const KrausRep& k,
                          const Tolerances& tol = Tolerances{});

}  // namespace qdb

#endif  // QDB_KRAUS_HPP_
