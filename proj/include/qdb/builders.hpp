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

#ifndef QDB_BUILDERS_HPP_
#define QDB_BUILDERS_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "qdb/detailed_balance.hpp"
#include "qdb/kraus.hpp"

namespace qdb {

struct NotSelfAdjoint : Error {
  using Error::Error;
};
struct TraceConditionViolated : Error {
  using Error::Error;
};
struct TakagiFailed : Error {
  using Error::Error;
};
struct MembershipFailed : Error {
  using Error::Error;
};
struct NotPureHamiltonian : Error {
  using Error::Error;
};

// Generator in Lindblad form L(A) = G*A + AG + sum_j V_j* A V_j.  The
// drift has self-adjoint part H and skew part iK; when `generator` is
// set, L is Hermitian and L(1) = 0.
struct LindbladForm {
  Mat g;
  KrausRep kraus;
  bool generator = false;

  // (G + G*) / 2.
  Mat h_part() const;
  // (G - G*) / (2i); trace-zero whenever the form came from a builder.
  Mat k_part() const;
  SuperOperator to_superoperator() const;
  // Shape checks; Hermiticity and L(1) = 0 when `generator` is set.
  void validate(const Tolerances& tol = Tolerances{}) const;
};

// Unique solution K of sqrt(sigma) K + K sqrt(sigma) = X for self-adjoint
// X, by entrywise division in the sigma eigenbasis:
// K_{jk} = X_{jk} / (sqrt(l_j) + sqrt(l_k)).  Solves the damped integral
// int_0^inf exp(-t sqrt(sigma)) X exp(-t sqrt(sigma)) dt in closed form.
// Throws NotSelfAdjoint.
Mat lyapunov_solve_sqrt(const DensityMatrix& sigma, const Mat& x,
                        const Tolerances& tol = Tolerances{});

// Completion of a CP map to a generator: for psi CP, KMS self-adjoint,
// and orthogonal to the drift sector (arranged here by re-centering the
// minimal Kraus operators to trace zero), returns the unique L(A) =
// G*A + AG + psi(A) with L(1) = 0 that is KMS self-adjoint.  The drift
// is G = -H + iK with H = psi(1)/2 and K the Lyapunov solution for the
// commutator of sqrt(sigma) with the actual drift -H; Tr K = 0, so
// Tr G is real.  Throws NotCP, NotKmsSelfAdjoint.
LindbladForm kms_complete_generator(const SuperOperator& psi,
                                    const DensityMatrix& sigma,
                                    const Tolerances& tol = Tolerances{});

// Structure test for a Lindblad form with stationary state sigma: checks
// (i) that the drift satisfies the modular relation D^{-1/2} G = G*, and
// (ii) that D^{-1/2} W_j = sum_k u~(j,k) W_k* for a unitary u~ recovered
// by expressing each left side over the independent family {W_k*}.
struct FagnolaUmanita {
  bool ok = false;
  // Relative defect of the drift relation (i).
  double drift_residual = 0.0;
  // Largest relative defect over j of the solve in (ii).
  double span_residual = 0.0;
  // || u~ u~* - 1 ||, when the solve succeeded.
  double unitary_residual = 0.0;
  // First operator index violating (ii), or -1.
  int witness = -1;
  // Present when every D^{-1/2} W_j lies in span{W_k*}.
  std::optional<Mat> u_tilde;
  explicit operator bool() const { return ok; }
};
// Requires W minimal with Tr W_j = 0 and Tr G real.  Throws NotMinimal,
// TraceConditionViolated.
FagnolaUmanita fagnola_umanita_check(const Mat& g, const KrausRep& w,
                                     const DensityMatrix& sigma,
                                     const Tolerances& tol = Tolerances{});

// Rotates a Kraus family with D^{-1/2} W_j = sum_k u~(j,k) W_k* into one
// whose members all satisfy D^{-1/2} V = V*.  The mixing unitary U solves
// conj(U) = U u~ via the Takagi factorization conj(u~) = A A^T, U = A^T;
// the represented map is unchanged.  Throws TakagiFailed when u~ is not
// a symmetric unitary, MembershipFailed when a rotated operator misses
// the modular relation at sigma.
KrausRep symmetrize_kraus(const KrausRep& w, const Mat& u_tilde,
                          const DensityMatrix& sigma,
                          const Tolerances& tol = Tolerances{});

// Recovers H with L = i[H, .] when the dissipative part of L vanishes,
// in the trace-zero gauge.  The test is that the reduced coefficient
// block of L is zero; the reconstruction defect is checked against
// eq_abs.  Throws NotPureHamiltonian, NotHermitianMap,
// PreconditionViolated (when L(1) != 0).
Mat hamiltonian_part_detect(const SuperOperator& l,
                            const DensityMatrix& sigma,
                            const Tolerances& tol = Tolerances{});

// Batch witness that QMS_m is pointed: commutator generators i[H, .] for
// random non-sigma-commuting self-adjoint H must fail self-adjointness
// in the m inner product with margin bounded away from zero.
struct PointednessReport {
  int trials = 0;
  // Trials where is_selfadjoint_m unexpectedly passed; zero for a
  // pointed cone.
  int violations = 0;
  double min_margin = 0.0;
  double max_margin = 0.0;
  explicit operator bool() const { return trials > 0 && violations == 0; }
};
PointednessReport pointedness_witness(const Measure& m,
                                      const DensityMatrix& sigma, int trials,
                                      std::uint64_t seed = 0,
                                      const Tolerances& tol = Tolerances{});

}  // namespace qdb

#endif  // QDB_BUILDERS_HPP_
