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

#include "qdb/kraus.hpp"

#include <algorithm>
#include <cmath>

namespace qdb {

namespace {

// Residual bound for the unitary-equivalence solve.
constexpr double kEquivTol = 1e-8;
// Eigenvalues of T must lie in [kOrderEigLow, kOrderEigHigh]; the slack
// matches the psd_rel scale.
constexpr double kOrderEigLow = -1e-8;
constexpr double kOrderEigHigh = 1.0 + 1e-8;

// Rotates the largest-magnitude entry (first in row-major scan on ties)
// to be real positive, for reproducible operator lists.
void fix_phase(Mat& v) {
  int bi = 0, bj = 0;
  double best = -1.0;
  for (int i = 0; i < v.rows(); ++i)
    for (int j = 0; j < v.cols(); ++j)
      if (std::abs(v(i, j)) > best) {
        best = std::abs(v(i, j));
        bi = i;
        bj = j;
      }
  if (best > 0.0) v *= std::conj(v(bi, bj)) / best;
}

}  // namespace

void KrausRep::validate(const Tolerances& tol) const {
  if (dim < 1) throw ShapeMismatch("KrausRep: dim must be positive");
  for (const Mat& v : operators)
    if (v.rows() != dim || v.cols() != dim)
      throw ShapeMismatch("KrausRep: operator shape mismatch");
  if (minimal && !operators.empty() &&
      numerical_rank(operators, tol) != size())
    throw NotMinimal("KrausRep: operators are linearly dependent");
}

SuperOperator KrausRep::to_superoperator() const {
  SuperOperator s = SuperOperator::zero(dim);
  for (const Mat& v : operators) s = s + sandwich(v.adjoint(), v);
  return s;
}

Mat KrausRep::conservation() const {
  Mat c = Mat::Zero(dim, dim);
  for (const Mat& v : operators) c += v.adjoint() * v;
  return c;
}

bool KrausRep::is_unital(const Tolerances& tol) const {
  return approx_equal(conservation(), Mat::Identity(dim, dim), tol);
}

KrausRep kraus_from_characteristic(const CharacteristicMatrix& cm,
                                   const Tolerances& tol) {
  const int n = cm.basis.dim;
  const int n2 = n * n;
  if (cm.c.rows() != n2 || cm.c.cols() != n2)
    throw ShapeMismatch("kraus_from_characteristic: coefficient size");
  if (!is_hermitian_matrix(cm.c, tol))
    throw NotPSD("kraus_from_characteristic: coefficient matrix is not "
                 "Hermitian");
  const HermEig eig = hermitian_eig((cm.c + cm.c.adjoint()) / 2.0, tol);
  const double lmax = std::max(eig.eigenvalues(0), 0.0);
  if (eig.eigenvalues(n2 - 1) < -tol.psd_rel * std::max(1.0, lmax))
    throw NotPSD("kraus_from_characteristic: negative eigenvalue " +
                 std::to_string(eig.eigenvalues(n2 - 1)));

  KrausRep out{n, {}, true};
  for (int g = 0; g < n2; ++g) {
    const double lam = eig.eigenvalues(g);
    if (lam <= tol.rank_rel * lmax || lam <= 0.0) continue;
    Mat v = Mat::Zero(n, n);
    for (int a = 0; a < n2; ++a)
      v += std::conj(eig.eigenvectors(a, g)) * cm.basis.elements[a];
    v *= std::sqrt(lam);
    fix_phase(v);
    out.operators.push_back(v);
  }
  return out;
}

KrausRep minimalize(const KrausRep& k, const Tolerances& tol) {
  k.validate(tol);
  const CharacteristicMatrix cm = characteristic_matrix(
      k.to_superoperator(), canonical_matrix_unit_basis(k.dim));
  return kraus_from_characteristic(cm, tol);
}

Mat kraus_unitary_equivalence(const KrausRep& k1, const KrausRep& k2,
                              const Tolerances& tol) {
  if (!k1.minimal || !k2.minimal)
    throw NotMinimal("kraus_unitary_equivalence: inputs must be minimal");
  k1.validate(tol);
  k2.validate(tol);
  if (k1.dim != k2.dim)
    throw NotEquivalent("kraus_unitary_equivalence: dimension mismatch");
  const int m = k1.size();
  if (k2.size() != m)
    throw NotEquivalent("kraus_unitary_equivalence: cardinalities differ");
  if (m == 0) return Mat::Zero(0, 0);

  // Coefficients of each W_j over {V_k}, from the normal equations of the
  // Hilbert-Schmidt least-squares problem.  Independence makes the Gram
  // matrix positive definite.
  Mat gram(m, m);
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k)
      gram(l, k) = hs_inner(k1.operators[l], k1.operators[k]);
  const Eigen::LDLT<Mat> solver(gram);

  Mat u(m, m);
  for (int j = 0; j < m; ++j) {
    Vec b(m);
    for (int l = 0; l < m; ++l)
      b(l) = hs_inner(k1.operators[l], k2.operators[j]);
    const Vec x = solver.solve(b);
    Mat rebuilt = Mat::Zero(k1.dim, k1.dim);
    for (int k = 0; k < m; ++k) {
      u(j, k) = x(k);
      rebuilt += x(k) * k1.operators[k];
    }
    if ((rebuilt - k2.operators[j]).norm() >
        kEquivTol * (1.0 + k2.operators[j].norm()))
      throw NotEquivalent(
          "kraus_unitary_equivalence: operator leaves the span");
  }
  if ((u.adjoint() * u - Mat::Identity(m, m)).norm() > kEquivTol * m)
    throw NotEquivalent(
        "kraus_unitary_equivalence: coefficient matrix is not unitary");
  return u;
}

ArvesonResult arveson_T(const KrausRep& phi, const SuperOperator& psi,
                        const Tolerances& tol) {
  if (!phi.minimal)
    throw NotMinimal("arveson_T: representation must be minimal");
  phi.validate(tol);
  if (psi.dim() != phi.dim)
    throw DimensionMismatch("arveson_T: dimension mismatch");
  const CpResult cp = is_cp(psi, tol);
  if (!cp.cp)
    throw NotCP("arveson_T: psi is not completely positive, witness " +
                std::to_string(cp.min_eigenvalue));

  ArvesonResult out;
  const int m = phi.size();
  if (m == 0) {
    // The zero map dominates only the zero map.
    out.span_residual = psi.matrix().norm();
    out.dominated = out.span_residual <= tol.eq_abs;
    out.t = Mat::Zero(0, 0);
    return out;
  }

  // Orthonormalize {V_j}: V_i = sum_j L(i,j) E_j.  The coefficient matrix
  // of psi over the E_k sandwiches needs no normalization because the
  // maps A |-> E_k* A E_l are Hilbert-Schmidt orthonormal.
  const GramSchmidtResult gs = gram_schmidt_hs(phi.operators, tol);
  const int n2 = phi.dim * phi.dim;
  Mat r(m, m);
  Mat rec = Mat::Zero(n2, n2);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) {
      const Mat mkl =
          kron(gs.ortho[k].adjoint(), gs.ortho[l].transpose());
      const Cplx coeff = mkl.conjugate().cwiseProduct(psi.matrix()).sum();
      r(k, l) = coeff;
      rec += coeff * mkl;
    }
  out.span_residual = (psi.matrix() - rec).norm();
  if (out.span_residual > tol.eq_abs * (1.0 + psi.matrix().norm()))
    return out;

  const Mat linv =
      gs.lower.triangularView<Eigen::Lower>().solve(Mat::Identity(m, m));
  Mat t = linv.adjoint() * r * linv;
  // Hermitian up to roundoff: r is the PSD block of the coefficient
  // matrix of a CP map over an orthonormal family.
  t = (t + t.adjoint()) / 2.0;
  const HermEig te = hermitian_eig(t, tol);
  out.t_max = te.eigenvalues(0);
  out.t_min = te.eigenvalues(m - 1);
  out.dominated = out.t_min >= kOrderEigLow && out.t_max <= kOrderEigHigh;
  if (out.dominated) out.t = t;
  return out;
}

bool choi_extremal_unital(const KrausRep& k, const Tolerances& tol) {
  if (!k.minimal)
    throw NotMinimal("choi_extremal_unital: representation must be minimal");
  k.validate(tol);
  if (!k.is_unital(tol))
    throw NotUnital(
        "choi_extremal_unital: conservation sum is not the identity");
  const int m = k.size();
  std::vector<Mat> products;
  products.reserve(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      products.push_back(k.operators[i].adjoint() * k.operators[j]);
  return numerical_rank(products, tol) == m * m;
}

}  // namespace qdb
