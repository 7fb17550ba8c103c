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

#include "qdb/superop.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace qdb {

Vec vec_rm(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  Vec v(n * a.cols());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
  return v;
}

Mat unvec_rm(const Vec& v, int n) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = v(i * n + j);
  return a;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void MatrixBasis::validate(const Tolerances& tol) const {
  if (static_cast<int>(elements.size()) != size())
    throw ShapeMismatch("basis element count does not match dim^2");
  for (int a = 0; a < size(); ++a) {
    for (int b = 0; b < size(); ++b) {
      const Cplx g = hs_inner(elements[a], elements[b]) / double(dim);
      const Cplx want = (a == b) ? Cplx(1, 0) : Cplx(0, 0);
      if (std::abs(g - want) > 1e-12 * 10)
        throw ShapeMismatch("basis is not orthonormal at pair (" +
                            std::to_string(a) + "," + std::to_string(b) + ")");
    }
  }
  if (has_pairing()) {
    for (int a = 0; a < size(); ++a) {
      const Mat diff = elements[a].adjoint() - elements[pairing[a]];
      if (operator_norm(diff) > tol.eq_abs * (1.0 + operator_norm(elements[a])))
        throw ShapeMismatch("pairing does not realize the adjoint");
    }
  }
}

MatrixBasis matrix_unit_basis(const DensityMatrix& sigma) {
  const int n = sigma.dim();
  const double root = std::sqrt(static_cast<double>(n));
  MatrixBasis basis;
  basis.dim = n;
  basis.kind = BasisKind::matrix_unit;
  basis.elements.resize(n * n);
  basis.pairing.resize(n * n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const Mat e = root * sigma.eigenvectors().col(i - 1) *
                    sigma.eigenvectors().col(j - 1).adjoint();
      basis.elements[MatrixBasis::flatten(i, j, n)] = e;
      basis.pairing[MatrixBasis::flatten(i, j, n)] =
          MatrixBasis::flatten(j, i, n);
    }
  return basis;
}

MatrixBasis canonical_matrix_unit_basis(int n) {
  const double root = std::sqrt(static_cast<double>(n));
  MatrixBasis basis;
  basis.dim = n;
  basis.kind = BasisKind::matrix_unit;
  basis.elements.resize(n * n);
  basis.pairing.resize(n * n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      Mat e = Mat::Zero(n, n);
      e(i - 1, j - 1) = root;
      basis.elements[MatrixBasis::flatten(i, j, n)] = e;
      basis.pairing[MatrixBasis::flatten(i, j, n)] =
          MatrixBasis::flatten(j, i, n);
    }
  return basis;
}

MatrixBasis unital_basis(const DensityMatrix& sigma) {
  const int n = sigma.dim();
  // Householder reflection mapping e_1 to the flat unit vector.
  RVec v1 = RVec::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  RVec u = v1;
  u(0) -= 1.0;
  if (u.norm() > 1e-15) u.normalize();
  const RMat v = RMat::Identity(n, n) - 2.0 * u * u.transpose();

  MatrixBasis basis = matrix_unit_basis(sigma);
  basis.kind = BasisKind::unital;
  std::vector<Mat> diag_old(n);
  for (int k = 1; k <= n; ++k)
    diag_old[k - 1] = basis.elements[MatrixBasis::flatten(k, k, n)];
  for (int i = 1; i <= n; ++i) {
    Mat f = Mat::Zero(n, n);
    for (int k = 1; k <= n; ++k) f += v(i - 1, k - 1) * diag_old[k - 1];
    basis.elements[MatrixBasis::flatten(i, i, n)] = f;
  }
  return basis;
}

std::vector<int> diagonal_first_permutation(int n) {
  std::vector<int> p;
  p.reserve(n * n);
  for (int i = 1; i <= n; ++i) p.push_back(MatrixBasis::flatten(i, i, n));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) p.push_back(MatrixBasis::flatten(i, j, n));
  return p;
}

SuperOperator::SuperOperator(int n, Mat s) : n_(n), s_(std::move(s)) {
  if (s_.rows() != n * n || s_.cols() != n * n)
    throw ShapeMismatch("superoperator matrix must be N^2 x N^2");
}

SuperOperator SuperOperator::zero(int n) {
  return SuperOperator(n, Mat::Zero(n * n, n * n));
}

SuperOperator SuperOperator::identity(int n) {
  return SuperOperator(n, Mat::Identity(n * n, n * n));
}

SuperOperator SuperOperator::from_apply(
    int n, const std::function<Mat(const Mat&)>& f) {
  Mat s(n * n, n * n);
  for (int col = 0; col < n * n; ++col) {
    Mat unit = Mat::Zero(n, n);
    unit(col / n, col % n) = 1.0;
    s.col(col) = vec_rm(f(unit));
  }
  return SuperOperator(n, std::move(s));
}

Mat SuperOperator::apply(const Mat& a) const {
  if (a.rows() != n_ || a.cols() != n_)
    throw DimensionMismatch("argument does not match superoperator dim");
  return unvec_rm(s_ * vec_rm(a), n_);
}

SuperOperator SuperOperator::operator+(const SuperOperator& o) const {
  if (o.n_ != n_) throw DimensionMismatch("superoperator dims differ");
  return SuperOperator(n_, s_ + o.s_);
}

SuperOperator SuperOperator::operator-(const SuperOperator& o) const {
  if (o.n_ != n_) throw DimensionMismatch("superoperator dims differ");
  return SuperOperator(n_, s_ - o.s_);
}

SuperOperator SuperOperator::operator-() const {
  return SuperOperator(n_, -s_);
}

SuperOperator SuperOperator::operator*(const SuperOperator& o) const {
  if (o.n_ != n_) throw DimensionMismatch("superoperator dims differ");
  return SuperOperator(n_, s_ * o.s_);
}

SuperOperator SuperOperator::operator*(Cplx c) const {
  return SuperOperator(n_, c * s_);
}

SuperOperator sandwich(const Mat& f, const Mat& g) {
  if (f.rows() != f.cols() || g.rows() != g.cols() || f.rows() != g.rows())
    throw DimensionMismatch("sandwich factors must be square of equal dim");
  // Row-major vec turns X |-> FXG into kron(F, G^T).
  return SuperOperator(static_cast<int>(f.rows()), kron(f, g.transpose()));
}

Cplx inner_hat(const SuperOperator& a, const SuperOperator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("superoperator dims differ");
  const double n2 = static_cast<double>(a.dim()) * a.dim();
  return (a.matrix().adjoint() * b.matrix()).trace() / n2;
}

SuperOperator lindblad_superoperator(const Mat& g,
                                     const std::vector<Mat>& vs) {
  const int n = static_cast<int>(g.rows());
  SuperOperator out =
      sandwich(g.adjoint(), Mat::Identity(n, n)) +
      sandwich(Mat::Identity(n, n), g);
  for (const Mat& v : vs) out = out + sandwich(v.adjoint(), v);
  return out;
}

CharacteristicMatrix characteristic_matrix(const SuperOperator& phi,
                                           const MatrixBasis& basis) {
  if (basis.dim != phi.dim())
    throw DimensionMismatch("basis dim does not match superoperator");
  const int m = basis.size();
  const double n2 = static_cast<double>(m);
  Mat c(m, m);
  for (int a = 0; a < m; ++a) {
    const Mat fa = basis.elements[a].adjoint();
    for (int b = 0; b < m; ++b) {
      const Mat sand = kron(fa, basis.elements[b].transpose());
      c(a, b) = sand.conjugate().cwiseProduct(phi.matrix()).sum() / n2;
    }
  }
  return CharacteristicMatrix{std::move(c), basis};
}

SuperOperator from_characteristic(const CharacteristicMatrix& cm) {
  const int n = cm.basis.dim;
  Mat s = Mat::Zero(n * n, n * n);
  for (int a = 0; a < cm.basis.size(); ++a)
    for (int b = 0; b < cm.basis.size(); ++b)
      s += cm.c(a, b) * kron(cm.basis.elements[a].adjoint(),
                             cm.basis.elements[b].transpose());
  return SuperOperator(n, std::move(s));
}

CharacteristicMatrix change_basis(const CharacteristicMatrix& cm,
                                  const MatrixBasis& target) {
  if (target.dim != cm.basis.dim)
    throw DimensionMismatch("bases have different dims");
  const int m = target.size();
  // target_a = sum_b u_{ab} source_b with u_{ab} = <source_b, target_a>.
  Mat u(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      u(a, b) = hs_inner(cm.basis.elements[b], target.elements[a]) /
                double(target.dim);
  return CharacteristicMatrix{u * cm.c * u.adjoint(), target};
}

bool is_hermitian_map(const SuperOperator& phi, const Tolerances& tol) {
  const CharacteristicMatrix cm =
      characteristic_matrix(phi, canonical_matrix_unit_basis(phi.dim()));
  return operator_norm(cm.c - cm.c.adjoint()) <=
         tol.eq_abs * (1.0 + operator_norm(cm.c));
}

CpResult is_cp(const SuperOperator& phi, const Tolerances& tol) {
  const CharacteristicMatrix cm =
      characteristic_matrix(phi, canonical_matrix_unit_basis(phi.dim()));
  const PsdResult r = is_psd(cm.c, tol);
  return CpResult{r.psd, r.min_eigenvalue};
}

SuperOperator dagger(const SuperOperator& phi) {
  return SuperOperator(phi.dim(), phi.matrix().adjoint());
}

SuperOperator adjoint_m(const SuperOperator& phi, const DensityMatrix& sigma,
                        const Measure& m, const Tolerances& tol) {
  if (!is_hermitian_map(phi, tol))
    throw NotHermitianMap("adjoint_m requires a Hermitian map");
  const int n = phi.dim();
  const SuperOperator mm = SuperOperator::from_apply(
      n, [&](const Mat& a) { return apply_Mm(sigma, m, a); });
  const SuperOperator mm_inv = SuperOperator::from_apply(
      n, [&](const Mat& a) { return apply_Mm_inverse(sigma, m, a); });
  return mm_inv * dagger(phi) * mm;
}

SelfAdjointResult is_selfadjoint_m(const SuperOperator& phi,
                                   const DensityMatrix& sigma,
                                   const Measure& m, const Tolerances& tol) {
  if (!is_hermitian_map(phi, tol))
    throw NotHermitianMap("is_selfadjoint_m requires a Hermitian map");
  const int n = phi.dim();
  const SuperOperator mm = SuperOperator::from_apply(
      n, [&](const Mat& a) { return apply_Mm(sigma, m, a); });
  const Mat lhs = mm.matrix() * phi.matrix();
  const Mat rhs = phi.matrix().adjoint() * mm.matrix();
  const double scale = std::max(operator_norm(lhs), 1e-300);
  SelfAdjointResult out;
  out.residual = operator_norm(lhs - rhs) / scale;

  // Independent route through the coefficient identity of the weighted
  // means: b_{ab} = c_{ab} (lam_{a2}, lam_{b2})_m must satisfy
  // b_{ab} = conj(b_{a'b'}).
  const MatrixBasis eb = matrix_unit_basis(sigma);
  const CharacteristicMatrix cm = characteristic_matrix(phi, eb);
  const RVec& lam = sigma.lambda();
  Mat b(eb.size(), eb.size());
  for (int a = 0; a < eb.size(); ++a)
    for (int bb = 0; bb < eb.size(); ++bb)
      b(a, bb) =
          cm.c(a, bb) * weighted_mean(lam(a % n), lam(bb % n), m);
  double worst = 0.0, bscale = 1e-300;
  for (int a = 0; a < eb.size(); ++a)
    for (int bb = 0; bb < eb.size(); ++bb) {
      bscale = std::max(bscale, std::abs(b(a, bb)));
      worst = std::max(
          worst,
          std::abs(b(a, bb) - std::conj(b(eb.pairing[a], eb.pairing[bb]))));
    }
  out.coefficient_residual = worst / bscale;
  out.selfadjoint = out.residual <= tol.eq_abs;
  return out;
}

UnitalityClass unitality_class(const SuperOperator& phi,
                               const Tolerances& tol) {
  const int n = phi.dim();
  const double t = tol.eq_abs * (1.0 + operator_norm(phi.matrix()));
  const Mat one = phi.apply(Mat::Identity(n, n));
  int direct;  // 0 unital, 1 annihilates, 2 neither
  if (operator_norm(one - Mat::Identity(n, n)) <= t)
    direct = 0;
  else if (operator_norm(one) <= t)
    direct = 1;
  else
    direct = 2;

  // Column-pair sums of the coefficients in a matrix unit basis classify
  // the same way.
  const MatrixBasis eb = canonical_matrix_unit_basis(n);
  const CharacteristicMatrix cm = characteristic_matrix(phi, eb);
  Mat d = Mat::Zero(n, n);
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l)
      for (int j = 1; j <= n; ++j)
        d(k - 1, l - 1) += cm.c(MatrixBasis::flatten(j, k, n),
                                MatrixBasis::flatten(j, l, n));
  int viasums;
  if (operator_norm(d - Mat::Identity(n, n) / double(n)) <= t)
    viasums = 0;
  else if (operator_norm(d) <= t)
    viasums = 1;
  else
    viasums = 2;

  if (direct != viasums)
    throw InternalInconsistency(
        "direct and coefficient unitality classifications disagree");
  switch (direct) {
    case 0:
      return UnitalityClass::unital;
    case 1:
      return UnitalityClass::annihilates_one;
    default:
      return UnitalityClass::neither;
  }
}

Mat reduced_characteristic(const SuperOperator& phi,
                           const DensityMatrix& sigma,
                           const Tolerances& tol) {
  if (!is_hermitian_map(phi, tol))
    throw PreconditionViolated("reduced characteristic needs a Hermitian map");
  const int n = phi.dim();
  const double t = tol.eq_abs * (1.0 + operator_norm(phi.matrix()));
  if (operator_norm(phi.apply(Mat::Identity(n, n))) > t)
    throw PreconditionViolated(
        "reduced characteristic needs a map annihilating the identity");
  const CharacteristicMatrix cm =
      characteristic_matrix(phi, unital_basis(sigma));
  return cm.c.bottomRightCorner(n * n - 1, n * n - 1);
}

bool is_qms_generator(const SuperOperator& l, const DensityMatrix& sigma,
                      const Tolerances& tol) {
  if (!is_hermitian_map(l, tol)) return false;
  const int n = l.dim();
  const double t = tol.eq_abs * (1.0 + operator_norm(l.matrix()));
  if (operator_norm(l.apply(Mat::Identity(n, n))) > t) return false;
  const CharacteristicMatrix cm =
      characteristic_matrix(l, unital_basis(sigma));
  return is_psd(cm.c.bottomRightCorner(n * n - 1, n * n - 1), tol).psd;
}

HsDecomposition decompose_HS(const SuperOperator& phi,
                             const DensityMatrix& sigma,
                             const Tolerances& tol) {
  (void)tol;
  const int n = phi.dim();
  const MatrixBasis fb = unital_basis(sigma);
  const CharacteristicMatrix cm = characteristic_matrix(phi, fb);
  Mat x = 0.5 * cm.c(0, 0) * Mat::Identity(n, n);
  Mat y = x;
  for (int a = 1; a < fb.size(); ++a) {
    x += cm.c(a, 0) * fb.elements[a].adjoint();
    y += cm.c(0, a) * fb.elements[a];
  }
  // Scalar gauge: shift the purely imaginary part of Tr[X] to Y.
  const Cplx eta(0.0, -x.trace().imag() / n);
  x += eta * Mat::Identity(n, n);
  y -= eta * Mat::Identity(n, n);
  const SuperOperator hs = sandwich(x, Mat::Identity(n, n)) +
                           sandwich(Mat::Identity(n, n), y);
  return HsDecomposition{std::move(x), std::move(y), phi - hs};
}

DensityMatrix stationary_state(const SuperOperator& phi,
                               const Tolerances& tol) {
  const int n = phi.dim();
  const UnitalityClass cls = unitality_class(phi, tol);
  if (cls == UnitalityClass::neither)
    throw PreconditionViolated(
        "stationary state needs a unital map or a generator");
  const Cplx target = (cls == UnitalityClass::unital) ? Cplx(1, 0) : Cplx(0, 0);

  Eigen::ComplexEigenSolver<Mat> solver(phi.matrix().adjoint());
  const double window =
      1e-8 * (1.0 + operator_norm(phi.matrix()));
  int hit = -1, count = 0;
  for (int k = 0; k < solver.eigenvalues().size(); ++k) {
    if (std::abs(solver.eigenvalues()(k) - target) <= window) {
      ++count;
      hit = k;
    }
  }
  if (count != 1)
    throw NoUniqueState("fixed-point eigenvalue has multiplicity " +
                        std::to_string(count));
  Mat rho = unvec_rm(solver.eigenvectors().col(hit), n);
  const Cplx tr = rho.trace();
  if (std::abs(tr) <= 1e-10 * operator_norm(rho) * n)
    throw NotFaithful("candidate fixed point is traceless");
  rho /= tr;
  rho = 0.5 * (rho + rho.adjoint());
  const HermEig eig = hermitian_eig(rho, Tolerances{});
  if (eig.eigenvalues.minCoeff() <= tol.psd_rel)
    throw NotFaithful("candidate fixed point is not positive definite");
  return DensityMatrix::make(rho, tol);
}

}  // namespace qdb
