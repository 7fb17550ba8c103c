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

#include "qdb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qdb {

namespace {

// Multiplies a column by a unit phase so its first entry of significant
// magnitude becomes real positive. Leaves numerically-zero columns alone.
void phase_fix_column(Mat& u, int col) {
  const int n = static_cast<int>(u.rows());
  const double scale = u.col(col).cwiseAbs().maxCoeff();
  if (scale <= 0.0) return;
  for (int i = 0; i < n; ++i) {
    const Cplx v = u(i, col);
    if (std::abs(v) > 1e-12 * scale) {
      u.col(col) *= std::conj(v) / std::abs(v);
      return;
    }
  }
}

// Lexicographic comparison of columns by (real, imag) entry pairs.
bool column_less(const Mat& u, int a, int b) {
  for (int i = 0; i < u.rows(); ++i) {
    const Cplx x = u(i, a), y = u(i, b);
    if (x.real() != y.real()) return x.real() < y.real();
    if (x.imag() != y.imag()) return x.imag() < y.imag();
  }
  return false;
}

}  // namespace

double operator_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

bool approx_equal(const Mat& a, const Mat& b, const Tolerances& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return operator_norm(a - b) <= tol.eq_abs * (1.0 + operator_norm(a));
}

bool is_hermitian_matrix(const Mat& a, const Tolerances& tol) {
  if (a.rows() != a.cols()) return false;
  return operator_norm(a - a.adjoint()) <= tol.eq_abs * (1.0 + operator_norm(a));
}

HermEig hermitian_eig(const Mat& a, const Tolerances& tol) {
  if (a.rows() != a.cols()) throw NotHermitian("hermitian_eig: matrix not square");
  if (!is_hermitian_matrix(a, tol))
    throw NotHermitian("hermitian_eig: matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Mat> solver((a + a.adjoint()) / 2.0);
  if (solver.info() != Eigen::Success)
    throw Error("hermitian_eig: eigensolver failed to converge");

  const int n = static_cast<int>(a.rows());
  RVec ev = solver.eigenvalues();
  Mat u = solver.eigenvectors();
  for (int j = 0; j < n; ++j) phase_fix_column(u, j);

  // Descending order; near-ties resolved lexicographically on the columns.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) { return ev(i) > ev(j); });
  const double tie = 1e-12 * (1.0 + std::max(std::abs(ev(idx.front())),
                                             std::abs(ev(idx.back()))));
  int lo = 0;
  while (lo < n) {
    int hi = lo + 1;
    while (hi < n && std::abs(ev(idx[hi]) - ev(idx[lo])) <= tie) ++hi;
    std::sort(idx.begin() + lo, idx.begin() + hi,
              [&](int i, int j) { return column_less(u, i, j); });
    lo = hi;
  }

  HermEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues(j) = ev(idx[j]);
    out.eigenvectors.col(j) = u.col(idx[j]);
  }
  return out;
}

PsdResult is_psd(const Mat& a, const Tolerances& tol) {
  const HermEig eig = hermitian_eig(a, tol);
  PsdResult r;
  const int n = static_cast<int>(eig.eigenvalues.size());
  const double min_ev = eig.eigenvalues(n - 1);
  const double max_ev = eig.eigenvalues(0);
  r.min_eigenvalue = min_ev;
  r.psd = min_ev >= -tol.psd_rel * std::max(1.0, max_ev);
  return r;
}

Cplx hs_inner(const Mat& a, const Mat& b) { return (a.adjoint() * b).trace(); }

int numerical_rank(const std::vector<Mat>& vectors, const Tolerances& tol) {
  if (vectors.empty()) throw ShapeMismatch("numerical_rank: empty input");
  const auto rows = vectors.front().rows();
  const auto cols = vectors.front().cols();
  const int m = static_cast<int>(vectors.size());
  for (const Mat& v : vectors)
    if (v.rows() != rows || v.cols() != cols)
      throw ShapeMismatch("numerical_rank: inconsistent shapes");
  Mat gram(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) gram(i, j) = hs_inner(vectors[i], vectors[j]);
  Eigen::JacobiSVD<Mat> svd(gram);
  const RVec sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  const double floor_val = tol.rank_rel * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > floor_val) ++rank;
  return rank;
}

Mat takagi_symmetric_unitary(const Mat& s, const Tolerances& tol) {
  const int n = static_cast<int>(s.rows());
  if (s.rows() != s.cols())
    throw NotSymmetricUnitary("takagi: matrix not square");
  const double norm = operator_norm(s);
  if (operator_norm(s - s.transpose()) > tol.eq_abs * (1.0 + norm) * 100.0)
    throw NotSymmetricUnitary("takagi: matrix is not symmetric");
  if (operator_norm(s * s.adjoint() - Mat::Identity(n, n)) >
      tol.eq_abs * (1.0 + norm) * 100.0)
    throw NotSymmetricUnitary("takagi: matrix is not unitary");

  // S = X + iY with X, Y real symmetric; unitarity of a symmetric S is
  // equivalent to X^2 + Y^2 = I and [X, Y] = 0, so X and Y diagonalize
  // simultaneously over a real orthogonal basis.
  const Mat sym = (s + s.transpose()) / 2.0;
  RMat x = sym.real();
  RMat y = sym.imag();
  x = (x + x.transpose()) / 2.0;
  y = (y + y.transpose()) / 2.0;

  Eigen::SelfAdjointEigenSolver<RMat> xsolver(x);
  const RVec xev = xsolver.eigenvalues();
  RMat q = xsolver.eigenvectors();

  // Within each eigenvalue cluster of X, diagonalize the restriction of Y.
  int lo = 0;
  const double gap = 1e-8 * (1.0 + xev.cwiseAbs().maxCoeff());
  while (lo < n) {
    int hi = lo + 1;
    while (hi < n && std::abs(xev(hi) - xev(lo)) <= gap) ++hi;
    const int w = hi - lo;
    if (w > 1) {
      const RMat block = q.middleCols(lo, w).transpose() * y * q.middleCols(lo, w);
      Eigen::SelfAdjointEigenSolver<RMat> ysolver((block + block.transpose()) / 2.0);
      q.middleCols(lo, w) = q.middleCols(lo, w) * ysolver.eigenvectors();
    }
    lo = hi;
  }

  Vec half_phase(n);
  for (int j = 0; j < n; ++j) {
    const double dx = q.col(j).dot(x * q.col(j));
    const double dy = q.col(j).dot(y * q.col(j));
    const double theta = std::atan2(dy, dx);
    half_phase(j) = std::exp(Cplx(0.0, theta / 2.0));
  }
  Mat a = q.cast<Cplx>() * half_phase.asDiagonal();
  if (operator_norm(s - a * a.transpose()) > 1e-8)
    throw NotSymmetricUnitary("takagi: residual exceeded 1e-8");
  return a;
}

GramSchmidtResult gram_schmidt_hs(const std::vector<Mat>& vectors,
                                  const Tolerances& tol) {
  const int m = static_cast<int>(vectors.size());
  if (m == 0) throw ShapeMismatch("gram_schmidt_hs: empty input");
  GramSchmidtResult out;
  out.lower = Mat::Zero(m, m);
  out.ortho.reserve(m);
  double scale = 0.0;
  for (const Mat& v : vectors) scale = std::max(scale, v.norm());
  for (int i = 0; i < m; ++i) {
    Mat r = vectors[i];
    for (int j = 0; j < i; ++j) {
      const Cplx c = hs_inner(out.ortho[j], vectors[i]);
      out.lower(i, j) = c;
      r -= c * out.ortho[j];
    }
    const double nrm = r.norm();
    if (nrm <= tol.rank_rel * (1.0 + scale))
      throw Error("gram_schmidt_hs: input not linearly independent");
    out.lower(i, i) = nrm;
    out.ortho.push_back(r / nrm);
  }
  return out;
}

}  // namespace qdb
