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

#include "qdb/detailed_balance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace qdb {

namespace {

// Pinned numeric contracts shared by the order tests.
constexpr double kRealnessTol = 1e-8;
constexpr double kOrderEigLow = -1e-8;
constexpr double kOrderEigHigh = 1.0 + 1e-8;
// Relative gap for clustering modular exponents.
constexpr double kOmegaGapRel = 1e-8;

std::vector<int> unit_pairing(int n) {
  std::vector<int> p(n * n);
  for (int a = 0; a < n * n; ++a) p[a] = (a % n) * n + a / n;
  return p;
}

// omega_a = log lambda_{a1} - log lambda_{a2} over flattened unit indices.
RVec modular_exponents(const DensityMatrix& sigma) {
  const int n = sigma.dim();
  RVec omega(n * n);
  for (int a = 0; a < n * n; ++a)
    omega(a) = std::log(sigma.lambda()(a / n)) - std::log(sigma.lambda()(a % n));
  return omega;
}

// Complex unitary J on the coordinates `idx` (closed under the pairing)
// with conj(J) = P J; its columns turn real vectors into vectors fixed by
// the antiunitary (Uv)_a = conj(v_{p[a]}).  Fixed coordinates contribute
// e_a; a pair a < p[a] contributes (e_a + e_p)/sqrt2 and i(e_a - e_p)/sqrt2.
Mat fixed_space_embedding(const std::vector<int>& idx,
                          const std::vector<int>& pairing) {
  const int k = static_cast<int>(idx.size());
  std::vector<int> pos(pairing.size(), -1);
  for (int a = 0; a < k; ++a) pos[idx[a]] = a;
  Mat j = Mat::Zero(k, k);
  const double rt = 1.0 / std::sqrt(2.0);
  int col = 0;
  for (int a = 0; a < k; ++a) {
    const int g = idx[a];
    const int pg = pairing[g];
    if (pg == g) {
      j(a, col++) = 1.0;
    } else if (g < pg) {
      const int b = pos[pg];
      j(a, col) = rt;
      j(b, col) = rt;
      ++col;
      j(a, col) = Cplx(0.0, rt);
      j(b, col) = Cplx(0.0, -rt);
      ++col;
    }
  }
  if (col != k)
    throw InternalInconsistency(
        "fixed_space_embedding: index set not closed under the pairing");
  return j;
}

// Only a sign is free for members of the real space; pick the one whose
// largest-magnitude entry points into Re > 0 (Im > 0 on the boundary).
void fix_sign(Mat& v) {
  double best = -1.0;
  Cplx z(0.0, 0.0);
  for (int i = 0; i < v.rows(); ++i)
    for (int j = 0; j < v.cols(); ++j)
      if (std::abs(v(i, j)) > best) {
        best = std::abs(v(i, j));
        z = v(i, j);
      }
  if (best <= 0.0) return;
  if (z.real() < -1e-12 * best ||
      (std::abs(z.real()) <= 1e-12 * best && z.imag() < 0.0))
    v = -v;
}

// Full phase rotation making the largest-magnitude entry real positive.
void fix_phase(Mat& v) {
  double best = -1.0;
  Cplx z(0.0, 0.0);
  for (int i = 0; i < v.rows(); ++i)
    for (int j = 0; j < v.cols(); ++j)
      if (std::abs(v(i, j)) > best) {
        best = std::abs(v(i, j));
        z = v(i, j);
      }
  if (best <= 0.0) return;
  v *= std::conj(z) / best;
}

Cplx extract_coeff(const Mat& direction, const Mat& s) {
  return direction.conjugate().cwiseProduct(s).sum();
}

struct RelationCheck {
  bool ok = true;
  int worst_a = 0;
  int worst_b = 0;
  double worst_ratio = 0.0;
};

// Uniform pairing relation c_{ab} = e^{s w_a + (1-s) w_b} c_{b'a'};
// holding for one s != 1/2 it holds for all of them.
RelationCheck delta_relation(const Mat& c, const RVec& omega,
                             const std::vector<int>& p, double s,
                             double eq_abs) {
  const int n2 = static_cast<int>(c.rows());
  const double cmax = c.cwiseAbs().maxCoeff();
  RelationCheck out;
  for (int a = 0; a < n2; ++a)
    for (int b = 0; b < n2; ++b) {
      const double fac = std::exp(s * omega(a) + (1.0 - s) * omega(b));
      const double defect = std::abs(c(a, b) - fac * c(p[b], p[a]));
      const double budget = eq_abs * (1.0 + fac) * (1.0 + cmax);
      const double ratio = defect / budget;
      if (ratio > out.worst_ratio) {
        out.worst_ratio = ratio;
        out.worst_a = a;
        out.worst_b = b;
      }
    }
  out.ok = out.worst_ratio <= 1.0;
  return out;
}

}  // namespace

BMatrix b_matrix(const SuperOperator& phi, const DensityMatrix& sigma,
                 const Measure& m, const Tolerances& tol) {
  const int n = sigma.dim();
  if (phi.dim() != n)
    throw DimensionMismatch("b_matrix: map and state dimensions differ");
  if (!is_hermitian_map(phi, tol))
    throw NotHermitianMap("b_matrix requires a Hermitian map");
  const MatrixBasis basis = matrix_unit_basis(sigma);
  Mat c = characteristic_matrix(phi, basis).c;
  c = (c + c.adjoint()) / 2.0;
  const int n2 = n * n;
  Mat b(n2, n2);
  for (int a = 0; a < n2; ++a)
    for (int bb = 0; bb < n2; ++bb)
      b(a, bb) = c(a, bb) * weighted_mean(sigma.lambda()(a % n),
                                          sigma.lambda()(bb % n), m);
  const std::vector<int> p =
      basis.has_pairing() ? basis.pairing : unit_pairing(n);
  double frob2 = 0.0;
  for (int a = 0; a < n2; ++a)
    for (int bb = 0; bb < n2; ++bb)
      frob2 += std::norm(b(a, bb) - std::conj(b(p[a], p[bb])));
  return BMatrix{std::move(b), sigma, m, std::sqrt(frob2)};
}

KmsMembership kms_space_member(const Mat& v, const DensityMatrix& sigma,
                               const Tolerances& tol) {
  const int n = sigma.dim();
  if (v.rows() != n || v.cols() != n)
    throw ShapeMismatch("kms_space_member: operator shape");
  const double residual = (modular_power(sigma, -0.5, v) - v.adjoint()).norm();
  const double kappa =
      sigma.lambda().maxCoeff() / sigma.lambda().minCoeff();
  const double scale = (1.0 + std::sqrt(kappa)) * (1.0 + v.norm());
  return KmsMembership{residual <= tol.eq_abs * scale, residual};
}

KmsSpaceBasis kms_space_basis(const DensityMatrix& sigma) {
  const int n = sigma.dim();
  const MatrixBasis basis = matrix_unit_basis(sigma);
  std::vector<Mat> g(n * n);
  RVec omega = modular_exponents(sigma);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const int a = MatrixBasis::flatten(i, j, n);
      if (i == j) {
        g[a] = basis.elements[a];
        continue;
      }
      const int ap = MatrixBasis::flatten(j, i, n);
      const double w = omega(a);
      const double c = 1.0 / std::sqrt(2.0 * std::cosh(w / 2.0));
      const Mat combo =
          std::exp(w / 4.0) * basis.elements[a] +
          (i < j ? -1.0 : 1.0) * std::exp(-w / 4.0) * basis.elements[ap];
      // The i < j branch needs the extra 1/i to land in the real space.
      g[a] = (i < j ? Cplx(0.0, -1.0) * c : Cplx(c, 0.0)) * combo;
    }
  return KmsSpaceBasis{sigma, std::move(g), std::move(omega)};
}

void KmsSpaceBasis::validate(const Tolerances& tol) const {
  const int n2 = sigma.dim() * sigma.dim();
  if (static_cast<int>(g.size()) != n2 || omega.size() != n2)
    throw ShapeMismatch("KmsSpaceBasis: wrong element count");
  for (int a = 0; a < n2; ++a) {
    const KmsMembership m = kms_space_member(g[a], sigma, tol);
    if (!m.member) {
      std::ostringstream msg;
      msg << "KmsSpaceBasis: element " << a
          << " leaves the real space, residual " << m.residual;
      throw NotKmsSelfAdjoint(msg.str());
    }
  }
  RMat gram(n2, n2);
  for (int a = 0; a < n2; ++a)
    for (int b = 0; b < n2; ++b)
      gram(a, b) = std::real(inner_h(g[a], g[b]));
  const double defect = (gram - RMat::Identity(n2, n2)).norm();
  if (defect > tol.eq_abs * n2) {
    std::ostringstream msg;
    msg << "KmsSpaceBasis: real Gram defect " << defect;
    throw InternalInconsistency(msg.str());
  }
}

std::vector<KmsExtremalTerm> kms_extremal_decomposition(
    const SuperOperator& phi, const DensityMatrix& sigma,
    const Tolerances& tol) {
  const CpResult cp = is_cp(phi, tol);
  if (!cp.cp) {
    std::ostringstream msg;
    msg << "kms_extremal_decomposition: map is not CP, min Choi eigenvalue "
        << cp.min_eigenvalue;
    throw NotCP(msg.str());
  }
  const SelfAdjointResult sa =
      is_selfadjoint_m(phi, sigma, Measure::kms(), tol);
  if (!sa.selfadjoint) {
    std::ostringstream msg;
    msg << "kms_extremal_decomposition: not KMS self-adjoint, residual "
        << sa.residual;
    throw NotKmsSelfAdjoint(msg.str());
  }
  const int n = sigma.dim();
  const int n2 = n * n;
  const BMatrix bm = b_matrix(phi, sigma, Measure::kms(), tol);
  std::vector<int> all(n2);
  std::iota(all.begin(), all.end(), 0);
  const Mat j = fixed_space_embedding(all, unit_pairing(n));
  const Mat mc = j.adjoint() * bm.b * j;
  const RMat mr = ((mc + mc.adjoint()) / 2.0).real();
  Eigen::SelfAdjointEigenSolver<RMat> es(mr);
  const MatrixBasis basis = matrix_unit_basis(sigma);
  const double wmax = std::max(es.eigenvalues()(n2 - 1), 0.0);
  std::vector<KmsExtremalTerm> terms;
  for (int r = n2 - 1; r >= 0; --r) {
    const double w = es.eigenvalues()(r);
    if (w <= 0.0 || w <= tol.rank_rel * wmax) continue;
    const Vec u = j * es.eigenvectors().col(r);
    Mat v = Mat::Zero(n, n);
    for (int a = 0; a < n2; ++a)
      v += std::conj(u(a)) / std::sqrt(sigma.lambda()(a % n)) *
           basis.elements[a];
    const double nrm = v.norm();
    if (nrm <= 0.0) continue;
    v /= nrm;
    fix_sign(v);
    terms.push_back(KmsExtremalTerm{w * nrm * nrm, std::move(v)});
  }
  return terms;
}

KmsRnResult kms_rn_test(const KrausRep& phi, const SuperOperator& psi,
                        const Tolerances& tol) {
  if (!phi.minimal)
    throw NotMinimal("kms_rn_test requires a minimal representation");
  phi.validate(tol);
  if (phi.dim != psi.dim())
    throw DimensionMismatch("kms_rn_test: dimensions differ");
  const CpResult cp = is_cp(psi, tol);
  if (!cp.cp) {
    std::ostringstream msg;
    msg << "kms_rn_test: psi is not CP, min Choi eigenvalue "
        << cp.min_eigenvalue;
    throw NotCP(msg.str());
  }
  const int m = phi.size();
  KmsRnResult out;
  if (m == 0) {
    out.dominated = psi.matrix().norm() <= tol.eq_abs;
    out.t = RMat::Zero(0, 0);
    return out;
  }
  const GramSchmidtResult gs = gram_schmidt_hs(phi.operators, tol);
  Mat r(m, m);
  Mat rec = Mat::Zero(psi.matrix().rows(), psi.matrix().cols());
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) {
      const Mat mkl = kron(gs.ortho[k].adjoint(), gs.ortho[l].transpose());
      const Cplx coeff = extract_coeff(mkl, psi.matrix());
      r(k, l) = coeff;
      rec += coeff * mkl;
    }
  out.span_residual = (psi.matrix() - rec).norm();
  if (out.span_residual > tol.eq_abs * (1.0 + psi.matrix().norm()))
    return out;
  const Mat linv =
      gs.lower.triangularView<Eigen::Lower>().solve(Mat::Identity(m, m));
  Mat t = linv.adjoint() * r * linv;
  t = (t + t.adjoint()) / 2.0;
  out.imag_residual = t.imag().norm();
  if (out.imag_residual > kRealnessTol) {
    std::ostringstream msg;
    msg << "kms_rn_test: derivative has imaginary norm " << out.imag_residual;
    throw RealnessViolated(msg.str());
  }
  out.t = t.real();
  Eigen::SelfAdjointEigenSolver<RMat> es(out.t);
  out.t_min = es.eigenvalues()(0);
  out.t_max = es.eigenvalues()(m - 1);
  out.dominated = out.t_min >= kOrderEigLow && out.t_max <= kOrderEigHigh;
  return out;
}

bool kms_unital_extremal(const KrausRep& phi,
                         const std::optional<DensityMatrix>& sigma,
                         const Tolerances& tol) {
  if (!phi.minimal)
    throw NotMinimal("kms_unital_extremal requires a minimal representation");
  phi.validate(tol);
  if (!phi.is_unital(tol))
    throw NotUnital("kms_unital_extremal requires a unital map");
  if (sigma) {
    for (int j = 0; j < phi.size(); ++j) {
      const KmsMembership m = kms_space_member(phi.operators[j], *sigma, tol);
      if (!m.member) {
        std::ostringstream msg;
        msg << "kms_unital_extremal: operator " << j
            << " leaves the real space, residual " << m.residual;
        throw NotKmsSelfAdjoint(msg.str());
      }
    }
  }
  const int m = phi.size();
  std::vector<Mat> xs;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      xs.push_back(phi.operators[i].adjoint() * phi.operators[j] +
                   phi.operators[j].adjoint() * phi.operators[i]);
  const int count = static_cast<int>(xs.size());
  RMat gram(count, count);
  for (int a = 0; a < count; ++a)
    for (int b = 0; b < count; ++b)
      gram(a, b) = std::real(hs_inner(xs[a], xs[b]));
  Eigen::SelfAdjointEigenSolver<RMat> es(gram);
  const double gmax = es.eigenvalues()(count - 1);
  if (gmax <= 0.0) return false;
  int rank = 0;
  for (int a = 0; a < count; ++a)
    if (es.eigenvalues()(a) > tol.rank_rel * gmax) ++rank;
  return rank == count;
}

SuperOperator CanonicalDeltaS::to_superoperator() const {
  SuperOperator sum = SuperOperator::zero(dim);
  for (const DeltaSFamily& fam : families) {
    if (fam.mu == 1.0) {
      for (const Mat& w : fam.v) sum = sum + sandwich(w, w);
    } else {
      const double rt = std::sqrt(fam.mu);
      for (const Mat& v : fam.v)
        sum = sum + rt * sandwich(v.adjoint(), v) +
              (1.0 / rt) * sandwich(v, v.adjoint());
    }
  }
  return sum;
}

KrausRep CanonicalDeltaS::to_kraus() const {
  std::vector<Mat> ops;
  for (const DeltaSFamily& fam : families) {
    if (fam.mu == 1.0) {
      for (const Mat& w : fam.v) ops.push_back(w);
    } else {
      const double q = std::pow(fam.mu, 0.25);
      for (const Mat& v : fam.v) {
        ops.push_back(q * v);
        ops.push_back((1.0 / q) * v.adjoint());
      }
    }
  }
  return KrausRep{dim, std::move(ops), true};
}

CanonicalDeltaS delta_s_structure(const SuperOperator& phi,
                                  const DensityMatrix& sigma, double s,
                                  const Tolerances& tol) {
  const int n = sigma.dim();
  const int n2 = n * n;
  if (phi.dim() != n)
    throw DimensionMismatch("delta_s_structure: map and state dimensions");
  if (std::abs(s - 0.5) < 1e-9)
    throw PreconditionViolated(
        "delta_s_structure: s = 1/2 does not separate blocks; use the kms "
        "operations instead");
  if (!is_hermitian_map(phi, tol))
    throw NotHermitianMap("delta_s_structure requires a Hermitian map");
  const CpResult cp = is_cp(phi, tol);
  if (!cp.cp) {
    std::ostringstream msg;
    msg << "delta_s_structure: map is not CP, min Choi eigenvalue "
        << cp.min_eigenvalue;
    throw NotCP(msg.str());
  }
  const MatrixBasis basis = matrix_unit_basis(sigma);
  Mat c = characteristic_matrix(phi, basis).c;
  c = (c + c.adjoint()) / 2.0;
  const RVec omega = modular_exponents(sigma);
  const std::vector<int> p =
      basis.has_pairing() ? basis.pairing : unit_pairing(n);

  // The verdict is computed at s = 0 and must agree with the relation at
  // a second value; the two are equivalent for exact coefficients.
  const RelationCheck primary = delta_relation(c, omega, p, 0.0, tol.eq_abs);
  const double s_other = std::abs(s) < 1e-12 ? 0.37 : s;
  const RelationCheck cross =
      delta_relation(c, omega, p, s_other, tol.eq_abs);
  if (primary.ok != cross.ok)
    throw InternalInconsistency(
        "delta_s_structure: verdicts at two values of s disagree");
  if (!primary.ok) {
    const int a = primary.worst_a;
    const int b = primary.worst_b;
    std::ostringstream msg;
    msg << "delta_s_structure: pairing relation violated at ((" << a / n + 1
        << "," << a % n + 1 << "),(" << b / n + 1 << "," << b % n + 1
        << ")), relative defect " << primary.worst_ratio;
    throw NotDeltaSSelfAdjoint(msg.str());
  }

  // Cluster the modular exponents.
  std::vector<int> order(n2);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&omega](int a, int b) { return omega(a) < omega(b); });
  const double gap = kOmegaGapRel * (1.0 + omega.cwiseAbs().maxCoeff());
  std::vector<std::vector<int>> clusters;
  std::vector<double> reps;
  for (int idx : order) {
    if (clusters.empty() || omega(idx) - omega(clusters.back().back()) > gap) {
      clusters.push_back({idx});
    } else {
      clusters.back().push_back(idx);
    }
  }
  for (auto& cl : clusters) {
    double mean = 0.0;
    for (int idx : cl) mean += omega(idx);
    reps.push_back(mean / static_cast<double>(cl.size()));
    std::sort(cl.begin(), cl.end());
  }

  CanonicalDeltaS out;
  out.dim = n;
  out.pairing = p;
  for (size_t ci = 0; ci < clusters.size(); ++ci) {
    const std::vector<int>& members = clusters[ci];
    const double rep = reps[ci];
    const int k = static_cast<int>(members.size());
    if (std::abs(rep) <= gap) {
      // mu = 1 block: diagonalize over the U-fixed real subspace so the
      // extracted operators come out self-adjoint.
      Mat c0(k, k);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) c0(a, b) = c(members[a], members[b]);
      const Mat j = fixed_space_embedding(members, p);
      const Mat mc = j.adjoint() * c0 * j;
      const RMat mr = ((mc + mc.adjoint()) / 2.0).real();
      Eigen::SelfAdjointEigenSolver<RMat> es(mr);
      const double tmax = std::max(es.eigenvalues()(k - 1), 0.0);
      DeltaSFamily fam{1.0, 0.0, {}};
      for (int r = k - 1; r >= 0; --r) {
        const double t = es.eigenvalues()(r);
        if (t <= 0.0 || t <= tol.rank_rel * tmax) continue;
        const Vec u = j * es.eigenvectors().col(r);
        Mat w = Mat::Zero(n, n);
        for (int a = 0; a < k; ++a)
          w += std::conj(u(a)) * basis.elements[members[a]];
        w *= std::sqrt(t);
        fix_sign(w);
        fam.v.push_back(std::move(w));
      }
      if (!fam.v.empty()) {
        out.mu_one_selfadjoint = true;
        out.families.push_back(std::move(fam));
      }
    } else if (rep > gap) {
      Mat cmu(k, k);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) cmu(a, b) = c(members[a], members[b]);
      const HermEig eig = hermitian_eig((cmu + cmu.adjoint()) / 2.0, tol);
      const double tmax = std::max(eig.eigenvalues(0), 0.0);
      const double mu = std::exp(rep);
      DeltaSFamily fam{mu, rep, {}};
      for (int r = 0; r < k; ++r) {
        const double t = eig.eigenvalues(r);
        if (t <= 0.0 || t <= tol.rank_rel * tmax) continue;
        Mat v = Mat::Zero(n, n);
        for (int a = 0; a < k; ++a)
          v += std::conj(eig.eigenvectors(a, r)) * basis.elements[members[a]];
        v *= std::sqrt(t) * std::pow(mu, -0.25);
        fix_phase(v);
        fam.v.push_back(std::move(v));
      }
      if (!fam.v.empty()) out.families.push_back(std::move(fam));
    }
    // Negative clusters are restored from their mirror families.
  }
  std::sort(out.families.begin(), out.families.end(),
            [](const DeltaSFamily& a, const DeltaSFamily& b) {
              return a.mu < b.mu;
            });
  out.reconstruction_residual =
      (out.to_superoperator().matrix() - phi.matrix()).norm();
  return out;
}

DeltaSOrderResult delta_s_order_test(const CanonicalDeltaS& phi,
                                     const SuperOperator& psi,
                                     const DensityMatrix& sigma, double s,
                                     const Tolerances& tol) {
  const int n = phi.dim;
  if (psi.dim() != n || sigma.dim() != n)
    throw DimensionMismatch("delta_s_order_test: dimensions differ");
  if (std::abs(s - 0.5) < 1e-9)
    throw PreconditionViolated("delta_s_order_test: s = 1/2 not admissible");
  if (!is_hermitian_map(psi, tol))
    throw NotHermitianMap("delta_s_order_test requires a Hermitian map");
  const CpResult cp = is_cp(psi, tol);
  if (!cp.cp) {
    std::ostringstream msg;
    msg << "delta_s_order_test: psi is not CP, min Choi eigenvalue "
        << cp.min_eigenvalue;
    throw NotCP(msg.str());
  }
  DeltaSOrderResult out;
  std::vector<Mat> ts;
  double mu_one_imag = 0.0;
  SuperOperator rec = SuperOperator::zero(n);
  for (const DeltaSFamily& fam : phi.families) {
    const int m = static_cast<int>(fam.v.size());
    const GramSchmidtResult gs = gram_schmidt_hs(fam.v, tol);
    const Mat linv =
        gs.lower.triangularView<Eigen::Lower>().solve(Mat::Identity(m, m));
    Mat t;
    if (fam.mu == 1.0) {
      Mat r(m, m);
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          const Mat mkl = kron(gs.ortho[k], gs.ortho[l].transpose());
          r(k, l) = extract_coeff(mkl, psi.matrix());
        }
      t = linv.adjoint() * r * linv;
      t = (t + t.adjoint()) / 2.0;
      mu_one_imag = t.imag().norm();
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          rec = rec + t(k, l) * sandwich(fam.v[k], fam.v[l]);
    } else {
      const double rt = std::sqrt(fam.mu);
      Mat rp(m, m), rq(m, m);
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          const Mat pkl =
              kron(gs.ortho[k].adjoint(), gs.ortho[l].transpose());
          const Mat qkl = kron(gs.ortho[l], gs.ortho[k].conjugate());
          rp(k, l) = extract_coeff(pkl, psi.matrix());
          rq(k, l) = extract_coeff(qkl, psi.matrix());
        }
      // In the family form the two one-sided coefficient matrices are the
      // same matrix scaled by mu^{1/2} and mu^{-1/2}; average them.
      const Mat rhat = (rp / rt + rq * rt) / 2.0;
      t = linv.adjoint() * rhat * linv;
      t = (t + t.adjoint()) / 2.0;
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          rec = rec + t(k, l) * rt * sandwich(fam.v[k].adjoint(), fam.v[l]) +
                t(k, l) / rt * sandwich(fam.v[l], fam.v[k].adjoint());
    }
    ts.push_back(std::move(t));
  }
  out.span_residual = (psi.matrix() - rec.matrix()).norm();
  if (out.span_residual > tol.eq_abs * (1.0 + psi.matrix().norm()))
    return out;
  if (mu_one_imag > kRealnessTol) {
    std::ostringstream msg;
    msg << "delta_s_order_test: derivative on the mu = 1 family has "
        << "imaginary norm " << mu_one_imag;
    throw RealnessViolated(msg.str());
  }
  out.t = std::move(ts);
  double tmin = 0.0, tmax = 0.0;
  bool first = true;
  for (const Mat& t : out.t) {
    if (t.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Mat> es(t);
    const double lo = es.eigenvalues()(0);
    const double hi = es.eigenvalues()(t.rows() - 1);
    tmin = first ? lo : std::min(tmin, lo);
    tmax = first ? hi : std::max(tmax, hi);
    first = false;
  }
  out.t_min = tmin;
  out.t_max = tmax;
  out.dominated = tmin >= kOrderEigLow && tmax <= kOrderEigHigh;
  return out;
}

bool delta_s_unital_extremal(const CanonicalDeltaS& phi,
                             const Tolerances& tol) {
  if (phi.families.empty())
    throw NotUnital("delta_s_unital_extremal: empty canonical form");
  if (unitality_class(phi.to_superoperator(), tol) != UnitalityClass::unital)
    throw NotUnital("delta_s_unital_extremal requires a unital map");
  std::vector<Mat> xs;
  for (const DeltaSFamily& fam : phi.families) {
    const int m = static_cast<int>(fam.v.size());
    if (fam.mu == 1.0) {
      // The symmetrized products repeat across k <-> l, so only k <= l
      // contribute distinct elements; they are self-adjoint, making real
      // and complex independence agree.
      for (int k = 0; k < m; ++k)
        for (int l = k; l < m; ++l)
          xs.push_back(fam.v[k] * fam.v[l] + fam.v[l] * fam.v[k]);
    } else {
      const double rt = std::sqrt(fam.mu);
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          xs.push_back(rt * fam.v[k].adjoint() * fam.v[l] +
                       (1.0 / rt) * fam.v[l] * fam.v[k].adjoint());
    }
  }
  return numerical_rank(xs, tol) == static_cast<int>(xs.size());
}

std::vector<Measure> default_universality_family() {
  return {Measure::gns(),        Measure::delta(0.25), Measure::kms(),
          Measure::delta(0.75),  Measure::delta(1.0),  Measure::bkm(),
          Measure::ms(0.2)};
}

bool gns_universal_check(const SuperOperator& phi, const DensityMatrix& sigma,
                         const std::vector<Measure>& sample_measures,
                         const Tolerances& tol) {
  if (!is_selfadjoint_m(phi, sigma, Measure::gns(), tol).selfadjoint)
    return false;
  for (const Measure& m : sample_measures)
    if (!is_selfadjoint_m(phi, sigma, m, tol).selfadjoint) return false;
  return true;
}

bool gns_universal_check(const SuperOperator& phi, const DensityMatrix& sigma,
                         const Tolerances& tol) {
  return gns_universal_check(phi, sigma, default_universality_family(), tol);
}

}  // namespace qdb
