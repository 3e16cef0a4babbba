// Copyright 2026 The floquet-dpt Authors
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

#include "floquet/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "floquet/errors.hpp"
#include "floquet/kernels.hpp"
#include "floquet/log.hpp"

namespace floquet {
namespace {

using Index = Eigen::Index;

double vnorm(std::span<const Complex> v) {
  return std::sqrt(kernels::active().sqnorm(v.size(), v.data()));
}

CVector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  CVector v(n);
  for (auto& z : v) {
    const double re = dist(rng);
    const double im = dist(rng);
    z = {re, im};
  }
  return v;
}

struct Rotation {
  double c;
  Complex s;
};

// Plane rotation with [c s; -conj(s) c] [f; g] = [r; 0].
Rotation make_rotation(Complex f, Complex g) {
  if (g == Complex{}) return {1.0, Complex{}};
  if (f == Complex{}) return {0.0, std::conj(g) / std::abs(g)};
  const double af = std::abs(f);
  const double nrm = std::hypot(af, std::abs(g));
  return {af / nrm, (f / af) * std::conj(g) / nrm};
}

// Exchanges diagonal entries k and k+1 of the upper-triangular T while
// keeping A = Q T Q^H.
void swap_schur(EigenMatrix& t, EigenMatrix& q, Index k) {
  const Index n = t.rows();
  const Complex t11 = t(k, k);
  const Complex t22 = t(k + 1, k + 1);
  const Rotation r = make_rotation(t(k, k + 1), t22 - t11);
  for (Index j = k + 2; j < n; ++j) {
    const Complex x = t(k, j);
    const Complex y = t(k + 1, j);
    t(k, j) = r.c * x + r.s * y;
    t(k + 1, j) = r.c * y - std::conj(r.s) * x;
  }
  for (Index i = 0; i < k; ++i) {
    const Complex x = t(i, k);
    const Complex y = t(i, k + 1);
    t(i, k) = r.c * x + std::conj(r.s) * y;
    t(i, k + 1) = r.c * y - r.s * x;
  }
  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
  for (Index i = 0; i < q.rows(); ++i) {
    const Complex x = q(i, k);
    const Complex y = q(i, k + 1);
    q(i, k) = r.c * x + std::conj(r.s) * y;
    q(i, k + 1) = r.c * y - r.s * x;
  }
}

// Eigenvector of upper-triangular T for diagonal entry i (zero below i).
EigenVector triangular_eigenvector(const EigenMatrix& t, Index i) {
  const Index m = t.rows();
  EigenVector x = EigenVector::Zero(m);
  x(i) = 1.0;
  const Complex lambda = t(i, i);
  const double smin =
      std::max(std::numeric_limits<double>::epsilon() * t.cwiseAbs().maxCoeff(), 1e-300);
  for (Index r = i - 1; r >= 0; --r) {
    Complex s = t(r, i);
    for (Index c = r + 1; c < i; ++c) s += t(r, c) * x(c);
    Complex d = t(r, r) - lambda;
    if (std::abs(d) < smin) d = smin;
    x(r) = -s / d;
  }
  return x;
}

// Two passes of modified Gram-Schmidt of w against the first `cols` columns
// of v; the coefficients are accumulated into h when given.
void orthogonalize(EigenMatrix& v, Index cols, Complex* w, std::size_t n, Complex* h) {
  const auto& kt = kernels::active();
  for (int pass = 0; pass < 2; ++pass) {
    for (Index i = 0; i < cols; ++i) {
      const Complex* vi = v.col(i).data();
      const Complex c = kt.dot(n, vi, w);
      kt.axpy(n, -c, vi, w);
      if (h != nullptr) h[i] += c;
    }
  }
}

}  // namespace

void ArnoldiConfig::validate() const {
  if (m < 2) throw DomainError("ArnoldiConfig: subspace dimension must be >= 2");
  if (k < 1 || k > m) throw DomainError("ArnoldiConfig: need 1 <= k <= m");
  if (!(tol > 0.0)) throw DomainError("ArnoldiConfig: tolerance must be positive");
  if (keep != 0 && (keep < k || keep >= m))
    throw DomainError("ArnoldiConfig: keep must satisfy k <= keep < m");
  if (periods < 1) throw DomainError("ArnoldiConfig: periods must be >= 1");
}

void FloquetJob::validate() const {
  if (!generator) throw DomainError("FloquetJob: no generator");
  if (!(anchor >= 0.0) || !(anchor < generator->period()))
    throw DomainError("FloquetJob: anchor must satisfy 0 <= t' < T");
  integrator.validate();
  arnoldi.validate();
}

ComplexMatrix SymmetrySpec::unitary() const {
  CVector diag(numbers.size());
  for (std::size_t p = 0; p < numbers.size(); ++p)
    diag[p] = std::polar(1.0, -2.0 * std::numbers::pi * numbers[p] / order);
  return ComplexMatrix::diagonal(diag);
}

std::vector<int> SymmetrySpec::labels() const {
  if (order < 2) throw DomainError("SymmetrySpec: order must be >= 2");
  const std::size_t d = numbers.size();
  std::vector<int> out(d * d);
  for (std::size_t q = 0; q < d; ++q)
    for (std::size_t p = 0; p < d; ++p)
      out[p + q * d] = ((numbers[p] - numbers[q]) % order + order) % order;
  return out;
}

CVector SymmetrySpec::superoperator_phases() const {
  const std::vector<int> lab = labels();
  CVector out(lab.size());
  for (std::size_t i = 0; i < lab.size(); ++i)
    out[i] = std::polar(1.0, -2.0 * std::numbers::pi * lab[i] / order);
  return out;
}

std::vector<Complex> FloquetSpectrum::rates() const {
  std::vector<Complex> out;
  out.reserve(eigenvalues.size());
  for (const Complex e : eigenvalues) out.push_back(std::log(e) / period);
  return out;
}

bool eigen_order_less(Complex a, Complex b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  const double ia = std::abs(a.imag());
  const double ib = std::abs(b.imag());
  if (ia != ib) return ia < ib;
  return a.imag() > b.imag();
}

void sort_eigenvalues(std::vector<Complex>& values) {
  std::sort(values.begin(), values.end(), eigen_order_less);
}

KrylovResult krylov_schur(const LinearMap& op, std::size_t n, std::span<const Complex> start,
                          const ArnoldiConfig& cfg) {
  cfg.validate();
  if (n == 0) throw DimensionError("krylov_schur: empty space");
  const std::size_t m = std::min(cfg.m, n);
  const std::size_t k = std::min(cfg.k, m);
  if (k == m && m < n) throw DomainError("krylov_schur: need k < m below the full dimension");
  const std::size_t keep = m == n ? k : std::clamp(cfg.keep == 0 ? k : cfg.keep, k, m - 1);
  const Index mi = static_cast<Index>(m);

  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  EigenMatrix v = EigenMatrix::Zero(static_cast<Index>(n), mi + 1);
  EigenMatrix h = EigenMatrix::Zero(mi + 1, mi);
  {
    CVector x0(start.begin(), start.end());
    if (x0.size() != n) {
      if (!x0.empty()) throw DimensionError("krylov_schur: start vector length mismatch");
      x0 = random_vector(n, rng);
    }
    double nrm = vnorm(x0);
    if (!(nrm > 0.0)) {
      x0 = random_vector(n, rng);
      nrm = vnorm(x0);
    }
    for (std::size_t i = 0; i < n; ++i) v(static_cast<Index>(i), 0) = x0[i] / nrm;
  }

  KrylovResult res;
  CVector w(n);
  std::vector<Complex> hcol(m + 1);
  std::size_t p = 0;
  for (std::size_t restart = 0;; ++restart) {
    for (std::size_t j = p; j < m; ++j) {
      const Index ji = static_cast<Index>(j);
      op(std::span<const Complex>(v.col(ji).data(), n), w);
      ++res.applications;
      const double w0 = vnorm(w);
      std::fill(hcol.begin(), hcol.end(), Complex{});
      orthogonalize(v, ji + 1, w.data(), n, hcol.data());
      for (std::size_t i = 0; i <= j; ++i) h(static_cast<Index>(i), ji) += hcol[i];
      const double beta = vnorm(w);
      if (beta <= 1e-12 * std::max(w0, std::numeric_limits<double>::min())) {
        // Invariant subspace found; continue from a fresh orthogonal direction.
        h(ji + 1, ji) = 0.0;
        CVector r = random_vector(n, rng);
        orthogonalize(v, ji + 1, r.data(), n, nullptr);
        const double rn = vnorm(r);
        for (std::size_t i = 0; i < n; ++i)
          v(static_cast<Index>(i), ji + 1) = rn > 1e-10 ? r[i] / rn : Complex{};
      } else {
        h(ji + 1, ji) = beta;
        for (std::size_t i = 0; i < n; ++i) v(static_cast<Index>(i), ji + 1) = w[i] / beta;
      }
    }

    Eigen::ComplexSchur<EigenMatrix> schur(h.topLeftCorner(mi, mi));
    if (schur.info() != Eigen::Success) throw ConvergenceError("krylov_schur: Schur failed", {});
    EigenMatrix t = schur.matrixT();
    EigenMatrix q = schur.matrixU();
    for (std::size_t pos = 0; pos < keep; ++pos) {
      Index best = static_cast<Index>(pos);
      for (Index i = best + 1; i < mi; ++i)
        if (eigen_order_less(t(i, i), t(best, best))) best = i;
      for (Index i = best; i > static_cast<Index>(pos); --i) swap_schur(t, q, i - 1);
    }
    const Eigen::Matrix<Complex, 1, Eigen::Dynamic> b = h.row(mi) * q;

    std::vector<EigenVector> xs;
    res.ritz_residuals.assign(k, 0.0);
    bool done = true;
    for (std::size_t i = 0; i < k; ++i) {
      EigenVector x = triangular_eigenvector(t, static_cast<Index>(i));
      x /= x.norm();
      res.ritz_residuals[i] = std::abs((b * x)(0));
      if (!(res.ritz_residuals[i] <= cfg.tol)) done = false;
      xs.push_back(std::move(x));
    }
    res.restarts = restart;
    if (done || restart >= cfg.max_restarts || m == n) {
      res.converged = done;
      res.values.clear();
      res.vectors.clear();
      for (std::size_t i = 0; i < k; ++i) {
        const EigenVector y = q * xs[i];
        const EigenVector z = v.leftCols(mi) * y;
        CVector out(z.data(), z.data() + n);
        const double nz = vnorm(out);
        for (auto& c : out) c /= nz;
        res.values.push_back(t(static_cast<Index>(i), static_cast<Index>(i)));
        res.vectors.push_back(std::move(out));
      }
      return res;
    }

    const Index ki = static_cast<Index>(keep);
    const EigenMatrix kept = v.leftCols(mi) * q.leftCols(ki);
    v.leftCols(ki) = kept;
    v.col(ki) = v.col(mi);
    h.setZero();
    h.topLeftCorner(ki, ki) = t.topLeftCorner(ki, ki);
    h.row(ki).head(ki) = b.head(ki);
    p = keep;
  }
}

ComplexMatrix propagate_period(const FloquetJob& job, const ComplexMatrix& rho0) {
  job.validate();
  const auto& gen = *job.generator;
  if (!rho0.is_square() || rho0.rows() != gen.dim())
    throw DimensionError("propagate_period: state dimension mismatch");
  Propagator prop(gen, job.integrator);
  CVector v = vec(rho0);
  prop.advance(v, job.anchor, job.anchor + gen.period());
  return unvec(v, gen.dim(), gen.dim());
}

std::vector<std::vector<std::size_t>> sector_decompose(const SymmetrySpec& spec,
                                                       std::size_t dim) {
  if (spec.order < 2) throw DomainError("sector_decompose: order must be >= 2");
  if (spec.numbers.size() != dim) throw DimensionError("sector_decompose: numbers size mismatch");
  const std::vector<int> lab = spec.labels();
  std::vector<std::vector<std::size_t>> sectors(static_cast<std::size_t>(spec.order));
  for (std::size_t i = 0; i < lab.size(); ++i) sectors[static_cast<std::size_t>(lab[i])].push_back(i);
  return sectors;
}

double symmetry_commutation_error(const TimePeriodicGenerator& gen, const SymmetrySpec& spec,
                                  std::uint64_t seed) {
  if (spec.numbers.size() != gen.dim())
    throw DimensionError("symmetry_commutation_error: numbers size mismatch");
  const CVector phases = spec.superoperator_phases();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (const double frac : {0.0, 0.29, 0.61}) {
    const double t = frac * gen.period();
    const CVector x = random_vector(gen.vec_dim(), rng);
    CVector sx = x;
    for (std::size_t i = 0; i < x.size(); ++i) sx[i] *= phases[i];
    CVector a = gen.action(t, x);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= phases[i];
    const CVector b = gen.action(t, sx);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff += std::norm(a[i] - b[i]);
    worst = std::max(worst, std::sqrt(diff) / std::max(vnorm(a), 1e-300));
  }
  return worst;
}

void fix_eigenmatrix_phase(ComplexMatrix& eta) {
  const Complex tr = eta.trace();
  const double scale = eta.norm_fro();
  Complex phase;
  if (std::abs(tr) > 1e-8 * scale) {
    phase = std::conj(tr) / std::abs(tr);
  } else {
    double best = -1.0;
    Complex pick{1.0, 0.0};
    for (const Complex z : eta.data()) {
      if (std::abs(z) > best * (1.0 + 1e-12)) {
        best = std::abs(z);
        pick = z;
      }
    }
    phase = best > 0.0 ? std::conj(pick) / best : Complex{1.0, 0.0};
  }
  eta *= phase;
}

FloquetSpectrum arnoldi_eigs(const FloquetJob& job, const std::optional<SectorRequest>& sector,
                             std::span<const Complex> start) {
  job.validate();
  const auto& gen = *job.generator;
  const std::size_t d = gen.dim();
  const std::size_t nfull = gen.vec_dim();

  std::vector<std::size_t> idx;
  if (sector) {
    const auto& sym = sector->symmetry;
    if (sector->index < 0 || sector->index >= sym.order)
      throw DomainError("arnoldi_eigs: sector index out of range");
    const double err = symmetry_commutation_error(gen, sym);
    if (err > 1e-9)
      throw DomainError("arnoldi_eigs: generator does not commute with the Z_" +
                        std::to_string(sym.order) + " symmetry (relative error " +
                        std::to_string(err) + ")");
    idx = sector_decompose(sym, d)[static_cast<std::size_t>(sector->index)];
  } else {
    idx.resize(nfull);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
  }
  const std::size_t n = idx.size();
  if (n == 0) throw DimensionError("arnoldi_eigs: empty sector");

  Propagator prop(gen, job.integrator);
  const double t0 = job.anchor;
  const double t1 = job.anchor + gen.period();
  CVector full(nfull);
  LinearMap op = [&](std::span<const Complex> in, std::span<Complex> out) {
    std::fill(full.begin(), full.end(), Complex{});
    for (std::size_t i = 0; i < n; ++i) full[idx[i]] = in[i];
    for (std::size_t p = 0; p < job.arnoldi.periods; ++p) prop.advance(full, t0, t1);
    for (std::size_t i = 0; i < n; ++i) out[i] = full[idx[i]];
  };

  CVector x0(n);
  if (!start.empty()) {
    if (start.size() != nfull) throw DimensionError("arnoldi_eigs: start vector length mismatch");
    for (std::size_t i = 0; i < n; ++i) x0[i] = start[idx[i]];
  } else if (!sector || sector->index == 0) {
    const CVector mixed = vec(ComplexMatrix::identity(d));
    for (std::size_t i = 0; i < n; ++i) x0[i] = mixed[idx[i]];
  } else {
    std::mt19937_64 rng(job.arnoldi.seed);
    x0 = random_vector(n, rng);
  }
  if (!(vnorm(x0) > 0.0)) x0.clear();  // krylov_schur draws a random start

  const KrylovResult kr = krylov_schur(op, n, x0, job.arnoldi);

  FloquetSpectrum spec;
  spec.period = gen.period();
  if (sector) spec.sector = sector->index;
  spec.restarts = kr.restarts;
  spec.applications = kr.applications;
  spec.applications *= job.arnoldi.periods;
  spec.eigenvalues = kr.values;
  for (std::size_t j = 0; j < kr.values.size(); ++j) {
    std::fill(full.begin(), full.end(), Complex{});
    for (std::size_t i = 0; i < n; ++i) full[idx[i]] = kr.vectors[j][i];
    ComplexMatrix eta = unvec(full, d, d);
    eta *= 1.0 / eta.norm_fro();
    fix_eigenmatrix_phase(eta);
    spec.eigenmatrices.push_back(std::move(eta));
  }
  bool ok = kr.converged;
  const bool powered = job.arnoldi.periods > 1;
  if (job.arnoldi.verify_residuals || powered) {
    for (std::size_t j = 0; j < spec.eigenvalues.size(); ++j) {
      const CVector x = vec(spec.eigenmatrices[j]);
      CVector y = x;
      prop.advance(y, t0, t1);
      ++spec.applications;
      if (powered) {
        Complex q{};
        for (std::size_t i = 0; i < x.size(); ++i) q += std::conj(x[i]) * y[i];
        spec.eigenvalues[j] = q;
      }
      double r = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) r += std::norm(y[i] - spec.eigenvalues[j] * x[i]);
      spec.residuals.push_back(std::sqrt(r));
      if (!(spec.residuals.back() <= job.arnoldi.tol)) ok = false;
    }
    if (powered) {
      std::vector<std::size_t> order(spec.eigenvalues.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return eigen_order_less(spec.eigenvalues[a], spec.eigenvalues[b]);
      });
      FloquetSpectrum sorted = spec;
      for (std::size_t j = 0; j < order.size(); ++j) {
        sorted.eigenvalues[j] = spec.eigenvalues[order[j]];
        sorted.eigenmatrices[j] = spec.eigenmatrices[order[j]];
        sorted.residuals[j] = spec.residuals[order[j]];
      }
      spec = std::move(sorted);
    }
  } else {
    spec.residuals = kr.ritz_residuals;
  }
  spec.converged = ok;
  if (!ok) {
    if (kr.converged) {
      double worst = 0.0;
      for (const double r : spec.residuals) worst = std::max(worst, r);
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "arnoldi_eigs: Ritz pairs converged but the explicit residual %.3g exceeds "
                    "tol %.3g; tighten the integrator tolerance or relax tol",
                    worst, job.arnoldi.tol);
      throw ConvergenceError(buf,
                             spec.residuals);
    }
    throw ConvergenceError("arnoldi_eigs: " + std::to_string(spec.eigenvalues.size()) +
                               " requested pairs not converged after " +
                               std::to_string(kr.restarts) + " restarts",
                           spec.residuals);
  }
  return spec;
}

SteadyState steady_state_checked(const FloquetSpectrum& spectrum) {
  if (spectrum.eigenvalues.empty()) throw DomainError("steady_state: empty spectrum");
  const double tol = std::max(1e-6, spectrum.residuals.empty() ? 0.0 : 10.0 * spectrum.residuals[0]);
  if (std::abs(spectrum.eigenvalues[0] - 1.0) > tol)
    throw DomainError("steady_state: leading eigenvalue is not 1");
  if (spectrum.eigenmatrices.size() != spectrum.eigenvalues.size())
    throw DimensionError("steady_state: eigenmatrices missing");
  // A traceless leading eigenmatrix within a degenerate eigenvalue 1
  // (conserved quantity) is replaced by the projection of the identity onto
  // the orthonormalized eigenspace.
  const std::size_t dim = spectrum.eigenmatrices[0].rows();
  const ComplexMatrix& lead = spectrum.eigenmatrices[0];
  const bool traceless = std::abs(lead.trace()) < 1e-8 * lead.norm_fro();
  std::vector<CVector> basis;
  for (std::size_t j = 0; traceless && j < spectrum.eigenvalues.size(); ++j) {
    if (std::abs(spectrum.eigenvalues[j] - 1.0) > tol) continue;
    CVector q = vec(spectrum.eigenmatrices[j]);
    for (int pass = 0; pass < 2; ++pass)
      for (const CVector& b : basis) {
        Complex c{};
        for (std::size_t i = 0; i < q.size(); ++i) c += std::conj(b[i]) * q[i];
        for (std::size_t i = 0; i < q.size(); ++i) q[i] -= c * b[i];
      }
    const double nq = vnorm(q);
    if (nq < 1e-8) continue;
    for (auto& z : q) z /= nq;
    basis.push_back(std::move(q));
  }
  ComplexMatrix eta = spectrum.eigenmatrices[0];
  if (basis.size() > 1) {
    CVector acc(dim * dim);
    for (const CVector& b : basis) {
      Complex c{};
      for (std::size_t i = 0; i < dim; ++i) c += std::conj(b[i + i * dim]);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * b[i];
    }
    eta = unvec(acc, dim, dim);
  }
  const Complex tr = eta.trace();
  if (std::abs(tr) < 1e-8 * eta.norm_fro())
    throw DomainError("steady_state: leading eigenmatrix is traceless; use sector-resolved spectra");
  ComplexMatrix rho = (1.0 / tr) * eta;
  rho = Complex{0.5} * (rho + rho.adjoint());
  const Complex tr2 = rho.trace();
  rho *= 1.0 / tr2.real();
  Eigen::SelfAdjointEigenSolver<EigenMatrix> es(rho.to_eigen(), Eigen::EigenvaluesOnly);
  SteadyState out{std::move(rho), es.eigenvalues().minCoeff()};
  if (out.min_eigenvalue < -1e-3)
    throw DomainError("steady_state: state is not positive (min eigenvalue " +
                      std::to_string(out.min_eigenvalue) + ")");
  if (out.min_eigenvalue < -1e-7)
    warn("steady_state: min eigenvalue " + std::to_string(out.min_eigenvalue));
  return out;
}

ComplexMatrix steady_state(const FloquetSpectrum& spectrum) {
  return steady_state_checked(spectrum).rho;
}

Complex period_average(const FloquetJob& job, const ComplexMatrix& rho_ss, const ComplexMatrix& o,
                       std::size_t k) {
  job.validate();
  const auto& gen = *job.generator;
  const std::size_t d = gen.dim();
  if (!rho_ss.is_square() || rho_ss.rows() != d || !o.is_square() || o.rows() != d)
    throw DimensionError("period_average: dimension mismatch");
  if (k < 1) throw DomainError("period_average: need at least one node");
  const auto& kt = kernels::active();
  // Tr[rho O] = sum conj(x) . vec(rho) with x = conj(vec(O^T)).
  CVector x = vec(o.transpose());
  for (auto& z : x) z = std::conj(z);
  const double floor = 1e-10 * std::max(o.max_abs(), 1e-300);
  const double period = gen.period();
  constexpr std::size_t kMaxNodes = 256;

  Propagator prop(gen, job.integrator);
  std::size_t kk = k;
  while (true) {
    const std::size_t nodes = 2 * kk;
    if (nodes > 2 * kMaxNodes) break;
    CVector v = vec(rho_ss);
    Complex sum_all{};
    Complex sum_even{};
    double t = job.anchor;
    for (std::size_t j = 0; j < nodes; ++j) {
      const double tj = job.anchor + period * static_cast<double>(j) / static_cast<double>(nodes);
      prop.advance(v, t, tj);
      t = tj;
      const Complex val = kt.dot(v.size(), x.data(), v.data());
      sum_all += val;
      if (j % 2 == 0) sum_even += val;
    }
    const Complex fine = sum_all / static_cast<double>(nodes);
    const Complex coarse = sum_even / static_cast<double>(kk);
    if (std::abs(fine - coarse) <= 1e-6 * std::max(std::abs(fine), floor)) return fine;
    kk *= 2;
    if (kk > kMaxNodes) break;
  }
  throw ConvergenceError("period_average: node refinement did not converge up to K = 256", {});
}

double gap(const FloquetSpectrum& spectrum) {
  if (spectrum.eigenvalues.size() < 2) throw DomainError("gap: fewer than two eigenpairs");
  return std::abs(spectrum.eigenvalues[1] - spectrum.eigenvalues[0]);
}

ComplexMatrix dense_oracle(const TimePeriodicGenerator& gen, std::size_t steps, double anchor) {
  if (gen.vec_dim() > 4096) throw DimensionError("dense_oracle: D^2 exceeds 4096");
  if (steps < 1) throw DomainError("dense_oracle: need at least one step");
  const double period = gen.period();
  if (gen.time_independent()) return expm(period * gen.dense(anchor));
  const double dt = period / static_cast<double>(steps);
  EigenMatrix u = EigenMatrix::Identity(static_cast<Index>(gen.vec_dim()),
                                        static_cast<Index>(gen.vec_dim()));
  for (std::size_t s = 0; s < steps; ++s) {
    const double tm = anchor + (static_cast<double>(s) + 0.5) * dt;
    const EigenMatrix step = expm(EigenMatrix(dt * gen.dense(tm).to_eigen()));
    u = step * u;
  }
  return ComplexMatrix::from_eigen(u);
}

double choi_min_eigenvalue(const ComplexMatrix& superop) {
  const std::size_t n = superop.rows();
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (!superop.is_square() || d * d != n)
    throw DimensionError("choi_min_eigenvalue: not a superoperator on square matrices");
  EigenMatrix c(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
          c(static_cast<Index>(i * d + k), static_cast<Index>(j * d + l)) =
              superop(k + l * d, i + j * d);
  const EigenMatrix herm = 0.5 * (c + c.adjoint());
  Eigen::SelfAdjointEigenSolver<EigenMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace floquet
