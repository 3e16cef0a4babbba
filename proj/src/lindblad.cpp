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

#include "floquet/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include "floquet/errors.hpp"
#include "floquet/kernels.hpp"

namespace floquet {
namespace {

constexpr Complex kI{0.0, 1.0};

kernels::CsrView view(const SparseComplexMatrix& m) {
  return {m.rows(), m.cols(), m.row_offsets().data(), m.col_indices().data(),
          m.values().data()};
}

void require_square(const ComplexMatrix& m, std::size_t dim, const char* what) {
  if (!m.is_square() || m.rows() != dim)
    throw DimensionError(std::string(what) + ": expected " + std::to_string(dim) + "x" +
                         std::to_string(dim) + ", got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
}

void require_hermitian(const ComplexMatrix& h, const char* what) {
  const double scale = std::max(1.0, h.max_abs());
  if (h.hermiticity_error() > 1e-10 * scale)
    throw DomainError(std::string(what) + ": Hamiltonian is not Hermitian (error " +
                      std::to_string(h.hermiticity_error()) + ")");
}

// Splits an operator by the boson-number change n_p - n_q of its entries.
std::map<int, ComplexMatrix> split_by_charge(const ComplexMatrix& op,
                                             const std::vector<int>& numbers) {
  std::map<int, ComplexMatrix> pieces;
  for (std::size_t p = 0; p < op.rows(); ++p) {
    for (std::size_t q = 0; q < op.cols(); ++q) {
      if (op(p, q) == Complex{}) continue;
      const int charge = numbers[p] - numbers[q];
      auto [it, inserted] = pieces.try_emplace(charge, op.rows(), op.cols());
      it->second(p, q) = op(p, q);
    }
  }
  return pieces;
}

thread_local CVector g_scratch;

}  // namespace

ComplexMatrix evaluate(const PeriodicHamiltonian& h, double t, double period) {
  if (h.empty()) throw DimensionError("evaluate: empty Hamiltonian");
  const double omega = 2.0 * std::numbers::pi / period;
  ComplexMatrix out(h.front().op.rows(), h.front().op.cols());
  for (const auto& term : h) {
    out += (term.weight * std::polar(1.0, term.harmonic * omega * t)) * term.op;
  }
  return out;
}

TimePeriodicGenerator::TimePeriodicGenerator(std::size_t dim, double period,
                                             std::vector<FactorTerm> terms)
    : dim_(dim), period_(period), terms_(std::move(terms)) {
  if (dim == 0) throw DimensionError("TimePeriodicGenerator: zero dimension");
  if (!(period > 0.0) || !std::isfinite(period))
    throw DomainError("TimePeriodicGenerator: period must be positive and finite");
  omega_ = 2.0 * std::numbers::pi / period;
  for (const auto& term : terms_) {
    if (term.left) require_square(*term.left, dim_, "FactorTerm left");
    if (term.right) require_square(*term.right, dim_, "FactorTerm right");
  }
  compile();
}

TimePeriodicGenerator TimePeriodicGenerator::zero(std::size_t dim, double period) {
  return TimePeriodicGenerator(dim, period, {});
}

void TimePeriodicGenerator::compile() {
  std::map<int, ComplexMatrix> left_only;
  std::map<int, ComplexMatrix> right_only;
  blocks_.clear();
  for (const auto& term : terms_) {
    if (term.weight == Complex{}) continue;
    if (term.left && term.right) {
      blocks_.push_back({Block::Kind::TwoSided, term.harmonic, term.weight,
                         SparseComplexMatrix(*term.left), SparseComplexMatrix(*term.right)});
    } else if (term.left) {
      auto [it, inserted] = left_only.try_emplace(term.harmonic, dim_, dim_);
      it->second += term.weight * *term.left;
    } else if (term.right) {
      // w rho B^dagger summed over terms equals rho (sum conj(w) B)^dagger.
      auto [it, inserted] = right_only.try_emplace(term.harmonic, dim_, dim_);
      it->second += std::conj(term.weight) * *term.right;
    } else {
      // Scalar multiple of the identity superoperator.
      auto [it, inserted] = left_only.try_emplace(term.harmonic, dim_, dim_);
      it->second += term.weight * ComplexMatrix::identity(dim_);
    }
  }
  for (auto& [h, m] : left_only) {
    SparseComplexMatrix s(m);
    if (s.nnz() > 0) blocks_.push_back({Block::Kind::Left, h, 1.0, std::move(s), {}});
  }
  for (auto& [h, m] : right_only) {
    SparseComplexMatrix s(m);
    if (s.nnz() > 0) blocks_.push_back({Block::Kind::Right, h, 1.0, {}, std::move(s)});
  }
}

void TimePeriodicGenerator::apply(double t, std::span<const Complex> v,
                                  std::span<Complex> out) const {
  const std::size_t n = vec_dim();
  if (v.size() != n || out.size() != n)
    throw DimensionError("TimePeriodicGenerator::apply: vector length mismatch");
  const auto& k = kernels::active();
  std::fill(out.begin(), out.end(), Complex{});
  for (const auto& b : blocks_) {
    const Complex c =
        b.harmonic == 0 ? b.weight : b.weight * std::polar(1.0, b.harmonic * omega_ * t);
    switch (b.kind) {
      case Block::Kind::Left:
        k.csr_left(view(b.left), c, v.data(), out.data(), dim_);
        break;
      case Block::Kind::Right:
        k.csr_right_adj(view(b.right), c, v.data(), out.data(), dim_);
        break;
      case Block::Kind::TwoSided:
        g_scratch.assign(n, Complex{});
        k.csr_left(view(b.left), 1.0, v.data(), g_scratch.data(), dim_);
        k.csr_right_adj(view(b.right), c, g_scratch.data(), out.data(), dim_);
        break;
    }
  }
}

CVector TimePeriodicGenerator::action(double t, std::span<const Complex> v) const {
  CVector out(vec_dim());
  apply(t, v, out);
  return out;
}

ComplexMatrix TimePeriodicGenerator::dense(double t) const {
  const std::size_t n = vec_dim();
  ComplexMatrix s(n, n);
  const ComplexMatrix id = ComplexMatrix::identity(dim_);
  for (const auto& term : terms_) {
    const Complex c = term.weight * std::polar(1.0, term.harmonic * omega_ * t);
    const ComplexMatrix& a = term.left ? *term.left : id;
    const ComplexMatrix b = term.right ? term.right->conj() : id;
    s += c * kron(b, a);
  }
  return s;
}

std::vector<int> TimePeriodicGenerator::harmonics() const {
  std::set<int> hs;
  for (const auto& b : blocks_) hs.insert(b.harmonic);
  return {hs.begin(), hs.end()};
}

bool TimePeriodicGenerator::time_independent() const {
  return std::all_of(blocks_.begin(), blocks_.end(),
                     [](const Block& b) { return b.harmonic == 0; });
}

TimePeriodicGenerator TimePeriodicGenerator::fourier_component(int harmonic) const {
  std::vector<FactorTerm> picked;
  for (const auto& term : terms_) {
    if (term.harmonic != harmonic) continue;
    FactorTerm copy = term;
    copy.harmonic = 0;
    picked.push_back(std::move(copy));
  }
  return TimePeriodicGenerator(dim_, period_, std::move(picked));
}

TimePeriodicGenerator TimePeriodicGenerator::in_frame(const FrameRotation& frame) const {
  if (frame.numbers.size() != dim_) throw DimensionError("in_frame: numbers size mismatch");
  if (frame.divisor < 1) throw DomainError("in_frame: divisor must be >= 1");
  const double theta = omega_ / frame.divisor;
  std::vector<FactorTerm> out;
  const std::map<int, ComplexMatrix> identity_piece{{0, ComplexMatrix{}}};
  for (const auto& term : terms_) {
    const auto lp = term.left ? split_by_charge(*term.left, frame.numbers) : identity_piece;
    const auto rp = term.right ? split_by_charge(*term.right, frame.numbers) : identity_piece;
    for (const auto& [a, lop] : lp) {
      for (const auto& [b, rop] : rp) {
        const int shift = a - b;
        if (shift % frame.divisor != 0)
          throw DomainError("in_frame: term acquires a non-integer harmonic");
        FactorTerm piece;
        if (term.left) piece.left = lop;
        if (term.right) piece.right = rop;
        piece.weight = term.weight;
        piece.harmonic = term.harmonic + shift / frame.divisor;
        out.push_back(std::move(piece));
      }
    }
  }
  ComplexMatrix nmat(dim_, dim_);
  for (std::size_t p = 0; p < dim_; ++p) nmat(p, p) = static_cast<double>(frame.numbers[p]);
  out.push_back({nmat, std::nullopt, kI * theta, 0});
  out.push_back({std::nullopt, nmat, -kI * theta, 0});
  return TimePeriodicGenerator(dim_, period_, std::move(out));
}

TimePeriodicGenerator TimePeriodicGenerator::with_integration_frame(
    const FrameRotation& frame) const {
  TimePeriodicGenerator copy = *this;
  copy.frame_gen_ = std::make_shared<const TimePeriodicGenerator>(in_frame(frame));
  copy.frame_ = std::make_shared<const FrameRotation>(frame);
  return copy;
}

CVector TimePeriodicGenerator::frame_phases(double t) const {
  CVector phases(vec_dim(), Complex{1.0, 0.0});
  if (!frame_) return phases;
  const double theta = omega_ / frame_->divisor;
  for (std::size_t q = 0; q < dim_; ++q) {
    for (std::size_t p = 0; p < dim_; ++p) {
      const int d = frame_->numbers[p] - frame_->numbers[q];
      phases[p + q * dim_] = std::polar(1.0, -theta * d * t);
    }
  }
  return phases;
}

ComplexMatrix dissipator_action(const CollapseOp& l, const ComplexMatrix& rho) {
  if (!l.op.is_square() || !rho.is_square() || l.op.rows() != rho.rows())
    throw DimensionError("dissipator_action: shape mismatch");
  const ComplexMatrix ld = l.op.adjoint();
  const ComplexMatrix ldl = ld * l.op;
  ComplexMatrix out = l.op * rho * ld;
  out -= Complex{0.5} * (ldl * rho + rho * ldl);
  return out;
}

std::vector<FactorTerm> lindblad_terms(const ComplexMatrix& h,
                                       const std::vector<CollapseOp>& ls) {
  std::vector<FactorTerm> terms;
  terms.push_back({h, std::nullopt, -kI, 0});
  terms.push_back({std::nullopt, h.adjoint(), kI, 0});
  for (const auto& l : ls) {
    require_square(l.op, h.rows(), "collapse operator");
    const ComplexMatrix ldl = l.op.adjoint() * l.op;
    terms.push_back({l.op, l.op, 1.0, 0});
    terms.push_back({ldl, std::nullopt, -0.5, 0});
    terms.push_back({std::nullopt, ldl, -0.5, 0});
  }
  return terms;
}

ComplexMatrix liouvillian_dense(const ComplexMatrix& h, const std::vector<CollapseOp>& ls) {
  if (!h.is_square()) throw DimensionError("liouvillian_dense: H is not square");
  require_hermitian(h, "liouvillian_dense");
  const std::size_t d = h.rows();
  const ComplexMatrix id = ComplexMatrix::identity(d);
  ComplexMatrix s = -kI * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& l : ls) {
    require_square(l.op, d, "collapse operator");
    const ComplexMatrix ldl = l.op.adjoint() * l.op;
    s += kron(l.op.conj(), l.op);
    s -= Complex{0.5} * kron(id, ldl);
    s -= Complex{0.5} * kron(ldl.transpose(), id);
  }
  return s;
}

TimePeriodicGenerator liouvillian(const ComplexMatrix& h, const std::vector<CollapseOp>& ls,
                                  double period) {
  if (!h.is_square()) throw DimensionError("liouvillian: H is not square");
  require_hermitian(h, "liouvillian");
  return TimePeriodicGenerator(h.rows(), period, lindblad_terms(h, ls));
}

TimePeriodicGenerator time_dependent_liouvillian(const PeriodicHamiltonian& h,
                                                 const std::vector<CollapseOp>& ls,
                                                 double period) {
  if (h.empty()) throw DimensionError("time_dependent_liouvillian: empty Hamiltonian");
  const std::size_t d = h.front().op.rows();
  for (const double frac : {0.0, 0.137, 0.25, 0.5, 0.81}) {
    require_hermitian(evaluate(h, frac * period, period), "time_dependent_liouvillian");
  }
  std::vector<FactorTerm> terms;
  for (const auto& term : h) {
    require_square(term.op, d, "Hamiltonian term");
    terms.push_back({term.op, std::nullopt, -kI * term.weight, term.harmonic});
    // i rho H(t): rho O = rho (O^dagger)^dagger.
    terms.push_back({std::nullopt, term.op.adjoint(), kI * term.weight, term.harmonic});
  }
  for (const auto& l : ls) {
    require_square(l.op, d, "collapse operator");
    const ComplexMatrix ldl = l.op.adjoint() * l.op;
    terms.push_back({l.op, l.op, 1.0, 0});
    terms.push_back({ldl, std::nullopt, -0.5, 0});
    terms.push_back({std::nullopt, ldl, -0.5, 0});
  }
  return TimePeriodicGenerator(d, period, std::move(terms));
}

OhmicBath::OhmicBath(double kappa_, double omega_ref_) : kappa(kappa_), omega_ref(omega_ref_) {
  if (!(kappa > 0.0)) throw DomainError("OhmicBath: kappa must be positive");
  if (!(omega_ref > 0.0)) throw DomainError("OhmicBath: reference frequency must be positive");
}

double OhmicBath::rate(double omega) const {
  if (!(omega > 0.0)) throw DomainError("OhmicBath::rate: frequency must be positive");
  return kappa * omega / omega_ref;
}

ComplexMatrix positive_frequency_part(const DressedSystem& sys, double degeneracy_tol) {
  const std::size_t m = sys.energies.size();
  require_square(sys.coupling, m, "DressedSystem coupling");
  ComplexMatrix x(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j + 1; k < m; ++k) {
      if (sys.energies[k] - sys.energies[j] > degeneracy_tol) x(j, k) = sys.coupling(j, k);
    }
  }
  return x;
}

TimePeriodicGenerator gme_generator(const DressedSystem& sys, const OhmicBath& bath,
                                    const GmeDrive& drive) {
  const std::size_t m = sys.energies.size();
  if (m < 2) throw DimensionError("gme_generator: need at least two dressed levels");
  if (!std::is_sorted(sys.energies.begin(), sys.energies.end()))
    throw DomainError("gme_generator: energies must be ascending");
  if (!(drive.frequency > 0.0)) throw DomainError("gme_generator: drive frequency must be > 0");
  require_square(sys.coupling, m, "DressedSystem coupling");

  const double tol = 1e-9 * bath.omega_ref;
  const ComplexMatrix x = positive_frequency_part(sys, tol);
  ComplexMatrix a(m, m);
  for (std::size_t l = 0; l < m; ++l) {
    for (std::size_t k = l + 1; k < m; ++k) {
      const double w = sys.energies[k] - sys.energies[l];
      if (w > tol) a(l, k) = bath.rate(w) * sys.coupling(l, k);
    }
  }
  // Energies are shifted by E_0; the commutator is insensitive to it.
  ComplexMatrix h(m, m);
  for (std::size_t j = 0; j < m; ++j) h(j, j) = sys.energies[j] - sys.energies[0];

  const ComplexMatrix xd = x.adjoint();
  const ComplexMatrix xda = xd * a;
  std::vector<FactorTerm> terms;
  terms.push_back({h, std::nullopt, -kI, 0});
  terms.push_back({std::nullopt, h, kI, 0});
  terms.push_back({a, x, 0.5, 0});
  terms.push_back({xda, std::nullopt, -0.5, 0});
  terms.push_back({x, a, 0.5, 0});
  terms.push_back({std::nullopt, xda, -0.5, 0});
  if (drive.amplitude != 0.0) {
    const Complex f = drive.amplitude;
    terms.push_back({x, std::nullopt, -kI * f, +1});
    terms.push_back({std::nullopt, xd, kI * f, +1});
    terms.push_back({xd, std::nullopt, -kI * f, -1});
    terms.push_back({std::nullopt, x, kI * f, -1});
  }
  return TimePeriodicGenerator(m, 2.0 * std::numbers::pi / drive.frequency, std::move(terms));
}

}  // namespace floquet
