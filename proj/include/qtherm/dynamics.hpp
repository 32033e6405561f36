// Closed-system dynamics and the momentum-mirror channel.
//
// Units: hbar = 1, so propagators are U(t) = exp(-i H t), computed through
// the eigendecomposition of H. The box Hamiltonian is an open tight-binding
// chain; raising a barrier on its right half confines thermal states to the
// left side, and releasing it models a sudden expansion into the full box.
//
// The mirror channel reverses the momentum label p -> -p (index i ->
// dim-1-i on the grid). Its unitary dilation couples the particle to a wall
// register that starts in a ready state and records the recoil, one wall
// state per momentum, which is what makes the marginal on the particle
// non-unitary while the pair evolves unitarily.
#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qtherm/core.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/space.hpp"
#include "qtherm/states.hpp"

namespace qtherm {

// A completely positive trace-preserving map in Kraus form.
class Channel {
 public:
  Channel(std::vector<Eigen::MatrixXcd> kraus, SpaceLayout layout)
      : kraus_(std::move(kraus)), layout_(std::move(layout)) {
    if (kraus_.empty()) throw ValidationError("channel: empty Kraus list");
    const Eigen::Index d = layout_.total_dim();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& k : kraus_) {
      if (k.rows() != d || k.cols() != d) {
        throw ValidationError("channel: Kraus operator is " + std::to_string(k.rows()) + "x" +
                              std::to_string(k.cols()) + ", expected " + std::to_string(d) +
                              "x" + std::to_string(d));
      }
      sum += k.adjoint() * k;
    }
    const double defect =
        (sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (defect > tol::channel_complete) {
      throw ValidationError("channel: completeness defect " + std::to_string(defect));
    }
  }

  const std::vector<Eigen::MatrixXcd>& kraus() const { return kraus_; }
  const SpaceLayout& layout() const { return layout_; }
  Eigen::Index dim() const { return layout_.total_dim(); }

 private:
  std::vector<Eigen::MatrixXcd> kraus_;
  SpaceLayout layout_;
};

struct BoxSpec {
  Eigen::Index n_sites = 0;
  double hopping = 1.0;
  double barrier = 0.0;
};

// Open tight-binding chain, optionally with an on-site barrier on the right
// half. The free spectrum is -2 * hopping * cos(k pi / (n+1)), k = 1..n.
inline HermitianOperator box_hamiltonian(const BoxSpec& spec, bool blocked_half) {
  if (spec.n_sites < 2 || spec.n_sites % 2 != 0) {
    throw ValidationError("box: n_sites must be even and >= 2, got " +
                          std::to_string(spec.n_sites));
  }
  if (!(spec.hopping > 0.0) || !std::isfinite(spec.hopping)) {
    throw ValidationError("box: hopping must be positive and finite");
  }
  if (spec.barrier < 0.0 || !std::isfinite(spec.barrier)) {
    throw ValidationError("box: barrier must be nonnegative and finite");
  }
  const Eigen::Index n = spec.n_sites;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = -spec.hopping;
    h(i + 1, i) = -spec.hopping;
  }
  if (blocked_half) {
    for (Eigen::Index i = n / 2; i < n; ++i) h(i, i) = spec.barrier;
  }
  return HermitianOperator(std::move(h), SpaceLayout::single("box", n));
}

// Thermal state exp(-beta H)/Z. The spectrum is shifted by its minimum
// before exponentiating so large beta underflows to the ground-state
// projector instead of producing 0/0.
inline DensityMatrix gibbs_state(const HermitianOperator& h, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ValidationError("gibbs_state: beta must be nonnegative and finite");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("gibbs_state: eigensolver failed");
  const auto& lam = es.eigenvalues();
  Eigen::VectorXd w(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) w(i) = std::exp(-beta * (lam(i) - lam(0)));
  w /= w.sum();
  Eigen::MatrixXcd rho =
      es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  return DensityMatrix(std::move(rho), h.layout());
}

// Inverse temperature with Tr(rho_beta H) = energy_target, by bisection on
// the monotone map beta -> E(beta). Valid targets lie in (E_ground,
// E_mean]; the upper endpoint is the beta = 0 equipartition value and maps
// to exactly 0.
inline double solve_beta(const HermitianOperator& h, double energy_target) {
  if (!std::isfinite(energy_target)) {
    throw ValidationError("solve_beta: target must be finite");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("solve_beta: eigensolver failed");
  const auto& lam = es.eigenvalues();
  const Eigen::Index d = lam.size();
  const double ground = lam(0);
  const double mean = lam.sum() / static_cast<double>(d);
  const double width = lam(d - 1) - lam(0);

  if (!(energy_target > ground) || !(energy_target <= mean)) {
    throw ValidationError("solve_beta: target " + std::to_string(energy_target) +
                          " outside the attainable range (" + std::to_string(ground) + ", " +
                          std::to_string(mean) + "]");
  }
  if (energy_target == mean) return 0.0;

  const auto energy_at = [&](double beta) {
    double z = 0.0, e = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double w = std::exp(-beta * (lam(i) - ground));
      z += w;
      e += w * lam(i);
    }
    return e / z;
  };

  const int max_iter = 200;
  int iter = 0;
  double lo = 0.0, hi = 1.0;
  while (energy_at(hi) > energy_target) {
    lo = hi;
    hi *= 2.0;
    if (++iter > max_iter || !std::isfinite(hi)) {
      throw NumericalError("solve_beta: bracketing failed for target " +
                           std::to_string(energy_target));
    }
  }
  while (hi - lo > 1e-12 * std::max(1.0, hi) && ++iter <= max_iter) {
    const double mid = 0.5 * (lo + hi);
    if (energy_at(mid) > energy_target)
      lo = mid;
    else
      hi = mid;
  }
  const double beta = 0.5 * (lo + hi);
  if (std::abs(energy_at(beta) - energy_target) > 1e-9 * width) {
    throw NumericalError("solve_beta: residual exceeds tolerance at beta " +
                         std::to_string(beta));
  }
  return beta;
}

// exp(-i H t) through the eigendecomposition of H.
inline Eigen::MatrixXcd propagator(const HermitianOperator& h, double t) {
  if (!std::isfinite(t)) throw ValidationError("propagator: time must be finite");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("propagator: eigensolver failed");
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, -es.eigenvalues()(i) * t);
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

namespace detail {
inline void check_unitary(const Eigen::MatrixXcd& u, Eigen::Index dim, const char* what) {
  if (u.rows() != dim || u.cols() != dim) {
    throw ValidationError(std::string(what) + ": operator is " + std::to_string(u.rows()) +
                          "x" + std::to_string(u.cols()) + ", state has dimension " +
                          std::to_string(dim));
  }
  const double defect =
      (u.adjoint() * u - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (defect > tol::unitary) {
    throw ValidationError(std::string(what) + ": unitarity defect " + std::to_string(defect));
  }
}
}  // namespace detail

// Unitary conjugation. The pure-state result is renormalized; the drift it
// removes is bounded by the unitarity gate.
inline PureState evolve(const PureState& psi, const Eigen::MatrixXcd& u) {
  detail::check_unitary(u, psi.dim(), "evolve");
  Eigen::VectorXcd out = u * psi.amplitudes();
  out /= out.norm();
  return PureState(std::move(out), psi.layout());
}

inline DensityMatrix evolve(const DensityMatrix& rho, const Eigen::MatrixXcd& u) {
  detail::check_unitary(u, rho.dim(), "evolve");
  Eigen::MatrixXcd out = u * rho.matrix() * u.adjoint();
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix(std::move(out), rho.layout());
}

inline Eigen::Index mirror_index(Eigen::Index i, Eigen::Index dim) {
  if (i < 0 || i >= dim) {
    throw ValidationError("mirror_index: index " + std::to_string(i) +
                          " outside grid of size " + std::to_string(dim));
  }
  return dim - 1 - i;
}

// Momentum mirror in Kraus form: one operator |(-p)><p| per grid point.
// Diagonal inputs in the momentum basis are mirrored losslessly; coherences
// between different momenta are destroyed.
inline Channel bounce_channel(Eigen::Index momentum_dim) {
  if (momentum_dim < 1) throw ValidationError("bounce_channel: dimension must be >= 1");
  std::vector<Eigen::MatrixXcd> kraus;
  kraus.reserve(static_cast<std::size_t>(momentum_dim));
  for (Eigen::Index p = 0; p < momentum_dim; ++p) {
    Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(momentum_dim, momentum_dim);
    k(mirror_index(p, momentum_dim), p) = 1.0;
    kraus.push_back(std::move(k));
  }
  return Channel(std::move(kraus), SpaceLayout::single("momentum", momentum_dim));
}

inline SpaceLayout bounce_dilation_layout(Eigen::Index momentum_dim) {
  return SpaceLayout({{"momentum", momentum_dim}, {"wall", momentum_dim + 1}});
}

// Unitary dilation of the mirror channel on particle x wall. The wall has
// momentum_dim + 1 states: the ready state |0> plus one recoil state per
// momentum. The specified action is |p>|0> -> |-p> |recoil_p>; the
// remaining columns are completed to a permutation by assigning unused
// basis vectors in ascending index order.
inline Eigen::MatrixXcd dilate_bounce(Eigen::Index momentum_dim) {
  if (momentum_dim < 1) throw ValidationError("dilate_bounce: dimension must be >= 1");
  const Eigen::Index d = momentum_dim;
  const Eigen::Index wall = d + 1;
  const Eigen::Index n = d * wall;

  std::vector<Eigen::Index> row_of_col(static_cast<std::size_t>(n), -1);
  std::vector<bool> row_used(static_cast<std::size_t>(n), false);
  for (Eigen::Index p = 0; p < d; ++p) {
    const Eigen::Index col = p * wall;
    const Eigen::Index row = mirror_index(p, d) * wall + (p + 1);
    row_of_col[static_cast<std::size_t>(col)] = row;
    row_used[static_cast<std::size_t>(row)] = true;
  }
  Eigen::Index next_row = 0;
  for (Eigen::Index col = 0; col < n; ++col) {
    if (row_of_col[static_cast<std::size_t>(col)] >= 0) continue;
    while (row_used[static_cast<std::size_t>(next_row)]) ++next_row;
    row_of_col[static_cast<std::size_t>(col)] = next_row;
    row_used[static_cast<std::size_t>(next_row)] = true;
  }

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index col = 0; col < n; ++col) u(row_of_col[static_cast<std::size_t>(col)], col) = 1.0;
  return u;
}

// Kraus-sum action of a channel on a state.
inline DensityMatrix apply_channel(const Channel& channel, const DensityMatrix& rho) {
  if (channel.dim() != rho.dim()) {
    throw ValidationError("apply_channel: dimension mismatch " + std::to_string(channel.dim()) +
                          " vs " + std::to_string(rho.dim()));
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.dim(), rho.dim());
  for (const auto& k : channel.kraus()) out += k * rho.matrix() * k.adjoint();
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix(std::move(out), rho.layout());
}

}  // namespace qtherm
