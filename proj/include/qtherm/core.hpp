// Core operations on states and operators: tensor composition, partial
// traces, and the information measures built on eigenspectra.
//
// Entropies are reported in nats (k_B = 1); multiply by 1/ln 2 for bits.
// Eigenvalue clipping in entropies follows one rule everywhere: values below
// -tol::psd_slack are an error, values at or below tol::entropy_clip
// contribute zero, everything else contributes -x ln x.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtherm/errors.hpp"
#include "qtherm/space.hpp"
#include "qtherm/states.hpp"

namespace qtherm {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Eigen::VectorXcd out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline PureState tensor_product(const PureState& a, const PureState& b) {
  return PureState(kron(a.amplitudes(), b.amplitudes()), a.layout().joined(b.layout()));
}

inline DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.matrix(), b.matrix()), a.layout().joined(b.layout()));
}

inline HermitianOperator tensor_product(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()), a.layout().joined(b.layout()));
}

namespace detail {

// Precomputed flat offsets for one bipartition of a layout. Every flat index
// decomposes uniquely as kept_offsets[p] + traced_offsets[e].
struct ReductionPlan {
  std::vector<Eigen::Index> kept_offsets;
  std::vector<Eigen::Index> traced_offsets;
  SpaceLayout kept_layout;
};

inline std::vector<Eigen::Index> expand_offsets(const std::vector<Eigen::Index>& dims,
                                                const std::vector<Eigen::Index>& strides) {
  std::vector<Eigen::Index> offsets{0};
  for (std::size_t f = 0; f < dims.size(); ++f) {
    std::vector<Eigen::Index> next;
    next.reserve(offsets.size() * static_cast<std::size_t>(dims[f]));
    for (Eigen::Index o : offsets)
      for (Eigen::Index v = 0; v < dims[f]; ++v) next.push_back(o + v * strides[f]);
    offsets = std::move(next);
  }
  return offsets;
}

inline ReductionPlan make_reduction_plan(const SpaceLayout& layout,
                                         const std::vector<std::string>& keep) {
  if (keep.empty()) throw ValidationError("partial trace: empty keep list");
  std::vector<bool> kept(layout.factor_count(), false);
  for (const auto& label : keep) {
    const std::size_t i = layout.index_of(label);
    if (kept[i]) throw ValidationError("partial trace: duplicate keep label '" + label + "'");
    kept[i] = true;
  }

  std::vector<Eigen::Index> strides(layout.factor_count());
  Eigen::Index s = 1;
  for (std::size_t i = layout.factor_count(); i-- > 0;) {
    strides[i] = s;
    s *= layout.factor(i).dim;
  }

  std::vector<Eigen::Index> kept_dims, kept_strides, traced_dims, traced_strides;
  std::vector<Factor> kept_factors;
  for (std::size_t i = 0; i < layout.factor_count(); ++i) {
    if (kept[i]) {
      kept_dims.push_back(layout.factor(i).dim);
      kept_strides.push_back(strides[i]);
      kept_factors.push_back(layout.factor(i));
    } else {
      traced_dims.push_back(layout.factor(i).dim);
      traced_strides.push_back(strides[i]);
    }
  }

  return ReductionPlan{expand_offsets(kept_dims, kept_strides),
                       expand_offsets(traced_dims, traced_strides),
                       SpaceLayout(kept_factors)};
}

}  // namespace detail

// Traces out every factor not named in `keep`; kept factors stay in layout
// order. The output is symmetrized to keep the constructor's Hermiticity
// check meaningful for inputs that sit at the tolerance edge.
inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   const std::vector<std::string>& keep) {
  const auto plan = detail::make_reduction_plan(rho.layout(), keep);
  const auto& ko = plan.kept_offsets;
  const auto& to = plan.traced_offsets;
  const Eigen::Index dk = static_cast<Eigen::Index>(ko.size());
  const auto& m = rho.matrix();

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
  for (Eigen::Index q = 0; q < dk; ++q)
    for (Eigen::Index p = 0; p < dk; ++p) {
      std::complex<double> acc = 0.0;
      for (Eigen::Index e : to) acc += m(ko[p] + e, ko[q] + e);
      out(p, q) = acc;
    }
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix(std::move(out), plan.kept_layout);
}

// Reduced density matrix of a pure state, computed from the amplitudes
// without forming the global |psi><psi|. Agrees with
// partial_trace(dm_from_pure(psi), keep) and needs O(d * d_kept) work.
inline DensityMatrix reduce_pure(const PureState& psi, const std::vector<std::string>& keep) {
  const auto plan = detail::make_reduction_plan(psi.layout(), keep);
  const auto& ko = plan.kept_offsets;
  const auto& to = plan.traced_offsets;
  const Eigen::Index dk = static_cast<Eigen::Index>(ko.size());
  const auto& v = psi.amplitudes();

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
  for (Eigen::Index q = 0; q < dk; ++q)
    for (Eigen::Index p = 0; p < dk; ++p) {
      std::complex<double> acc = 0.0;
      for (Eigen::Index e : to) acc += v(ko[p] + e) * std::conj(v(ko[q] + e));
      out(p, q) = acc;
    }
  return DensityMatrix(std::move(out), plan.kept_layout);
}

inline DensityMatrix dm_from_pure(const PureState& psi) {
  const double n = psi.amplitudes().norm();
  if (std::abs(n - 1.0) > 1e-8) {
    throw ValidationError("dm_from_pure: state norm deviates from 1 by " +
                          std::to_string(n - 1.0));
  }
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint(), psi.layout());
}

// von Neumann entropy in nats. Eigenvalues below -tol::psd_slack mean the
// matrix is not a state and raise NumericalError.
inline double vn_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("vn_entropy: eigensolver failed");
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam < -tol::psd_slack) {
      throw NumericalError("vn_entropy: density matrix has negative eigenvalue " +
                           std::to_string(lam));
    }
    if (lam > tol::entropy_clip) s -= lam * std::log(lam);
  }
  return s;
}

// Shannon entropy in nats of a probability vector, same clipping rule as
// vn_entropy. The input is not renormalized.
inline double shannon_entropy(const Eigen::VectorXd& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) < -tol::psd_slack) {
      throw NumericalError("shannon_entropy: negative probability " + std::to_string(p(i)));
    }
    if (p(i) > tol::entropy_clip) s -= p(i) * std::log(p(i));
  }
  return s;
}

// Trace distance (1/2) * ||rho - sigma||_1.
inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw ValidationError("trace_distance: dimension mismatch " + std::to_string(rho.dim()) +
                          " vs " + std::to_string(sigma.dim()));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix() - sigma.matrix(),
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("trace_distance: eigensolver failed");
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline double purity(const DensityMatrix& rho) { return rho.matrix().squaredNorm(); }

// Tr(op * rho), checked to be real within tol::imag_residue.
inline double expectation(const HermitianOperator& op, const DensityMatrix& rho) {
  if (op.dim() != rho.dim()) {
    throw ValidationError("expectation: dimension mismatch " + std::to_string(op.dim()) +
                          " vs " + std::to_string(rho.dim()));
  }
  const std::complex<double> tr = op.matrix().cwiseProduct(rho.matrix().transpose()).sum();
  if (std::abs(tr.imag()) > tol::imag_residue) {
    throw NumericalError("expectation: imaginary residue " + std::to_string(tr.imag()));
  }
  return tr.real();
}

}  // namespace qtherm
