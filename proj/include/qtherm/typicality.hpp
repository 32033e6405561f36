// Constraint subspaces and canonical-typicality statistics.
//
// A constraint subspace R of a composite space carries an isometry
// V: C^{d_R} -> C^d whose columns span the admissible global states. The
// canonical state of a subsystem is the reduction of the maximally mixed
// state on R, omega = Tr_rest(V V^dag) / d_R. Haar-random states drawn
// inside R reduce to states close to omega, and typicality_sweep measures
// how sharply they concentrate as the traced dimension grows.
#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qtherm/core.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/parallel.hpp"
#include "qtherm/random.hpp"

namespace qtherm {

namespace detail {
inline bool is_exact_identity(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != std::complex<double>(i == j ? 1.0 : 0.0)) return false;
  return true;
}
}  // namespace detail

class ConstraintSubspace {
 public:
  ConstraintSubspace(Eigen::MatrixXcd isometry, SpaceLayout layout, std::string description)
      : isometry_(std::move(isometry)),
        layout_(std::move(layout)),
        description_(std::move(description)) {
    if (isometry_.rows() != layout_.total_dim()) {
      throw ValidationError("constraint subspace: isometry has " +
                            std::to_string(isometry_.rows()) + " rows, layout expects " +
                            std::to_string(layout_.total_dim()));
    }
    if (isometry_.cols() < 1 || isometry_.cols() > isometry_.rows()) {
      throw ValidationError("constraint subspace: invalid dimension " +
                            std::to_string(isometry_.cols()));
    }
    identity_ = detail::is_exact_identity(isometry_);
    if (!identity_) {
      const double defect = (isometry_.adjoint() * isometry_ -
                             Eigen::MatrixXcd::Identity(isometry_.cols(), isometry_.cols()))
                                .cwiseAbs()
                                .maxCoeff();
      if (defect > tol::isometry) {
        throw ValidationError("constraint subspace: columns not orthonormal, defect " +
                              std::to_string(defect));
      }
    }
  }

  const Eigen::MatrixXcd& isometry() const { return isometry_; }
  const SpaceLayout& layout() const { return layout_; }
  Eigen::Index ambient_dim() const { return isometry_.rows(); }
  Eigen::Index subspace_dim() const { return isometry_.cols(); }
  const std::string& description() const { return description_; }
  bool spans_full_space_trivially() const { return identity_; }

 private:
  Eigen::MatrixXcd isometry_;
  SpaceLayout layout_;
  std::string description_;
  bool identity_ = false;
};

inline ConstraintSubspace full_space_subspace(const SpaceLayout& layout) {
  return ConstraintSubspace(
      Eigen::MatrixXcd::Identity(layout.total_dim(), layout.total_dim()), layout,
      "full space");
}

// Span of the eigenvectors of h_total with eigenvalue within e_width/2 of
// e_center. Columns are ordered by ascending eigenvalue.
inline ConstraintSubspace energy_window_subspace(const HermitianOperator& h_total,
                                                 double e_center, double e_width) {
  if (!(e_width > 0.0) || !std::isfinite(e_width) || !std::isfinite(e_center)) {
    throw ValidationError("energy window: center must be finite and width positive");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_total.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("energy window: eigensolver failed");

  const auto& lam = es.eigenvalues();
  std::vector<Eigen::Index> inside;
  double nearest = lam(0);
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (std::abs(lam(i) - e_center) <= 0.5 * e_width) inside.push_back(i);
    if (std::abs(lam(i) - e_center) < std::abs(nearest - e_center)) nearest = lam(i);
  }
  if (inside.empty()) {
    throw ValidationError("energy window [" + std::to_string(e_center - 0.5 * e_width) + ", " +
                          std::to_string(e_center + 0.5 * e_width) +
                          "] contains no eigenvalues; nearest eigenvalue is " +
                          std::to_string(nearest));
  }

  Eigen::MatrixXcd v(lam.size(), static_cast<Eigen::Index>(inside.size()));
  for (std::size_t c = 0; c < inside.size(); ++c) v.col(c) = es.eigenvectors().col(inside[c]);
  return ConstraintSubspace(std::move(v), h_total.layout(),
                            "energy window " + std::to_string(e_center) + " +- " +
                                std::to_string(0.5 * e_width) + ", " +
                                std::to_string(inside.size()) + " levels");
}

// Haar-random state supported on the subspace: a Haar vector in C^{d_R}
// pushed through the isometry.
inline PureState haar_state_in_subspace(const ConstraintSubspace& subspace,
                                        const SeedSpec& seed) {
  RandomStream rs(seed);
  Eigen::VectorXcd x = detail::gaussian_vector(subspace.subspace_dim(), rs);
  const double n = x.norm();
  if (!(n > 0.0)) throw NumericalError("haar_state_in_subspace: degenerate Gaussian draw");
  x /= n;
  if (subspace.spans_full_space_trivially()) {
    return PureState(std::move(x), subspace.layout());
  }
  Eigen::VectorXcd psi = subspace.isometry() * x;
  psi /= psi.norm();
  return PureState(std::move(psi), subspace.layout());
}

// Reduction of the maximally mixed state on the subspace, accumulated
// column by column so the d x d projector is never formed.
inline DensityMatrix canonical_state(const ConstraintSubspace& subspace,
                                     const std::vector<std::string>& keep) {
  const auto plan = detail::make_reduction_plan(subspace.layout(), keep);
  const auto& ko = plan.kept_offsets;
  const auto& to = plan.traced_offsets;
  const Eigen::Index dk = static_cast<Eigen::Index>(ko.size());
  const Eigen::Index dr = subspace.subspace_dim();

  if (subspace.spans_full_space_trivially()) {
    return DensityMatrix(Eigen::MatrixXcd::Identity(dk, dk) / static_cast<double>(dk),
                         plan.kept_layout);
  }

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
  for (Eigen::Index c = 0; c < dr; ++c) {
    const auto v = subspace.isometry().col(c);
    for (Eigen::Index q = 0; q < dk; ++q)
      for (Eigen::Index p = 0; p < dk; ++p) {
        std::complex<double> acc = 0.0;
        for (Eigen::Index e : to) acc += v(ko[p] + e) * std::conj(v(ko[q] + e));
        out(p, q) += acc;
      }
  }
  out /= static_cast<double>(dr);
  return DensityMatrix(std::move(out), plan.kept_layout);
}

struct TypicalityStats {
  std::int64_t sample_count = 0;
  double mean_distance = 0.0;
  double max_distance = 0.0;
  double std_distance = 0.0;
  double mean_entropy = 0.0;
  Eigen::Index subspace_dim = 0;
  Eigen::Index sys_dim = 0;
  Eigen::Index env_dim = 0;
};

// Draws n_samples Haar states in the subspace (sample i uses the child
// stream of index i), reduces each to the kept factors, and aggregates the
// trace distance to the canonical state and the entropy. The aggregation
// runs over a fixed index order, so the result is bit-identical for any
// worker count. std_distance uses the n-1 denominator and is 0 for a
// single sample.
inline TypicalityStats typicality_sweep(const ConstraintSubspace& subspace,
                                        const std::vector<std::string>& keep,
                                        std::int64_t n_samples, const SeedSpec& seed,
                                        int workers = 1) {
  if (n_samples < 1) throw ValidationError("typicality_sweep: need at least one sample");
  const DensityMatrix omega = canonical_state(subspace, keep);

  std::vector<double> dist(static_cast<std::size_t>(n_samples));
  std::vector<double> ent(static_cast<std::size_t>(n_samples));
  parallel_for(n_samples, workers, [&](std::int64_t i) {
    const PureState psi =
        haar_state_in_subspace(subspace, derive_stream(seed, static_cast<std::uint64_t>(i)));
    const DensityMatrix rho = reduce_pure(psi, keep);
    dist[static_cast<std::size_t>(i)] = trace_distance(rho, omega);
    ent[static_cast<std::size_t>(i)] = vn_entropy(rho);
  });

  TypicalityStats stats;
  stats.sample_count = n_samples;
  stats.subspace_dim = subspace.subspace_dim();
  stats.sys_dim = omega.dim();
  stats.env_dim = subspace.layout().total_dim() / omega.dim();
  double sum = 0.0, sum_ent = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    sum += dist[static_cast<std::size_t>(i)];
    sum_ent += ent[static_cast<std::size_t>(i)];
    stats.max_distance = std::max(stats.max_distance, dist[static_cast<std::size_t>(i)]);
  }
  stats.mean_distance = sum / static_cast<double>(n_samples);
  stats.mean_entropy = sum_ent / static_cast<double>(n_samples);
  if (n_samples > 1) {
    double ss = 0.0;
    for (std::int64_t i = 0; i < n_samples; ++i) {
      const double d = dist[static_cast<std::size_t>(i)] - stats.mean_distance;
      ss += d * d;
    }
    stats.std_distance = std::sqrt(ss / static_cast<double>(n_samples - 1));
  }
  return stats;
}

}  // namespace qtherm
