// Value types for states and operators on labeled tensor-product spaces.
// Instances are immutable; constructors enforce the numeric invariants and
// throw ValidationError on violation. Positivity of density matrices is not
// checked at construction (it would cost a full eigendecomposition); it is
// enforced where the spectrum is actually needed, in vn_entropy.
#pragma once

#include <complex>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "qtherm/errors.hpp"
#include "qtherm/space.hpp"

namespace qtherm {

// Shared numeric tolerances. Construction-time checks use absolute
// elementwise deviations.
namespace tol {
inline constexpr double norm = 1e-10;          // | ||psi|| - 1 |
inline constexpr double hermitian = 1e-10;     // max elementwise |M - M^dag|
inline constexpr double trace_one = 1e-10;     // |Tr rho - 1|
inline constexpr double psd_slack = 1e-10;     // eigenvalues below -psd_slack are an error
inline constexpr double entropy_clip = 1e-12;  // eigenvalues at or below this count as zero
inline constexpr double isometry = 1e-10;      // max elementwise |V^dag V - I|
inline constexpr double channel_complete = 1e-10;  // max elementwise |sum K^dag K - I|
inline constexpr double unitary = 1e-8;        // max elementwise |U^dag U - I|
inline constexpr double imag_residue = 1e-10;  // imaginary part allowed on real quantities
}  // namespace tol

inline double hermiticity_defect(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

class PureState {
 public:
  PureState(Eigen::VectorXcd amplitudes, SpaceLayout layout)
      : amplitudes_(std::move(amplitudes)), layout_(std::move(layout)) {
    if (amplitudes_.size() != layout_.total_dim()) {
      throw ValidationError("pure state: amplitude vector has dimension " +
                            std::to_string(amplitudes_.size()) + ", layout expects " +
                            std::to_string(layout_.total_dim()));
    }
    const double n = amplitudes_.norm();
    if (std::abs(n - 1.0) > tol::norm) {
      throw ValidationError("pure state: norm deviates from 1 by " + std::to_string(n - 1.0));
    }
  }

  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  const SpaceLayout& layout() const { return layout_; }
  Eigen::Index dim() const { return amplitudes_.size(); }

 private:
  Eigen::VectorXcd amplitudes_;
  SpaceLayout layout_;
};

namespace detail {
inline void check_square(const Eigen::MatrixXcd& m, const SpaceLayout& layout,
                         const char* what) {
  if (m.rows() != m.cols()) {
    throw ValidationError(std::string(what) + ": matrix is " + std::to_string(m.rows()) +
                          "x" + std::to_string(m.cols()) + ", expected square");
  }
  if (m.rows() != layout.total_dim()) {
    throw ValidationError(std::string(what) + ": matrix dimension " + std::to_string(m.rows()) +
                          " does not match layout dimension " +
                          std::to_string(layout.total_dim()));
  }
}

inline void check_hermitian(const Eigen::MatrixXcd& m, const char* what) {
  const double defect = hermiticity_defect(m);
  if (defect > tol::hermitian) {
    throw ValidationError(std::string(what) + ": Hermiticity defect " + std::to_string(defect) +
                          " exceeds tolerance");
  }
}
}  // namespace detail

class DensityMatrix {
 public:
  DensityMatrix(Eigen::MatrixXcd matrix, SpaceLayout layout)
      : matrix_(std::move(matrix)), layout_(std::move(layout)) {
    detail::check_square(matrix_, layout_, "density matrix");
    detail::check_hermitian(matrix_, "density matrix");
    const std::complex<double> tr = matrix_.trace();
    if (std::abs(tr - 1.0) > tol::trace_one) {
      throw ValidationError("density matrix: trace deviates from 1 by " +
                            std::to_string(std::abs(tr - 1.0)));
    }
  }

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const SpaceLayout& layout() const { return layout_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  Eigen::MatrixXcd matrix_;
  SpaceLayout layout_;
};

class HermitianOperator {
 public:
  HermitianOperator(Eigen::MatrixXcd matrix, SpaceLayout layout)
      : matrix_(std::move(matrix)), layout_(std::move(layout)) {
    detail::check_square(matrix_, layout_, "Hermitian operator");
    detail::check_hermitian(matrix_, "Hermitian operator");
  }

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const SpaceLayout& layout() const { return layout_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  Eigen::MatrixXcd matrix_;
  SpaceLayout layout_;
};

}  // namespace qtherm
