// Counter-based random streams and the samplers built on them.
//
// A stream is a (master_seed, stream_index) pair. Blocks come from
// Philox4x32-10 keyed by the master seed, with the 128-bit counter split as
// (stream_index << 64) | block_position. Streams derived with different
// indices therefore read disjoint counter ranges of the same keyed
// permutation and never overlap, which makes every sampler reproducible
// bit-for-bit regardless of how samples are distributed across threads.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "qtherm/errors.hpp"
#include "qtherm/space.hpp"
#include "qtherm/states.hpp"

namespace qtherm {

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

namespace detail {

// SplitMix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// One block of Philox4x32-10. Counter word order is (c0, c1, c2, c3) =
// (position lo, position hi, stream lo, stream hi); the key is the master
// seed split into 32-bit halves. Verified against the published
// known-answer vectors in the test suite.
inline std::array<std::uint32_t, 4> philox_block(std::uint64_t key, std::uint64_t stream,
                                                 std::uint64_t position) {
  constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
  constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;

  std::uint32_t c0 = static_cast<std::uint32_t>(position);
  std::uint32_t c1 = static_cast<std::uint32_t>(position >> 32);
  std::uint32_t c2 = static_cast<std::uint32_t>(stream);
  std::uint32_t c3 = static_cast<std::uint32_t>(stream >> 32);
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);

  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * c0;
    const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * c2;
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c0 = hi1 ^ c1 ^ k0;
    c1 = lo1;
    c2 = hi0 ^ c3 ^ k1;
    c3 = lo0;
    k0 += w0;
    k1 += w1;
  }
  return {c0, c1, c2, c3};
}

}  // namespace detail

// Child streams: distinct indices give distinct stream_index values (the
// golden-ratio step keeps inputs to the bijective mixer distinct), so the
// children read disjoint counter blocks.
inline SeedSpec derive_stream(const SeedSpec& parent, std::uint64_t index) {
  constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;
  return {parent.master_seed, detail::mix64(parent.stream_index + golden * (index + 1))};
}

// Sequential reader over one stream's counter blocks. Word, uniform, and
// Gaussian draws consume the stream in a fixed order.
class RandomStream {
 public:
  explicit RandomStream(const SeedSpec& seed) : seed_(seed) {}

  std::uint32_t next_u32() {
    if (avail_ == 0) {
      buf_ = detail::philox_block(seed_.master_seed, seed_.stream_index, block_++);
      avail_ = 4;
    }
    return buf_[4 - avail_--];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform on (0, 1] with 53-bit resolution; never returns 0, so logs of
  // draws stay finite.
  double next_uniform() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    const std::uint64_t mant = (hi << 21) | (lo >> 11);
    return static_cast<double>(mant + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; pairs are generated together and the
  // second member is cached.
  double next_gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  // Complex value with independent N(0,1) real and imaginary parts.
  std::complex<double> next_cgaussian() {
    const double re = next_gaussian();
    const double im = next_gaussian();
    return {re, im};
  }

 private:
  SeedSpec seed_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int avail_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

namespace detail {
inline Eigen::VectorXcd gaussian_vector(Eigen::Index dim, RandomStream& rs) {
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rs.next_cgaussian();
  return v;
}
}  // namespace detail

// Haar-distributed unit vector: a normalized vector of iid complex
// Gaussians.
inline PureState haar_unit_vector(const SpaceLayout& layout, const SeedSpec& seed) {
  if (layout.total_dim() < 1) throw ValidationError("haar_unit_vector: empty layout");
  RandomStream rs(seed);
  Eigen::VectorXcd v = detail::gaussian_vector(layout.total_dim(), rs);
  const double n = v.norm();
  if (!(n > 0.0)) throw NumericalError("haar_unit_vector: degenerate Gaussian draw");
  return PureState(v / n, layout);
}

inline PureState haar_unit_vector(Eigen::Index dim, const SeedSpec& seed) {
  return haar_unit_vector(SpaceLayout::single("state", dim), seed);
}

// Haar unitary via QR of a Ginibre matrix with the R-diagonal phase fix.
inline Eigen::MatrixXcd haar_unitary(Eigen::Index dim, RandomStream& rs) {
  if (dim < 1) throw ValidationError("haar_unitary: dimension must be >= 1");
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = rs.next_cgaussian();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const std::complex<double> r = qr.matrixQR()(j, j);
    const double mag = std::abs(r);
    q.col(j) *= (mag > 0.0) ? (r / mag) : 1.0;
  }
  return q;
}

inline Eigen::MatrixXcd haar_unitary(Eigen::Index dim, const SeedSpec& seed) {
  RandomStream rs(seed);
  return haar_unitary(dim, rs);
}

// Hermitian matrix with independent Gaussian entries: off-diagonal complex
// with standard deviation `scale`, diagonal real with standard deviation
// scale * sqrt(2). Entries are drawn over the upper triangle row-major.
inline HermitianOperator gue_hermitian(const SpaceLayout& layout, double scale,
                                       const SeedSpec& seed) {
  const Eigen::Index dim = layout.total_dim();
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ValidationError("gue_hermitian: scale must be positive and finite");
  }
  RandomStream rs(seed);
  Eigen::MatrixXcd h(dim, dim);
  const double off = scale / std::numbers::sqrt2;
  for (Eigen::Index i = 0; i < dim; ++i) {
    h(i, i) = rs.next_gaussian() * scale * std::numbers::sqrt2;
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const std::complex<double> z = rs.next_cgaussian() * off;
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return HermitianOperator(std::move(h), layout);
}

inline HermitianOperator gue_hermitian(Eigen::Index dim, double scale, const SeedSpec& seed) {
  return gue_hermitian(SpaceLayout::single("gue", dim), scale, seed);
}

// Unitary drawn Haar-uniformly on each eigenspace of `conserved` and
// identity-coupled across them: in the eigenbasis it is block diagonal with
// an independent Haar block per degenerate eigenvalue group. Commutes with
// `conserved` by construction.
//
// Eigenvalues are grouped by a relative gap threshold: consecutive sorted
// values closer than 1e-8 * max(1, spectral radius) share a block.
inline Eigen::MatrixXcd block_haar_unitary(const HermitianOperator& conserved,
                                           const SeedSpec& seed) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(conserved.matrix());
  if (es.info() != Eigen::Success) {
    throw NumericalError("block_haar_unitary: eigensolver failed");
  }
  const auto& lam = es.eigenvalues();
  const Eigen::Index dim = lam.size();
  const double radius = std::max(std::abs(lam(0)), std::abs(lam(dim - 1)));
  const double gap = 1e-8 * std::max(1.0, radius);

  RandomStream rs(seed);
  Eigen::MatrixXcd inner = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= dim; ++i) {
    if (i == dim || lam(i) - lam(i - 1) > gap) {
      const Eigen::Index size = i - start;
      inner.block(start, start, size, size) = haar_unitary(size, rs);
      start = i;
    }
  }
  return es.eigenvectors() * inner * es.eigenvectors().adjoint();
}

}  // namespace qtherm
