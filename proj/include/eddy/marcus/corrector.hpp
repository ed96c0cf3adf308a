#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

#include "eddy/fourier/spectral_field.hpp"
#include "eddy/levy/measure.hpp"
#include "eddy/marcus/noise_operators.hpp"

namespace eddy {

// B = sum_k int (e^{-z theta_k A_k} - I + z theta_k A_k) nu(dz) on H_n.
class CorrectorOperator {
 public:
  CorrectorOperator(int cutoff, Eigen::MatrixXd matrix) : cutoff_(cutoff), matrix_(std::move(matrix)) {
    const auto dim = static_cast<Eigen::Index>(ModeSet::of(cutoff).size());
    if (matrix_.rows() != dim || matrix_.cols() != dim) throw std::invalid_argument("CorrectorOperator: wrong dimension");
  }

  static CorrectorOperator zero(int cutoff) {
    const auto dim = static_cast<Eigen::Index>(ModeSet::of(cutoff).size());
    return {cutoff, Eigen::MatrixXd::Zero(dim, dim)};
  }

  int cutoff() const { return cutoff_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  SpectralField apply(const SpectralField& f) const {
    if (f.cutoff() != cutoff_) throw std::invalid_argument("CorrectorOperator: cutoff mismatch");
    return SpectralField(cutoff_, matrix_ * f.vec());
  }

  // Largest eigenvalue of (B + B^T)/2; nonpositive for a dissipative B.
  double max_symmetric_eigenvalue() const {
    const Eigen::MatrixXd s = 0.5 * (matrix_ + matrix_.transpose());
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  }
  // Spectral radius of the symmetric part; bounds explicit step sizes.
  double spectral_radius() const {
    const Eigen::MatrixXd s = 0.5 * (matrix_ + matrix_.transpose());
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
  }

 private:
  int cutoff_;
  Eigen::MatrixXd matrix_;
};

enum class CorrectorAssembly {
  // e^{-wA} + e^{wA} = 2 cos(w sqrt(-A^2)): one symmetric eigensolve per block
  // and the scalar transform h(s) = int (cos(zs) - 1) nu(dz).
  spectral,
  // Explicit matrix exponentials per atom; atomic nu only.
  per_atom,
};

namespace detail {

template <class BlockFn>
Eigen::MatrixXd assemble_blocks(const NoiseOperators& ops, BlockFn&& block_fn) {
  const auto dim = static_cast<Eigen::Index>(ModeSet::of(ops.cutoff()).size());
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t s = 0; s < ops.size(); ++s) {
    for (const auto& b : ops.op(s).blocks()) {
      const Eigen::MatrixXd local = block_fn(b.matrix, ops.theta(s));
      for (std::size_t i = 0; i < b.index.size(); ++i)
        for (std::size_t j = 0; j < b.index.size(); ++j)
          B(b.index[i], b.index[j]) += local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return B;
}

}  // namespace detail

inline CorrectorOperator corrector_operator(const NoiseOperators& ops, const LevyMeasure& nu,
                                            CorrectorAssembly method = CorrectorAssembly::spectral) {
  if (method == CorrectorAssembly::per_atom) {
    if (!nu.is_atomic()) throw std::invalid_argument("corrector_operator: per-atom assembly needs an atomic measure");
    const auto& atoms = nu.atoms().atoms;
    return {ops.cutoff(), detail::assemble_blocks(ops, [&](const Eigen::MatrixXd& A, double theta) {
              Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(A.rows(), A.cols());
              const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(A.rows(), A.cols());
              for (const auto& a : atoms) {
                const Eigen::MatrixXd arg = -a.z * theta * A;
                acc += a.mass * (arg.exp() - I - arg);
              }
              return acc;
            })};
  }
  return {ops.cutoff(), detail::assemble_blocks(ops, [&](const Eigen::MatrixXd& A, double theta) {
            const Eigen::MatrixXd S = -(A * A);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (S + S.transpose()));
            Eigen::VectorXd h(S.rows());
            for (Eigen::Index i = 0; i < h.size(); ++i)
              h[i] = cosine_transform(nu, theta * std::sqrt(std::max(0.0, eig.eigenvalues()[i])));
            const Eigen::MatrixXd out = eig.eigenvectors() * h.asDiagonal() * eig.eigenvectors().transpose();
            return Eigen::MatrixXd(0.5 * (out + out.transpose()));
          })};
}

inline CorrectorOperator corrector_operator(const NoiseCoefficients& theta, const LevyMeasure& nu, int n,
                                            CorrectorAssembly method = CorrectorAssembly::spectral) {
  return corrector_operator(NoiseOperators(theta, n), nu, method);
}

// (mu_2 / 2) sum_k theta_k^2 (A_k^n)^2, the second-order term of B.
inline Eigen::MatrixXd leading_order_corrector(const NoiseOperators& ops, const LevyMeasure& nu) {
  const double mu2 = second_moment(nu);
  return detail::assemble_blocks(ops, [&](const Eigen::MatrixXd& A, double theta) {
    return Eigen::MatrixXd(0.5 * mu2 * theta * theta * (A * A));
  });
}

// ||B f - kappa Delta f||_{L2}.
inline double corrector_vs_laplacian(const CorrectorOperator& B, double kappa, const SpectralField& testfn) {
  SpectralField f = project(testfn, B.cutoff());
  return (B.apply(f) - kappa * laplacian(f)).l2_norm();
}

}  // namespace eddy
