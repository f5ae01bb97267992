#pragma once

#include <Eigen/Dense>

#include "sadet/types.hpp"

namespace sadet::linalg {

/// Cutoff policy for deciding which singular values count toward the rank.
///
/// In relative mode the cutoff is value * sigma_max of the matrix at hand,
/// which makes every downstream rank decision invariant under a global
/// rescaling of the data. The default separates the floating-point floor of
/// exactly rank-deficient data matrices (observed below 1e-13 * sigma_max)
/// from genuinely excited directions (above 1e-9 * sigma_max on the
/// bundled benchmark).
struct RankTolerance {
  enum class Mode { absolute, relative };

  Mode mode{Mode::relative};
  double value{1e-11};

  static RankTolerance absolute(double v) { return make(Mode::absolute, v); }
  static RankTolerance relative(double v) { return make(Mode::relative, v); }

  double cutoff(double sigma_max) const {
    return mode == Mode::absolute ? value : value * sigma_max;
  }

  void validate() const {
    if (!(value >= 0.0)) throw std::invalid_argument("RankTolerance: value must be >= 0");
    if (mode == Mode::relative && !(value < 1.0))
      throw std::invalid_argument("RankTolerance: relative value must be < 1");
  }

 private:
  static RankTolerance make(Mode m, double v) {
    RankTolerance t{m, v};
    t.validate();
    return t;
  }
};

/// Orthonormal basis of the left null space of a matrix.
///
/// `rows` is (ambient_dim - rank_estimate) x ambient_dim with orthonormal
/// rows; ambient_dim equals the row dimension of the source matrix.
struct KernelBasis {
  Eigen::MatrixXd rows;
  Eigen::Index ambient_dim{0};
  Eigen::Index rank_estimate{0};
};

/// Number of singular values above the tolerance cutoff.
///
/// Throws DataQualityError on non-finite entries; the matrix must be
/// non-empty. Deterministic for fixed input.
Eigen::Index numerical_rank(const Eigen::Ref<const Eigen::MatrixXd>& M,
                            const RankTolerance& tol = {});

/// Orthonormal rows spanning { v : v^T M = 0 }, with row count equal to
/// row-dim(M) - numerical_rank(M). Rank and kernel come from the same SVD,
/// so numerical_rank(M) + rows(left_kernel_basis(M)) = row-dim(M) always.
KernelBasis left_kernel_basis(const Eigen::Ref<const Eigen::MatrixXd>& M,
                              const RankTolerance& tol = {});

/// Orthonormal rows P with P * M = 0 annihilating the column space of M.
/// A matrix with zero columns (or numerical rank 0) yields the identity;
/// a matrix with full row-space coverage yields a 0-row P.
Eigen::MatrixXd left_annihilator_of_columns(const Eigen::Ref<const Eigen::MatrixXd>& M,
                                            const RankTolerance& tol = {});

}  // namespace sadet::linalg
