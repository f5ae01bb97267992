#include "sadet/linalg.hpp"

namespace sadet::linalg {

namespace {

void check_input(const Eigen::Ref<const Eigen::MatrixXd>& M, const RankTolerance& tol,
                 bool allow_empty_cols) {
  tol.validate();
  if (M.rows() == 0 || (M.cols() == 0 && !allow_empty_cols))
    throw std::invalid_argument("linalg: matrix must be non-empty");
  if (!M.allFinite())
    throw DataQualityError("linalg: matrix contains non-finite entries");
}

Eigen::Index rank_from_singular_values(const Eigen::VectorXd& sv, const RankTolerance& tol) {
  if (sv.size() == 0) return 0;
  const double cut = tol.cutoff(sv(0));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return rank;
}

}  // namespace

Eigen::Index numerical_rank(const Eigen::Ref<const Eigen::MatrixXd>& M,
                            const RankTolerance& tol) {
  check_input(M, tol, /*allow_empty_cols=*/false);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
  return rank_from_singular_values(svd.singularValues(), tol);
}

KernelBasis left_kernel_basis(const Eigen::Ref<const Eigen::MatrixXd>& M,
                              const RankTolerance& tol) {
  check_input(M, tol, /*allow_empty_cols=*/true);
  const Eigen::Index rows = M.rows();
  KernelBasis basis;
  basis.ambient_dim = rows;
  if (M.cols() == 0) {
    basis.rank_estimate = 0;
    basis.rows = Eigen::MatrixXd::Identity(rows, rows);
    return basis;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU);
  basis.rank_estimate = rank_from_singular_values(svd.singularValues(), tol);
  if (basis.rank_estimate == 0) {
    basis.rows = Eigen::MatrixXd::Identity(rows, rows);
  } else {
    basis.rows = svd.matrixU().rightCols(rows - basis.rank_estimate).transpose();
  }
  return basis;
}

Eigen::MatrixXd left_annihilator_of_columns(const Eigen::Ref<const Eigen::MatrixXd>& M,
                                            const RankTolerance& tol) {
  return left_kernel_basis(M, tol).rows;
}

}  // namespace sadet::linalg
