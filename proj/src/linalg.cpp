#include "wh/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "wh/errors.hpp"

namespace wh {

ComplexVector dense_solve(const ComplexMatrix& A, const ComplexVector& b, double pivot_tol) {
  if (A.rows() != A.cols()) fail(ErrorCode::NonSquareSystem, "dense_solve needs a square matrix");
  Eigen::PartialPivLU<ComplexMatrix> lu(A);
  const auto& U = lu.matrixLU();
  double pmax = 0.0, pmin = INFINITY;
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    pmax = std::max(pmax, std::abs(U(i, i)));
    pmin = std::min(pmin, std::abs(U(i, i)));
  }
  if (U.rows() > 0 && (pmax == 0.0 || pmin <= pivot_tol * pmax))
    fail(ErrorCode::SingularSystem, "pivot below relative tolerance");
  return lu.solve(b);
}

cplx dense_det(const ComplexMatrix& A) {
  if (A.rows() != A.cols()) fail(ErrorCode::NonSquareSystem, "dense_det needs a square matrix");
  if (A.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<ComplexMatrix>(A).determinant();
}

std::vector<double> singular_values(const ComplexMatrix& A) {
  Eigen::JacobiSVD<ComplexMatrix> svd(A);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

int numerical_rank(const ComplexMatrix& A, double rel_tol) {
  if (A.size() == 0) return 0;
  const auto s = singular_values(A);
  if (s.empty() || s.front() == 0.0) return 0;
  int r = 0;
  for (double x : s)
    if (x > rel_tol * s.front()) ++r;
  return r;
}

int numerical_nullity(const ComplexMatrix& A, double rel_tol) {
  return static_cast<int>(A.cols()) - numerical_rank(A, rel_tol);
}

ComplexMatrix equilibrate_rows(const ComplexMatrix& A, std::vector<double>* norms) {
  ComplexMatrix B = A;
  if (norms) norms->assign(static_cast<size_t>(A.rows()), 1.0);
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double n = A.row(i).norm();
    if (n > 0.0) B.row(i) /= n;
    if (norms) (*norms)[static_cast<size_t>(i)] = n;
  }
  return B;
}

double hadamard_ratio(const ComplexMatrix& A) {
  return std::abs(dense_det(equilibrate_rows(A)));
}

LeastSquares least_squares(const ComplexMatrix& A, const ComplexMatrix& B, double rel_tol) {
  std::vector<double> rn;
  ComplexMatrix As = equilibrate_rows(A, &rn);
  ComplexMatrix Bs = B;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    if (rn[static_cast<size_t>(i)] > 0.0) Bs.row(i) /= rn[static_cast<size_t>(i)];
  Eigen::VectorXd cn(A.cols());
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    cn(j) = As.col(j).norm();
    if (cn(j) == 0.0) cn(j) = 1.0;
    As.col(j) /= cn(j);
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(rel_tol);
  ComplexMatrix y = svd.solve(Bs);
  for (Eigen::Index j = 0; j < A.cols(); ++j) y.row(j) /= cn(j);
  double res = 0.0;
  const ComplexMatrix R = As * ComplexMatrix((y.array().colwise() * cn.cast<cplx>().array()).matrix()) - Bs;
  for (Eigen::Index c = 0; c < B.cols(); ++c)
    res = std::max(res, R.col(c).norm() / std::max(1.0, Bs.col(c).norm()));
  return {y, res, static_cast<int>(svd.rank())};
}

double inf_norm(const ComplexMatrix& A) {
  double mx = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) mx = std::max(mx, A.row(i).cwiseAbs().sum());
  return mx;
}

}  // namespace wh
