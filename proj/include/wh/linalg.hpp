#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wh/polynomial.hpp"

namespace wh {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

ComplexVector dense_solve(const ComplexMatrix& A, const ComplexVector& b, double pivot_tol = 1e-14);
cplx dense_det(const ComplexMatrix& A);
std::vector<double> singular_values(const ComplexMatrix& A);
// cols - numerical rank, counting singular values <= rel_tol * sigma_max
int numerical_nullity(const ComplexMatrix& A, double rel_tol = 1e-9);
int numerical_rank(const ComplexMatrix& A, double rel_tol = 1e-9);
// Divides each row by its 2-norm; zero rows are left alone.
ComplexMatrix equilibrate_rows(const ComplexMatrix& A, std::vector<double>* norms = nullptr);
// |det A| / prod of row norms, in [0, 1]
double hadamard_ratio(const ComplexMatrix& A);

struct LeastSquares {
  ComplexMatrix x;
  double residual;  // max column ||Ax - b|| / max(1, ||b||)
  int rank;
};
// Row- and column-equilibrated SVD least squares.
LeastSquares least_squares(const ComplexMatrix& A, const ComplexMatrix& B, double rel_tol = 1e-13);

double inf_norm(const ComplexMatrix& A);

}  // namespace wh
