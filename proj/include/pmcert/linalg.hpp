#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace pmcert {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Bloch = Eigen::Vector3d;

/// Thrown by cholesky_lower when a pivot falls below the rank threshold.
struct NotPositiveDefinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Largest singular value.
double operator_norm(const RealMatrix& m);
double operator_norm(const ComplexMatrix& m);

/// Square root of the sum of squared singular values.
double frobenius_norm(const RealMatrix& m);
double frobenius_norm(const ComplexMatrix& m);

/// Non-pivoted Cholesky factorization of a symmetric positive definite
/// matrix. Returns the lower factor L with g = L L^T and positive diagonal.
/// A pivot <= pivot_tol signals rank deficiency (NotPositiveDefinite).
RealMatrix cholesky_lower(const RealMatrix& g, double pivot_tol = 1e-12);

/// Moore-Penrose inverse (M^T M)^{-1} M^T of a tall matrix with full column
/// rank. Row-vector layouts (rows holding the data vectors) use this with the
/// matrix as-is; the result then acts on the left of row-stacked data.
RealMatrix pseudo_inverse_tall(const RealMatrix& m);

ComplexMatrix complex_identity(int d);

}  // namespace pmcert
