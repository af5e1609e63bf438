#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace memdomain::linalg {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using SparseCMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

/// Induced 1-norm (maximum absolute column sum).
double norm1(const CMatrix& a);
double norm1(const SparseCMatrix& a);

/// exp(a) by scaling and squaring: a is scaled by 2^-s with s chosen from the
/// 1-norm so that ||a 2^-s||_1 <= 1/2, the truncated Taylor series is summed
/// to machine precision and the result squared s times.
CMatrix expm(const CMatrix& a);

/// exp(scale * g) v without forming the exponential. The interval is split
/// into sub-steps with |scale| ||g||_1 / steps <= 1 and a truncated Taylor
/// series is applied on each.
CVector expm_action(const SparseCMatrix& g, Complex scale, const CVector& v);

/// Column-block version of expm_action.
CMatrix expm_action(const SparseCMatrix& g, Complex scale, const CMatrix& block);

/// Kronecker product of sparse matrices.
SparseCMatrix kron(const SparseCMatrix& a, const SparseCMatrix& b);

SparseCMatrix sparse_identity(Eigen::Index n);

}  // namespace memdomain::linalg
