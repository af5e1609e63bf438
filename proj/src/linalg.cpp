#include "memdomain/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace memdomain::linalg {

double norm1(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

double norm1(const SparseCMatrix& a) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < a.outerSize(); ++j) {
    double col = 0.0;
    for (SparseCMatrix::InnerIterator it(a, j); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

CMatrix expm(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  const double norm = norm1(a);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const CMatrix scaled = a / std::ldexp(1.0, squarings);

  CMatrix result = CMatrix::Identity(n, n);
  CMatrix term = CMatrix::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    result += term;
    if (norm1(term) <= 1e-18 * norm1(result)) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

namespace {

template <class Dense>
Dense taylor_action(const SparseCMatrix& g, Complex scale, const Dense& v) {
  const double norm = std::abs(scale) * norm1(g);
  const int steps = std::max(1, static_cast<int>(std::ceil(norm)));
  const Complex h = scale / static_cast<double>(steps);
  Dense out = v;
  for (int s = 0; s < steps; ++s) {
    Dense term = out;
    Dense acc = out;
    const double acc_norm = acc.norm();
    for (int k = 1; k <= 60; ++k) {
      term = (g * term) * (h / static_cast<double>(k));
      acc += term;
      if (term.norm() <= 1e-18 * acc_norm) break;
    }
    out = std::move(acc);
  }
  return out;
}

}  // namespace

CVector expm_action(const SparseCMatrix& g, Complex scale, const CVector& v) {
  return taylor_action(g, scale, v);
}

CMatrix expm_action(const SparseCMatrix& g, Complex scale, const CMatrix& block) {
  return taylor_action(g, scale, block);
}

SparseCMatrix kron(const SparseCMatrix& a, const SparseCMatrix& b) {
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (Eigen::Index ja = 0; ja < a.outerSize(); ++ja) {
    for (SparseCMatrix::InnerIterator ia(a, ja); ia; ++ia) {
      for (Eigen::Index jb = 0; jb < b.outerSize(); ++jb) {
        for (SparseCMatrix::InnerIterator ib(b, jb); ib; ++ib) {
          triplets.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                                ia.value() * ib.value());
        }
      }
    }
  }
  SparseCMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

SparseCMatrix sparse_identity(Eigen::Index n) {
  SparseCMatrix id(n, n);
  id.setIdentity();
  return id;
}

}  // namespace memdomain::linalg
