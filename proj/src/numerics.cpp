#include "jtrx/numerics.hpp"

#include <cmath>
#include <string>

namespace jtrx {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::DegenerateGain: return "DegenerateGain";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace jtrx

namespace jtrx::numerics {

namespace {

CMatrix symmetrized(const CMatrix& M, const char* name) {
  if (M.rows() != M.cols()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(name) + " is not square");
  }
  const double scale = M.norm();
  const double skew = (M - M.adjoint()).norm();
  if (skew > kHermitianTolerance * scale) {
    throw Error(ErrorKind::NotHermitian,
                std::string(name) + " deviates from Hermitian by " + std::to_string(skew));
  }
  return (M + M.adjoint()) * 0.5;
}

// Solves L^H x = y for lower-triangular L.
CVector back_substitute_adjoint(const CMatrix& L, const CVector& y) {
  const Eigen::Index n = L.rows();
  CVector x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    cd s = y(i);
    for (Eigen::Index k = i + 1; k < n; ++k) s -= std::conj(L(k, i)) * x(k);
    x(i) = s / L(i, i).real();
  }
  return x;
}

// Returns L^{-1} M for lower-triangular L, column by column.
CMatrix forward_solve(const CMatrix& L, const CMatrix& M) {
  const Eigen::Index n = L.rows();
  CMatrix out(n, M.cols());
  for (Eigen::Index c = 0; c < M.cols(); ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      cd s = M(i, c);
      for (Eigen::Index k = 0; k < i; ++k) s -= L(i, k) * out(k, c);
      out(i, c) = s / L(i, i).real();
    }
  }
  return out;
}

}  // namespace

void canonicalize_phase(CVector& v) {
  Eigen::Index pivot = -1;
  double best = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > best) {
      best = mag;
      pivot = i;
    }
  }
  if (pivot < 0) return;
  const cd rotation = std::conj(v(pivot)) / best;
  v *= rotation;
  v(pivot) = cd(std::abs(v(pivot)), 0.0);
}

void normalize_canonical(CVector& v) {
  const double n = v.norm();
  if (n == 0.0) return;
  v /= n;
  canonicalize_phase(v);
}

CMatrix cholesky_lower(const CMatrix& Y) {
  const Eigen::Index n = Y.rows();
  CMatrix L = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = Y(j, j).real();
    for (Eigen::Index k = 0; k < j; ++k) pivot -= std::norm(L(j, k));
    if (!(pivot > 0.0)) {
      throw Error(ErrorKind::NotPositiveDefinite,
                  "pivot " + std::to_string(j) + " is " + std::to_string(pivot));
    }
    const double ljj = std::sqrt(pivot);
    L(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      cd s = Y(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= L(i, k) * std::conj(L(j, k));
      L(i, j) = s / ljj;
    }
  }
  return L;
}

EigResult dominant_gen_eigvec(const HermitianPair& pair) {
  if (pair.X.rows() != pair.Y.rows() || pair.X.cols() != pair.Y.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "X and Y shapes differ");
  }
  if (pair.X.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "empty matrix pair");
  }
  const CMatrix X = symmetrized(pair.X, "X");
  const CMatrix Y = symmetrized(pair.Y, "Y");
  const CMatrix L = cholesky_lower(Y);

  // S = L^{-1} X L^{-H}; computed as L^{-1} (L^{-1} X^H)^H, which equals
  // L^{-1} X L^{-H} because X is Hermitian.
  const CMatrix left = forward_solve(L, X);
  CMatrix S = forward_solve(L, left.adjoint());
  S = (S + S.adjoint()).eval() * 0.5;

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(S);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "reduced eigenproblem did not converge");
  }
  const Eigen::Index top = S.rows() - 1;
  CVector v = back_substitute_adjoint(L, eig.eigenvectors().col(top));
  normalize_canonical(v);

  EigResult result;
  result.value = std::max(0.0, rayleigh_quotient({X, Y}, v));
  result.vector = std::move(v);
  return result;
}

double rayleigh_quotient(const HermitianPair& pair, const CVector& v) {
  const double num = v.dot(pair.X * v).real();
  const double den = v.dot(pair.Y * v).real();
  return num / den;
}

LinearSolve solve_linear(const RMatrix& A, const RVector& b) {
  if (A.rows() != A.cols() || A.rows() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch, "solve_linear expects square A matching b");
  }
  Eigen::PartialPivLU<RMatrix> lu(A);
  LinearSolve out;
  out.rcond = A.rows() == 0 ? 1.0 : lu.rcond();
  if (!(out.rcond >= kSingularRcond)) {
    throw Error(ErrorKind::Singular, "reciprocal condition " + std::to_string(out.rcond));
  }
  out.x = lu.solve(b);
  const double residual = (A * out.x - b).lpNorm<Eigen::Infinity>();
  const double bound = 1e-8 * (1.0 + (b.size() ? b.lpNorm<Eigen::Infinity>() : 0.0));
  if (!(residual <= bound)) {
    throw Error(ErrorKind::Singular, "residual " + std::to_string(residual) + " exceeds bound");
  }
  return out;
}

}  // namespace jtrx::numerics
