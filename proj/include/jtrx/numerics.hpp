#pragma once

#include "jtrx/types.hpp"

namespace jtrx::numerics {

/// Pair (X, Y) of Hermitian matrices with Y positive definite, as they
/// appear in a generalized Rayleigh quotient (v^H X v) / (v^H Y v).
struct HermitianPair {
  CMatrix X;
  CMatrix Y;
};

struct EigResult {
  CVector vector;  // unit norm, canonical phase
  double value = 0.0;
};

/// Relative Frobenius tolerance on Hermitian symmetry. Inputs within it are
/// symmetrized as (X + X^H) / 2; inputs beyond it are rejected.
inline constexpr double kHermitianTolerance = 1e-10;

/// Reciprocal condition below which solve_linear reports Singular.
inline constexpr double kSingularRcond = 1e-14;

/// Rotates v by a unit-modulus scalar so that its largest-magnitude entry
/// (lowest index on ties) is real and nonnegative.
void canonicalize_phase(CVector& v);

/// Unit-normalizes and phase-canonicalizes v in place. A zero vector is left
/// untouched.
void normalize_canonical(CVector& v);

/// Lower-triangular L with Y = L L^H. Throws NotPositiveDefinite when a pivot
/// is not strictly positive.
CMatrix cholesky_lower(const CMatrix& Y);

/// Dominant generalized eigenvector of (X, Y): the maximizer of the
/// generalized Rayleigh quotient. Computed by reducing to the standard
/// Hermitian problem on L^{-1} X L^{-H} with Y = L L^H, then mapping the top
/// eigenvector back through L^{-H}.
EigResult dominant_gen_eigvec(const HermitianPair& pair);

/// (v^H X v) / (v^H Y v).
double rayleigh_quotient(const HermitianPair& pair, const CVector& v);

struct LinearSolve {
  RVector x;
  double rcond = 0.0;  // reciprocal 1-norm condition estimate
};

/// Solves A x = b by LU with partial pivoting. Throws Singular when the
/// reciprocal condition estimate drops below kSingularRcond, or when the
/// residual bound ||Ax - b||_inf <= 1e-8 (1 + ||b||_inf) is not met.
LinearSolve solve_linear(const RMatrix& A, const RVector& b);

}  // namespace jtrx::numerics
