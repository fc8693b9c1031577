#pragma once

#include "isoembed/common.hpp"

namespace isoembed::linalg {

// Eigenvalues of a small symmetric matrix in ascending order. 1x1 and 2x2
// use closed forms; larger sizes use cyclic Jacobi rotations until the
// off-diagonal mass falls below 1e-12 relative to the Frobenius norm.
Vector symmetric_eigenvalues(const Matrix& m);

double min_eigenvalue(const Matrix& m);
double max_eigenvalue(const Matrix& m);

// J^T J
Matrix pullback(const Matrix& jacobian);

}  // namespace isoembed::linalg
