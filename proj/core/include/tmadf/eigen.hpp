#pragma once

#include <vector>

#include "tmadf/types.hpp"

namespace tmadf {

struct EigenDecomposition {
    std::vector<double> values;  ///< descending
    CMatrix vectors;             ///< column i pairs with values[i]
};

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix. Stops when the
/// off-diagonal Frobenius mass drops below 1e-12 of the total; gives up with
/// Error(ConvergenceFailure) after 100*N^2 rotations. Input that is not Hermitian
/// to 1e-10 relative raises Error(NotHermitian).
EigenDecomposition hermitian_eigendecomposition(const CMatrix& matrix);

/// Singular values of an arbitrary matrix, descending (via the Gram matrix).
std::vector<double> singular_values(const CMatrix& matrix);

}  // namespace tmadf
