#pragma once

// Reference data shared by the unit and acceptance suites.

#include "hypersec/linalg.hpp"

namespace hypersec::testing {

/// Middle-row secant system of the linear 3-variable problem when x1 and x3
/// follow identical trajectories (columns 1 and 3 coincide).
inline DenseMatrix degenerate_secant_matrix() {
    return DenseMatrix::from_rows({
        {-4.143137616670e-2, -1.429236794928e-1, -4.143137616670e-2},
        {-3.254780687737e-1, -3.617952748235e-1, -3.254780687737e-1},
        {+4.245219312263e-1, +6.382047251765e-1, +4.245219312263e-1},
    });
}

inline Vector degenerate_secant_rhs() { return {-1.843550556595e-1, -6.872733435972e-1, +1.062726656403e+0}; }

/// Reported singular values of the degenerate system.
inline Vector degenerate_singular_values() { return {1.060808064514, 9.516998001847e-2, 4.162068222172e-17}; }

/// Broyden Jacobian of the linear problem after 14 iterations from the identity.
inline DenseMatrix linear3_broyden_k14() {
    return DenseMatrix::from_rows({
        {1.124366, 0.599240, 0.0},
        {0.397825, 0.823632, 0.397825},
        {0.0, 0.599240, 1.124366},
    });
}

}  // namespace hypersec::testing
