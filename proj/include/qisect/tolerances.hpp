#pragma once

namespace qisect {

/// Numerical tolerances used across the library. The members are the
/// compile-time defaults; pass a modified copy to override per call.
struct Tolerances {
    /// Closed-form search-operator entries vs the reflection product.
    double closed_form_abs = 1e-12;
    /// Orthogonality and checkerboard deviation of the search operator.
    double operator_structure = 1e-12;
    /// acos arguments within this window of [-1, 1] are clamped.
    double arccos_clamp = 1e-12;
    /// acos arguments beyond 1 by more than this are an upstream bug.
    double arccos_reject = 1e-9;
    /// Off-diagonal magnitude below which the 2x2 slope construction
    /// is abandoned for the generic eigensolver.
    double degenerate_offdiag = 1e-12;
    /// Eigenvector orthonormality, diagonalization residual, and
    /// eigenbasis reconstruction of the source state.
    double eigen_structure = 1e-10;
    /// Shared eigenvalues of the odd/even 2x2 sub-matrices.
    double submatrix_eigen_match = 1e-10;
    /// Analytic overlap vs repeated matrix application.
    double overlap_match = 1e-9;
    /// Norm drift allowance under repeated operator application.
    double norm_drift = 1e-9;
    /// Full state-vector vs 4D-subspace success probabilities.
    double subspace_match = 1e-10;
    /// Ancilla-circuit equivalence with the direct phase flip.
    double ancilla_equiv = 1e-12;
    /// gamma above this is outside the asymptotic-eigenphase regime.
    double asymptotic_gamma_guard = 0.05;
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

} // namespace qisect
