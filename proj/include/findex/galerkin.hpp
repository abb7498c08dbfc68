#pragma once

#include <Eigen/Dense>
#include <vector>

#include "findex/forms.hpp"
#include "findex/symplectic.hpp"

namespace findex {

/// Real Fourier truncation of loops S^1 -> R^{2n} up to mode cutoff N.
///
/// The basis functions are the rotating frames
///     phi_{m,j}(t) = exp(2 pi m t J) e_j,   m = -N..N,  j = 1..2n,
/// ordered by ascending m with the constant block (m = 0) in the middle.
/// They are L^2-orthonormal, closed under the involution t -> -t (which maps
/// block m to block -m), and diagonalize the loop derivative pairing with
/// eigenvalue 2 pi m on block m.
struct FourierTruncation {
    int n = 0;
    int N = 0;

    int dim() const { return 2 * n * (2 * N + 1); }
    int block_offset(int m) const { return (m + N) * 2 * n; }  // m in [-N, N]
    int constant_offset() const { return block_offset(0); }
};

/// Galerkin truncations of the unperturbed loop form and its compact
/// perturbation by -int <R_t ., .> dt.
struct AssembledPair {
    FourierTruncation basis;
    SymmetricForm A0;  // derivative pairing, diagonal in the rotating basis
    SymmetricForm Ah;  // A0 minus the R-coupling
    double assembly_error = 0.0;  // spectral tail for sampled families

    SymmetricForm A0_without_constants() const;
};

/// Exact assembly at cutoff N.  Trig families are integrated in closed form;
/// sampled families carry their spectral tail as the reported assembly error
/// (above 1e-10 the pair is still returned, with the error recorded).
AssembledPair assemble(const TimeSymmetricFamily& family, int N);

/// Derivative pairing int <J phi_b, d/dt phi_a> dt assembled in the raw
/// cos/sin basis (constants, then cos/sin blocks per frequency).  Independent
/// of the closed-form diagonal route; used for kernel certification.
Eigen::MatrixXd loop_pairing_raw(int n, int N);

/// Change of basis from the raw cos/sin basis to the rotating-frame basis.
Eigen::MatrixXd raw_to_rotating(int n, int N);

/// Dimension of the numerical kernel of the loop pairing at cutoff N;
/// equals 2n exactly when the truncation is well balanced.
int bq_kernel_dimension(int n, int N);

struct GalerkinIndexResult {
    int index = 0;
    RelativeSignatureResult trace;
};

/// Index through the stabilized relative signature: half the difference
/// sgn(Ah(N)) - sgn(A0(N)), with the zero constant block excluded from A0 and
/// kept in Ah, identically at every cutoff.  Throws OddDifference when the
/// stabilized difference is odd and propagates NoStabilization.
GalerkinIndexResult galerkin_index(const TimeSymmetricFamily& family,
                                   const std::vector<int>& cutoffs = {8, 16, 32, 64, 128},
                                   double zero_tol = -1.0, int stabilization_window = 3);

}  // namespace findex
