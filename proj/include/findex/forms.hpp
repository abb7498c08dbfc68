#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "findex/errors.hpp"

namespace findex {

/// Dense real symmetric bilinear form.  The matrix is symmetrized on
/// construction; the symmetry defect of the input must not exceed
/// symmetry_tol.
class SymmetricForm {
  public:
    explicit SymmetricForm(const Eigen::MatrixXd& entries, double symmetry_tol = 1e-10);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Eigen::MatrixXd& matrix() const { return mat_; }
    double symmetry_tol() const { return symmetry_tol_; }

    /// Congruence transform T^T A T.
    SymmetricForm congruent(const Eigen::MatrixXd& T) const;

    /// Direct sum with another form.
    SymmetricForm direct_sum(const SymmetricForm& other) const;

    SymmetricForm negated() const { return SymmetricForm(-mat_, symmetry_tol_); }

    /// Leading principal block of size d.
    SymmetricForm leading_block(int d) const;

  private:
    Eigen::MatrixXd mat_;
    double symmetry_tol_;
};

struct InertiaTriple {
    int n_plus = 0;
    int n_zero = 0;
    int n_minus = 0;

    int signature() const { return n_plus - n_minus; }
    int dim() const { return n_plus + n_zero + n_minus; }
    bool operator==(const InertiaTriple&) const = default;
};

/// Scale-aware default threshold: dim * eps * max |eigenvalue|.
double default_zero_tol(const Eigen::VectorXd& eigenvalues, int dim);

/// Counts of eigenvalues above, inside and below [-zero_tol, zero_tol].
/// zero_tol < 0 requests the scale-aware default.
InertiaTriple inertia(const SymmetricForm& form, double zero_tol = -1.0);

int signature(const SymmetricForm& form, double zero_tol = -1.0);

/// Directed family of nested truncations: cutoff N -> assembled form.
/// Nestedness (the cutoff-N form being the restriction of any later one)
/// is the caller's responsibility; it cannot be verified from the callable.
struct TruncationFamily {
    std::function<SymmetricForm(int)> assemble;
};

/// Truncation family given by leading principal blocks of one fixed matrix;
/// cutoff N selects the leading N x N block.
TruncationFamily leading_block_family(const Eigen::MatrixXd& full);

struct CutoffRecord {
    int cutoff = 0;
    InertiaTriple inertia0;
    InertiaTriple inertia1;
    bool skipped = false;  // degenerate truncation (n_zero > 0 on either side)
    int d() const { return inertia1.signature() - inertia0.signature(); }
};

struct RelativeSignatureResult {
    int value = 0;  // sgn(b1) - sgn(b0), stabilized over the trailing window
    std::vector<CutoffRecord> trace;
};

/// Stabilized relative signature sgn(b1(N)) - sgn(b0(N)) over the cutoff
/// schedule.  Cutoffs where either form has a numerically zero eigenvalue are
/// skipped and recorded.  Throws NoStabilization when the trailing
/// `stabilization_window` valid cutoffs do not share one value.
RelativeSignatureResult relative_signature(const TruncationFamily& b0_family,
                                           const TruncationFamily& b1_family,
                                           const std::vector<int>& cutoffs,
                                           double zero_tol = -1.0,
                                           int stabilization_window = 3);

}  // namespace findex
