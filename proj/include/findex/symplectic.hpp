#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "findex/errors.hpp"
#include "findex/forms.hpp"

namespace findex {

/// Standard complex structure on R^{2n}: J (x, y) = (-y, x), J^2 = -I.
/// The symplectic form used throughout is sigma(u, v) = <J u, v>.
Eigen::MatrixXd standard_J(int n);

/// Exact maslov/galerkin indices are half-integers; `twice` stores 2x the value.
struct HalfInteger {
    int twice = 0;

    bool is_integer() const { return twice % 2 == 0; }
    double value() const { return twice / 2.0; }
    /// Integer value; throws HalfIntegerResult when the value is fractional.
    int as_int() const;
    bool operator==(const HalfInteger&) const = default;
};

/// One-periodic family t -> R(t) of symmetric 2n x 2n matrices, either an
/// exact trigonometric polynomial or a spectral interpolant of uniform
/// samples.  Sampled families are converted to Fourier modes on construction,
/// so evaluation, means and Galerkin couplings share one code path; the
/// discarded spectral tail is recorded for quadrature reporting.
class TimeSymmetricFamily {
  public:
    struct TrigMode {
        int freq = 0;       // nonnegative
        bool is_sin = false;  // false: cos(2 pi f t), true: sin(2 pi f t)
        Eigen::MatrixXd coeff;
    };

    enum class Kind { Trig, Sampled };

    static TimeSymmetricFamily trig(int n, std::vector<TrigMode> modes);
    /// Uniform samples R(i/M), i = 0..M-1, of a smooth 1-periodic family.
    static TimeSymmetricFamily sampled(int n, const std::vector<Eigen::MatrixXd>& samples);

    int n() const { return n_; }
    int dim() const { return 2 * n_; }
    Kind kind() const { return kind_; }

    Eigen::MatrixXd operator()(double t) const;
    /// Mean over one period (the frequency-zero cosine coefficient).
    Eigen::MatrixXd mean() const;

    const std::vector<TrigMode>& modes() const { return modes_; }
    int max_frequency() const;
    /// Sum of Frobenius norms of the mode coefficients.
    double coefficient_norm() const;
    /// Frobenius mass of Fourier modes dropped when sampling; 0 for Kind::Trig.
    double spectral_tail() const { return spectral_tail_; }

  private:
    TimeSymmetricFamily() = default;
    int n_ = 0;
    Kind kind_ = Kind::Trig;
    std::vector<TrigMode> modes_;
    double spectral_tail_ = 0.0;
};

/// Time-sampled path in Sp(2n).  Produced paths carry the generator S with
/// Qdot = J S(t) Q, used for crossing forms and sub-grid evaluation, and
/// optionally a junction time: an identity crossing there is counted with
/// half weight and the mean-Hessian crossing form (glued-prefix convention).
struct SymplecticPath {
    int n = 0;
    std::vector<double> times;
    std::vector<Eigen::MatrixXd> matrices;
    double sympl_residual = 0.0;  // max over grid of |Q^T J Q - J|_max
    std::optional<double> junction;
    std::function<Eigen::MatrixXd(double)> generator;

    double t0() const { return times.front(); }
    double t1() const { return times.back(); }

    /// Validates grid shape and symplecticity within tol.
    void check(double sympl_tol) const;
};

/// Path value at arbitrary time: re-integrates from the nearest grid sample
/// when a generator is attached, otherwise interpolates along the group.
Eigen::MatrixXd path_value(const SymplecticPath& path, double t);

/// Orientation-reversed path on the same interval; crossing forms negate.
SymplecticPath reversed(const SymplecticPath& path);

/// Solves Qdot = J R(t) Q, Q(0) = I on a uniform grid over [0, t_end].
/// The step count is doubled internally until the symplecticity residual
/// drops below 1e-8 (SymplecticityLost beyond 1e-6 at the retry cap).
SymplecticPath integrate_linear_hamiltonian(const TimeSymmetricFamily& family, double t_end,
                                            int steps);

/// Path on [-epsilon, 1]: exp(t J Rbar) with Rbar = int_0^1 R dt on the
/// prefix, the fundamental solution of Qdot = J R(t) Q on [0, 1].  Both
/// pieces equal I at t = 0, which is marked as the junction.  Throws
/// DegenerateMeanHessian when Rbar is singular.
SymplecticPath maslov_path(const TimeSymmetricFamily& family, double epsilon, int steps);

struct Crossing {
    double time = 0.0;
    int kernel_dim = 0;
};

/// Times where det(Q(t) - I) vanishes: sign changes refined by bisection,
/// tangential dips below det_tol refined by |det| minimization.  Throws
/// EndpointCrossing when a crossing sits at the first or last grid time.
/// det_tol < 0 requests the default scan floor.
std::vector<Crossing> crossing_times(const SymplecticPath& path, double det_tol = -1.0);

/// Quadratic form xi -> sigma(xi, Qdot(t*) xi) on an orthonormal basis of
/// ker(Q(t*) - I); for generated paths this equals <xi, S(t*) xi>.
/// Throws NotACrossing when the kernel is numerically trivial.
SymmetricForm crossing_form(const SymplecticPath& path, const TimeSymmetricFamily& family,
                            double t_star);

/// Maslov index of the path with respect to the diagonal: interior crossings
/// contribute their full crossing-form signature, the junction crossing half
/// of it.  Endpoints must be nondegenerate.
HalfInteger maslov_index(const SymplecticPath& path, const TimeSymmetricFamily& family);

/// Closed-form index: sum over interior t of sgn(<R_t ., .> restricted to
/// the eigenvalue-one subspace of R_t) plus half the boundary signatures
/// sgn(R(0)) + sgn(mean R).  Eigenvalue-one times are located on a grid of
/// `grid` points with bisection refinement.  Disagreement with maslov_index
/// on some inputs is a known property of this formula; maslov_index is
/// authoritative (see README).
int index_closed_form(const TimeSymmetricFamily& family, int grid = 512);

}  // namespace findex
