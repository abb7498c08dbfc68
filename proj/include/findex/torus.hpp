#pragma once

#include <Eigen/Dense>
#include <vector>

#include "findex/errors.hpp"
#include "findex/symplectic.hpp"

namespace findex {

/// Real trigonometric-polynomial Hamiltonian on the torus R^{2n}/Z^{2n},
///   h_t(q) = sum_m amp * cos(2 pi (k_t t + <k_q, q>) + phase),
/// with exact gradient and Hessian.  The symplectic structure is
/// sigma = <J ., .> for the standard J, so the Hamiltonian field is J grad h.
class TorusHamiltonian {
  public:
    struct Mode {
        int k_t = 0;
        Eigen::VectorXi k_q;  // 2n integer wavevector
        double amp = 0.0;
        double phase = 0.0;
    };

    TorusHamiltonian(int n, std::vector<Mode> modes);

    int n() const { return n_; }
    int dim() const { return 2 * n_; }
    const std::vector<Mode>& modes() const { return modes_; }

    double value(double t, const Eigen::VectorXd& q) const;
    Eigen::VectorXd gradient(double t, const Eigen::VectorXd& q) const;
    Eigen::MatrixXd hessian(double t, const Eigen::VectorXd& q) const;

    /// sup_t,q |h| <= sum |amp|.
    double sup_norm_bound() const;
    bool autonomous() const;
    bool vanishes() const;

  private:
    int n_;
    std::vector<Mode> modes_;
};

/// Componentwise wrap into [0, 1).
Eigen::VectorXd wrap_torus(const Eigen::VectorXd& q);
/// Componentwise representative in [-1/2, 1/2) of q mod 1.
Eigen::VectorXd wrap_centered(const Eigen::VectorXd& q);
/// Max-norm distance on the torus.
double torus_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct FlowResult {
    Eigen::VectorXd q;       // endpoint, wrapped to [0,1)
    double error_estimate;   // step-halving comparison
};

/// Integrates qdot = J grad h_t(q) from q0 over [0, t].
FlowResult flow(const TorusHamiltonian& h, const Eigen::VectorXd& q0, double t, int steps);

struct MonodromyResult {
    Eigen::MatrixXd matrix;   // linearization of the time-1 flow
    Eigen::VectorXd endpoint; // wrapped flow endpoint
    double sympl_residual;
};

/// Joint integration of the flow and its variational system over [0, 1];
/// substeps double until the monodromy is symplectic to 1e-8
/// (SymplecticityLost beyond 1e-6).
MonodromyResult monodromy(const TorusHamiltonian& h, const Eigen::VectorXd& q0, int steps);

struct PeriodicOrbit {
    Eigen::VectorXd q0;                      // in [0,1)^{2n}
    std::vector<Eigen::VectorXd> samples;    // lifted trajectory on the uniform grid over [0,1]
    Eigen::MatrixXd monodromy;
    double residual = 0.0;                   // torus distance |P^1(q0) - q0|
    Eigen::VectorXi winding;                 // lift displacement over one period
    std::vector<double> newton_residuals;    // convergence history
};

struct OrbitSearchParams {
    int seeds_per_axis = 8;
    double newton_tol = 1e-10;
    int steps = 512;
    int max_iterations = 40;
    double dedup_tol = 1e-6;
    double jacobian_tol = 1e-8;  // smallest singular value of monodromy - I
};

struct OrbitSearchResult {
    std::vector<PeriodicOrbit> orbits;
    int seeds_total = 0;
    int seeds_skipped_singular = 0;
    int seeds_diverged = 0;
};

/// Newton search for fixed points of the time-1 flow from a uniform seed
/// grid, deduplicated by torus distance.  Throws DegenerateProblem when the
/// fixed-point equation is singular everywhere (h = 0, or every seed skipped).
OrbitSearchResult find_periodic_orbits(const TorusHamiltonian& h, const OrbitSearchParams& params);

bool is_nondegenerate(const PeriodicOrbit& orbit, double tol);

/// Hessian family t -> d^2 h_t(gamma(t)) in the constant global frame.
/// Equilibrium orbits yield an exact trig family; moving orbits are sampled
/// along the stored trajectory and carried spectrally.
TimeSymmetricFamily hessian_family(const TorusHamiltonian& h, const PeriodicOrbit& orbit);

struct SampledLoop {
    /// Uniform samples q(i/M), i = 0..M-1, of a closed curve on the torus.
    std::vector<Eigen::VectorXd> points;
};

struct ActionResult {
    double value;
    double quadrature_error;
};

/// Action int s(gamma') - h_t(gamma) dt with the primitive
/// s = (1/2) sigma(gamma, gamma') on the lifted loop.  Throws
/// NonContractibleLoop when the loop winds.
ActionResult action(const TorusHamiltonian& h, const SampledLoop& loop);

}  // namespace findex
