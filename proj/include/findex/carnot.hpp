#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "findex/errors.hpp"

namespace findex {

/// Step-two Carnot algebra encoded by its pencil of skew generators:
/// omega in W* maps to A_omega = sum_i omega_i A^(i) in so(V).  Generators
/// are skew-symmetrized on construction and must be linearly independent.
class CarnotAlgebra {
  public:
    CarnotAlgebra(int dimV, int dimW, std::vector<Eigen::MatrixXd> generators);

    int dimV() const { return dimV_; }
    int dimW() const { return dimW_; }
    const std::vector<Eigen::MatrixXd>& generators() const { return generators_; }

    Eigen::MatrixXd pencil(const Eigen::VectorXd& omega) const;

  private:
    int dimV_;
    int dimW_;
    std::vector<Eigen::MatrixXd> generators_;
};

/// Moduli of the eigenvalue pairs +- i alpha of A_omega, ascending with
/// multiplicity; m = floor(dimV / 2) values.
std::vector<double> alphas(const CarnotAlgebra& algebra, const Eigen::VectorXd& omega);

struct LineSample {
    double tau = 0.0;
    std::vector<double> lambda;  // sorted branch values at omega(tau)
    double phi = 0.0;            // their sum
};

/// Samples the eigenvalue branches along the affine line
/// omega(tau) = w/|w|^2 + tau * w_perp (so <omega, w> = 1); the division by
/// <omega, w> is absorbed into the parameterization.  Requires dimW = 2.
std::vector<LineSample> line_samples(const CarnotAlgebra& algebra, const Eigen::VectorXd& w,
                                     const std::vector<double>& tau_grid);

/// Positive measure on the half-line: atoms plus a piecewise-constant
/// density over sorted breakpoints.
class Measure1D {
  public:
    void add_atom(double location, double weight);
    /// Uniform chunk of the given mass on [a, b]; collapses to an atom when
    /// the interval is numerically a point.
    void add_chunk(double a, double b, double mass);
    /// Sorts events and consolidates the density; call once after filling.
    void finalize();

    double cdf(double t) const;
    double total_mass() const;

    const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }
    /// Breakpoints b_0 < ... < b_k and density values on (b_i, b_{i+1}).
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& densities() const { return densities_; }

  private:
    std::vector<std::pair<double, double>> atoms_;
    std::vector<std::pair<double, double>> events_;  // (location, density jump)
    std::vector<double> breakpoints_;
    std::vector<double> densities_;
    std::vector<double> cumulative_;
    bool finalized_ = false;
};

struct MeasureParams {
    double horizon = 3.0;      // report window [0, T]
    int grid_density = 4096;   // initial tau samples across the range
    double initial_tau = 1.0;  // starting half-width of the tau range
    double cdf_tol = 1e-3;     // Cauchy tolerance under grid doubling
    double tau_cap = 1e6;
};

/// Pushforward under phi of the total variation of the sorted branches,
/// restricted to [0, horizon]; the tau range auto-extends until phi clears
/// the horizon on both ends (HorizonTooSmall at the cap).  Requires dimW = 2.
Measure1D limit_measure_b(const CarnotAlgebra& algebra, const Eigen::VectorXd& w,
                          const MeasureParams& params = {});

/// Unit-density measure on [0, min phi], the minimum located by grid search
/// plus golden-section refinement to 1e-8.
Measure1D limit_measure_r(const CarnotAlgebra& algebra, const Eigen::VectorXd& w,
                          const MeasureParams& params = {});

/// Minimum of phi over the line, refined to 1e-8.
double min_phi(const CarnotAlgebra& algebra, const Eigen::VectorXd& w,
               const MeasureParams& params = {});

struct SimpleSpectrumResult {
    bool found = false;
    Eigen::VectorXd witness;
};

/// Random search for omega with alpha_j pairwise distinct and nonzero beyond
/// the gap tolerance 1e-8; false after the sample budget is legitimate.
SimpleSpectrumResult check_simple_spectrum(const CarnotAlgebra& algebra, int samples,
                                           std::uint64_t seed);

}  // namespace findex
