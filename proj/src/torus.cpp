#include "findex/torus.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace findex {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TorusHamiltonian::TorusHamiltonian(int n, std::vector<Mode> modes) : n_(n) {
    if (n < 1) fail(Err::Precondition, "n must be positive");
    for (auto& m : modes) {
        if (m.k_q.size() != 2 * n) fail(Err::DimensionMismatch, "wavevector must have length 2n");
        if (m.amp != 0.0) modes_.push_back(std::move(m));
    }
}

double TorusHamiltonian::value(double t, const Eigen::VectorXd& q) const {
    double h = 0.0;
    for (const auto& m : modes_)
        h += m.amp * std::cos(kTwoPi * (m.k_t * t + m.k_q.cast<double>().dot(q)) + m.phase);
    return h;
}

Eigen::VectorXd TorusHamiltonian::gradient(double t, const Eigen::VectorXd& q) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim());
    for (const auto& m : modes_) {
        const double arg = kTwoPi * (m.k_t * t + m.k_q.cast<double>().dot(q)) + m.phase;
        g -= m.amp * kTwoPi * std::sin(arg) * m.k_q.cast<double>();
    }
    return g;
}

Eigen::MatrixXd TorusHamiltonian::hessian(double t, const Eigen::VectorXd& q) const {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim(), dim());
    for (const auto& m : modes_) {
        const double arg = kTwoPi * (m.k_t * t + m.k_q.cast<double>().dot(q)) + m.phase;
        const Eigen::VectorXd k = m.k_q.cast<double>();
        H -= m.amp * kTwoPi * kTwoPi * std::cos(arg) * (k * k.transpose());
    }
    return H;
}

double TorusHamiltonian::sup_norm_bound() const {
    double s = 0.0;
    for (const auto& m : modes_) s += std::abs(m.amp);
    return s;
}

bool TorusHamiltonian::autonomous() const {
    for (const auto& m : modes_)
        if (m.k_t != 0) return false;
    return true;
}

bool TorusHamiltonian::vanishes() const { return modes_.empty(); }

Eigen::VectorXd wrap_torus(const Eigen::VectorXd& q) {
    Eigen::VectorXd out = q;
    for (int i = 0; i < out.size(); ++i) {
        out[i] -= std::floor(out[i]);
        if (out[i] >= 1.0) out[i] = 0.0;  // guard against floor rounding at 1-eps
    }
    return out;
}

Eigen::VectorXd wrap_centered(const Eigen::VectorXd& q) {
    Eigen::VectorXd out = q;
    for (int i = 0; i < out.size(); ++i) out[i] -= std::round(out[i]);
    return out;
}

double torus_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return wrap_centered(a - b).cwiseAbs().maxCoeff();
}

namespace {

// RK4 on the lifted torus flow, optionally carrying the variational system.
struct FlowIntegrator {
    const TorusHamiltonian& h;
    const Eigen::MatrixXd J;

    explicit FlowIntegrator(const TorusHamiltonian& ham) : h(ham), J(standard_J(ham.n())) {}

    Eigen::VectorXd field(double t, const Eigen::VectorXd& q) const { return J * h.gradient(t, q); }

    Eigen::VectorXd step(double t, double dt, const Eigen::VectorXd& q) const {
        const Eigen::VectorXd k1 = field(t, q);
        const Eigen::VectorXd k2 = field(t + 0.5 * dt, q + 0.5 * dt * k1);
        const Eigen::VectorXd k3 = field(t + 0.5 * dt, q + 0.5 * dt * k2);
        const Eigen::VectorXd k4 = field(t + dt, q + dt * k3);
        return q + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    }

    // One combined step of (q, Xi) with Xidot = J d2h(q) Xi.
    void step_var(double t, double dt, Eigen::VectorXd& q, Eigen::MatrixXd& Xi) const {
        const auto fq = [this](double s, const Eigen::VectorXd& x) { return field(s, x); };
        const auto fXi = [this](double s, const Eigen::VectorXd& x, const Eigen::MatrixXd& M) {
            return Eigen::MatrixXd(J * h.hessian(s, x) * M);
        };
        const Eigen::VectorXd k1 = fq(t, q);
        const Eigen::MatrixXd K1 = fXi(t, q, Xi);
        const Eigen::VectorXd k2 = fq(t + 0.5 * dt, q + 0.5 * dt * k1);
        const Eigen::MatrixXd K2 = fXi(t + 0.5 * dt, q + 0.5 * dt * k1, Xi + 0.5 * dt * K1);
        const Eigen::VectorXd k3 = fq(t + 0.5 * dt, q + 0.5 * dt * k2);
        const Eigen::MatrixXd K3 = fXi(t + 0.5 * dt, q + 0.5 * dt * k2, Xi + 0.5 * dt * K2);
        const Eigen::VectorXd k4 = fq(t + dt, q + dt * k3);
        const Eigen::MatrixXd K4 = fXi(t + dt, q + dt * k3, Xi + dt * K3);
        q += (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
        Xi += (dt / 6.0) * (K1 + 2 * K2 + 2 * K3 + K4);
    }

    Eigen::VectorXd run(const Eigen::VectorXd& q0, double t_end, int nsteps) const {
        Eigen::VectorXd q = q0;
        const double dt = t_end / nsteps;
        for (int i = 0; i < nsteps; ++i) q = step(i * dt, dt, q);
        return q;
    }
};

}  // namespace

FlowResult flow(const TorusHamiltonian& h, const Eigen::VectorXd& q0, double t, int steps) {
    if (steps < 32) fail(Err::Precondition, "steps >= 32 required");
    if (q0.size() != h.dim()) fail(Err::DimensionMismatch, "q0 size");
    FlowIntegrator integ(h);
    if (t == 0.0) return {wrap_torus(q0), 0.0};
    const Eigen::VectorXd coarse = integ.run(q0, t, steps);
    const Eigen::VectorXd fine = integ.run(q0, t, 2 * steps);
    return {wrap_torus(fine), torus_distance(coarse, fine)};
}

MonodromyResult monodromy(const TorusHamiltonian& h, const Eigen::VectorXd& q0, int steps) {
    if (steps < 32) fail(Err::Precondition, "steps >= 32 required");
    if (q0.size() != h.dim()) fail(Err::DimensionMismatch, "q0 size");
    FlowIntegrator integ(h);
    const Eigen::MatrixXd J = standard_J(h.n());

    MonodromyResult out;
    for (int sub = 1; sub <= 64; sub *= 2) {
        Eigen::VectorXd q = q0;
        Eigen::MatrixXd Xi = Eigen::MatrixXd::Identity(h.dim(), h.dim());
        const int nsteps = steps * sub;
        const double dt = 1.0 / nsteps;
        for (int i = 0; i < nsteps; ++i) integ.step_var(i * dt, dt, q, Xi);
        out.matrix = Xi;
        out.endpoint = wrap_torus(q);
        out.sympl_residual = (Xi.transpose() * J * Xi - J).cwiseAbs().maxCoeff();
        if (out.sympl_residual <= 1e-8) return out;
    }
    if (out.sympl_residual > 1e-6)
        fail(Err::SymplecticityLost, "monodromy residual " + std::to_string(out.sympl_residual));
    return out;
}

namespace {

// Trajectory samples (lifted) plus winding over one period.
void fill_trajectory(const TorusHamiltonian& h, PeriodicOrbit& orbit, int steps) {
    FlowIntegrator integ(h);
    orbit.samples.clear();
    orbit.samples.reserve(steps + 1);
    Eigen::VectorXd q = orbit.q0;
    orbit.samples.push_back(q);
    const double dt = 1.0 / steps;
    for (int i = 0; i < steps; ++i) {
        q = integ.step(i * dt, dt, q);
        orbit.samples.push_back(q);
    }
    const Eigen::VectorXd disp = orbit.samples.back() - orbit.samples.front();
    orbit.winding = disp.array().round().cast<int>();
}

}  // namespace

OrbitSearchResult find_periodic_orbits(const TorusHamiltonian& h, const OrbitSearchParams& p) {
    if (p.newton_tol < 1e-12) fail(Err::Precondition, "newton_tol >= 1e-12 required");
    if (h.vanishes())
        fail(Err::DegenerateProblem, "h = 0: every point is fixed and the Jacobian vanishes");

    OrbitSearchResult result;
    const int d = h.dim();
    std::vector<PeriodicOrbit> candidates;

    std::vector<int> idx(d, 0);
    const int total = static_cast<int>(std::llround(std::pow(p.seeds_per_axis, d)));
    result.seeds_total = total;

    for (int s = 0; s < total; ++s) {
        Eigen::VectorXd q(d);
        int rem = s;
        for (int i = 0; i < d; ++i) {
            q[i] = (rem % p.seeds_per_axis + 0.5) / p.seeds_per_axis;
            rem /= p.seeds_per_axis;
        }

        // Newton on q -> P^1(q) - q with the displacement wrapped to the
        // nearest representative.
        std::vector<double> history;
        bool converged = false, singular = false;
        for (int it = 0; it < p.max_iterations; ++it) {
            const MonodromyResult m = monodromy(h, q, p.steps);
            const Eigen::VectorXd G = wrap_centered(m.endpoint - q);
            const double res = G.cwiseAbs().maxCoeff();
            history.push_back(res);
            if (res <= p.newton_tol) {
                converged = true;
                break;
            }
            Eigen::MatrixXd A = m.matrix - Eigen::MatrixXd::Identity(d, d);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
            if (svd.singularValues()(d - 1) < p.jacobian_tol) {
                singular = true;
                break;
            }
            q = wrap_torus(q - svd.solve(G));
        }
        if (singular) {
            ++result.seeds_skipped_singular;
            continue;
        }
        if (!converged) {
            ++result.seeds_diverged;
            continue;
        }

        PeriodicOrbit orbit;
        orbit.q0 = wrap_torus(q);
        orbit.newton_residuals = history;
        candidates.push_back(std::move(orbit));
    }

    if (candidates.empty() && result.seeds_skipped_singular == result.seeds_total)
        fail(Err::DegenerateProblem, "fixed-point Jacobian singular at every seed");

    // Deterministic dedup: lexicographic order, then torus-distance merge.
    std::sort(candidates.begin(), candidates.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
        for (int i = 0; i < a.q0.size(); ++i)
            if (a.q0[i] != b.q0[i]) return a.q0[i] < b.q0[i];
        return false;
    });
    for (auto& c : candidates) {
        bool dup = false;
        for (const auto& kept : result.orbits)
            if (torus_distance(c.q0, kept.q0) < p.dedup_tol) {
                dup = true;
                break;
            }
        if (dup) continue;
        const MonodromyResult m = monodromy(h, c.q0, p.steps);
        c.monodromy = m.matrix;
        c.residual = torus_distance(m.endpoint, c.q0);
        fill_trajectory(h, c, p.steps);
        result.orbits.push_back(std::move(c));
    }
    return result;
}

bool is_nondegenerate(const PeriodicOrbit& orbit, double tol) {
    const int d = static_cast<int>(orbit.monodromy.rows());
    return std::abs((orbit.monodromy - Eigen::MatrixXd::Identity(d, d)).determinant()) > tol;
}

TimeSymmetricFamily hessian_family(const TorusHamiltonian& h, const PeriodicOrbit& orbit) {
    const int n = h.n();
    double travel = 0.0;
    for (const auto& s : orbit.samples) travel = std::max(travel, (s - orbit.samples[0]).cwiseAbs().maxCoeff());

    if (travel < 1e-12) {
        // Equilibrium: d^2 h_t(q0) is an exact trig polynomial in t.
        // Each mode contributes cos(2 pi k_t t + psi) k k^T with
        // psi = 2 pi <k_q, q0> + phase.
        std::vector<TimeSymmetricFamily::TrigMode> modes;
        for (const auto& m : h.modes()) {
            const double psi = kTwoPi * m.k_q.cast<double>().dot(orbit.q0) + m.phase;
            const Eigen::VectorXd k = m.k_q.cast<double>();
            const Eigen::MatrixXd kk = -m.amp * kTwoPi * kTwoPi * (k * k.transpose());
            const int f = std::abs(m.k_t);
            const double sgn = m.k_t >= 0 ? 1.0 : -1.0;
            // cos(2 pi k_t t + psi) = cos(psi) cos(2 pi f t) - sgn sin(psi) sin(2 pi f t)
            modes.push_back({f, false, std::cos(psi) * kk});
            if (f > 0) modes.push_back({f, true, -sgn * std::sin(psi) * kk});
        }
        return TimeSymmetricFamily::trig(n, std::move(modes));
    }

    // Moving orbit: sample d^2 h_t(gamma(t)) along the stored trajectory.
    const int M = static_cast<int>(orbit.samples.size()) - 1;
    std::vector<Eigen::MatrixXd> samples(M);
    for (int i = 0; i < M; ++i) {
        const double t = static_cast<double>(i) / M;
        samples[i] = h.hessian(t, orbit.samples[i]);
    }
    return TimeSymmetricFamily::sampled(n, samples);
}

ActionResult action(const TorusHamiltonian& h, const SampledLoop& loop) {
    const int M = static_cast<int>(loop.points.size());
    if (M < 8) fail(Err::Precondition, "need at least 8 loop samples");
    const int d = h.dim();

    // Lift: accumulate nearest-representative increments.
    std::vector<Eigen::VectorXd> lift(M + 1);
    lift[0] = loop.points[0];
    for (int i = 1; i < M; ++i)
        lift[i] = lift[i - 1] + wrap_centered(loop.points[i] - loop.points[i - 1]);
    lift[M] = lift[M - 1] + wrap_centered(loop.points[0] - loop.points[M - 1]);

    const Eigen::VectorXd disp = lift[M] - lift[0];
    for (int i = 0; i < d; ++i)
        if (std::abs(disp[i]) > 0.25)
            fail(Err::NonContractibleLoop, "winding " + std::to_string(std::lround(disp[i])) +
                                               " in coordinate " + std::to_string(i));

    const Eigen::MatrixXd J = standard_J(h.n());

    auto evaluate = [&](int stride) {
        const int m = M / stride;
        // Spectral derivative of the (contractible, hence periodic) lift.
        Eigen::FFT<double> fft;
        std::vector<std::vector<double>> deriv(d, std::vector<double>(m));
        for (int c = 0; c < d; ++c) {
            std::vector<double> sig(m);
            for (int i = 0; i < m; ++i) sig[i] = lift[i * stride][c];
            std::vector<std::complex<double>> spec(m);
            fft.fwd(spec, sig);
            for (int k = 0; k < m; ++k) {
                const int freq = (k <= m / 2) ? k : k - m;
                spec[k] *= std::complex<double>(0.0, kTwoPi * freq);
                if (2 * k == m) spec[k] = 0.0;  // drop the unmatched Nyquist mode
            }
            std::vector<double> out(m);
            fft.inv(out, spec);
            deriv[c] = std::move(out);
        }
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            const double t = static_cast<double>(i * stride) / M;
            const Eigen::VectorXd& g = lift[i * stride];
            Eigen::VectorXd gdot(d);
            for (int c = 0; c < d; ++c) gdot[c] = deriv[c][i];
            acc += 0.5 * (J * g).dot(gdot) - h.value(t, wrap_torus(g));
        }
        return acc / m;
    };

    const double full = evaluate(1);
    const double half = (M % 2 == 0) ? evaluate(2) : full;
    return {full, std::abs(full - half)};
}

}  // namespace findex
