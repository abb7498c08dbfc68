#include "findex/symplectic.hpp"

#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "findex/numeric.hpp"
#include "findex/trigpoly.hpp"

namespace findex {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

Eigen::MatrixXd symmetrize_checked(const Eigen::MatrixXd& m, double rel_tol, const char* what) {
    if (m.rows() != m.cols()) fail(Err::DimensionMismatch, std::string(what) + ": not square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double defect = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (defect > rel_tol * scale)
        fail(Err::DimensionMismatch, std::string(what) + ": symmetry defect " + std::to_string(defect));
    return 0.5 * (m + m.transpose());
}

double symplectic_residual(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& J) {
    return (Q.transpose() * J * Q - J).cwiseAbs().maxCoeff();
}

// One RK4 step of Qdot = J S(t) Q.
Eigen::MatrixXd rk4_step(const std::function<Eigen::MatrixXd(double)>& S, const Eigen::MatrixXd& J,
                         const Eigen::MatrixXd& Q, double t, double h) {
    const Eigen::MatrixXd k1 = J * S(t) * Q;
    const Eigen::MatrixXd k2 = J * S(t + 0.5 * h) * (Q + 0.5 * h * k1);
    const Eigen::MatrixXd k3 = J * S(t + 0.5 * h) * (Q + 0.5 * h * k2);
    const Eigen::MatrixXd k4 = J * S(t + h) * (Q + h * k3);
    return Q + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double det_minus_identity(const Eigen::MatrixXd& Q) {
    return (Q - Eigen::MatrixXd::Identity(Q.rows(), Q.cols())).determinant();
}

// Orthonormal basis of the numerical kernel of Q - I (singular values < tol).
Eigen::MatrixXd identity_kernel(const Eigen::MatrixXd& Q, double tol) {
    const Eigen::MatrixXd A = Q - Eigen::MatrixXd::Identity(Q.rows(), Q.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int k = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] < tol) ++k;
    return svd.matrixV().rightCols(k);
}
}  // namespace

Eigen::MatrixXd standard_J(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    J.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    return J;
}

int HalfInteger::as_int() const {
    if (!is_integer())
        fail(Err::HalfIntegerResult, "value " + std::to_string(value()) + " is not integral");
    return twice / 2;
}

TimeSymmetricFamily TimeSymmetricFamily::trig(int n, std::vector<TrigMode> modes) {
    if (n < 1) fail(Err::Precondition, "n must be positive");
    TimeSymmetricFamily fam;
    fam.n_ = n;
    fam.kind_ = Kind::Trig;
    for (auto& m : modes) {
        if (m.freq < 0) fail(Err::Precondition, "mode frequency must be nonnegative");
        if (m.coeff.rows() != 2 * n) fail(Err::DimensionMismatch, "mode coefficient size");
        if (m.freq == 0 && m.is_sin) continue;  // sin(0) contributes nothing
        m.coeff = symmetrize_checked(m.coeff, 1e-12, "family mode");
        fam.modes_.push_back(std::move(m));
    }
    return fam;
}

TimeSymmetricFamily TimeSymmetricFamily::sampled(int n, const std::vector<Eigen::MatrixXd>& samples) {
    if (n < 1) fail(Err::Precondition, "n must be positive");
    const int M = static_cast<int>(samples.size());
    if (M < 4) fail(Err::Precondition, "need at least 4 samples");
    const int d = 2 * n;

    // Entrywise real FFT of the sample sequence; frequencies above M/2 - 1
    // are unresolved, so the construction keeps k <= (M-1)/2.
    const int kmax = (M - 1) / 2;
    std::vector<Eigen::MatrixXd> cosc(kmax + 1, Eigen::MatrixXd::Zero(d, d));
    std::vector<Eigen::MatrixXd> sinc(kmax + 1, Eigen::MatrixXd::Zero(d, d));
    Eigen::FFT<double> fft;
    std::vector<double> sig(M);
    std::vector<std::complex<double>> spec(M);
    double tail = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            for (int s = 0; s < M; ++s) sig[s] = 0.5 * (samples[s](i, j) + samples[s](j, i));
            fft.fwd(spec, sig);
            for (int k = 0; k <= kmax; ++k) {
                const double scale = (k == 0) ? 1.0 / M : 2.0 / M;
                cosc[k](i, j) = cosc[k](j, i) = scale * spec[k].real();
                sinc[k](i, j) = sinc[k](j, i) = -scale * spec[k].imag();
            }
            for (int k = kmax + 1; k <= M / 2; ++k) tail += std::abs(spec[k]) * 2.0 / M;
        }
    }

    TimeSymmetricFamily fam;
    fam.n_ = n;
    fam.kind_ = Kind::Sampled;
    const double drop = 1e-13 * std::max(1.0, cosc[0].cwiseAbs().maxCoeff());
    for (int k = 0; k <= kmax; ++k) {
        if (cosc[k].cwiseAbs().maxCoeff() > drop)
            fam.modes_.push_back({k, false, cosc[k]});
        else if (k > 0)
            tail += cosc[k].norm();
        if (k > 0) {
            if (sinc[k].cwiseAbs().maxCoeff() > drop)
                fam.modes_.push_back({k, true, sinc[k]});
            else
                tail += sinc[k].norm();
        }
    }
    fam.spectral_tail_ = tail;
    return fam;
}

Eigen::MatrixXd TimeSymmetricFamily::operator()(double t) const {
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(dim(), dim());
    for (const auto& m : modes_) {
        const double w = m.is_sin ? std::sin(kTwoPi * m.freq * t) : std::cos(kTwoPi * m.freq * t);
        R += w * m.coeff;
    }
    return R;
}

Eigen::MatrixXd TimeSymmetricFamily::mean() const {
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(dim(), dim());
    for (const auto& m : modes_)
        if (m.freq == 0 && !m.is_sin) R += m.coeff;
    return R;
}

int TimeSymmetricFamily::max_frequency() const {
    int mx = 0;
    for (const auto& m : modes_) mx = std::max(mx, m.freq);
    return mx;
}

double TimeSymmetricFamily::coefficient_norm() const {
    double s = 0.0;
    for (const auto& m : modes_) s += m.coeff.norm();
    return s;
}

void SymplecticPath::check(double sympl_tol) const {
    if (times.size() < 2) fail(Err::Precondition, "path needs at least 2 grid times");
    if (times.size() != matrices.size()) fail(Err::DimensionMismatch, "times/matrices mismatch");
    for (size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1]) fail(Err::Precondition, "grid times must increase");
    const Eigen::MatrixXd J = standard_J(n);
    for (const auto& Q : matrices) {
        if (Q.rows() != 2 * n || Q.cols() != 2 * n) fail(Err::DimensionMismatch, "matrix size");
        if (symplectic_residual(Q, J) > sympl_tol)
            fail(Err::SymplecticityLost, "grid matrix violates Q^T J Q = J");
    }
}

Eigen::MatrixXd path_value(const SymplecticPath& path, double t) {
    const auto& ts = path.times;
    if (t <= ts.front()) return path.matrices.front();
    if (t >= ts.back()) return path.matrices.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const size_t hi = static_cast<size_t>(it - ts.begin());
    const size_t lo = hi - 1;
    if (t == ts[lo]) return path.matrices[lo];

    if (path.generator) {
        const Eigen::MatrixXd J = standard_J(path.n);
        Eigen::MatrixXd Q = path.matrices[lo];
        const int nsub = 8;
        const double h = (t - ts[lo]) / nsub;
        double tau = ts[lo];
        for (int s = 0; s < nsub; ++s, tau += h) Q = rk4_step(path.generator, J, Q, tau, h);
        return Q;
    }
    // No generator: interpolate along the group through the cell.
    const double s = (t - ts[lo]) / (ts[hi] - ts[lo]);
    const Eigen::MatrixXd G = (path.matrices[lo].inverse() * path.matrices[hi]).log();
    return path.matrices[lo] * (s * G).exp();
}

SymplecticPath reversed(const SymplecticPath& path) {
    SymplecticPath out;
    out.n = path.n;
    out.sympl_residual = path.sympl_residual;
    const double c = path.t0() + path.t1();
    const size_t M = path.times.size();
    out.times.resize(M);
    out.matrices.resize(M);
    for (size_t i = 0; i < M; ++i) {
        out.times[i] = c - path.times[M - 1 - i];
        out.matrices[i] = path.matrices[M - 1 - i];
    }
    if (path.junction) out.junction = c - *path.junction;
    if (path.generator) {
        auto gen = path.generator;
        out.generator = [gen, c](double t) -> Eigen::MatrixXd { return -gen(c - t); };
    }
    return out;
}

SymplecticPath integrate_linear_hamiltonian(const TimeSymmetricFamily& family, double t_end,
                                            int steps) {
    if (steps < 8) fail(Err::Precondition, "steps >= 8 required");
    if (!(t_end > 0.0 && t_end <= 1.0)) fail(Err::Precondition, "t_end must lie in (0, 1]");

    const Eigen::MatrixXd J = standard_J(family.n());
    auto S = [&family](double t) { return family(t); };

    SymplecticPath path;
    path.n = family.n();
    path.generator = S;

    // Fixed-step RK4 with monitored symplecticity; the substep count doubles
    // until the residual clears 1e-8 or the retry cap is hit.
    for (int sub = 1; sub <= 64; sub *= 2) {
        path.times.assign(1, 0.0);
        path.matrices.assign(1, Eigen::MatrixXd::Identity(2 * family.n(), 2 * family.n()));
        Eigen::MatrixXd Q = path.matrices[0];
        double residual = 0.0;
        const double h = t_end / (static_cast<double>(steps) * sub);
        for (int i = 0; i < steps; ++i) {
            double tau = i * t_end / steps;
            for (int s = 0; s < sub; ++s, tau += h) Q = rk4_step(S, J, Q, tau, h);
            path.times.push_back((i + 1) * t_end / steps);
            path.matrices.push_back(Q);
            residual = std::max(residual, symplectic_residual(Q, J));
        }
        path.sympl_residual = residual;
        if (residual <= 1e-8) return path;
    }
    if (path.sympl_residual > 1e-6)
        fail(Err::SymplecticityLost,
             "residual " + std::to_string(path.sympl_residual) + " after refinement cap");
    return path;
}

SymplecticPath maslov_path(const TimeSymmetricFamily& family, double epsilon, int steps) {
    if (epsilon <= 0.0) fail(Err::Precondition, "epsilon must be positive");
    const Eigen::MatrixXd Rbar = family.mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Rbar);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin <= 1e-9 * std::max(1.0, smax))
        fail(Err::DegenerateMeanHessian, "det(int R dt) vanishes within tolerance");

    const Eigen::MatrixXd J = standard_J(family.n());
    const Eigen::MatrixXd JR = J * Rbar;

    SymplecticPath main = integrate_linear_hamiltonian(family, 1.0, steps);

    SymplecticPath path;
    path.n = family.n();
    path.junction = 0.0;
    path.sympl_residual = main.sympl_residual;

    const int prefix_steps = std::max(8, static_cast<int>(std::ceil(steps * epsilon)));
    for (int i = 0; i <= prefix_steps; ++i) {
        const double t = -epsilon + epsilon * i / prefix_steps;
        if (i == prefix_steps) break;  // t = 0 comes from the main piece
        path.times.push_back(t);
        path.matrices.push_back((t * JR).exp());
    }
    path.times.insert(path.times.end(), main.times.begin(), main.times.end());
    path.matrices.insert(path.matrices.end(), main.matrices.begin(), main.matrices.end());

    path.generator = [family, Rbar](double t) -> Eigen::MatrixXd {
        return t < 0.0 ? Rbar : family(t);
    };
    return path;
}

namespace {

struct DetectorScales {
    double scan_floor;      // |det| below this flags a tangential candidate
    double strict_floor;    // refined |det| must drop below this
    double kernel_tol;      // singular values below this span the kernel
    double endpoint_floor;  // endpoint |det| below this is degenerate
};

DetectorScales detector_scales(const std::vector<double>& dets, double det_tol) {
    double gscale = 1.0;
    for (double g : dets) gscale = std::max(gscale, std::abs(g));
    DetectorScales s;
    s.scan_floor = det_tol >= 0.0 ? det_tol : 1e-2 * gscale;
    s.strict_floor = 1e-8 * gscale;
    s.kernel_tol = 1e-6;
    s.endpoint_floor = 1e-9 * gscale;
    return s;
}

}  // namespace

std::vector<Crossing> crossing_times(const SymplecticPath& path, double det_tol) {
    path.check(1e-6);
    const size_t M = path.times.size();
    std::vector<double> dets(M);
    for (size_t i = 0; i < M; ++i) dets[i] = det_minus_identity(path.matrices[i]);
    const DetectorScales sc = detector_scales(dets, det_tol);

    auto g = [&path](double t) { return det_minus_identity(path_value(path, t)); };

    if (std::abs(dets.front()) < sc.endpoint_floor)
        fail(Err::EndpointCrossing, "crossing at the initial time " + std::to_string(path.t0()));
    if (std::abs(dets.back()) < sc.endpoint_floor)
        fail(Err::EndpointCrossing, "crossing at the final time " + std::to_string(path.t1()));

    std::vector<double> roots;
    auto push_root = [&roots](double t) {
        for (double r : roots)
            if (std::abs(r - t) < 1e-8) return;
        roots.push_back(t);
    };

    for (size_t i = 0; i + 1 < M; ++i) {
        const double a = path.times[i], b = path.times[i + 1];
        if ((dets[i] < 0) != (dets[i + 1] < 0)) {
            push_root(bisect_root(g, a, b, 1e-10));
            continue;
        }
        // Tangential candidates: interior local minima of |det| under the floor.
        if (i > 0 && std::abs(dets[i]) < sc.scan_floor && std::abs(dets[i]) <= std::abs(dets[i - 1]) &&
            std::abs(dets[i]) <= std::abs(dets[i + 1])) {
            const double lo = path.times[i - 1], hi = b;
            const double t = golden_min([&g](double x) { return std::abs(g(x)); }, lo, hi, 1e-10);
            if (std::abs(g(t)) < sc.strict_floor) push_root(t);
        }
    }
    std::sort(roots.begin(), roots.end());

    std::vector<Crossing> out;
    const double margin = 1e-9 * (path.t1() - path.t0());
    for (double t : roots) {
        if (path.junction && std::abs(t - *path.junction) < 1e-7) t = *path.junction;
        if (t - path.t0() < margin || path.t1() - t < margin)
            fail(Err::EndpointCrossing, "refined crossing at boundary time " + std::to_string(t));
        const Eigen::MatrixXd K = identity_kernel(path_value(path, t), sc.kernel_tol);
        if (K.cols() == 0) continue;  // near miss rejected by the singular values
        out.push_back({t, static_cast<int>(K.cols())});
    }
    return out;
}

namespace {

// Crossing form <v_a, S(t*) v_b> on the identity kernel of Q(t*).
SymmetricForm form_on_kernel(const SymplecticPath& path, const TimeSymmetricFamily& family,
                             double t_star, const Eigen::MatrixXd& K) {
    Eigen::MatrixXd S;
    if (path.junction && t_star == *path.junction) {
        S = family.mean();
    } else if (path.generator) {
        S = path.generator(t_star);
    } else {
        S = family(t_star);
    }
    Eigen::MatrixXd F = K.transpose() * S * K;
    return SymmetricForm(0.5 * (F + F.transpose()));
}

}  // namespace

SymmetricForm crossing_form(const SymplecticPath& path, const TimeSymmetricFamily& family,
                            double t_star) {
    double t = t_star;
    if (path.junction && std::abs(t - *path.junction) < 1e-7) t = *path.junction;
    const Eigen::MatrixXd K = identity_kernel(path_value(path, t), 1e-6);
    if (K.cols() == 0)
        fail(Err::NotACrossing, "ker(Q(t)-I) is trivial at t = " + std::to_string(t_star));
    return form_on_kernel(path, family, t, K);
}

HalfInteger maslov_index(const SymplecticPath& path, const TimeSymmetricFamily& family) {
    path.check(1e-6);
    {
        std::vector<double> ends = {det_minus_identity(path.matrices.front()),
                                    det_minus_identity(path.matrices.back())};
        double gscale = 1.0;
        for (const auto& Q : path.matrices)
            gscale = std::max(gscale, std::abs(det_minus_identity(Q)));
        for (int i = 0; i < 2; ++i)
            if (std::abs(ends[i]) < 1e-9 * gscale)
                fail(Err::DegenerateEndpoint,
                     std::string(i == 0 ? "initial" : "final") + " endpoint of the path is degenerate");
    }

    std::vector<Crossing> crossings;
    try {
        crossings = crossing_times(path);
    } catch (const ComputationError& e) {
        if (e.code() == Err::EndpointCrossing) fail(Err::DegenerateEndpoint, e.what());
        throw;
    }

    int twice = 0;
    for (const auto& c : crossings) {
        const Eigen::MatrixXd K = identity_kernel(path_value(path, c.time), 1e-6);
        const SymmetricForm F = form_on_kernel(path, family, c.time, K);
        const InertiaTriple it = inertia(F, std::max(1e-10, 1e-8 * F.matrix().cwiseAbs().maxCoeff()));
        if (it.n_zero > 0)
            fail(Err::DegenerateCrossing,
                 "crossing form has a kernel at t = " + std::to_string(c.time));
        const bool half = path.junction && c.time == *path.junction;
        twice += half ? it.signature() : 2 * it.signature();
    }
    return HalfInteger{twice};
}

int index_closed_form(const TimeSymmetricFamily& family, int grid) {
    if (grid < 16) fail(Err::Precondition, "grid too coarse");
    const int d = family.dim();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);

    const Eigen::MatrixXd Rbar = family.mean();
    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(Rbar);
        const double smax = svd.singularValues()(0);
        if (svd.singularValues()(d - 1) <= 1e-9 * std::max(1.0, smax))
            fail(Err::DegenerateMeanHessian, "det(int R dt) vanishes within tolerance");
    }

    auto delta = [&](double t) { return (family(t) - I).determinant(); };

    std::vector<double> ts(grid + 1), vals(grid + 1);
    double vscale = 1.0;
    int small_count = 0;
    for (int i = 0; i <= grid; ++i) {
        ts[i] = static_cast<double>(i) / grid;
        vals[i] = delta(ts[i]);
        vscale = std::max(vscale, std::abs(vals[i]));
    }
    for (double v : vals)
        if (std::abs(v) < 1e-10 * vscale) ++small_count;
    if (small_count > grid / 5)
        fail(Err::RegularityFailure, "eigenvalue-one set is not isolated in t");

    std::vector<double> roots;
    auto push_root = [&roots](double t) {
        for (double r : roots)
            if (std::abs(r - t) < 1e-8) return;
        if (t > 1e-9 && t < 1.0 - 1e-9) roots.push_back(t);
    };
    for (int i = 0; i < grid; ++i) {
        if ((vals[i] < 0) != (vals[i + 1] < 0)) {
            push_root(bisect_root(delta, ts[i], ts[i + 1], 1e-12));
        } else if (i > 0 && std::abs(vals[i]) < 1e-3 * vscale &&
                   std::abs(vals[i]) <= std::abs(vals[i - 1]) &&
                   std::abs(vals[i]) <= std::abs(vals[i + 1])) {
            const double t =
                golden_min([&delta](double x) { return std::abs(delta(x)); }, ts[i - 1], ts[i + 1], 1e-12);
            if (std::abs(delta(t)) < 1e-9 * vscale) push_root(t);
        }
    }
    std::sort(roots.begin(), roots.end());

    int interior = 0;
    for (double t : roots) {
        const Eigen::MatrixXd R = family(t);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R);
        if (es.info() != Eigen::Success) fail(Err::EigenFailure, "eigensolver on R(t)");
        std::vector<int> idx;
        for (int i = 0; i < d; ++i)
            if (std::abs(es.eigenvalues()[i] - 1.0) < 1e-6) idx.push_back(i);
        if (idx.empty()) continue;
        Eigen::MatrixXd K(d, static_cast<int>(idx.size()));
        for (size_t j = 0; j < idx.size(); ++j) K.col(j) = es.eigenvectors().col(idx[j]);
        Eigen::MatrixXd F = K.transpose() * R * K;
        const InertiaTriple it = inertia(SymmetricForm(0.5 * (F + F.transpose())),
                                         std::max(1e-10, 1e-8 * F.cwiseAbs().maxCoeff()));
        if (it.n_zero > 0)
            fail(Err::RegularityFailure,
                 "restriction of <R_t ., .> to the eigenvalue-one subspace is degenerate at t = " +
                     std::to_string(t));
        interior += it.signature();
    }

    const int sgn0 = signature(SymmetricForm(family(0.0)));
    const int sgnbar = signature(SymmetricForm(Rbar));
    if ((sgn0 + sgnbar) % 2 != 0)
        fail(Err::HalfIntegerResult, "boundary signatures " + std::to_string(sgn0) + " and " +
                                         std::to_string(sgnbar) + " have different parity");
    return interior + (sgn0 + sgnbar) / 2;
}

}  // namespace findex
