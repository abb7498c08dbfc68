#include "findex/galerkin.hpp"

#include <cmath>

#include "findex/trigpoly.hpp"

namespace findex {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSqrt2 = 1.4142135623730950488016887242097;
}  // namespace

SymmetricForm AssembledPair::A0_without_constants() const {
    const int d = basis.dim();
    const int c0 = basis.constant_offset();
    const int w = 2 * basis.n;
    Eigen::MatrixXd out(d - w, d - w);
    const auto& m = A0.matrix();
    out.topLeftCorner(c0, c0) = m.topLeftCorner(c0, c0);
    out.topRightCorner(c0, d - c0 - w) = m.topRightCorner(c0, d - c0 - w);
    out.bottomLeftCorner(d - c0 - w, c0) = m.bottomLeftCorner(d - c0 - w, c0);
    out.bottomRightCorner(d - c0 - w, d - c0 - w) = m.bottomRightCorner(d - c0 - w, d - c0 - w);
    return SymmetricForm(out);
}

AssembledPair assemble(const TimeSymmetricFamily& family, int N) {
    if (N < 1) fail(Err::Precondition, "cutoff N must be positive");
    const int n = family.n();
    const int w = 2 * n;
    FourierTruncation basis{n, N};
    const int d = basis.dim();
    const Eigen::MatrixXd J = standard_J(n);

    Eigen::MatrixXd A0 = Eigen::MatrixXd::Zero(d, d);
    for (int m = -N; m <= N; ++m)
        A0.block(basis.block_offset(m), basis.block_offset(m), w, w) =
            kTwoPi * m * Eigen::MatrixXd::Identity(w, w);

    // Coupling block for basis blocks (mr, mc):
    //   -int T_f(t) E(-2 pi mr t) C E(2 pi mc t) dt, E(s) = exp(s J),
    // expanded over the four cos/sin combinations with exact trig moments.
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(d, d);
    for (const auto& mode : family.modes()) {
        const Eigen::MatrixXd& C = mode.coeff;
        const Eigen::MatrixXd CJ = C * J;
        const Eigen::MatrixXd JC = J * C;
        const Eigen::MatrixXd JCJ = J * CJ;
        for (int mr = -N; mr <= N; ++mr) {
            for (int mc = -N; mc <= N; ++mc) {
                if (std::abs(std::abs(mr - mc)) != mode.freq && std::abs(mr + mc) != mode.freq)
                    continue;
                const double icc = trig_triple_moment(mode.is_sin, mode.freq, false, mr, false, mc);
                const double ics = trig_triple_moment(mode.is_sin, mode.freq, false, mr, true, mc);
                const double isc = trig_triple_moment(mode.is_sin, mode.freq, true, mr, false, mc);
                const double iss = trig_triple_moment(mode.is_sin, mode.freq, true, mr, true, mc);
                Eigen::MatrixXd block = Eigen::MatrixXd::Zero(w, w);
                if (icc != 0.0) block += icc * C;
                if (ics != 0.0) block += ics * CJ;
                if (isc != 0.0) block -= isc * JC;
                if (iss != 0.0) block -= iss * JCJ;
                P.block(basis.block_offset(mr), basis.block_offset(mc), w, w) -= block;
            }
        }
    }

    AssembledPair out{basis, SymmetricForm(A0), SymmetricForm(A0 + P, 1e-9), family.spectral_tail()};
    return out;
}

Eigen::MatrixXd loop_pairing_raw(int n, int N) {
    // Raw basis: constants e_j, then per frequency k the blocks
    // sqrt(2) cos(2 pi k t) e_j and sqrt(2) sin(2 pi k t) e_j.
    const int w = 2 * n;
    const int d = w * (2 * N + 1);
    const Eigen::MatrixXd J = standard_J(n);

    struct Fn {
        bool is_sin;
        int freq;
        double scale;
    };
    std::vector<Fn> fns;
    fns.push_back({false, 0, 1.0});
    for (int k = 1; k <= N; ++k) {
        fns.push_back({false, k, kSqrt2});
        fns.push_back({true, k, kSqrt2});
    }

    auto scalar = [](const Fn& f) {
        TrigScalar s = f.is_sin ? TrigScalar::sine(f.freq) : TrigScalar::cosine(f.freq);
        return s.scaled(f.scale);
    };
    auto dscalar = [](const Fn& f) {
        // d/dt of cos -> -2 pi k sin, sin -> 2 pi k cos
        TrigScalar s = f.is_sin ? TrigScalar::cosine(f.freq) : TrigScalar::sine(f.freq);
        const double a = f.is_sin ? kTwoPi * f.freq : -kTwoPi * f.freq;
        return s.scaled(f.scale * a);
    };

    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d, d);
    for (size_t a = 0; a < fns.size(); ++a) {
        for (size_t b = 0; b < fns.size(); ++b) {
            const double coupling = (scalar(fns[b]) * dscalar(fns[a])).integral();
            if (coupling == 0.0) continue;
            // <J f_b(t) e_j, f'_a(t) e_i> integrates to coupling * J[i][j]
            B.block(a * w, b * w, w, w) += coupling * J;
        }
    }
    return 0.5 * (B + B.transpose());
}

Eigen::MatrixXd raw_to_rotating(int n, int N) {
    // Rotating basis in raw coordinates: exp(2 pi m t J) e_j =
    // cos(2 pi |m| t) e_j + sign(m) sin(2 pi |m| t) J e_j.
    const int w = 2 * n;
    const int d = w * (2 * N + 1);
    const Eigen::MatrixXd J = standard_J(n);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(d, d);

    auto raw_offset_cos = [w](int k) { return k == 0 ? 0 : w * (2 * k - 1); };
    auto raw_offset_sin = [w](int k) { return w * (2 * k); };
    FourierTruncation basis{n, N};

    for (int m = -N; m <= N; ++m) {
        const int k = std::abs(m);
        const int col = basis.block_offset(m);
        if (m == 0) {
            T.block(0, col, w, w) = Eigen::MatrixXd::Identity(w, w);
            continue;
        }
        const double s = m > 0 ? 1.0 : -1.0;
        // raw cos/sin blocks carry the sqrt(2) normalization
        T.block(raw_offset_cos(k), col, w, w) = Eigen::MatrixXd::Identity(w, w) / kSqrt2;
        T.block(raw_offset_sin(k), col, w, w) = s * J / kSqrt2;
    }
    return T;
}

int bq_kernel_dimension(int n, int N) {
    if (n < 1 || N < 1) fail(Err::Precondition, "n, N must be positive");
    const Eigen::MatrixXd B = loop_pairing_raw(n, N);
    const InertiaTriple it = inertia(SymmetricForm(B), 1e-8 * std::max(1.0, B.cwiseAbs().maxCoeff()));
    return it.n_zero;
}

GalerkinIndexResult galerkin_index(const TimeSymmetricFamily& family,
                                   const std::vector<int>& cutoffs, double zero_tol,
                                   int stabilization_window) {
    TruncationFamily b0_family{[family](int N) {
        return assemble(family, N).A0_without_constants();
    }};
    TruncationFamily b1_family{[family](int N) { return assemble(family, N).Ah; }};

    RelativeSignatureResult rel =
        relative_signature(b0_family, b1_family, cutoffs, zero_tol, stabilization_window);
    if (rel.value % 2 != 0)
        fail(Err::OddDifference, "signature difference " + std::to_string(rel.value) + " is odd");
    return GalerkinIndexResult{rel.value / 2, std::move(rel)};
}

}  // namespace findex
