#include "findex/morse.hpp"

#include <algorithm>
#include <sstream>

#include "findex/galerkin.hpp"

namespace findex {

std::vector<long long> betti_torus(int n) {
    if (n < 1) fail(Err::Precondition, "n must be positive");
    const int d = 2 * n;
    std::vector<long long> b(d + 1, 0);
    b[0] = 1;
    for (int i = 1; i <= d; ++i)
        for (int j = i; j >= 1; --j) b[j] += b[j - 1];
    return b;
}

MorseVerdict check_morse_inequalities(const OrbitInventory& inv) {
    const int n = inv.n;
    if (static_cast<int>(inv.betti.size()) != 2 * n + 1)
        fail(Err::DimensionMismatch, "betti list must have 2n+1 entries");
    for (const auto& o : inv.orbits)
        if (!is_nondegenerate(o.orbit, inv.nondeg_tol))
            fail(Err::DegenerateOrbitPresent, "orbit with |det(P1_* - I)| below tolerance");

    // Degrees: orbit index shifted by n, aligning the index range [-n, n]
    // with the homological degrees 0..2n of the Betti numbers.
    std::vector<int> degrees;
    for (const auto& o : inv.orbits) degrees.push_back(o.index + n);

    int dmin = 0, dmax = 2 * n;
    for (int deg : degrees) {
        dmin = std::min(dmin, deg);
        dmax = std::max(dmax, deg);
    }
    const int klo = dmin - 1;
    const int khi = dmax + 2 * n + 1;

    MorseVerdict v;
    v.all_ok = true;
    for (int k = klo; k <= khi; ++k) {
        long long lhs = 0;
        for (int j = 0; j <= std::min(k, 2 * n); ++j) {
            const long long term = inv.betti[j];
            lhs += ((k - j) % 2 == 0) ? term : -term;
        }
        long long rhs = 0;
        for (int deg : degrees) {
            if (deg > k) continue;
            rhs += ((k - deg) % 2 == 0) ? 1 : -1;
        }
        const bool ok = lhs <= rhs;
        v.rows.push_back({k, lhs, rhs, ok});
        v.all_ok = v.all_ok && ok;
    }

    v.euler_lhs = 0;
    for (int j = 0; j <= 2 * n; ++j) v.euler_lhs += (j % 2 == 0) ? inv.betti[j] : -inv.betti[j];
    v.euler_rhs = 0;
    for (int deg : degrees) v.euler_rhs += (deg % 2 == 0) ? 1 : -1;
    v.euler_ok = v.euler_lhs == v.euler_rhs;
    return v;
}

MorseReport morse_report(const TorusHamiltonian& h, const MorseParams& params) {
    MorseReport report;
    report.search_stats = find_periodic_orbits(h, params.search);

    OrbitInventory inv;
    inv.n = h.n();
    inv.betti = betti_torus(h.n());
    inv.nondeg_tol = params.nondeg_tol;

    for (const auto& orbit : report.search_stats.orbits) {
        if (orbit.winding.cwiseAbs().maxCoeff() > 0) {
            std::ostringstream os;
            os << "orbit at (" << orbit.q0.transpose() << ") winds and is excluded";
            report.notes.push_back(os.str());
            continue;
        }
        if (!is_nondegenerate(orbit, params.nondeg_tol))
            fail(Err::DegenerateOrbitPresent, "degenerate orbit found by the search");

        IndexedOrbit rec;
        rec.orbit = orbit;
        const TimeSymmetricFamily family = hessian_family(h, orbit);
        try {
            const SymplecticPath path = maslov_path(family, params.epsilon, params.path_steps);
            rec.index = maslov_index(path, family).as_int();
        } catch (const ComputationError& e) {
            std::ostringstream os;
            os << "index failed for orbit at (" << orbit.q0.transpose() << "): " << e.what();
            fail(e.code(), os.str());
        }
        try {
            rec.index_crosscheck = galerkin_index(family, params.cutoffs).index;
            rec.crosscheck_ok = rec.index_crosscheck == rec.index;
        } catch (const ComputationError& e) {
            std::ostringstream os;
            os << "galerkin cross-check failed for orbit at (" << orbit.q0.transpose()
               << "): " << e.what();
            fail(e.code(), os.str());
        }
        inv.orbits.push_back(std::move(rec));
    }

    report.verdict = check_morse_inequalities(inv);
    report.inventory = std::move(inv);
    return report;
}

}  // namespace findex
