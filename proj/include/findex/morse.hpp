#pragma once

#include <string>
#include <vector>

#include "findex/torus.hpp"

namespace findex {

/// Betti numbers of the 2n-torus: binomial(2n, j), j = 0..2n.
std::vector<long long> betti_torus(int n);

struct IndexedOrbit {
    PeriodicOrbit orbit;
    int index = 0;             // orbit index; index + n is the homological degree
    int index_crosscheck = 0;  // stabilized Galerkin route
    bool crosscheck_ok = false;
};

struct OrbitInventory {
    int n = 0;
    std::vector<IndexedOrbit> orbits;
    std::vector<long long> betti;
    double nondeg_tol = 1e-8;
};

struct InequalityRow {
    int k = 0;  // homological degree
    long long lhs = 0;
    long long rhs = 0;
    bool ok = false;
};

struct MorseVerdict {
    std::vector<InequalityRow> rows;
    bool all_ok = false;
    bool euler_ok = false;
    long long euler_lhs = 0;  // sum (-1)^j beta_j
    long long euler_rhs = 0;  // sum (-1)^{degree(gamma)}
};

/// Checks sum_{j<=k} (-1)^{k-j} beta_j <= sum_{deg(gamma)<=k} (-1)^{k-deg}
/// for every k covering both supports, with degree = index + n.  Throws
/// DegenerateOrbitPresent when some orbit fails the nondegeneracy test.
MorseVerdict check_morse_inequalities(const OrbitInventory& inv);

struct MorseParams {
    OrbitSearchParams search;
    double epsilon = 0.01;  // prefix length of the index path
    int path_steps = 512;
    std::vector<int> cutoffs = {8, 16, 32, 64};
    double nondeg_tol = 1e-8;
};

struct MorseReport {
    OrbitInventory inventory;
    MorseVerdict verdict;
    OrbitSearchResult search_stats;
    std::vector<std::string> notes;  // skipped orbits with provenance
};

/// End-to-end pipeline: orbit search, per-orbit index via the Maslov path
/// with the Galerkin route recorded as cross-check, then the inequality
/// report.  Errors from any stage propagate with the orbit attached.
MorseReport morse_report(const TorusHamiltonian& h, const MorseParams& params);

}  // namespace findex
