#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quintica/core.hpp"

namespace quintica {

struct OracleConfig {
    int max_iters = 200;
    double tol = 1e-13;              // movement tolerance per root
    double seed_radius_factor = 1.0;
};

struct NoConvergence : std::runtime_error {
    RootSet best;  // best iterate at exhaustion, for diagnostics
    NoConvergence(const std::string& what, RootSet b)
        : std::runtime_error(what), best(std::move(b)) {}
};

struct CardinalityMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Average clusters of near-coincident iterates so repeated roots come out as
// one value repeated with its multiplicity instead of a fuzzy cloud.
inline void cluster_roots(std::vector<Complex>& roots, double radius) {
    const std::size_t n = roots.size();
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (seen[i]) continue;
        std::vector<std::size_t> group{i};
        for (std::size_t j = i + 1; j < n; ++j)
            if (!seen[j] && std::abs(roots[i] - roots[j]) < radius) {
                group.push_back(j);
                seen[j] = true;
            }
        if (group.size() > 1) {
            Complex mean{0.0};
            for (std::size_t g : group) mean += roots[g];
            mean /= double(group.size());
            for (std::size_t g : group) roots[g] = mean;
        }
    }
}

}  // namespace detail

// Simultaneous-iteration (Durand-Kerner/Weierstrass) root finder for monic
// polynomials of degree <= 5, written in ascending coefficients.  Fully
// deterministic: fixed initial circle, Gauss-Seidel sweeps, no randomness.
inline RootSet find_all_roots(const std::vector<Complex>& coeffs, const OracleConfig& cfg = {}) {
    if (cfg.max_iters < 1 || !(cfg.tol > 0.0))
        throw std::invalid_argument("oracle config: need max_iters >= 1 and tol > 0");
    if (coeffs.size() < 2 || coeffs.size() > 6)
        throw std::invalid_argument("oracle handles degrees 1 through 5");
    const std::size_t d = coeffs.size() - 1;
    if (coeffs[d] != Complex{1.0, 0.0})
        throw std::invalid_argument("oracle requires a monic polynomial");
    for (const Complex& c : coeffs)
        if (!is_finite(c)) throw std::invalid_argument("oracle coefficient not finite");

    double cmax = 0.0;
    for (std::size_t i = 0; i < d; ++i) cmax = std::max(cmax, std::abs(coeffs[i]));

    // Initial guesses on a circle; the fixed 0.4-radian phase offset keeps the
    // start set away from real-axis symmetry traps.
    const double radius = (1.0 + cmax) * cfg.seed_radius_factor;
    std::vector<Complex> z(d);
    for (std::size_t k = 0; k < d; ++k) {
        const double phi = 2.0 * M_PI * double(k) / double(d) + 0.4;
        z[k] = radius * Complex{std::cos(phi), std::sin(phi)};
    }

    const double move_scale = 1.0 + radius;
    bool converged = false;
    for (int it = 0; it < cfg.max_iters && !converged; ++it) {
        double max_move = 0.0;
        for (std::size_t k = 0; k < d; ++k) {  // in-place sweep: updated roots feed the next denominator
            Complex denom{1.0};
            for (std::size_t j = 0; j < d; ++j)
                if (j != k) denom *= (z[k] - z[j]);
            if (std::abs(denom) < 1e-290) {
                z[k] += Complex{1e-8, 1e-8};  // nudge coincident iterates apart
                max_move = std::max(max_move, 1e-8);
                continue;
            }
            const Complex delta = eval_poly(coeffs, z[k]) / denom;
            z[k] -= delta;
            max_move = std::max(max_move, std::abs(delta));
        }
        converged = max_move < cfg.tol * move_scale;
    }

    detail::cluster_roots(z, 1e-7);

    RootSet rs;
    rs.method = RootMethod::oracle;
    rs.roots = z;
    for (const Complex& r : z) rs.residuals.push_back(normalized_residual(coeffs, r));
    sort_root_set(rs);

    if (!converged) {
        // Movement stalled past the budget; accept anyway if the residuals are
        // already at the quality the caller is promised.
        double worst = 0.0;
        for (double res : rs.residuals) worst = std::max(worst, res);
        if (worst > 1e-10)
            throw NoConvergence("root iteration exhausted " + std::to_string(cfg.max_iters) +
                                    " sweeps with residual " + std::to_string(worst),
                                rs);
    }
    return rs;
}

// ---------------------------------------------------------------------------
// Multiset comparison

struct MatchReport {
    bool success = false;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (index in r1, index in r2)
    std::vector<double> distances;
    double max_distance = 0.0;
};

// Greedy minimum-distance pairing; succeeds iff every pair sits within tol.
inline MatchReport match_multisets(const RootSet& r1, const RootSet& r2, double tol) {
    if (r1.roots.size() != r2.roots.size())
        throw CardinalityMismatch("root sets have sizes " + std::to_string(r1.roots.size()) +
                                  " and " + std::to_string(r2.roots.size()));
    MatchReport rep;
    std::vector<bool> used(r2.roots.size(), false);
    for (std::size_t i = 0; i < r1.roots.size(); ++i) {
        double best = 0.0;
        std::size_t bj = r2.roots.size();
        for (std::size_t j = 0; j < r2.roots.size(); ++j) {
            if (used[j]) continue;
            const double dist = std::abs(r1.roots[i] - r2.roots[j]);
            if (bj == r2.roots.size() || dist < best) {
                best = dist;
                bj = j;
            }
        }
        used[bj] = true;
        rep.pairs.emplace_back(i, bj);
        rep.distances.push_back(best);
        rep.max_distance = std::max(rep.max_distance, best);
    }
    rep.success = rep.max_distance <= tol;
    return rep;
}

}  // namespace quintica
