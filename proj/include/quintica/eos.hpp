#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quintica/core.hpp"
#include "quintica/oracle.hpp"
#include "quintica/series.hpp"
#include "quintica/tschirnhaus.hpp"

namespace quintica {

struct ZeroSexticCoefficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A missing real stationary point cannot happen for c > 0 and real f; hitting
// this means a solver bug, not a bad input.
struct NoRealStationaryPoint : std::logic_error {
    using std::logic_error::logic_error;
};

// Free energy F = -f u + (a/2) u^2 + (b/4) u^4 + (c/6) u^6; the stationarity
// condition dF/du = 0 is the state equation a u + b u^3 + c u^5 = f.
struct LandauParams {
    double a = 0.0;  // quadratic coefficient; temperature-like
    double b = 0.0;  // quartic coefficient
    double c = 1.0;  // sextic coefficient; must be positive for boundedness
    double f = 0.0;  // external field
};

inline DepressedQuintic to_depressed_quintic(const LandauParams& p) {
    if (p.c == 0.0) throw ZeroSexticCoefficient("sextic coefficient c must be nonzero");
    DepressedQuintic q;
    q.a3 = Complex{p.b / p.c};
    q.a1 = Complex{p.a / p.c};
    q.a0 = Complex{-p.f / p.c};
    return q;
}

inline double free_energy(const LandauParams& p, double u) {
    const double u2 = u * u;
    return -p.f * u + 0.5 * p.a * u2 + 0.25 * p.b * u2 * u2 + (p.c / 6.0) * u2 * u2 * u2;
}

// d^2F/du^2, used for stability classification.
inline double free_energy_curvature(const LandauParams& p, double u) {
    const double u2 = u * u;
    return p.a + 3.0 * p.b * u2 + 5.0 * p.c * u2 * u2;
}

inline double state_equation_residual(const LandauParams& p, double u) {
    return std::abs(p.a * u + p.b * u * u * u + p.c * u * u * u * u * u - p.f);
}

struct StationaryPoint {
    double u = 0.0;
    double F = 0.0;
    bool stable = false;
};

enum class EquilibriumMethod { pipeline, trinomial_series, oracle };

inline const char* to_string(EquilibriumMethod m) {
    switch (m) {
        case EquilibriumMethod::pipeline: return "pipeline";
        case EquilibriumMethod::trinomial_series: return "trinomial_series";
        case EquilibriumMethod::oracle: return "oracle";
    }
    return "unknown";
}

struct EquilibriumResult {
    double u_eq = 0.0;
    std::vector<StationaryPoint> all_stationary;
    EquilibriumMethod method = EquilibriumMethod::pipeline;
    bool degenerate = false;             // free-energy tie between minimizers
    double residual = 0.0;               // |a u + b u^3 + c u^5 - f| at u_eq
    std::optional<double> margin;        // convergence margin of the scaled principal quintic
    int terms_used = 0;                  // series terms, when a series ran
};

namespace detail {

inline double polish_real_root(const LandauParams& p, double u, int steps = 3) {
    for (int s = 0; s < steps; ++s) {
        const double g = p.a * u + p.b * u * u * u + p.c * u * u * u * u * u - p.f;
        const double dg = p.a + 3.0 * p.b * u * u + 5.0 * p.c * u * u * u * u;
        if (std::abs(dg) < 1e-300) break;
        const double step = g / dg;
        if (!std::isfinite(step)) break;
        u -= step;
    }
    return u;
}

// Certify real candidates among complex roots, polish them on the real state
// equation, and deduplicate.
inline std::vector<StationaryPoint> real_stationary_points(const LandauParams& p,
                                                           const std::vector<Complex>& roots) {
    std::vector<double> us;
    for (const Complex& r : roots) {
        if (std::abs(r.imag()) >= 1e-8) continue;
        us.push_back(polish_real_root(p, r.real()));
    }
    std::sort(us.begin(), us.end());
    std::vector<StationaryPoint> pts;
    for (double u : us) {
        if (!pts.empty() && std::abs(u - pts.back().u) < 1e-10) continue;
        pts.push_back({u, free_energy(p, u), free_energy_curvature(p, u) > 0.0});
    }
    return pts;
}

// Global-minimum selection with the degenerate-tie convention: ties within
// 1e-12 in F mark the result degenerate and the largest tied u (the
// nonnegative representative, for symmetric ties) is returned.
inline void select_equilibrium(const LandauParams& p, EquilibriumResult& out) {
    if (out.all_stationary.empty())
        throw NoRealStationaryPoint("no real stationary point found for c > 0");
    double fmin = out.all_stationary.front().F;
    for (const StationaryPoint& s : out.all_stationary) fmin = std::min(fmin, s.F);
    std::vector<double> tied;
    for (const StationaryPoint& s : out.all_stationary)
        if (s.F <= fmin + 1e-12) tied.push_back(s.u);
    out.degenerate = tied.size() > 1;
    out.u_eq = *std::max_element(tied.begin(), tied.end());
    out.residual = state_equation_residual(p, out.u_eq);
}

inline void validate_sextic(const LandauParams& p) {
    if (p.c == 0.0) throw ZeroSexticCoefficient("sextic coefficient c must be nonzero");
    if (p.c < 0.0)
        throw std::invalid_argument("free energy unbounded below: need c > 0");
}

}  // namespace detail

inline EquilibriumResult equilibrium(const LandauParams& p, const PipelineOptions& opts = {});

// Critical case a = 0: the state equation c u^5 + b u^3 = f is a genuine
// trinomial, solved by the normalized trinomial series with an oracle
// cross-check (and used for the stationary-point inventory either way).
inline EquilibriumResult critical_isotherm(const LandauParams& p, const PipelineOptions& opts = {}) {
    detail::validate_sextic(p);
    if (p.a != 0.0) throw std::invalid_argument("critical isotherm requires a = 0");
    if (p.b == 0.0 || p.f == 0.0)
        throw std::invalid_argument("critical isotherm requires b != 0 and f != 0");

    const DepressedQuintic dq = to_depressed_quintic(p);
    RootSet oracle_roots;
    try {
        oracle_roots = find_all_roots(detail::depressed_coeffs(dq), opts.oracle);
    } catch (const NoConvergence& e) {
        oracle_roots = e.best;
    }

    EquilibriumResult out;
    out.all_stationary = detail::real_stationary_points(p, oracle_roots.roots);
    detail::select_equilibrium(p, out);

    // Series candidates: a0 + am u^3 + an u^5 = 0 with a0 = -f, am = b, an = c;
    // each branch expands around a different cube root of -1.
    out.method = EquilibriumMethod::oracle;
    try {
        const auto [tri, lambda] = normalize_trinomial(Complex{-p.f}, Complex{p.b}, Complex{p.c},
                                                       3, 5);
        for (int branch = 0; branch < tri.m; ++branch) {
            try {
                const SeriesResult sr =
                    trinomial_root(Trinomial{tri.m, tri.n, tri.a, branch}, opts.rel_tol, 500);
                const Complex u_c = sr.value / lambda;
                if (std::abs(u_c.imag()) >= 1e-8) continue;
                const double u = detail::polish_real_root(p, u_c.real());
                if (std::abs(u - out.u_eq) <= 1e-7 * (1.0 + std::abs(out.u_eq))) {
                    out.u_eq = u;
                    out.method = EquilibriumMethod::trinomial_series;
                    out.terms_used = sr.terms_used;
                    out.residual = state_equation_residual(p, u);
                    break;
                }
            } catch (const SeriesError&) {
                continue;  // divergent branch; the oracle value stands
            }
        }
    } catch (const DegenerateCoefficient&) {
        // unreachable under the preconditions, but harmless: oracle result stands
    }
    return out;
}

inline EquilibriumResult equilibrium(const LandauParams& p, const PipelineOptions& opts) {
    detail::validate_sextic(p);
    if (p.a == 0.0 && p.b != 0.0 && p.f != 0.0) return critical_isotherm(p, opts);

    const DepressedQuintic dq = to_depressed_quintic(p);
    const PipelineReport rep = solve_pipeline(dq, opts);

    EquilibriumResult out;
    out.all_stationary = detail::real_stationary_points(p, rep.roots.roots);
    detail::select_equilibrium(p, out);
    out.method = rep.fallback_used ? EquilibriumMethod::oracle : EquilibriumMethod::pipeline;
    if (auto it = rep.diagnostics.find("margin"); it != rep.diagnostics.end())
        out.margin = it->second;
    if (rep.series_attempted) out.terms_used = rep.series.terms_used;
    return out;
}

// ---------------------------------------------------------------------------
// Grid sweep over (a, f) with fixed b, c.  Row-major: a outer, f inner.

struct SweepCell {
    double a = 0.0;
    double f = 0.0;
    bool ok = false;
    std::string error;           // nonempty when ok is false
    EquilibriumResult result;    // valid when ok
};

inline std::vector<SweepCell> sweep(double a_min, double a_max, int a_steps, double f_min,
                                    double f_max, int f_steps, double b, double c,
                                    const PipelineOptions& opts = {}) {
    if (a_steps < 1 || f_steps < 1) throw std::invalid_argument("sweep needs grid sizes >= 1");
    detail::validate_sextic(LandauParams{0.0, b, c, 0.0});
    auto grid_value = [](double lo, double hi, int steps, int i) {
        return (steps == 1) ? lo : lo + (hi - lo) * double(i) / double(steps - 1);
    };
    std::vector<SweepCell> cells;
    cells.reserve(std::size_t(a_steps) * std::size_t(f_steps));
    for (int i = 0; i < a_steps; ++i) {
        for (int j = 0; j < f_steps; ++j) {
            SweepCell cell;
            cell.a = grid_value(a_min, a_max, a_steps, i);
            cell.f = grid_value(f_min, f_max, f_steps, j);
            try {
                cell.result = equilibrium(LandauParams{cell.a, b, c, cell.f}, opts);
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

}  // namespace quintica
