#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quintica/core.hpp"
#include "quintica/oracle.hpp"
#include "quintica/series.hpp"

namespace quintica {

struct DegenerateMap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroConstantTerm : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroLinearTerm : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoPreimageWithinTolerance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Power sums of the roots of x^5 + a3 x^3 + a1 x + a0.

struct PowerSums {
    std::array<Complex, 11> S{};  // S[n] = sum of n-th powers; S[0] = 5

    const Complex& operator[](std::size_t n) const { return S[n]; }
};

inline PowerSums power_sums(const DepressedQuintic& q) {
    PowerSums ps;
    ps.S[0] = Complex{5.0};
    ps.S[1] = Complex{0.0};
    ps.S[2] = -2.0 * q.a3;
    ps.S[3] = Complex{0.0};
    ps.S[4] = 2.0 * q.a3 * q.a3 - 4.0 * q.a1;
    ps.S[5] = -5.0 * q.a0;
    for (std::size_t n = 6; n <= 10; ++n)
        ps.S[n] = -q.a3 * ps.S[n - 2] - q.a1 * ps.S[n - 4] - q.a0 * ps.S[n - 5];
    return ps;
}

// Power sum of the mapped roots y_k = x_k^2 + alpha x_k + beta, obtained by
// multinomial expansion of (x^2 + alpha x + beta)^n in terms of S_1..S_10.
inline Complex mapped_power_sum(const Complex& alpha, const Complex& beta, const PowerSums& ps,
                                int n) {
    if (n < 0 || n > 5) throw std::invalid_argument("mapped power sum needs 0 <= n <= 5");
    static constexpr double fact[6] = {1, 1, 2, 6, 24, 120};
    // Integer powers by repeated multiplication: std::pow(complex 0, 0) is NaN.
    Complex apow[6], bpow[6];
    apow[0] = bpow[0] = Complex{1.0};
    for (int t = 1; t <= n; ++t) {
        apow[t] = apow[t - 1] * alpha;
        bpow[t] = bpow[t - 1] * beta;
    }
    Complex total{0.0};
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            const int k = n - i - j;
            const double coeff = fact[n] / (fact[i] * fact[j] * fact[k]);
            total += coeff * apow[j] * bpow[k] * ps[std::size_t(2 * i + j)];
        }
    return total;
}

// ---------------------------------------------------------------------------
// The quadratic map y = x^2 + alpha x + beta and the principal quintic
// z^5 + b2 z^2 + b1 z + b0 of its root images.  identity = true means the
// input was already principal (a3 = 0) and no substitution happened (y = x);
// a non-identity map with alpha = beta = 0 is the genuine squaring map.

struct TschirnhausMap {
    Complex alpha{};
    Complex beta{};
    Complex b2{};
    Complex b1{};
    Complex b0{};
    bool identity = false;
};

namespace detail {

inline std::vector<Complex> principal_coeffs(const TschirnhausMap& m) {
    return {m.b0, m.b1, m.b2, Complex{0.0}, Complex{0.0}, Complex{1.0}};
}

inline std::vector<Complex> depressed_coeffs(const DepressedQuintic& q) {
    return {q.a0, q.a1, Complex{0.0}, q.a3, Complex{0.0}, Complex{1.0}};
}

// Elementary symmetric residuals e1, e2 of the mapped oracle roots; both must
// vanish for a genuinely principal image.
inline std::pair<double, double> principality_residuals(const std::vector<Complex>& images) {
    Complex e1{0.0}, e2{0.0};
    for (std::size_t i = 0; i < images.size(); ++i) {
        e1 += images[i];
        for (std::size_t j = i + 1; j < images.size(); ++j) e2 += images[i] * images[j];
    }
    double scale = 1.0;
    for (const Complex& y : images) scale = std::max(scale, std::abs(y) * std::abs(y));
    return {std::abs(e1) / scale, std::abs(e2) / scale};
}

}  // namespace detail

// Constructs the quadratic map sending the roots of q to those of a principal
// quintic.  beta and alpha^2 follow from requiring the first two mapped power
// sums to vanish; the alpha branch starts principal and flips if the oracle
// check on the image prefers the other sign.
inline TschirnhausMap reduce_to_principal(const DepressedQuintic& q,
                                          const OracleConfig& oracle_cfg = {}) {
    if (std::abs(q.a3) == 0.0) {
        TschirnhausMap m;
        m.identity = true;
        m.b2 = Complex{0.0};
        m.b1 = q.a1;
        m.b0 = q.a0;
        return m;
    }

    const PowerSums ps = power_sums(q);
    const Complex beta = -ps[2] / 5.0;                                      // = 2 a3 / 5
    const Complex alpha_sq = -(ps[4] + 2.0 * beta * ps[2] + 5.0 * beta * beta) / ps[2];
    const Complex alpha0 = std::sqrt(alpha_sq);

    const RootSet xs = find_all_roots(detail::depressed_coeffs(q), oracle_cfg);

    double best_fail = -1.0;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const Complex alpha = (attempt == 0) ? alpha0 : -alpha0;
        TschirnhausMap m;
        m.alpha = alpha;
        m.beta = beta;
        m.b2 = -mapped_power_sum(alpha, beta, ps, 3) / 3.0;
        m.b1 = -mapped_power_sum(alpha, beta, ps, 4) / 4.0;
        m.b0 = -mapped_power_sum(alpha, beta, ps, 5) / 5.0;

        std::vector<Complex> images;
        images.reserve(xs.roots.size());
        for (const Complex& x : xs.roots) images.push_back(x * x + alpha * x + beta);

        // Collapse detection: well-separated preimages folding onto one image
        // value ruin the conditioning of everything downstream.
        for (std::size_t i = 0; i < images.size(); ++i)
            for (std::size_t j = i + 1; j < images.size(); ++j)
                if (std::abs(images[i] - images[j]) < 1e-9 &&
                    std::abs(xs.roots[i] - xs.roots[j]) > 1e-6)
                    throw DegenerateMap("map folds separated roots onto one image value");

        const auto [e1, e2] = detail::principality_residuals(images);
        const double fail = std::max(e1, e2);
        if (fail <= 1e-9) return m;
        best_fail = (best_fail < 0.0) ? fail : std::min(best_fail, fail);
    }
    throw DegenerateMap("image quintic failed the principality check on both branches (residual " +
                        std::to_string(best_fail) + ")");
}

// ---------------------------------------------------------------------------
// Rescale z^5 + b2 z^2 + b1 z + b0 = 0 to B w^5 + A w^2 + w + 1 = 0 with
// z = (b0/b1) w.

inline std::pair<PrincipalQuintic, Complex> rescale(const Complex& b2, const Complex& b1,
                                                    const Complex& b0) {
    if (std::abs(b0) == 0.0)
        throw ZeroConstantTerm("constant term is zero; deflate the root z = 0 first");
    if (std::abs(b1) == 0.0)
        throw ZeroLinearTerm("linear term is zero; normal form unreachable");
    const Complex scale = b0 / b1;
    const Complex b1sq = b1 * b1;
    PrincipalQuintic p;
    p.A = b0 * b2 / b1sq;
    p.B = (b0 * b0) * (b0 * b0) / (b1sq * b1sq * b1);
    return {p, scale};
}

// ---------------------------------------------------------------------------
// Pull one principal-quintic root y back through the map: of the two solutions
// of x^2 + alpha x + (beta - y) = 0, return the one that better solves the
// original quintic.  Ties within 1e-12 break toward smaller imaginary part,
// then smaller real part, for determinism.

inline Complex invert_map(const TschirnhausMap& m, const Complex& y, const DepressedQuintic& q,
                          double tol = 1e-6) {
    const std::vector<Complex> orig = detail::depressed_coeffs(q);
    const double scale = 1.0 + std::max({std::abs(q.a3), std::abs(q.a1), std::abs(q.a0)});
    if (m.identity) {
        const double res = std::abs(eval_poly(orig, y));
        if (res > tol * scale)
            throw NoPreimageWithinTolerance("identity-map value is not a root of the original");
        return y;
    }
    const RootSet cands = solve_quadratic(Complex{1.0}, m.alpha, m.beta - y);
    const double r0 = std::abs(eval_poly(orig, cands.roots[0]));
    const double r1 = std::abs(eval_poly(orig, cands.roots[1]));
    Complex pick;
    if (std::abs(r0 - r1) <= 1e-12 * scale) {
        const Complex &a = cands.roots[0], &b = cands.roots[1];
        if (a.imag() != b.imag())
            pick = (a.imag() < b.imag()) ? a : b;
        else
            pick = (a.real() <= b.real()) ? a : b;
    } else {
        pick = (r0 < r1) ? cands.roots[0] : cands.roots[1];
    }
    if (std::min(r0, r1) > tol * scale)
        throw NoPreimageWithinTolerance("neither quadratic preimage solves the original quintic");
    return pick;
}

// ---------------------------------------------------------------------------
// Full pipeline: reduce -> rescale -> series -> deflate/quartic/pull back,
// with oracle fallbacks at every stage.

struct PipelineOptions {
    double rel_tol = 1e-12;
    int max_shells = 500;
    double pipeline_tol = 1e-7;
    OracleConfig oracle{};
};

struct PipelineReport {
    DepressedQuintic input{};
    TschirnhausMap map{};
    PrincipalQuintic scaled{};
    Complex scale{};
    bool series_attempted = false;
    SeriesResult series{};          // meaningful when series_attempted
    RootSet roots{};                // 5 roots of the input, method = pipeline
    bool fallback_used = false;     // true when the series root was not used
    std::map<std::string, double> diagnostics;
    std::vector<std::string> notes;
};

namespace detail {

// Greedy nearest-candidate assignment of each oracle root to a pool entry;
// the pool may be larger than the root set.
inline std::vector<Complex> greedy_pick(const std::vector<Complex>& oracle_roots,
                                        const std::vector<Complex>& pool, double* max_dist) {
    std::vector<bool> used(pool.size(), false);
    std::vector<Complex> picked;
    picked.reserve(oracle_roots.size());
    double worst = 0.0;
    for (const Complex& r : oracle_roots) {
        double best = 0.0;
        std::size_t bi = pool.size();
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (used[i]) continue;
            const double d = std::abs(pool[i] - r);
            if (bi == pool.size() || d < best) {
                best = d;
                bi = i;
            }
        }
        used[bi] = true;
        picked.push_back(pool[bi]);
        worst = std::max(worst, best);
    }
    if (max_dist) *max_dist = worst;
    return picked;
}

}  // namespace detail

inline PipelineReport solve_pipeline(const DepressedQuintic& q, const PipelineOptions& opts = {}) {
    PipelineReport rep;
    rep.input = q;
    const std::vector<Complex> in_coeffs = detail::depressed_coeffs(q);

    RootSet oracle_in;
    try {
        oracle_in = find_all_roots(in_coeffs, opts.oracle);
    } catch (const NoConvergence& e) {
        oracle_in = e.best;
        rep.notes.push_back("input oracle hit its iteration budget; using best iterate");
    }

    // Step 1: quadratic reduction (or none, when already principal).
    try {
        rep.map = reduce_to_principal(q, opts.oracle);
    } catch (const DegenerateMap& e) {
        rep.notes.push_back(std::string("reduction degenerate (") + e.what() +
                            "); solved by oracle directly");
        rep.fallback_used = true;
        rep.roots = oracle_in;
        rep.roots.method = RootMethod::pipeline;
        return rep;
    }
    if (rep.map.identity) rep.notes.push_back("input already principal; no substitution applied");

    if (!rep.map.identity) {
        // Closed-form cross-checks of the map parameters, plus the same
        // residuals for the frequently mis-stated alternate constants
        // (alpha taken unsquared, beta with denominator 3) — kept in the
        // diagnostics so reports document why the derived values are used.
        const PowerSums ps = power_sums(q);
        const Complex beta_v = 2.0 * q.a3 / 3.0;
        const Complex alpha_v = 3.0 * q.a3 / 5.0 - 2.0 * q.a1 / q.a3;
        rep.diagnostics["alpha_condition_residual"] = std::abs(
            ps[4] + (rep.map.alpha * rep.map.alpha + 2.0 * rep.map.beta) * ps[2] +
            5.0 * rep.map.beta * rep.map.beta);
        rep.diagnostics["alpha_variant_residual"] = std::abs(
            ps[4] + (alpha_v * alpha_v + 2.0 * beta_v) * ps[2] + 5.0 * beta_v * beta_v);
        rep.diagnostics["beta_condition_residual"] = std::abs(ps[2] + 5.0 * rep.map.beta);
        rep.diagnostics["beta_variant_residual"] = std::abs(ps[2] + 5.0 * beta_v);
        rep.diagnostics["alpha_variant_re"] = alpha_v.real();
        rep.diagnostics["alpha_variant_im"] = alpha_v.imag();
        rep.diagnostics["beta_variant_re"] = beta_v.real();
        rep.diagnostics["beta_variant_im"] = beta_v.imag();
    }

    const std::vector<Complex> pvec = detail::principal_coeffs(rep.map);
    RootSet oracle_principal;
    try {
        oracle_principal = find_all_roots(pvec, opts.oracle);
    } catch (const NoConvergence& e) {
        oracle_principal = e.best;
        rep.notes.push_back("principal oracle hit its iteration budget; using best iterate");
    }
    {
        std::vector<Complex> images;
        for (const Complex& x : oracle_in.roots)
            images.push_back(rep.map.identity ? x : x * x + rep.map.alpha * x + rep.map.beta);
        RootSet image_set{images, {}, RootMethod::oracle};
        sort_root_set(image_set);
        rep.diagnostics["map_image_mismatch"] =
            match_multisets(image_set, oracle_principal, 1e30).max_distance;
    }

    // Step 2: rescale to the series normal form.
    std::vector<Complex> zs;
    bool have_zs = false;
    try {
        auto [principal, scale] = rescale(rep.map.b2, rep.map.b1, rep.map.b0);
        rep.scaled = principal;
        rep.scale = scale;
        rep.diagnostics["margin"] = convergence_margin(principal);
    } catch (const ZeroConstantTerm&) {
        // z = 0 factors out; the rest is a closed-form quartic.
        rep.notes.push_back("zero constant term; deflated z = 0 and solved the quartic");
        rep.fallback_used = true;
        zs.push_back(Complex{0.0});
        const RootSet quartic =
            solve_quartic(Complex{0.0}, Complex{0.0}, rep.map.b2, rep.map.b1);
        zs.insert(zs.end(), quartic.roots.begin(), quartic.roots.end());
        have_zs = true;
    } catch (const ZeroLinearTerm&) {
        rep.notes.push_back("zero linear term; principal roots taken from the oracle");
        rep.fallback_used = true;
        zs = oracle_principal.roots;
        have_zs = true;
    }

    // Step 3: series root, when the coefficients lie inside the domain.
    if (!have_zs) {
        Complex z1{};
        bool have_z1 = false;
        if (rep.diagnostics["margin"] < 0.0) {
            try {
                rep.series = passare_tsikh_root(rep.scaled, opts.rel_tol, opts.max_shells);
                rep.series_attempted = true;
                z1 = rep.scale * rep.series.value;
                rep.diagnostics["series_root_residual"] = normalized_residual(pvec, z1);
                have_z1 = true;
            } catch (const SeriesError& e) {
                rep.series = e.partial;
                rep.series_attempted = true;
                rep.notes.push_back(std::string("series failed (") + e.what() +
                                    "); principal root taken from the oracle");
            }
        } else {
            rep.notes.push_back("coefficients outside the series convergence domain");
        }
        if (!have_z1) {
            rep.fallback_used = true;
            z1 = oracle_principal.roots.front();
        }

        // Step 4a: deflate the known root and solve the residual quartic.
        try {
            const std::vector<Complex> quartic_coeffs = deflate(pvec, z1, 1e-6);
            const RootSet quartic = solve_quartic(quartic_coeffs[3], quartic_coeffs[2],
                                                  quartic_coeffs[1], quartic_coeffs[0]);
            zs.push_back(z1);
            zs.insert(zs.end(), quartic.roots.begin(), quartic.roots.end());
        } catch (const DeflationResidualTooLarge& e) {
            rep.notes.push_back(std::string("deflation rejected (") + e.what() +
                                "); principal roots taken from the oracle");
            rep.fallback_used = true;
            zs = oracle_principal.roots;
        }
    }

    // Step 4b: pull every principal root back through the map and match the
    // polished candidates against the input's oracle multiset.
    std::vector<Complex> pool;
    for (const Complex& z : zs) {
        try {
            pool.push_back(newton_polish(in_coeffs, invert_map(rep.map, z, q, 1e-3), 3));
        } catch (const NoPreimageWithinTolerance&) {
            if (rep.map.identity) {
                pool.push_back(newton_polish(in_coeffs, z, 3));
            } else {
                const RootSet both = solve_quadratic(Complex{1.0}, rep.map.alpha, rep.map.beta - z);
                for (const Complex& c : both.roots) pool.push_back(newton_polish(in_coeffs, c, 3));
            }
        }
    }
    double pick_dist = 0.0;
    std::vector<Complex> picked = detail::greedy_pick(oracle_in.roots, pool, &pick_dist);
    if (pick_dist > opts.pipeline_tol && !rep.map.identity) {
        // Widen the pool with the discarded second preimages and retry.
        for (const Complex& z : zs) {
            const RootSet both = solve_quadratic(Complex{1.0}, rep.map.alpha, rep.map.beta - z);
            for (const Complex& c : both.roots) pool.push_back(newton_polish(in_coeffs, c, 3));
        }
        picked = detail::greedy_pick(oracle_in.roots, pool, &pick_dist);
    }
    rep.diagnostics["assembly_match_distance"] = pick_dist;

    rep.roots.method = RootMethod::pipeline;
    rep.roots.roots.clear();
    rep.roots.residuals.clear();
    int swapped = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < picked.size(); ++i) {
        Complex r = picked[i];
        double res = normalized_residual(in_coeffs, r);
        if (res > opts.pipeline_tol) {
            r = oracle_in.roots[i];  // greedy_pick preserved oracle order
            res = normalized_residual(in_coeffs, r);
            ++swapped;
        }
        rep.roots.roots.push_back(r);
        rep.roots.residuals.push_back(res);
        worst = std::max(worst, res);
    }
    if (swapped > 0)
        rep.notes.push_back(std::to_string(swapped) + " root(s) replaced by oracle values");
    rep.diagnostics["swapped_roots"] = double(swapped);
    rep.diagnostics["max_root_residual"] = worst;
    sort_root_set(rep.roots);
    return rep;
}

}  // namespace quintica
