#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quintica/core.hpp"

namespace quintica {

struct SeriesResult {
    Complex value{};
    int terms_used = 0;
    bool converged = false;
    double last_term_magnitude = 0.0;
};

// Series failures carry the partial sum so fallback paths can report how far
// the summation got before giving up.
struct SeriesError : std::runtime_error {
    SeriesResult partial;
    SeriesError(const std::string& what, SeriesResult p)
        : std::runtime_error(what), partial(std::move(p)) {}
};

struct SeriesDiverged : SeriesError {
    using SeriesError::SeriesError;
};

struct ShellBudgetExhausted : SeriesError {
    using SeriesError::SeriesError;
};

struct TermBudgetExhausted : SeriesError {
    using SeriesError::SeriesError;
};

struct DegenerateCoefficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Convergence domain of the principal-quintic double series.
//
// Negative margin means (A, B) lies strictly inside the domain; zero or
// positive means outside (the boundary itself is treated as outside, since
// nothing is claimed about convergence there).

inline double convergence_margin(const PrincipalQuintic& q) {
    const double A = std::abs(q.A);
    const double B = std::abs(q.B);
    return 3125.0 * B * B - 256.0 * B + 108.0 * std::pow(A, 5) - 27.0 * std::pow(A, 4) +
           1600.0 * A * B - 2250.0 * A * A * B;
}

// ---------------------------------------------------------------------------
// Passare-Tsikh double series for one root of B x^5 + A x^2 + x + 1 = 0:
//
//   x = -sum_{j,k>=0} (-1)^k (2j+5k)! / (j! k! (j+4k+1)!) A^j B^k
//
// Terms are generated by multiplicative recurrences (never by factorials):
// along a row (fixed k) the term ratio in j is
//   (2j+5k+1)(2j+5k+2) / ((j+1)(j+4k+2)) * A,
// and the row-start terms T(0,k) obey
//   T(0,k+1)/T(0,k) = -(5k+1)(5k+2)(5k+3)(5k+4)(5k+5)
//                      / ((k+1)(4k+2)(4k+3)(4k+4)(4k+5)) * B.
// Summation runs over anti-diagonal shells s = j + k, accumulating one shell
// at a time; the stopping and divergence rules act on shell sums.

inline SeriesResult passare_tsikh_root(const PrincipalQuintic& q, double rel_tol = 1e-12,
                                       int max_shells = 500) {
    if (!(rel_tol > 0.0) || max_shells < 1)
        throw std::invalid_argument("need rel_tol > 0 and max_shells >= 1");
    const Complex A = q.A;
    const Complex B = q.B;

    std::vector<Complex> row;      // current term of each active row k
    row.reserve(64);
    Complex row_start{1.0};        // T(0,k) for the row about to be opened
    Complex total{0.0};
    SeriesResult res;

    int grow_streak = 0;
    int quiet_streak = 0;
    double prev_mag = -1.0;

    for (int s = 0; s < max_shells; ++s) {
        if (s > 0) {
            const double k = double(s - 1);
            row_start *= -B * ((5 * k + 1) * (5 * k + 2) * (5 * k + 3) * (5 * k + 4) * (5 * k + 5)) /
                         ((k + 1) * (4 * k + 2) * (4 * k + 3) * (4 * k + 4) * (4 * k + 5));
        }
        row.push_back(row_start);
        // Advance row k from j = s-1-k to j = s-k.
        for (int k = 0; k < s; ++k) {
            const double jd = double(s - 1 - k);
            const double kd = double(k);
            row[std::size_t(k)] *= A * ((2 * jd + 5 * kd + 1) * (2 * jd + 5 * kd + 2)) /
                                   ((jd + 1) * (jd + 4 * kd + 2));
        }
        Complex shell_sum{0.0};
        for (const Complex& t : row) shell_sum += t;
        total += shell_sum;
        res.terms_used += s + 1;

        const double mag = std::abs(shell_sum);
        res.last_term_magnitude = mag;
        res.value = -total;
        if (!is_finite(shell_sum) || !is_finite(total))
            throw SeriesDiverged("series overflowed after " + std::to_string(s + 1) + " shells", res);

        if (prev_mag >= 0.0 && mag > prev_mag) {
            if (++grow_streak >= 5)
                throw SeriesDiverged("shell magnitudes grew for 5 consecutive shells", res);
        } else {
            grow_streak = 0;
        }
        prev_mag = mag;

        if (mag < rel_tol * std::abs(total)) {
            if (++quiet_streak >= 3) {
                res.converged = true;
                return res;
            }
        } else {
            quiet_streak = 0;
        }
    }
    throw ShellBudgetExhausted("stopping rule not met within " + std::to_string(max_shells) +
                                   " shells",
                               res);
}

// ---------------------------------------------------------------------------
// Trinomial equations 1 + x^m + a x^n = 0 with n > m > 0.

struct Trinomial {
    int m = 1;
    int n = 2;
    Complex a{};
    int branch = 0;  // selects eps = exp(i*pi*(1+2*branch)/m), an m-th root of -1

    Trinomial(int m_, int n_, Complex a_, int branch_ = 0) : m(m_), n(n_), a(a_), branch(branch_) {
        if (!(n > m && m > 0)) throw std::invalid_argument("trinomial requires n > m > 0");
        if (branch < 0 || branch >= m) throw std::invalid_argument("branch must lie in [0, m-1]");
        if (!is_finite(a)) throw std::invalid_argument("trinomial coefficient not finite");
    }

    Complex epsilon() const {
        const double phi = M_PI * (1.0 + 2.0 * branch) / double(m);
        return {std::cos(phi), std::sin(phi)};
    }
};

namespace detail {

// Shared stopping/divergence loop over a sequence of single terms.
template <typename TermFn>
SeriesResult sum_terms(TermFn&& term_at, double rel_tol, int max_terms, const char* budget_name) {
    Complex total{0.0};
    SeriesResult res;
    int grow_streak = 0;
    int quiet_streak = 0;
    double prev_mag = -1.0;
    for (int k = 0; k < max_terms; ++k) {
        const Complex t = term_at(k);
        total += t;
        res.terms_used = k + 1;
        const double mag = std::abs(t);
        res.last_term_magnitude = mag;
        res.value = total;
        if (!is_finite(t) || !is_finite(total))
            throw SeriesDiverged("series overflowed after " + std::to_string(k + 1) + " terms", res);
        if (prev_mag >= 0.0 && mag > prev_mag) {
            if (++grow_streak >= 5)
                throw SeriesDiverged("term magnitudes grew for 5 consecutive terms", res);
        } else {
            grow_streak = 0;
        }
        prev_mag = mag;
        if (mag < rel_tol * std::abs(total)) {
            if (++quiet_streak >= 3) {
                res.converged = true;
                return res;
            }
        } else {
            quiet_streak = 0;
        }
    }
    throw TermBudgetExhausted(std::string(budget_name) + " budget of " +
                                  std::to_string(max_terms) + " terms exhausted",
                              res);
}

}  // namespace detail

// Root of 1 + x^m + a x^n = 0 as a series around the branch's m-th root of -1:
//
//   x(a) = eps * sum_k  c_k * (eps^n a)^k,
//   c_k  = (1/m) * Gamma(z) / (k! * Gamma(z - k + 1)),   z = (nk+1)/m,
//
// with the Gamma ratio evaluated as the exact product (z-1)(z-2)...(z-k+1)
// interleaved with the (eps^n a)^k / k! factors so nothing overflows.  c_0 is
// exactly 1, so a = 0 returns eps itself.
//
// verbatim_formula = true instead sums the alternative printed normalization
//
//   x(a) = sum_k eps^{1+nk} * Gamma(1 + nk/m) / Gamma(1 + (1+(n-m)k)/m) * a^k / k!,
//
// kept for documenting the discrepancy: for m >= 2 its k = 0 term is not eps,
// so it fails the a = 0 sanity check; for m = 1 the two forms agree term by
// term.

inline SeriesResult trinomial_root(const Trinomial& t, double rel_tol = 1e-12,
                                   int max_terms = 500, bool verbatim_formula = false) {
    if (!(rel_tol > 0.0) || max_terms < 1)
        throw std::invalid_argument("need rel_tol > 0 and max_terms >= 1");
    const Complex eps = t.epsilon();
    const double m = double(t.m);
    const double n = double(t.n);

    if (!verbatim_formula) {
        const Complex atil = std::pow(eps, double(t.n)) * t.a;
        auto term_at = [&](int k) -> Complex {
            if (k == 0) return Complex{1.0};
            const double z = (n * k + 1.0) / m;
            Complex acc{1.0 / m};
            for (int i = 1; i <= k; ++i) {
                acc *= atil / double(i);
                if (i <= k - 1) acc *= (z - double(i));
            }
            return acc;
        };
        SeriesResult res = detail::sum_terms(term_at, rel_tol, max_terms, "trinomial series");
        res.value *= eps;
        return res;
    }

    // Printed normalization; Gamma ratios via log-gamma differences (the
    // arguments are positive reals), eps powers by running multiplication.
    Complex epow = eps;                              // eps^{1+nk}
    const Complex eps_n = std::pow(eps, double(t.n));
    Complex apow{1.0};                               // a^k
    double log_kfact = 0.0;
    auto term_at = [&](int k) -> Complex {
        if (k > 0) {
            epow *= eps_n;
            apow *= t.a;
            log_kfact += std::log(double(k));
        }
        const double lg = std::lgamma(1.0 + n * k / m) -
                          std::lgamma(1.0 + (1.0 + (n - m) * k) / m) - log_kfact;
        return epow * apow * std::exp(lg);
    };
    return detail::sum_terms(term_at, rel_tol, max_terms, "trinomial series");
}

// ---------------------------------------------------------------------------
// The "simplest" root of the trinomic quintic x^5 - x - t = 0:
//
//   x1(t) = -U(t),  U(t) = sum_k (5k)!/(k!(4k+1)!) t^{4k+1} = t + t^5 + 5 t^9 + ...
//
// U solves U^5 - U + t = 0, so -U solves the equation above (the coefficient
// integers are the same Fuss-Catalan numbers as the B-axis specialization of
// the double series).

inline SeriesResult trinomic_quintic_root(const Complex& tval, double rel_tol = 1e-12,
                                          int max_terms = 500) {
    if (!(rel_tol > 0.0) || max_terms < 1)
        throw std::invalid_argument("need rel_tol > 0 and max_terms >= 1");
    if (std::abs(tval) == 0.0) return SeriesResult{Complex{0.0}, 1, true, 0.0};
    const Complex t4 = tval * tval * tval * tval;
    Complex term = tval;
    auto term_at = [&](int k) -> Complex {
        if (k == 0) return term;
        const double kd = double(k - 1);
        term *= t4 * ((5 * kd + 1) * (5 * kd + 2) * (5 * kd + 3) * (5 * kd + 4) * (5 * kd + 5)) /
                ((kd + 1) * (4 * kd + 2) * (4 * kd + 3) * (4 * kd + 4) * (4 * kd + 5));
        return term;
    };
    SeriesResult res = detail::sum_terms(term_at, rel_tol, max_terms, "trinomic quintic series");
    res.value = -res.value;
    return res;
}

// ---------------------------------------------------------------------------
// Reduction of a general trinomial a0 + am x^m + an x^n = 0 to the normalized
// shape 1 + y^m + a y^n = 0 with y = lambda x, using the principal m-th root
// for lambda = (am/a0)^(1/m) and a = (an/a0) * (am/a0)^(-n/m).

inline std::pair<Trinomial, Complex> normalize_trinomial(const Complex& a0, const Complex& am,
                                                         const Complex& an, int m, int n) {
    if (!(n > m && m > 0)) throw std::invalid_argument("normalize_trinomial requires n > m > 0");
    if (std::abs(a0) == 0.0 || std::abs(am) == 0.0)
        throw DegenerateCoefficient("normalize_trinomial: a0 and am must be nonzero");
    const Complex ratio = am / a0;
    const Complex lambda = std::pow(ratio, 1.0 / double(m));
    const Complex a = (an / a0) / std::pow(ratio, double(n) / double(m));
    return {Trinomial{m, n, a, 0}, lambda};
}

// ---------------------------------------------------------------------------
// Exact integer coefficient sequences (uint64, valid for the small indices the
// validation suites need; all intermediates are checked against overflow by
// construction of the callers' ranges).

// Mirrors the double-series row-start recurrence at A = 0: the k-th
// coefficient of the B-axis specialization, (5k)!/(k!(4k+1)!).  Valid k <= 10.
inline std::uint64_t principal_b_axis_coefficient(int k) {
    if (k < 0 || k > 10) throw std::invalid_argument("coefficient index out of validated range");
    std::uint64_t c = 1;
    for (int i = 0; i < k; ++i) {
        const std::uint64_t id = std::uint64_t(i);
        std::uint64_t num = c;
        for (std::uint64_t f = 5 * id + 1; f <= 5 * id + 5; ++f) num *= f;
        std::uint64_t den = id + 1;
        for (std::uint64_t f = 4 * id + 2; f <= 4 * id + 5; ++f) den *= f;
        c = num / den;  // exact: the sequence is integral
    }
    return c;
}

// Independent evaluation of the same integers through the hypergeometric
// parameter structure: term ratio
//   5 (5k+1)(5k+2)(5k+3)(5k+4) / (8 (2k+1)(4k+3)(4k+5)(k+1)),
// i.e. the (1/5,2/5,3/5,4/5 ; 1/2,3/4,5/4) ratio with fractions cleared and
// the 5^5/4^4 argument factor absorbed.  Valid k <= 10.
inline std::uint64_t hypergeometric_quintic_coefficient(int k) {
    if (k < 0 || k > 10) throw std::invalid_argument("coefficient index out of validated range");
    std::uint64_t c = 1;
    for (int i = 0; i < k; ++i) {
        const std::uint64_t id = std::uint64_t(i);
        std::uint64_t num = c * 5;
        for (std::uint64_t f = 5 * id + 1; f <= 5 * id + 4; ++f) num *= f;
        const std::uint64_t den =
            8 * (2 * id + 1) * (4 * id + 3) * (4 * id + 5) * (id + 1);
        c = num / den;  // exact
    }
    return c;
}

// Catalan numbers C(2j, j)/(j+1); the coefficients of the quadratic-case
// series (m=1, n=2).  Valid j <= 30.
inline std::uint64_t catalan_number(int j) {
    if (j < 0 || j > 30) throw std::invalid_argument("catalan index out of validated range");
    std::uint64_t c = 1;
    for (std::uint64_t i = 1; i <= std::uint64_t(j); ++i)
        c = c * (std::uint64_t(j) + i) / i;  // C(2j, j), integral at every step
    return c / (std::uint64_t(j) + 1);
}

// m = 1 trinomial coefficients (nk)! / (k! ((n-1)k+1)!), evaluated as a
// falling product divided by k!.  Valid for n <= 5, k <= 10.
inline std::uint64_t trinomial_m1_coefficient(int n, int k) {
    if (n < 2 || n > 5 || k < 0 || k > 10)
        throw std::invalid_argument("coefficient index out of validated range");
    std::uint64_t num = 1;
    for (std::uint64_t f = std::uint64_t(n - 1) * std::uint64_t(k) + 2;
         f <= std::uint64_t(n) * std::uint64_t(k); ++f)
        num *= f;
    std::uint64_t kfact = 1;
    for (std::uint64_t i = 2; i <= std::uint64_t(k); ++i) kfact *= i;
    return num / kfact;  // exact
}

// The same integers through the binomial grouping C(nk, k) / ((n-1)k + 1),
// mirroring the printed Gamma-ratio normalization at m = 1.  Valid n <= 5,
// k <= 10.
inline std::uint64_t trinomial_m1_coefficient_printed(int n, int k) {
    if (n < 2 || n > 5 || k < 0 || k > 10)
        throw std::invalid_argument("coefficient index out of validated range");
    std::uint64_t c = 1;
    for (std::uint64_t i = 1; i <= std::uint64_t(k); ++i)
        c = c * (std::uint64_t(n - 1) * std::uint64_t(k) + i) / i;  // C(nk, k)
    return c / (std::uint64_t(n - 1) * std::uint64_t(k) + 1);
}

}  // namespace quintica
