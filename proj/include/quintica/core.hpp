#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace quintica {

using Complex = std::complex<double>;

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// ---------------------------------------------------------------------------
// Errors

struct DeflationResidualTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateLeadingCoefficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Polynomial shapes

// General quintic c0 + c1 x + ... + c5 x^5, c5 != 0.
struct Quintic {
    std::array<Complex, 6> coeffs{};  // ascending: coeffs[i] multiplies x^i
    bool monic = false;

    static Quintic from_coeffs(const std::array<Complex, 6>& c) {
        for (const Complex& v : c)
            if (!is_finite(v)) throw std::invalid_argument("quintic coefficient not finite");
        if (std::abs(c[5]) == 0.0)
            throw DegenerateLeadingCoefficient("quintic leading coefficient is zero");
        Quintic q;
        q.coeffs = c;
        q.monic = (c[5] == Complex{1.0, 0.0});
        return q;
    }
};

// x^5 + a3 x^3 + a1 x + a0 (degree-4 and degree-2 coefficients identically zero).
struct DepressedQuintic {
    Complex a3{};
    Complex a1{};
    Complex a0{};

    std::array<Complex, 6> coeffs() const { return {a0, a1, Complex{0.0}, a3, Complex{0.0}, Complex{1.0}}; }
};

// B x^5 + A x^2 + x + 1 (linear and constant coefficients fixed at 1).
struct PrincipalQuintic {
    Complex A{};
    Complex B{};
};

// ---------------------------------------------------------------------------
// Root sets

enum class RootMethod { series, closed_form, oracle, pipeline };

inline const char* to_string(RootMethod m) {
    switch (m) {
        case RootMethod::series: return "series";
        case RootMethod::closed_form: return "closed_form";
        case RootMethod::oracle: return "oracle";
        case RootMethod::pipeline: return "pipeline";
    }
    return "unknown";
}

struct RootSet {
    std::vector<Complex> roots;
    std::vector<double> residuals;  // scale-free: |P(r)| / max(1, max|c_i|)
    RootMethod method = RootMethod::closed_form;
};

// Deterministic ordering: by real part, then imaginary part, ascending.
inline bool root_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

inline void sort_root_set(RootSet& rs) {
    std::vector<std::size_t> idx(rs.roots.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        return root_less(rs.roots[i], rs.roots[j]);
    });
    std::vector<Complex> r(rs.roots.size());
    std::vector<double> s(rs.residuals.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        r[i] = rs.roots[idx[i]];
        if (idx[i] < rs.residuals.size()) s[i] = rs.residuals[idx[i]];
    }
    rs.roots = std::move(r);
    rs.residuals = std::move(s);
}

// ---------------------------------------------------------------------------
// Evaluation and synthetic division
//
// Polynomials are passed as ascending coefficient vectors {c0, c1, ..., cd}.

inline Complex eval_poly(const std::vector<Complex>& coeffs, const Complex& x) {
    Complex acc{0.0};
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

inline Complex eval_poly_deriv(const std::vector<Complex>& coeffs, const Complex& x) {
    Complex acc{0.0};
    for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * x + double(i) * coeffs[i];
    return acc;
}

inline double max_coeff_magnitude(const std::vector<Complex>& coeffs) {
    double m = 0.0;
    for (const Complex& c : coeffs) m = std::max(m, std::abs(c));
    return m;
}

// Scale-free residual used everywhere a RootSet stores residuals.
inline double normalized_residual(const std::vector<Complex>& coeffs, const Complex& r) {
    return std::abs(eval_poly(coeffs, r)) / std::max(1.0, max_coeff_magnitude(coeffs));
}

// A few Newton steps; leaves x unchanged when the derivative degenerates.
inline Complex newton_polish(const std::vector<Complex>& coeffs, Complex x, int steps = 3) {
    for (int s = 0; s < steps; ++s) {
        const Complex dp = eval_poly_deriv(coeffs, x);
        if (std::abs(dp) < 1e-300) break;
        const Complex step = eval_poly(coeffs, x) / dp;
        if (!is_finite(step)) break;
        x -= step;
    }
    return x;
}

// Divide the monic polynomial by (x - r).  The remainder P(r) is discarded,
// so the caller must certify r is a root to within tol first.
inline std::vector<Complex> deflate(const std::vector<Complex>& coeffs, const Complex& r,
                                    double tol = 1e-8) {
    if (coeffs.size() < 2) throw std::invalid_argument("deflate needs degree >= 1");
    const double res = normalized_residual(coeffs, r);
    if (!(res <= tol))
        throw DeflationResidualTooLarge("deflation residual " + std::to_string(res) +
                                        " exceeds tolerance " + std::to_string(tol));
    const std::size_t d = coeffs.size() - 1;
    std::vector<Complex> q(d);  // ascending coefficients of the quotient
    Complex carry = coeffs[d];
    for (std::size_t i = d; i-- > 0;) {
        q[i] = carry;
        carry = coeffs[i] + r * carry;
    }
    return q;
}

// ---------------------------------------------------------------------------
// Closed-form solvers

// a2 x^2 + a1 x + a0 = 0 via the multiply-by-conjugate branch choice, which
// keeps q = -(a1 + sgn·sqrt(disc))/2 away from cancellation.
inline RootSet solve_quadratic(const Complex& a2, const Complex& a1, const Complex& a0) {
    if (std::abs(a2) == 0.0)
        throw DegenerateLeadingCoefficient("quadratic leading coefficient is zero");
    const Complex disc = a1 * a1 - 4.0 * a2 * a0;
    Complex sd = std::sqrt(disc);
    if ((std::conj(a1) * sd).real() < 0.0) sd = -sd;
    const Complex q = -0.5 * (a1 + sd);
    RootSet rs;
    rs.method = RootMethod::closed_form;
    if (std::abs(q) == 0.0) {
        // a1 + sd == 0 forces a0 == 0: roots are 0 and -a1/a2.
        rs.roots = {Complex{0.0}, -a1 / a2};
    } else {
        rs.roots = {q / a2, a0 / q};
    }
    const std::vector<Complex> c{a0, a1, a2};
    for (const Complex& r : rs.roots) rs.residuals.push_back(normalized_residual(c, r));
    sort_root_set(rs);
    return rs;
}

namespace detail {

// One root of the monic cubic t^3 + a t^2 + b t + c (complex Cardano); the
// other two are recovered by the caller through the cube roots of unity.
inline std::array<Complex, 3> cubic_roots(const Complex& a, const Complex& b, const Complex& c) {
    const Complex p = b - a * a / 3.0;
    const Complex q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    if (std::abs(p) == 0.0 && std::abs(q) == 0.0) {
        const Complex t = -a / 3.0;
        return {t, t, t};
    }
    const Complex sq = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    Complex u3 = -q / 2.0 + sq;
    if (std::abs(u3) < std::abs(-q / 2.0 - sq)) u3 = -q / 2.0 - sq;  // larger magnitude branch
    const Complex u = std::pow(u3, 1.0 / 3.0);
    const Complex w{-0.5, std::sqrt(3.0) / 2.0};  // primitive cube root of unity
    std::array<Complex, 3> out;
    for (int i = 0; i < 3; ++i) {
        const Complex ui = u * std::pow(w, double(i));
        const Complex vi = (std::abs(ui) > 1e-300) ? -p / (3.0 * ui) : Complex{0.0};
        out[std::size_t(i)] = ui + vi - a / 3.0;
    }
    return out;
}

}  // namespace detail

// Monic quartic x^4 + c3 x^3 + c2 x^2 + c1 x + c0 = 0 by depression and the
// Ferrari resolvent-cubic factorization into two quadratics, plus a short
// Newton polish on the undepressed polynomial.
inline RootSet solve_quartic(const Complex& c3, const Complex& c2, const Complex& c1,
                             const Complex& c0) {
    const Complex shift = -c3 / 4.0;
    // Depressed form y^4 + p y^2 + q y + r with x = y + shift.
    const Complex p = c2 - 3.0 * c3 * c3 / 8.0;
    const Complex q = c1 - c2 * c3 / 2.0 + c3 * c3 * c3 / 8.0;
    const Complex r = c0 - c1 * c3 / 4.0 + c2 * c3 * c3 / 16.0 - 3.0 * c3 * c3 * c3 * c3 / 256.0;

    const std::vector<Complex> full{c0, c1, c2, c3, Complex{1.0}};
    const double scale = std::max({1.0, std::abs(p), std::abs(q), std::abs(r)});

    std::vector<Complex> ys;
    ys.reserve(4);
    if (std::abs(q) <= 1e-14 * scale) {
        // Biquadratic: y^2 solves t^2 + p t + r.
        const RootSet ts = solve_quadratic(Complex{1.0}, p, r);
        for (const Complex& t : ts.roots) {
            const Complex s = std::sqrt(t);
            ys.push_back(s);
            ys.push_back(-s);
        }
    } else {
        // Resolvent cubic m^3 + p m^2 + (p^2/4 - r) m - q^2/8 = 0; any nonzero
        // root factors the depressed quartic into two quadratics.
        const auto ms = detail::cubic_roots(p, p * p / 4.0 - r, -q * q / 8.0);
        Complex m = ms[0];
        for (const Complex& cand : ms)
            if (std::abs(cand) > std::abs(m)) m = cand;
        const Complex s = std::sqrt(2.0 * m);
        const Complex t = q / (2.0 * s);
        const RootSet q1 = solve_quadratic(Complex{1.0}, -s, p / 2.0 + m + t);
        const RootSet q2 = solve_quadratic(Complex{1.0}, s, p / 2.0 + m - t);
        ys.insert(ys.end(), q1.roots.begin(), q1.roots.end());
        ys.insert(ys.end(), q2.roots.begin(), q2.roots.end());
    }

    RootSet rs;
    rs.method = RootMethod::closed_form;
    for (const Complex& y : ys) {
        const Complex x = newton_polish(full, y + shift, 2);
        rs.roots.push_back(x);
        rs.residuals.push_back(normalized_residual(full, x));
    }
    sort_root_set(rs);
    return rs;
}

}  // namespace quintica
