#include <catch2/catch_amalgamated.hpp>

#include <quintica/quintica.hpp>

#include <random>

using namespace quintica;

namespace {

void check_close(const Complex& got, const Complex& want, double tol) {
    INFO("got (" << got.real() << ", " << got.imag() << "), want (" << want.real() << ", "
                 << want.imag() << ")");
    REQUIRE(std::abs(got - want) <= tol);
}

// (x - r) * q(x), ascending coefficients.
std::vector<Complex> mul_linear(const std::vector<Complex>& q, const Complex& r) {
    std::vector<Complex> p(q.size() + 1, Complex{0.0});
    for (std::size_t i = 0; i < q.size(); ++i) {
        p[i + 1] += q[i];
        p[i] -= r * q[i];
    }
    return p;
}

std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> p{Complex{1.0}};
    for (const Complex& r : roots) p = mul_linear(p, r);
    return p;
}

}  // namespace

TEST_CASE("polynomial evaluation") {
    const std::vector<Complex> p{Complex{-1.0}, Complex{0.0}, Complex{0.0},
                                 Complex{0.0},  Complex{0.0}, Complex{1.0}};  // x^5 - 1
    CHECK(std::abs(eval_poly(p, Complex{1.0})) == 0.0);
    check_close(eval_poly(p, Complex{2.0}), Complex{31.0}, 1e-12);
    check_close(eval_poly_deriv(p, Complex{2.0}), Complex{80.0}, 1e-12);
    CHECK(max_coeff_magnitude(p) == 1.0);
    CHECK(normalized_residual(p, Complex{1.0}) == 0.0);

    const std::vector<Complex> q{Complex{1.0}, Complex{0.0, 1.0}};  // 1 + i x
    check_close(eval_poly(q, Complex{0.0, 1.0}), Complex{0.0}, 1e-15);
}

TEST_CASE("normalized residual scales by the largest coefficient") {
    // 100 x - 100: residual at x = 1 + 1e-8 must not be inflated by the scale.
    const std::vector<Complex> p{Complex{-100.0}, Complex{100.0}};
    const double res = normalized_residual(p, Complex{1.0 + 1e-8});
    CHECK(res > 0.5e-8);
    CHECK(res < 2e-8);
}

TEST_CASE("quintic and depressed shapes") {
    const std::array<Complex, 6> c{Complex{1.0}, Complex{2.0}, Complex{0.0},
                                   Complex{0.0}, Complex{0.0}, Complex{1.0}};
    const Quintic q = Quintic::from_coeffs(c);
    CHECK(q.monic);
    std::array<Complex, 6> bad = c;
    bad[5] = Complex{0.0};
    CHECK_THROWS_AS(Quintic::from_coeffs(bad), DegenerateLeadingCoefficient);

    const DepressedQuintic dq{Complex{3.0}, Complex{2.0}, Complex{1.0}};
    const auto dc = dq.coeffs();
    CHECK(dc[0] == Complex{1.0});
    CHECK(dc[1] == Complex{2.0});
    CHECK(dc[2] == Complex{0.0});
    CHECK(dc[3] == Complex{3.0});
    CHECK(dc[4] == Complex{0.0});
    CHECK(dc[5] == Complex{1.0});
}

TEST_CASE("root set ordering") {
    RootSet rs;
    rs.roots = {Complex{1.0, 1.0}, Complex{-1.0, 0.0}, Complex{1.0, -1.0}};
    rs.residuals = {1.0, 2.0, 3.0};
    sort_root_set(rs);
    CHECK(rs.roots[0] == Complex{-1.0, 0.0});
    CHECK(rs.roots[1] == Complex{1.0, -1.0});
    CHECK(rs.roots[2] == Complex{1.0, 1.0});
    CHECK(rs.residuals[0] == 2.0);
    CHECK(rs.residuals[1] == 3.0);
    CHECK(rs.residuals[2] == 1.0);
}

TEST_CASE("newton polish converges locally") {
    const std::vector<Complex> p{Complex{-1.0}, Complex{0.0}, Complex{1.0}};  // x^2 - 1
    const Complex r = newton_polish(p, Complex{1.1}, 5);
    check_close(r, Complex{1.0}, 1e-12);
}

TEST_CASE("quadratic solver basics") {
    SECTION("x^2 - 1") {
        const RootSet rs = solve_quadratic(Complex{1.0}, Complex{0.0}, Complex{-1.0});
        REQUIRE(rs.roots.size() == 2);
        check_close(rs.roots[0], Complex{-1.0}, 1e-14);
        check_close(rs.roots[1], Complex{1.0}, 1e-14);
        CHECK(rs.method == RootMethod::closed_form);
        CHECK(rs.residuals[0] <= 1e-14);
    }
    SECTION("quadratic truncation of the principal quintic at A = -0.1") {
        const RootSet rs = solve_quadratic(Complex{-0.1}, Complex{1.0}, Complex{1.0});
        REQUIRE(rs.roots.size() == 2);
        check_close(rs.roots[0], Complex{-0.91607978309961604257}, 1e-14);
        check_close(rs.roots[1], Complex{10.916079783099616}, 1e-11);
    }
    SECTION("repeated root") {
        const RootSet rs = solve_quadratic(Complex{1.0}, Complex{2.0}, Complex{1.0});
        check_close(rs.roots[0], Complex{-1.0}, 1e-12);
        check_close(rs.roots[1], Complex{-1.0}, 1e-12);
    }
    SECTION("catastrophic cancellation avoided") {
        const RootSet rs = solve_quadratic(Complex{1.0}, Complex{-1e8}, Complex{1.0});
        // The small root is a0/q, never the difference of near-equal values.
        CHECK(std::abs(rs.roots[0] - Complex{1e-8}) <= 1e-22);
        CHECK(std::abs(rs.roots[1] - Complex{1e8}) <= 1e-4);
        CHECK(rs.residuals[0] <= 1e-15);
        // The large root carries relative error ~1e-16, so its normalized
        // residual sits near |r| * eps ~ 1e-8; only the small root is exact.
        CHECK(rs.residuals[1] <= 1e-7);
    }
    SECTION("both roots zero") {
        const RootSet rs = solve_quadratic(Complex{3.0}, Complex{0.0}, Complex{0.0});
        CHECK(rs.roots[0] == Complex{0.0});
        CHECK(rs.roots[1] == Complex{0.0});
    }
    SECTION("degenerate leading coefficient") {
        CHECK_THROWS_AS(solve_quadratic(Complex{0.0}, Complex{1.0}, Complex{1.0}),
                        DegenerateLeadingCoefficient);
    }
}

TEST_CASE("quartic solver exact cases") {
    SECTION("x^4 = 1") {
        const RootSet rs = solve_quartic(Complex{0.0}, Complex{0.0}, Complex{0.0}, Complex{-1.0});
        REQUIRE(rs.roots.size() == 4);
        check_close(rs.roots[0], Complex{-1.0, 0.0}, 1e-12);
        check_close(rs.roots[1], Complex{0.0, -1.0}, 1e-12);
        check_close(rs.roots[2], Complex{0.0, 1.0}, 1e-12);
        check_close(rs.roots[3], Complex{1.0, 0.0}, 1e-12);
    }
    SECTION("cyclotomic x^4 + x^3 + x^2 + x + 1") {
        const RootSet rs = solve_quartic(Complex{1.0}, Complex{1.0}, Complex{1.0}, Complex{1.0});
        const double c1 = std::cos(2.0 * M_PI / 5.0), s1 = std::sin(2.0 * M_PI / 5.0);
        const double c2 = std::cos(4.0 * M_PI / 5.0), s2 = std::sin(4.0 * M_PI / 5.0);
        // Conjugate pairs share a real part to the last ulp, so their sorted
        // order is not pinned down; compare as a multiset instead.
        RootSet want;
        want.roots = {Complex{c2, -s2}, Complex{c2, s2}, Complex{c1, -s1}, Complex{c1, s1}};
        want.residuals.assign(4, 0.0);
        CHECK(match_multisets(rs, want, 1e-10).success);
        for (double r : rs.residuals) CHECK(r <= 1e-12);
    }
}

TEST_CASE("closed-form solvers match the oracle on random draws") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto draw = [&] { return Complex{u(rng), u(rng)}; };

    SECTION("quadratics") {
        for (int trial = 0; trial < 1000; ++trial) {
            const Complex c1 = draw(), c0 = draw();
            const RootSet mine = solve_quadratic(Complex{1.0}, c1, c0);
            const RootSet ref = find_all_roots({c0, c1, Complex{1.0}});
            const MatchReport rep = match_multisets(mine, ref, 1e-9);
            INFO("trial " << trial << " max distance " << rep.max_distance);
            REQUIRE(rep.success);
        }
    }
    SECTION("quartics") {
        for (int trial = 0; trial < 1000; ++trial) {
            const Complex c3 = draw(), c2 = draw(), c1 = draw(), c0 = draw();
            const RootSet mine = solve_quartic(c3, c2, c1, c0);
            const RootSet ref = find_all_roots({c0, c1, c2, c3, Complex{1.0}});
            const MatchReport rep = match_multisets(mine, ref, 1e-9);
            INFO("trial " << trial << " max distance " << rep.max_distance);
            REQUIRE(rep.success);
        }
    }
}

TEST_CASE("synthetic division") {
    SECTION("x^5 - 1 deflated by 1") {
        const std::vector<Complex> p{Complex{-1.0}, Complex{0.0}, Complex{0.0},
                                     Complex{0.0},  Complex{0.0}, Complex{1.0}};
        const std::vector<Complex> q = deflate(p, Complex{1.0});
        REQUIRE(q.size() == 5);
        for (const Complex& c : q) check_close(c, Complex{1.0}, 1e-14);
    }
    SECTION("deflation then multiplication reconstructs the polynomial") {
        std::mt19937 rng(777);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<Complex> roots;
            for (int i = 0; i < 5; ++i) roots.push_back(Complex{u(rng), u(rng)});
            const std::vector<Complex> p = poly_from_roots(roots);
            const std::vector<Complex> q = deflate(p, roots[2], 1e-7);
            const std::vector<Complex> back = mul_linear(q, roots[2]);
            REQUIRE(back.size() == p.size());
            for (std::size_t i = 0; i < p.size(); ++i) check_close(back[i], p[i], 1e-12);
        }
    }
    SECTION("non-root rejected") {
        const std::vector<Complex> p{Complex{1.0}, Complex{0.0}, Complex{0.0},
                                     Complex{0.0}, Complex{0.0}, Complex{1.0}};  // x^5 + 1
        CHECK_THROWS_AS(deflate(p, Complex{1.0}), DeflationResidualTooLarge);
    }
}
