#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "muband/cutoff.hpp"
#include "muband/smoothing.hpp"

using namespace muband;

TEST_CASE("cutoff profile clamps, identifies and transitions") {
    const double a = -1.0, b = 2.0, eps = 0.4;
    const CutoffProfile rho = make_cutoff(a, b, eps);

    CHECK(rho.value(0.5 * (a + b)) == 0.5 * (a + b));  // identity zone, exact
    CHECK(rho.value(a - eps) == a);
    CHECK(rho.value(b + eps) == b);
    CHECK(rho.value(a - 10.0) == a);
    CHECK(rho.value(b + 10.0) == b);
    CHECK(rho.value(a + eps / 2.0) == doctest::Approx(a + eps / 2.0).epsilon(1e-15));
    CHECK(rho.value(b - eps / 2.0) == doctest::Approx(b - eps / 2.0).epsilon(1e-15));

    // 0 <= rho' <= 1 everywhere, strictly inside the transitions.
    for (double t : uniform_grid(a - eps, b + eps, 2001)) {
        const double d = rho.deriv(t);
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
    }
    for (int i = 1; i < 100; ++i) {
        const double s = static_cast<double>(i) / 100.0;
        const double t = (a - eps / 2.0) + eps * s;
        const double d = rho.deriv(t);
        CHECK(d > 0.0);
        CHECK(d < 1.0);
    }
}

TEST_CASE("cutoff transition slope stays below one on an interior grid") {
    const CutoffProfile rho = make_cutoff(0.0, 1.0, 0.1);
    double max_slope = 0.0;
    // 99 interior samples of the left transition zone.
    for (int i = 1; i < 100; ++i) {
        const double t = -0.05 + 0.1 * (static_cast<double>(i) / 100.0);
        max_slope = std::max(max_slope, rho.deriv(t));
    }
    CHECK(max_slope < 1.0 - 1e-6);
}

TEST_CASE("cutoff monotone and consistent with its derivative") {
    const CutoffProfile rho = make_cutoff(0.0, 1.0, 0.2);
    double prev = rho.value(-0.3);
    for (double t : uniform_grid(-0.3, 1.3, 800)) {
        const double v = rho.value(t);
        CHECK(v >= prev - 1e-15);
        prev = v;
    }
    // Derivative matches a finite difference of the closed form.
    for (double t : {-0.07, 0.02, 0.5, 0.93, 1.06}) {
        const double fd = (rho.value(t + 1e-7) - rho.value(t - 1e-7)) / 2e-7;
        CHECK(rho.deriv(t) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("cutoff rejects oversized transition widths") {
    CHECK_THROWS_AS(make_cutoff(0.0, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(make_cutoff(0.0, 1.0, 0.8), DomainError);
    CHECK_NOTHROW(make_cutoff(0.0, 1.0, 0.49));
}

TEST_CASE("smoothed spherical potential satisfies all four properties") {
    const ModelSpace ms = make_spherical(2, 1.0, -kPi / 4.0, kPi / 4.0);
    const SmoothedPotential pot(ms, 0.05, CutoffProfile::Side::Both);

    CHECK(pot.certificate().all_ok());
    // Clamped end values equal the original endpoint values of h = -tan.
    CHECK(pot.value(kPi / 4.0 + 0.05) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(pot.value(-kPi / 4.0 - 0.05) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(pot.left_value() == doctest::Approx(1.0).epsilon(1e-13));

    // Identity zone is exact.
    for (double t : uniform_grid(-kPi / 4.0 + 0.05, kPi / 4.0 - 0.05, 101)) {
        CHECK(pot.value(t) == ms.potential(t));
    }
}

TEST_CASE("strictness margin identity sigma - r = -2 h'(rho)(1 - rho')") {
    const ModelSpace ms = make_spherical(7, 1.0, -0.2, 0.2);
    const SmoothedPotential pot(ms, 0.03, CutoffProfile::Side::Both);
    const double sigma = pot.sigma();
    for (double t : uniform_grid(pot.domain_min(), pot.domain_max(), 4001)) {
        const double h = pot.value(t);
        const double hp = pot.deriv(t);
        const double r = -(7.0 / 6.0) * h * h - 2.0 * hp;
        const double rho_t = pot.cutoff().value(t);
        const double rho_p = pot.cutoff().deriv(t);
        const double expected = -2.0 * ms.potential_deriv_extended(rho_t) * (1.0 - rho_p);
        CHECK(sigma - r == doctest::Approx(expected).epsilon(1e-8).scale(1.0 + std::fabs(sigma)));
        CHECK(r <= sigma + 1e-9 * (1.0 + std::fabs(sigma)));
        if (hp == 0.0) CHECK(sigma - r > 0.0);
    }
}

TEST_CASE("one-sided smoothing keeps the other side as a plain extension") {
    const ModelSpace ms = make_cone(3, 0.5, 1.5);
    const SmoothedPotential pot(ms, 0.1, CutoffProfile::Side::RightOnly);
    // Left side: h_hat = h on the extended domain, no clamping.
    for (double t : uniform_grid(0.4, 1.4, 101)) {
        CHECK(pot.value(t) == doctest::Approx(ms.potential_extended(t)).epsilon(1e-14));
    }
    // Right side clamps to h(b).
    CHECK(pot.value(1.6) == doctest::Approx(ms.potential(1.5)).epsilon(1e-14));
    // The clamp-side boundary value is strictly below the left one.
    CHECK(pot.right_value() < pot.left_value());
}

TEST_CASE("one-sided extension must stay inside the family domain") {
    const ModelSpace ms = make_cone(3, 0.05, 1.0);
    CHECK_THROWS_AS(SmoothedPotential(ms, 0.1, CutoffProfile::Side::RightOnly), DomainError);
}

TEST_CASE("oversized eps raises CertificateError") {
    const ModelSpace ms = make_spherical(2, 1.0, -kPi / 4.0, kPi / 4.0);
    CHECK_THROWS_AS(SmoothedPotential(ms, kPi / 4.0, CutoffProfile::Side::Both),
                    CertificateError);
}

TEST_CASE("smoothed potential is non-increasing everywhere") {
    const ModelSpace ms = make_hyperbolic(5, 3.0, 0.3, 1.2);
    const SmoothedPotential pot(ms, 0.08, CutoffProfile::Side::Both);
    double prev = std::numeric_limits<double>::infinity();
    for (double t : uniform_grid(pot.domain_min(), pot.domain_max(), 3000)) {
        const double v = pot.value(t);
        CHECK(v <= prev + 1e-15);
        prev = v;
        CHECK(pot.deriv(t) <= 0.0);
    }
}
