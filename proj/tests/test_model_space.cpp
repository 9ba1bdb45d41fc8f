#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "muband/model_space.hpp"

using namespace muband;

namespace {

// Independent potential oracle: centered difference of the raw warping
// profile, h = (n-1) phi'/phi.
double potential_fd(const std::function<double(double)>& phi, int n, double t) {
    const double step = 1e-6;
    const double dp = (phi(t + step) - phi(t - step)) / (2.0 * step);
    return (n - 1) * dp / phi(t);
}

} // namespace

TEST_CASE("spherical potential matches the differentiation oracle") {
    const ModelSpace ms = make_spherical(2, 1.0, -0.8, 0.8);
    // For n = 2, kappa = 1 the warping is plain cos(t).
    const auto phi = [](double t) { return std::cos(t); };
    CHECK(ms.potential(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ms.potential(kPi / 4.0) == doctest::Approx(-1.0).epsilon(1e-12));
    for (double t : {-0.75, -0.3, 0.2, 0.5}) {
        CHECK(ms.potential(t) == doctest::Approx(potential_fd(phi, 2, t)).epsilon(1e-7));
        CHECK(ms.warping().phi(t) == doctest::Approx(phi(t)).epsilon(1e-12));
    }
}

TEST_CASE("cone potential has the closed form 2(n-1)/(n t)") {
    const ModelSpace ms = make_cone(2, 0.5, 3.0);
    CHECK(ms.potential(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    const ModelSpace ms7 = make_cone(7, 0.1, 2.0);
    for (double t : {0.1, 0.5, 1.3, 2.0}) {
        CHECK(ms7.potential(t) == doctest::Approx(12.0 / (7.0 * t)).epsilon(1e-14));
    }
}

TEST_CASE("scalar curvature is the family constant") {
    SUBCASE("cone is scalar flat") {
        const ModelSpace ms = make_cone(5, 0.2, 4.0);
        for (double t : uniform_grid(0.2, 4.0, 101)) {
            CHECK(std::fabs(ms.scalar_curvature(t)) < 1e-11);
        }
    }
    SUBCASE("hyperbolic has scal = -sigma") {
        const ModelSpace ms = make_hyperbolic(4, 5.0, 0.1, 2.0);
        for (double t : uniform_grid(0.1, 2.0, 101)) {
            CHECK(ms.scalar_curvature(t) == doctest::Approx(-5.0).epsilon(1e-11));
        }
        CHECK(ms.nominal_sigma() == -5.0);
    }
    SUBCASE("spherical has scal = kappa n(n-1)") {
        const ModelSpace ms = make_spherical(7, 2.0, -0.2, 0.25);
        for (double t : uniform_grid(-0.2, 0.25, 10)) {
            CHECK(ms.scalar_curvature(t) == doctest::Approx(84.0).epsilon(1e-12));
        }
        CHECK(ms.scalar_curvature(0.1) == doctest::Approx(84.0).epsilon(1e-12));
    }
}

TEST_CASE("ODE identity on a dense grid across families") {
    std::vector<ModelSpace> models;
    for (int n = 2; n <= 7; ++n) {
        for (double kappa : {0.5, 1.0, 2.0}) {
            const double lim = kPi / (std::sqrt(kappa) * n);
            models.push_back(make_spherical(n, kappa, -0.8 * lim, 0.8 * lim));
        }
        models.push_back(make_cone(n, 0.05, 3.0));
        for (double sigma : {1.0, 5.0, 10.0}) {
            models.push_back(make_hyperbolic(n, sigma, 0.05, 3.0));
        }
    }
    for (const auto& ms : models) {
        const double sigma = ms.nominal_sigma();
        double worst = 0.0;
        for (double t : uniform_grid(ms.domain_min(), ms.domain_max(), 2000)) {
            worst = std::max(worst, std::fabs(ms.scalar_curvature(t) - sigma));
        }
        CHECK(worst < 1e-9 * (1.0 + std::fabs(sigma)));
    }
}

TEST_CASE("potential is strictly decreasing") {
    const auto check_decreasing = [](const ModelSpace& ms) {
        double prev = std::numeric_limits<double>::infinity();
        for (double t : uniform_grid(ms.domain_min(), ms.domain_max(), 500)) {
            const double h = ms.potential(t);
            CHECK(h < prev);
            prev = h;
        }
    };
    check_decreasing(make_spherical(3, 1.5, -0.4, 0.5));
    check_decreasing(make_cone(6, 0.3, 2.0));
    check_decreasing(make_hyperbolic(7, 2.0, 0.2, 1.5));
}

TEST_CASE("make_spherical validates its interval") {
    const ModelSpace ms = make_spherical(7, 1.0, -kPi / 14.0, kPi / 14.0);
    CHECK(ms.width() == doctest::Approx(kPi / 7.0).epsilon(1e-15));
    CHECK(width_of(ms) == ms.width());
    CHECK_THROWS_AS(make_spherical(2, 1.0, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(make_spherical(7, 1.0, -kPi / 7.0, kPi / 7.0), DomainError);
}

TEST_CASE("cone and hyperbolic reject non-positive inner endpoints") {
    CHECK_THROWS_AS(make_cone(3, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(make_cone(3, -0.5, 1.0), DomainError);
    CHECK_THROWS_AS(make_hyperbolic(3, 1.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(make_hyperbolic(3, -1.0, 0.5, 1.0), DomainError);
}

TEST_CASE("potential evaluation outside the band domain fails") {
    const ModelSpace ms = make_cone(4, 1.0, 2.0);
    CHECK_THROWS_AS(ms.potential(0.5), DomainError);
    CHECK_THROWS_AS(ms.potential(2.5), DomainError);
    CHECK_NOTHROW(ms.potential_extended(0.5));  // still inside the family domain
}

TEST_CASE("reflection negates the potential through the origin") {
    const ModelSpace cone = make_cone(2, 1.0, 2.0);
    const ModelSpace r = reflect(cone);
    CHECK(r.domain_min() == doctest::Approx(-2.0));
    CHECK(r.domain_max() == doctest::Approx(-1.0));
    CHECK(r.potential(-1.0) == doctest::Approx(-1.0).epsilon(1e-14));

    for (double t : uniform_grid(-2.0, -1.0, 101)) {
        CHECK(r.potential(t) == doctest::Approx(-cone.potential(-t)).epsilon(1e-12));
        CHECK(r.scalar_curvature(t) == doctest::Approx(cone.scalar_curvature(-t)).epsilon(1e-12));
    }

    const ModelSpace rr = reflect(r);
    for (double t : uniform_grid(1.0, 2.0, 101)) {
        CHECK(rr.potential(t) == doctest::Approx(cone.potential(t)).epsilon(1e-14));
        CHECK(rr.warping().phi(t) == doctest::Approx(cone.warping().phi(t)).epsilon(1e-14));
    }

    const ModelSpace sph = make_spherical(5, 1.0, -0.3, 0.3);
    CHECK(reflect(sph).potential(0.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("boundary mean curvatures follow the interior-normal convention") {
    SUBCASE("cone band") {
        const auto [lo, hi] = make_cone(2, 1.0, 2.0).boundary_mean_curvatures();
        CHECK(lo == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(hi == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("symmetric spherical band has equal boundary values") {
        const ModelSpace ms = make_spherical(2, 1.0, -kPi / 4.0, kPi / 4.0);
        const auto [lo, hi] = ms.boundary_mean_curvatures();
        // h is odd, so -h(a) = h(b): both circles curve away from the band.
        CHECK(lo == doctest::Approx(hi).epsilon(1e-13));
        CHECK(hi == doctest::Approx(-1.0).epsilon(1e-13));
    }
}

TEST_CASE("custom-sampled warpings differentiate through a spline") {
    std::vector<double> ts, phis;
    for (int i = 0; i <= 400; ++i) {
        const double t = -0.5 + i * (1.0 / 400.0);
        ts.push_back(t);
        phis.push_back(std::cos(t));
    }
    const ModelSpace ms = make_custom(2, ts, phis);
    for (double t : {-0.4, -0.1, 0.2, 0.45}) {
        CHECK(ms.potential(t) == doctest::Approx(-std::tan(t)).epsilon(1e-5));
    }
    // Curvature consistency is a check, not an identity, for sampled input.
    for (double t : {-0.3, 0.0, 0.3}) {
        CHECK(ms.scalar_curvature(t) == doctest::Approx(2.0).epsilon(5e-3));
    }
}

TEST_CASE("custom samples that are not strictly log-concave are rejected") {
    std::vector<double> ts, phis;
    for (int i = 0; i <= 100; ++i) {
        const double t = 0.5 + i * (1.0 / 100.0);
        ts.push_back(t);
        phis.push_back(std::cosh(t));  // log-convex
    }
    CHECK_THROWS_AS(make_custom(3, ts, phis), CertificateError);
}

TEST_CASE("reflection works for sampled warpings too") {
    std::vector<double> ts, phis;
    for (int i = 0; i <= 200; ++i) {
        const double t = 0.5 + i * (1.0 / 200.0);
        ts.push_back(t);
        phis.push_back(std::pow(t, 0.5));  // cone-like profile, n = 4
    }
    const ModelSpace ms = make_custom(4, ts, phis);
    const ModelSpace r = ms.reflect();
    CHECK(r.domain_min() == doctest::Approx(-1.5));
    for (double t : {-1.4, -1.0, -0.6}) {
        CHECK(r.potential(t) == doctest::Approx(-ms.potential(-t)).epsilon(1e-12));
    }
}

TEST_CASE("model space dimensions are restricted") {
    CHECK_THROWS_AS(make_cone(1, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(make_cone(8, 0.5, 1.0), DomainError);
}
