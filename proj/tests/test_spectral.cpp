#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "nehari/spectral.hpp"

using namespace nehari;

namespace {

// First zero of the Bessel series J0(x) = sum (-1)^k (x^2/4)^k / (k!)^2,
// located by bisection. Independent oracle for the disk eigenvalue.
double bessel_j0(double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= -(x * x) / (4.0 * k * k);
        sum += term;
    }
    return sum;
}

double bessel_j0_first_zero() {
    double lo = 2.0, hi = 3.0;
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        if (bessel_j0(lo) * bessel_j0(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("interval eigenvalue approaches pi^2") {
    Eigenpair ep = principal_eigenpair(CrossSection::make_interval(0.0, 1.0), 1.0 / 64);
    CHECK(ep.lambda1 == doctest::Approx(M_PI * M_PI).epsilon(5e-4));
}

TEST_CASE("interval eigenvalue matches the discrete closed form exactly") {
    for (double h : {1.0 / 16, 1.0 / 32}) {
        Eigenpair ep = principal_eigenpair(CrossSection::make_interval(0.0, 1.0), h, 1e-11);
        double discrete = 4.0 / (h * h) * std::pow(std::sin(M_PI * h / 2.0), 2);
        CHECK(ep.lambda1 == doctest::Approx(discrete).epsilon(1e-8));
    }
}

TEST_CASE("square eigenvalue matches 2x the discrete interval form") {
    double h = 1.0 / 32;
    Eigenpair ep = principal_eigenpair(CrossSection::make_square(1.0), h, 1e-11);
    double discrete = 8.0 / (h * h) * std::pow(std::sin(M_PI * h / 2.0), 2);
    CHECK(ep.lambda1 == doctest::Approx(discrete).epsilon(1e-8));
}

TEST_CASE("disk eigenvalue approaches the Bessel-zero oracle") {
    double j01 = bessel_j0_first_zero();
    CHECK(j01 == doctest::Approx(2.404825557695773).epsilon(1e-12));
    Eigenpair ep = principal_eigenpair(CrossSection::make_disk(1.0), 1.0 / 64);
    CHECK(ep.lambda1 == doctest::Approx(j01 * j01).epsilon(0.01));
}

TEST_CASE("eigenfunction is positive, sup-normalized, with a small residual") {
    Eigenpair ep = principal_eigenpair(CrossSection::make_disk(1.0), 0.05, 1e-10);
    double mx = 0.0;
    for (double v : ep.phi.values) {
        CHECK(v > 0.0); // discrete Perron property: no sign change
        mx = std::max(mx, v);
    }
    CHECK(mx == doctest::Approx(1.0).epsilon(1e-14));
    // Rayleigh quotient consistency
    double rq = inner(laplacian(ep.phi), ep.phi) / inner(ep.phi, ep.phi);
    CHECK(rq == doctest::Approx(ep.lambda1).epsilon(1e-8));
}

TEST_CASE("domain monotonicity on nested disks") {
    Eigenpair small = principal_eigenpair(CrossSection::make_disk(0.8), 0.05);
    Eigenpair large = principal_eigenpair(CrossSection::make_disk(1.0), 0.05);
    CHECK(small.lambda1 > large.lambda1);
}

TEST_CASE("dilation law lambda1(sF) = lambda1(F)/s^2") {
    double s = 1.5;
    Eigenpair base = principal_eigenpair(CrossSection::make_disk(1.0), 0.04);
    Eigenpair scaled = principal_eigenpair(CrossSection::make_disk(1.0).scaled(s), 0.04);
    CHECK(scaled.lambda1 == doctest::Approx(base.lambda1 / (s * s)).epsilon(0.02));
}

TEST_CASE("coercivity: <-lap u, u> >= lambda1_h <u, u>") {
    auto grid = discretize_cross_section(CrossSection::make_disk(1.0), 0.05);
    Eigenpair ep = principal_eigenpair_on_grid(grid, 1e-11);
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        Field u(grid);
        for (auto& v : u.values) v = dist(rng);
        double lhs = inner(laplacian(u), u);
        double rhs = ep.lambda1 * inner(u, u);
        CHECK(lhs >= rhs * (1.0 - 1e-10));
    }
}

TEST_CASE("convergence report shows second order on the interval") {
    auto rows = eigen_convergence_report(CrossSection::make_interval(0.0, 1.0),
                                         {0.1, 0.05, 0.025}, M_PI * M_PI);
    REQUIRE(rows.size() == 3);
    // errors shrink by ~4x per halving
    CHECK(rows[0].observed_order == doctest::Approx(2.0).epsilon(0.15));
    CHECK(rows[1].observed_order == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("convergence report: disk errors shrink under halving") {
    double exact = 2.404825557695773 * 2.404825557695773;
    auto rows =
        eigen_convergence_report(CrossSection::make_disk(1.0), {0.1, 0.05, 0.025}, exact);
    REQUIRE(rows.size() == 3);
    // stencil and boundary-margin errors compete, so the sequence is
    // not monotone, but the distance to the Bessel value shrinks
    CHECK(rows[1].error < rows[0].error);
    CHECK(rows[2].error < rows[1].error);
}

TEST_CASE("h list must decrease") {
    CHECK_THROWS_AS(
        eigen_convergence_report(CrossSection::make_disk(1.0), {0.05, 0.1}), Error);
}
