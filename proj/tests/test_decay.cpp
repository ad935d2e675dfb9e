#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nehari/decay.hpp"
#include "nehari/solvers.hpp"

using namespace nehari;

namespace {

EnvelopeSpec plain_spec(double lambda1 = 10.0, double lambda = 0.0, int ell = 1) {
    EnvelopeSpec s;
    s.lambda1 = lambda1;
    s.lambda = lambda;
    s.alpha = 1.0;
    s.ell = ell;
    s.variant = EnvelopeVariant::plain;
    return s;
}

} // namespace

TEST_CASE("envelope value at t = 0 is alpha/e") {
    EnvelopeSpec s = plain_spec();
    s.alpha = 2.0;
    double t = 0.0;
    CHECK(comparison_Psi(s, &t) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("refined variant with ell = 1 equals the plain variant") {
    EnvelopeSpec p = plain_spec(7.0, 1.0, 1);
    EnvelopeSpec r = p;
    r.variant = EnvelopeVariant::refined;
    for (double t : {0.3, 1.0, 4.0}) {
        CHECK(comparison_Psi(r, &t) == doctest::Approx(comparison_Psi(p, &t)).epsilon(1e-14));
    }
}

TEST_CASE("envelope decreases in |t| and orders by rate") {
    EnvelopeSpec slow = plain_spec(10.0, 5.0); // rate sqrt(5)
    EnvelopeSpec fast = plain_spec(10.0, 0.0); // rate sqrt(10)
    double prev = 1e300;
    for (double t = 0.0; t < 6.0; t += 0.25) {
        double v = comparison_Psi(fast, &t);
        CHECK(v < prev);
        prev = v;
    }
    // at large |t| the smaller-rate envelope dominates
    double t = 8.0;
    CHECK(comparison_Psi(slow, &t) > comparison_Psi(fast, &t));
}

TEST_CASE("eigencomputation identity: pointwise value at t = 0, ell = 1") {
    // theta(0) = 1, so the right side is (lambda1-mu) Psi(0) * (0 + 1 + 1).
    EnvelopeSpec s = plain_spec(9.0, 2.0, 1);
    double kappa = 7.0;
    double t0 = 0.0;
    double psi0 = comparison_Psi(s, &t0);
    double h = 1e-3;
    double tp = h, tm = -h;
    double lap = (comparison_Psi(s, &tp) - 2.0 * psi0 + comparison_Psi(s, &tm)) / (h * h);
    double lhs = -lap + kappa * psi0;
    CHECK(lhs == doctest::Approx(2.0 * kappa * psi0).epsilon(1e-5));
}

TEST_CASE("identity residual is O(h^2): ratios about 4 under halving") {
    std::vector<std::array<double, 2>> samples{{0.0, 0.0}, {0.7, 0.0}, {1.9, 0.0}, {3.3, 0.0}};
    EnvelopeSpec s = plain_spec(9.87, 0.0, 1);
    double r1 = verify_eigencomputation(s, samples, 0.02);
    double r2 = verify_eigencomputation(s, samples, 0.01);
    double r3 = verify_eigencomputation(s, samples, 0.005);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));
    CHECK(r2 / r3 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("identity holds for ell = 2 and for the refined variant") {
    EnvelopeSpec s2 = plain_spec(5.0, 0.0, 2);
    std::vector<std::array<double, 2>> pts{{0.5, 0.4}, {1.5, -0.7}, {2.5, 2.0}};
    CHECK(verify_eigencomputation(s2, pts, 0.01) < 1e-3);

    EnvelopeSpec r = s2;
    r.variant = EnvelopeVariant::refined;
    CHECK(verify_eigencomputation(r, pts, 0.01) < 1e-3);
    // refined samples must avoid t = 0
    std::vector<std::array<double, 2>> origin{{0.0, 0.0}};
    CHECK_THROWS_AS(verify_eigencomputation(r, origin, 0.01), Error);
}

TEST_CASE("decay fit recovers a synthetic rate exactly") {
    DomainSpec dom =
        make_domain(1, CrossSection::make_interval(0.0, 1.0), Family::straight, 8.0);
    auto grid = discretize(dom, 0.1);
    Field u = sample_field(grid, [](const Point& x) {
        return std::exp(-std::sqrt(1.0 + 9.0 * x[0] * x[0])) * std::sin(M_PI * x[1]);
    });
    DecayFit fit = fit_decay_rate(u, 2.0, 6.0, false);
    CHECK(fit.rate == doctest::Approx(3.0).epsilon(1e-5));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("decay fit recovers a synthetic prefactor exponent") {
    DomainSpec dom =
        make_domain(2, CrossSection::make_interval(0.0, 1.0), Family::straight, 6.0);
    auto grid = discretize(dom, 0.2);
    Field u = sample_field(grid, [](const Point& x) {
        double tn = std::sqrt(x[0] * x[0] + x[1] * x[1]);
        double val = std::exp(-std::sqrt(1.0 + 4.0 * tn * tn)) * std::sin(M_PI * x[2]);
        return tn > 1e-12 ? val * std::pow(tn, -0.5) : val;
    });
    DecayFit fit = fit_decay_rate(u, 1.5, 4.5, true);
    CHECK(fit.rate == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(fit.prefactor_exponent == doctest::Approx(-0.5).epsilon(1e-2));
}

TEST_CASE("window validation and underflow reporting") {
    DomainSpec dom =
        make_domain(1, CrossSection::make_interval(0.0, 1.0), Family::straight, 8.0);
    auto grid = discretize(dom, 0.1);
    Field zero_tail = sample_field(grid, [](const Point& x) {
        return std::abs(x[0]) < 1.0 ? 1.0 : 0.0;
    });
    try {
        fit_decay_rate(zero_tail, 3.0, 6.0, false);
        FAIL("expected underflow error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::underflow);
        CHECK(std::string(e.what()).find("R2") != std::string::npos);
    }
    Field ok = sample_field(grid, [](const Point& x) { return std::exp(-x[0] * x[0]); });
    CHECK_THROWS_AS(fit_decay_rate(ok, 6.0, 3.0, false), Error);
    CHECK_THROWS_AS(fit_decay_rate(ok, 3.0, 9.5, false), Error); // beyond T
}

TEST_CASE("hopf check passes with beta = 1 when u equals the envelope") {
    CrossSection F = CrossSection::make_interval(0.0, 1.0);
    double h = 0.1;
    Eigenpair ep = principal_eigenpair(F, h, 1e-10);
    DomainSpec dom = make_domain(1, F, Family::straight, 6.0);
    auto grid = discretize(dom, h);
    double eta = -1.0;
    double rate2 = ep.lambda1 - eta;
    Field u(grid);
    for (std::size_t k = 0; k < u.size(); ++k) {
        Point x = grid->mask_coords(k);
        Point y{};
        y[0] = x[1];
        double phiy = interpolate(ep.phi, y);
        u[k] = phiy * std::exp(-std::sqrt(1.0 + rate2 * x[0] * x[0]));
    }
    HopfResult res = hopf_check(u, eta, ep, 0.0);
    CHECK(res.passed);
    CHECK(res.beta == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("hopf check rejects sign-changing input and eta >= lambda") {
    CrossSection F = CrossSection::make_interval(0.0, 1.0);
    Eigenpair ep = principal_eigenpair(F, 0.1, 1e-8);
    DomainSpec dom = make_domain(1, F, Family::straight, 4.0);
    auto grid = discretize(dom, 0.1);
    Field u = sample_field(grid, [](const Point& x) { return std::sin(x[0]); });
    CHECK_THROWS_AS(hopf_check(u, -1.0, ep, 0.0), Error);
    Field pos = sample_field(grid, [](const Point&) { return 1.0; });
    CHECK_THROWS_AS(hopf_check(pos, 0.5, ep, 0.0), Error);
}

TEST_CASE("bump-domain ground state decays at nearly the limiting rate") {
    // On a bump family the slices approach F, so the fitted axial rate
    // approaches sqrt(lambda1(F) - lambda) from below.
    DomainSpec dom =
        make_domain(1, CrossSection::make_disk(1.0), Family::bump_hprime, 9.0, 1.0, 0.5);
    auto grid = discretize(dom, 0.1);
    ProblemParams pp;
    pp.N = 3;
    pp.ell = 1;
    pp.p = 5.0;
    pp.q = 4.0;
    pp.mu = 1.0;
    SolveConfig cfg;
    cfg.tol_residual = 1e-7;
    Solution sol = ground_state(dom, grid, pp, cfg);
    REQUIRE(sol.converged);
    Eigenpair epF = principal_eigenpair(CrossSection::make_disk(1.0), 0.1);
    double limit = std::sqrt(epF.lambda1);
    DecayFit fit = fit_decay_rate(sol.field, 3.0, 6.0, false);
    CHECK(fit.rate < limit * 1.02);
    // the widest slice bounds the rate from below: lambda1((1+a0) F)
    double floor_rate = std::sqrt(epF.lambda1) / (1.0 + 0.5);
    CHECK(fit.rate > floor_rate);
    // within the window the slices are within ~15% of F
    CHECK(fit.rate == doctest::Approx(limit).epsilon(0.15));
}
