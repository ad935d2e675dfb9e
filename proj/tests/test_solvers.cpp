#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <thread>

#include "nehari/solvers.hpp"

using namespace nehari;

namespace {

// Small 2D strip problem (N = 2, explicit subcritical exponents):
// fast enough for unit tests, same code paths as the 3D runs.
struct Strip {
    DomainSpec dom;
    std::shared_ptr<const GridSpec> grid;
    ProblemParams pp;

    explicit Strip(double T = 4.0, double h = 0.1)
        : dom(make_domain(1, CrossSection::make_interval(0.0, 1.0), Family::straight, T)) {
        grid = discretize(dom, h);
        pp.N = 2;
        pp.ell = 1;
        pp.p = 6.0;
        pp.q = 4.0;
        pp.mu = 1.0;
    }
};

SolveConfig quick_cfg() {
    SolveConfig cfg;
    cfg.tol_residual = 1e-7;
    cfg.max_iters = 800;
    return cfg;
}

} // namespace

TEST_CASE("strip ground state: converged, positive, on the Nehari manifold") {
    Strip s;
    Solution sol = ground_state(s.dom, s.grid, s.pp, quick_cfg());
    REQUIRE(sol.converged);
    CHECK(sol.level > 0.0); // c0 > 0
    double mn = *std::min_element(sol.field.values.begin(), sol.field.values.end());
    CHECK(mn >= 0.0);
    // |I'(u)u| <= tol ||u||_H1^2
    CHECK(std::abs(sol.report.nehari_residual) <= 1e-8 * sol.report.integrals.grad2);
    // energy history is non-increasing on the projected objective
    for (std::size_t i = 1; i < sol.history.size(); ++i)
        CHECK(sol.history[i].I <= sol.history[i - 1].I + 1e-12);
    // final recorded gradient is at tolerance
    CHECK(sol.history.back().relative_gradient <= 1e-7);
}

TEST_CASE("grid refinement moves the strip level by little") {
    Strip coarse(4.0, 0.1);
    Strip fine(4.0, 0.05);
    Solution a = ground_state(coarse.dom, coarse.grid, coarse.pp, quick_cfg());
    Solution b = ground_state(fine.dom, fine.grid, fine.pp, quick_cfg());
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(std::abs(a.level - b.level) / b.level < 0.05);
}

TEST_CASE("translation robustness: recentered init reaches the same level") {
    Strip s(6.0, 0.1);
    SolveConfig cfg = quick_cfg();
    Solution centered = ground_state(s.dom, s.grid, s.pp, cfg);
    // shift the default initial bump along the axis and restart from it
    Field u0 = build_initial_guess(s.dom, s.grid, s.pp, cfg, false);
    Field shifted(s.grid);
    for (std::size_t k = 0; k < shifted.size(); ++k) {
        Point y = s.grid->mask_coords(k);
        y[0] -= 0.7;
        shifted[k] = interpolate(u0, y);
    }
    Solution moved = ground_state(s.dom, s.grid, s.pp, cfg, &shifted);
    REQUIRE(centered.converged);
    REQUIRE(moved.converged);
    CHECK(std::abs(centered.level - moved.level) <=
          10.0 * cfg.tol_residual * std::abs(centered.level));
}

TEST_CASE("domain monotonicity: fatter bump domain has lower level") {
    CrossSection F = CrossSection::make_disk(1.0);
    ProblemParams pp;
    pp.N = 3;
    pp.ell = 1;
    pp.p = 5.0; // subcritical keeps the coarse 3D test honest and fast
    pp.q = 3.5;
    pp.mu = 1.0;
    double T = 5.0, h = 0.2;
    DomainSpec straight = make_domain(1, F, Family::straight, T);
    DomainSpec bump = make_domain(1, F, Family::bump_hprime, T, 1.0, 0.6);
    auto gs = discretize(straight, h);
    auto gb = discretize(bump, h);
    SolveConfig cfg = quick_cfg();
    cfg.tol_residual = 1e-7;
    Solution a = ground_state(straight, gs, pp, cfg);
    Solution b = ground_state(bump, gb, pp, cfg);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(b.level <= a.level + 1e-8);
}

TEST_CASE("nodal solution on the strip: both parts on the manifold, c1 >= 2 c0") {
    Strip s(6.0, 0.1);
    SolveConfig cfg = quick_cfg();
    cfg.max_iters = 2000;
    Solution c0run = ground_state(s.dom, s.grid, s.pp, cfg);
    Solution c1run = nodal_solution(s.dom, s.grid, s.pp, cfg);
    REQUIRE(c0run.converged);
    REQUIRE(c1run.converged);
    REQUIRE(c1run.report.nodal.has_value());
    const auto& nd = *c1run.report.nodal;
    CHECK(nd.I_plus > 0.0);
    CHECK(nd.I_minus > 0.0);
    // part-wise Nehari residuals vanish after the final projection
    CHECK(std::abs(nd.residual_plus) <= 1e-8 * c1run.report.integrals.grad2);
    CHECK(std::abs(nd.residual_minus) <= 1e-8 * c1run.report.integrals.grad2);
    // split level and defect bookkeeping
    CHECK(c1run.level == doctest::Approx(nd.I_plus + nd.I_minus).epsilon(1e-10));
    CHECK(c1run.nodal_defect >= -1e-12);
    // c1 >= 2 c0 up to solver slack
    CHECK(c1run.level >= 2.0 * c0run.level * (1.0 - 1e-3));
}

TEST_CASE("antisymmetric init on a symmetric strip gives equal part energies") {
    Strip s(6.0, 0.1);
    SolveConfig cfg = quick_cfg();
    cfg.max_iters = 2000;
    Solution sol = nodal_solution(s.dom, s.grid, s.pp, cfg);
    REQUIRE(sol.converged);
    const auto& nd = *sol.report.nodal;
    CHECK(nd.I_plus == doctest::Approx(nd.I_minus).epsilon(5e-3));
}

TEST_CASE("nodal init lacking one sign is rejected") {
    Strip s;
    SolveConfig cfg = quick_cfg();
    cfg.init = InitKind::bump; // positive bump only
    CHECK_THROWS_AS(nodal_solution(s.dom, s.grid, s.pp, cfg), Error);
}

TEST_CASE("iteration cap yields a flagged, unconverged solution") {
    Strip s;
    SolveConfig cfg = quick_cfg();
    cfg.max_iters = 2;
    Solution sol = ground_state(s.dom, s.grid, s.pp, cfg);
    CHECK_FALSE(sol.converged);
    CHECK(sol.iterations == 2);
}

TEST_CASE("critical-exponent concentration is detected and flagged") {
    // On the ball at p = 2* with q at the borderline the projected flow
    // concentrates; the solver must stop at the resolution floor instead
    // of sliding into sub-grid lattice spikes.
    DomainSpec ball = make_domain(1, CrossSection::make_disk(1.0), Family::ball, 1.0);
    auto grid = discretize(ball, 2.0 / 24);
    ProblemParams pp;
    pp.N = 3;
    pp.ell = 1;
    pp.p = 6.0;
    pp.q = 4.0;
    pp.mu = 1.0;
    SolveConfig cfg = quick_cfg();
    cfg.max_iters = 400;
    Solution sol = ground_state(ball, grid, pp, cfg);
    CHECK(sol.concentrated);
    CHECK_FALSE(sol.converged);
    CHECK(sol.bubble_scale > 0.0);
    CHECK(sol.bubble_scale < 4.0 * grid->h + 1e-12);
}

TEST_CASE("radial shooting: oracle solution for mu = 10 at the borderline q = 4") {
    RadialShot s = radial_shooting(3, 6.0, 4.0, 10.0, 1.0);
    REQUIRE(s.has_solution);
    CHECK(s.u0 > 0.0);
    // frozen oracle regression value
    CHECK(s.level == doctest::Approx(2.242022).epsilon(1e-4));
    // profile starts at u0, decreasing, ends near zero
    CHECK(s.u.front() == doctest::Approx(s.u0));
    CHECK(std::abs(s.u.back()) < 1e-6 * s.u0);
}

TEST_CASE("radial shooting: no-solution signal for mu = 0 at the critical power") {
    RadialShot s = radial_shooting(3, 6.0, 4.0, 0.0, 1.0);
    CHECK_FALSE(s.has_solution);
}

TEST_CASE("radial shooting: level decreases in mu") {
    RadialShot a = radial_shooting(3, 6.0, 5.0, 1.0, 1.0);
    RadialShot b = radial_shooting(3, 6.0, 5.0, 2.0, 1.0);
    REQUIRE(a.has_solution);
    REQUIRE(b.has_solution);
    CHECK(b.level < a.level);
}

TEST_CASE("radial shooting validates its arguments") {
    CHECK_THROWS_AS(radial_shooting(2, 6.0, 4.0, 1.0, 1.0), Error);
    CHECK_THROWS_AS(radial_shooting(3, 6.0, 7.0, 1.0, 1.0), Error);
    CHECK_THROWS_AS(radial_shooting(3, 6.0, 4.0, 1.0, -1.0), Error);
}

TEST_CASE("bump domain sandwich: 2 c0 <= c1 < c0 + c0(straight)") {
    // On a fattened (bump) domain the nodal level sits strictly below
    // the sum of the domain's own ground level and the straight-cylinder
    // level at infinity, while staying above twice the ground level.
    // Subcritical p keeps every state resolved and converged.
    CrossSection F = CrossSection::make_disk(1.0);
    double T = 12.0, h = 0.1;
    DomainSpec bump = make_domain(1, F, Family::bump_hprime, T, 1.0, 1.0);
    DomainSpec straight = make_domain(1, F, Family::straight, T);
    auto gb = discretize(bump, h);
    auto gs = discretize(straight, h);
    ProblemParams pp;
    pp.N = 3;
    pp.ell = 1;
    pp.p = 5.0;
    pp.q = 4.0;
    pp.mu = 1.0;
    SolveConfig cfg;
    cfg.tol_residual = 1e-7;
    cfg.max_iters = 2000;
    Solution c0b = ground_state(bump, gb, pp, cfg);
    Solution c0s = ground_state(straight, gs, pp, cfg);
    Solution c1b = nodal_solution(bump, gb, pp, cfg);
    REQUIRE(c0b.converged);
    REQUIRE(c0s.converged);
    REQUIRE(c1b.converged);
    CHECK(c0b.level <= c0s.level + 1e-9); // domain monotonicity
    CHECK(c1b.level >= 2.0 * c0b.level * (1.0 - 1e-3));
    CHECK(c1b.level < c0b.level + c0s.level);
}

TEST_CASE("ball oracle equivalence at subcritical p") {
    DomainSpec ball = make_domain(1, CrossSection::make_disk(1.0), Family::ball, 1.0);
    auto grid = discretize(ball, 2.0 / 48);
    ProblemParams pp;
    pp.N = 3;
    pp.ell = 1;
    pp.p = 5.0;
    pp.q = 4.0;
    pp.mu = 1.0;
    SolveConfig cfg;
    cfg.tol_residual = 1e-7;
    Solution sol = ground_state(ball, grid, pp, cfg);
    RadialShot shot = radial_shooting(3, 5.0, 4.0, 1.0, 1.0);
    REQUIRE(sol.converged);
    REQUIRE(shot.has_solution);
    CHECK(std::abs(sol.level - shot.level) / shot.level < 0.02);
}

TEST_CASE("instanton init reaches the same level as the default init") {
    DomainSpec ball = make_domain(1, CrossSection::make_disk(1.0), Family::ball, 1.0);
    auto grid = discretize(ball, 2.0 / 32);
    ProblemParams pp;
    pp.N = 3;
    pp.ell = 1;
    pp.p = 5.0;
    pp.q = 4.0;
    pp.mu = 1.0;
    SolveConfig cfg;
    cfg.tol_residual = 1e-7;
    Solution a = ground_state(ball, grid, pp, cfg);
    cfg.init = InitKind::instanton;
    cfg.init_eps = 0.3;
    Solution b = ground_state(ball, grid, pp, cfg);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(a.level == doctest::Approx(b.level).epsilon(1e-5));
}

TEST_CASE("solves are safe to run concurrently on separate configs") {
    Strip s1(4.0, 0.1);
    Strip s2(5.0, 0.1);
    SolveConfig cfg = quick_cfg();
    Solution serial1 = ground_state(s1.dom, s1.grid, s1.pp, cfg);
    Solution serial2 = ground_state(s2.dom, s2.grid, s2.pp, cfg);
    Solution par1, par2;
    std::thread t1([&] { par1 = ground_state(s1.dom, s1.grid, s1.pp, cfg); });
    std::thread t2([&] { par2 = ground_state(s2.dom, s2.grid, s2.pp, cfg); });
    t1.join();
    t2.join();
    CHECK(par1.level == serial1.level); // bit-identical: deterministic reductions
    CHECK(par2.level == serial2.level);
}
