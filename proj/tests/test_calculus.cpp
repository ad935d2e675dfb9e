#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "nehari/calculus.hpp"

using namespace nehari;

namespace {

std::shared_ptr<const GridSpec> unit_square_grid(double h) {
    return discretize_cross_section(CrossSection::make_square(1.0), h);
}

Field random_field(std::shared_ptr<const GridSpec> grid, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field u(grid);
    for (auto& v : u.values) v = dist(rng);
    return u;
}

bool all_neighbors_interior(const GridSpec& g, std::size_t k) {
    for (int j = 0; j < 2 * g.dim; ++j)
        if (g.neighbor[k * 2 * g.dim + j] < 0) return false;
    return true;
}

} // namespace

TEST_CASE("stencil is exact on quadratics away from the boundary") {
    auto grid = unit_square_grid(1.0 / 32);
    Field u = sample_field(grid, [](const Point& x) { return x[0] * x[0]; });
    Field lap = laplacian(u); // -Delta u
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!all_neighbors_interior(*grid, k)) continue;
        CHECK(lap[k] == doctest::Approx(-2.0).epsilon(1e-10));
    }
}

TEST_CASE("zero field maps to zero") {
    auto grid = unit_square_grid(1.0 / 16);
    Field u(grid);
    Field lap = laplacian(u);
    for (double v : lap.values) CHECK(v == 0.0);
}

TEST_CASE("discrete sine modes satisfy the closed-form eigen-relation") {
    double h = 1.0 / 32;
    auto grid = unit_square_grid(h);
    for (int k1 : {1, 3}) {
        for (int k2 : {1, 2}) {
            Field u = sample_field(grid, [&](const Point& x) {
                return std::sin(M_PI * k1 * x[0]) * std::sin(M_PI * k2 * x[1]);
            });
            double lam = 4.0 / (h * h) *
                         (std::pow(std::sin(M_PI * k1 * h / 2.0), 2) +
                          std::pow(std::sin(M_PI * k2 * h / 2.0), 2));
            Field lap = laplacian(u);
            for (std::size_t k = 0; k < u.size(); ++k)
                CHECK(lap[k] == doctest::Approx(lam * u[k]).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("summation by parts: grad2 equals <-lap u, u> to machine precision") {
    auto grid = discretize_cross_section(CrossSection::make_disk(1.0), 0.05);
    for (unsigned seed : {1u, 2u, 3u}) {
        Field u = random_field(grid, seed);
        double a = grad_energy(u);
        double b = inner(laplacian(u), u);
        CHECK(a == doctest::Approx(b).epsilon(1e-13));
    }
}

TEST_CASE("stencil symmetry <-lap u, v> = <u, -lap v>") {
    auto grid = discretize_cross_section(CrossSection::make_disk(1.0), 0.07);
    Field u = random_field(grid, 11);
    Field v = random_field(grid, 12);
    double a = inner(laplacian(u), v);
    double b = inner(u, laplacian(v));
    CHECK(a == doctest::Approx(b).epsilon(1e-13));
}

TEST_CASE("constant field volume approaches the box volume first order") {
    for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
        auto grid = unit_square_grid(h);
        Field u(grid);
        for (auto& v : u.values) v = 1.0;
        Integrals ig = integrals(u, 6.0, 4.0);
        CHECK(ig.l2 == doctest::Approx(1.0).epsilon(2.5 * h));
        CHECK(ig.lp == doctest::Approx(ig.l2).epsilon(1e-14));
    }
}

TEST_CASE("integrals of the zero field vanish and exponents are checked") {
    auto grid = unit_square_grid(1.0 / 8);
    Field u(grid);
    Integrals ig = integrals(u, 6.0, 4.0);
    CHECK(ig.grad2 == 0.0);
    CHECK(ig.lp == 0.0);
    CHECK(ig.lq == 0.0);
    CHECK(ig.l2 == 0.0);
    CHECK_THROWS_AS(integrals(u, 6.0, 2.0), Error);
}

TEST_CASE("poisson_solve inverts the stencil (inverse consistency)") {
    auto grid = discretize_cross_section(CrossSection::make_disk(1.0), 0.05);
    Field v = random_field(grid, 77);
    Field rhs = laplacian(v);
    Field w = poisson_solve(rhs, 1e-12);
    for (std::size_t k = 0; k < v.size(); k += 13)
        CHECK(w[k] == doctest::Approx(v[k]).epsilon(1e-7));
}

TEST_CASE("poisson_solve of zero rhs is zero") {
    auto grid = unit_square_grid(1.0 / 16);
    Field rhs(grid);
    Field w = poisson_solve(rhs, 1e-10);
    for (double v : w.values) CHECK(v == 0.0);
}

TEST_CASE("manufactured sine solution matches the discrete closed form") {
    double h = 1.0 / 64;
    auto grid = unit_square_grid(h);
    Field v = sample_field(grid, [](const Point& x) {
        return std::sin(M_PI * x[0]) * std::sin(2.0 * M_PI * x[1]);
    });
    double lam = 4.0 / (h * h) *
                 (std::pow(std::sin(M_PI * h / 2.0), 2) + std::pow(std::sin(M_PI * h), 2));
    Field rhs(grid);
    for (std::size_t k = 0; k < v.size(); ++k) rhs[k] = lam * v[k];
    Field w = poisson_solve(rhs, 1e-12);
    double worst = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k)
        worst = std::max(worst, std::abs(w[k] - v[k]));
    CHECK(worst < 1e-8);
}

TEST_CASE("poisson_solve reports non-convergence with the residual") {
    auto grid = discretize_cross_section(CrossSection::make_disk(1.0), 0.02);
    Field rhs = random_field(grid, 5);
    try {
        poisson_solve(rhs, 1e-13, 3);
        FAIL("expected a convergence error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::no_convergence);
        CHECK(std::string(e.what()).find("residual") != std::string::npos);
    }
}

TEST_CASE("warm start leaves the answer unchanged") {
    auto grid = unit_square_grid(1.0 / 32);
    Field v = random_field(grid, 9);
    Field rhs = laplacian(v);
    Field cold = poisson_solve(rhs, 1e-11);
    Field warm = poisson_solve(rhs, 1e-11, 20000, &cold);
    for (std::size_t k = 0; k < v.size(); k += 7)
        CHECK(warm[k] == doctest::Approx(cold[k]).epsilon(1e-9));
}

TEST_CASE("midpoint quadrature is second order on boxes") {
    // smooth integrand vanishing on the box boundary:
    // int (x(1-x)y(1-y))^2 over the unit square = (1/30)^2
    auto value = [](double h) {
        auto grid = unit_square_grid(h);
        Field u = sample_field(grid, [](const Point& x) {
            return x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]);
        });
        return integrals(u, 6.0, 4.0).l2;
    };
    const double exact = 1.0 / 900.0;
    double e1 = std::abs(value(1.0 / 16) - exact);
    double e2 = std::abs(value(1.0 / 32) - exact);
    double e3 = std::abs(value(1.0 / 64) - exact);
    // at least second order; boundary-vanishing integrands on aligned
    // boxes are in fact superconvergent
    CHECK(e1 / e2 >= 3.5);
    CHECK(e2 / e3 >= 3.5);
}
