#pragma once

#include "nehari/calculus.hpp"

namespace nehari {

/// Principal Dirichlet eigenpair of -Laplace on the cross-section grid.
/// phi is positive on the mask and normalized to max = 1.
struct Eigenpair {
    double lambda1 = 0.0;
    Field phi;
    int iterations = 0;
    double residual = 0.0; // ||-lap phi - lambda1 phi||_2 / ||phi||_2
};

/// Inverse power iteration (shift-free, each step a Poisson solve).
/// Converges to the principal mode from any positive start.
Eigenpair principal_eigenpair(const CrossSection& F, double h, double tol = 1e-10,
                              int max_iters = 500);

/// Same computation on an already-built grid (cross-section or full).
Eigenpair principal_eigenpair_on_grid(std::shared_ptr<const GridSpec> grid, double tol = 1e-10,
                                      int max_iters = 500);

struct EigenConvergenceRow {
    double h = 0.0;
    double lambda1 = 0.0;
    double error = 0.0;    // vs. reference (finest extrapolate or exact if given)
    double observed_order = 0.0; // log2(err(h)/err(h/2)), 0 for the last row
};

/// lambda1(h) across a decreasing h list with observed convergence order.
/// `exact` (if > 0) is used as the error reference, otherwise the value
/// at the finest h is.
std::vector<EigenConvergenceRow> eigen_convergence_report(const CrossSection& F,
                                                          const std::vector<double>& h_list,
                                                          double exact = 0.0);

} // namespace nehari
