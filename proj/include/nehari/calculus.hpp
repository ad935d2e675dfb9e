#pragma once

#include "nehari/field.hpp"

namespace nehari {

/// Integral bundle for the energy functional terms.
struct Integrals {
    double grad2 = 0.0; // int |grad u|^2
    double lp = 0.0;    // int |u|^p
    double lq = 0.0;    // int |u|^q
    double l2 = 0.0;    // int u^2
};

/// -Laplacian by the (2*dim+1)-point second-order stencil with Dirichlet
/// zero at masked-out neighbors.
Field laplacian(const Field& u);

/// In-place variant writing into `out` (preallocated, same grid).
void apply_neg_laplacian(const Field& u, Field& out);

/// Mask-indicator midpoint quadrature h^N * sum for the volume terms;
/// grad2 is the first-difference energy form, which satisfies the exact
/// summation-by-parts identity grad2 == <-lap u, u> * h^N.
Integrals integrals(const Field& u, double p, double q);

/// L2 inner product h^N * sum(u*v) over the mask.
double inner(const Field& u, const Field& v);

double norm_l2(const Field& u);

/// First-difference gradient energy (same value as Integrals::grad2).
double grad_energy(const Field& u);

/// Gradient energy over interior edges only (both endpoints masked).
/// Quadrature of int |grad f|^2 for the restriction of an ambient
/// function that does not vanish on the mask boundary; grad_energy
/// would charge the Dirichlet jump there.
double grad_energy_interior(const Field& u);

struct CgResult {
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Conjugate gradient solve of -lap w = rhs on the mask to relative
/// residual `tol`. `warm_start` (same grid) seeds the iteration.
/// Throws no_convergence (carrying the final residual in the message)
/// when max_iters is exceeded.
Field poisson_solve(const Field& rhs, double tol, int max_iters = 20000,
                    const Field* warm_start = nullptr, CgResult* stats = nullptr,
                    bool diagonal_scaling = false);

} // namespace nehari
