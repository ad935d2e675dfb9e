#pragma once

#include <optional>

#include "nehari/calculus.hpp"

namespace nehari {

/// Parameters of -lap u - lambda u = |u|^(p-2) u + mu |u|^(q-2) u.
/// lambda = 0 is the base problem; mu is kept explicit throughout.
struct ProblemParams {
    int N = 3;
    int ell = 1;
    double p = 6.0; // critical default for N = 3
    double q = 4.0;
    double mu = 1.0;
    double lambda = 0.0;

    static double critical_exponent(int N); // 2N/(N-2), N >= 3

    void validate() const;
};

struct NodalReport {
    double I_plus = 0.0;
    double I_minus = 0.0;
    double residual_plus = 0.0;  // I'(u+)u+
    double residual_minus = 0.0; // I'(u-)u-
};

/// All functional data of a field: the raw integrals, the energy
///   I(u) = 1/2 (grad2 - lambda*l2) - lp/p - mu*lq/q,
/// and the Nehari residual I'(u)u. With lambda = 0 this reduces to the
/// base functional 1/2 grad2 - lp/p - mu lq/q.
struct EnergyReport {
    Integrals integrals;
    double I = 0.0;
    double nehari_residual = 0.0;
    std::optional<NodalReport> nodal;
};

EnergyReport energy(const Field& u, const ProblemParams& params, bool with_nodal = false);

double energy_value(const Integrals& ig, const ProblemParams& params);
double nehari_residual_value(const Integrals& ig, const ProblemParams& params);

/// Euler-Lagrange residual field r = -lap u - lambda u - |u|^(p-2)u - mu |u|^(q-2)u.
/// r = 0 exactly when u is a discrete solution; r is also the exact
/// gradient of the discrete I in the L^2(mask) pairing.
Field residual(const Field& u, const ProblemParams& params);

/// The Nehari scaling t* > 0 with I'(t* u)(t* u) = 0, i.e. the unique
/// root of t^(p-2) lp + mu t^(q-2) lq = grad2 - lambda l2. Solved by a
/// doubling bracket plus bisection to 1e-12 relative.
double nehari_scale(const Field& u, const ProblemParams& params);
double nehari_scale(const Integrals& ig, const ProblemParams& params);

/// u = plus - minus with plus = max(u,0), minus = max(-u,0);
/// supports disjoint by construction.
std::pair<Field, Field> nodal_split(const Field& u);

struct TailMasses {
    double grad_tail = 0.0; // fraction of int |grad u|^2 with |x| > R
    double p_tail = 0.0;
    double q_tail = 0.0;
};

/// Fractions of the three integrals carried by |x| > R (Euclidean norm
/// of the full coordinate). Requires 0 < R < T.
TailMasses tail_masses(const Field& u, const ProblemParams& params, double R);

} // namespace nehari
