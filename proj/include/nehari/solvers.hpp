#pragma once

#include <string>

#include "nehari/energy.hpp"
#include "nehari/spectral.hpp"

namespace nehari {

enum class InitKind { auto_select, eigen_bump, bump, instanton, two_bump, file };

struct SolveConfig {
    int max_iters = 2000;
    double step0 = 1.0;
    double armijo_factor = 0.5;
    double armijo_slope = 1e-4;
    double tol_residual = 1e-8; // relative H1 gradient norm
    double cg_tol = 1e-8;
    InitKind init = InitKind::auto_select;
    std::string init_file;
    double init_eps = 0.25;   // instanton init scale
    double nodal_offset = 0.0; // 0 = T/2
    bool polish = true;       // final fixed-point pass (positive solutions)
};

struct IterationRecord {
    double I = 0.0;
    double relative_gradient = 0.0;
};

struct Solution {
    Field field;
    double level = 0.0;
    EnergyReport report;
    int iterations = 0;
    bool converged = false;
    std::vector<IterationRecord> history;
    double nodal_defect = 0.0; // I(w) - (I(w+) + I(w-)), nodal solves only

    // Concentration dichotomy at the critical exponent: when the
    // iterate's peak shrinks below the resolution floor (full width at
    // half max under 4 cells), the descent stops and the last resolved
    // iterate is returned with concentrated = true. Minimizing
    // sequences at p = 2* need not converge; on the grid they would
    // otherwise collapse into sub-resolution lattice spikes whose
    // levels undershoot every continuum level.
    bool concentrated = false;
    double bubble_scale = 0.0; // peak width when flagged
};

/// Least-energy positive solution: projected H1-gradient descent
///   u <- | t*(u - s g) (u - s g) |,  g = (-lap)^(-1) residual(u),
/// with Armijo backtracking on the projected objective. The returned
/// level is c0 on the discretized domain.
Solution ground_state(const DomainSpec& domain, std::shared_ptr<const GridSpec> grid,
                      const ProblemParams& params, const SolveConfig& cfg,
                      const Field* init_override = nullptr);

/// Least-energy sign-changing solution: after each H1-gradient step the
/// iterate is re-projected part-wise, w = t+ w_plus - t- w_minus, so both
/// parts stay on the Nehari manifold. Level is the split objective
/// I(w+) + I(w-) (continuum-consistent); the grid interface defect
/// I(w) - level is reported separately.
Solution nodal_solution(const DomainSpec& domain, std::shared_ptr<const GridSpec> grid,
                        const ProblemParams& params, const SolveConfig& cfg,
                        const Field* init_override = nullptr);

struct RadialShot {
    bool has_solution = false;
    double u0 = 0.0;
    double level = 0.0;
    std::vector<double> r;
    std::vector<double> u;
};

/// Independent oracle for ball domains: integrates
///   u'' + (N-1)/r u' + u^(p-1) + mu u^(q-1) = 0, u'(0) = 0
/// by RK4 and bisects on u(0) until the first zero lands at R_ball.
/// has_solution = false signals that no u(0) places a zero at R_ball
/// (e.g. mu = 0 at the critical exponent).
RadialShot radial_shooting(int N, double p, double q, double mu, double R_ball,
                           double tol = 1e-12);

/// Initial iterate constructed from the named tag (used by the solvers,
/// exposed for tests).
Field build_initial_guess(const DomainSpec& domain, std::shared_ptr<const GridSpec> grid,
                          const ProblemParams& params, const SolveConfig& cfg, bool nodal);

} // namespace nehari
