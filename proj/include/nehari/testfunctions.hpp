#pragma once

#include "nehari/energy.hpp"

namespace nehari {

/// Talenti instanton U(x) = c_N / (1+|x|^2)^((N-2)/2), normalized so
/// that int |grad U|^2 = int |U|^(2*) = S^(N/2), and its rescaling
/// U_eps(x) = eps^(-N/p) U(x/eps).
struct InstantonSpec {
    int N = 3;
    double eps = 1.0;
    Point center{};

    double c_N() const; // (N(N-2))^((N-2)/4)
    double value(const Point& x) const;
    double radial_value(double r) const;
    double radial_derivative(double r) const;
};

/// Pointwise sampling of U_eps on the mask.
Field instanton(const InstantonSpec& spec, std::shared_ptr<const GridSpec> grid);

/// True when the grid resolves the instanton core (h <= eps/4).
bool instanton_resolved(const InstantonSpec& spec, const GridSpec& grid);

/// C^2 smoothstep: 0 for s <= 0, 1 for s >= 1, 6s^5-15s^4+10s^3 between.
double smoothstep_quintic(double s);

/// rho(s) = 1 for |s| <= 1, 0 for |s| >= A, quintic in between.
double cutoff_rho(double s, double A = 2.0);

/// eta(s) = 0 for |s| <= 2, 1 for |s| >= 3, quintic in between.
double cutoff_eta(double s);

struct RadialIntegrals {
    double grad2 = 0.0;
    double lp = 0.0;
    double lq = 0.0;
};

/// High-resolution 1D radial quadrature of the instanton integrals over
/// all of R^N (tan-substitution, composite midpoint). `q` < p may be
/// requested when q(N-2) > N (integrability); pass 0 to skip lq. With
/// `rho_cutoff` the integrand carries the (H)_0 cutoff rho(r/sqrt(eps)),
/// i.e. the integrals are those of u_eps = U_eps rho_eps.
RadialIntegrals instanton_radial_integrals(int N, double eps, double q = 0.0,
                                           int panels = 200000, bool rho_cutoff = false);

/// S^(N/2) obtained numerically as int |grad U|^2 of the normalized
/// instanton (radial quadrature).
double sobolev_level(int N);

/// The (H)_0 pair u_eps = U_eps rho(|.|/sqrt(eps)), v_eps = v eta(|.|/sqrt(eps)),
/// both centered at `center` (default the origin; any interior point
/// works, matching the normalization 0 in Omega). Supports are exactly
/// disjoint; throws invalid_geometry when the grid cannot separate them
/// or the instanton bubble pokes out of the mask.
std::pair<Field, Field> build_H0_pair(const Field& v, const ProblemParams& params, double eps,
                                      const Point& center = Point{});

struct HprimeParams {
    double R = 2.0;
    double M = 7.0;  // must satisfy M > 2A and (a1/a0) < ((M-A)/(M+A))^m
    double A = 2.0;  // = a0/a1
    double m = 1.0;
    double a0 = 0.5;

    double lambda_R() const; // 1 + a0 / ((M+A)^m R^m)
    void validate() const;
};

/// The (H)' pair: v_R = v rho(|t|/R) and the translated, lambda_R-dilated
/// cutoff copy of the straight-cylinder ground state psi,
///   psi_R(t,y) = lambda_R^(-N/p) psi((t - M R e1)/lambda_R, y/lambda_R) eta_R(t).
/// Both are checked to vanish outside the bump-domain mask; a violation
/// throws invalid_geometry naming the first offending node.
std::pair<Field, Field> build_Hprime_pair(const Field& v, const Field& psi,
                                          const ProblemParams& params, const HprimeParams& hp);

struct TauSup {
    double value = 0.0;
    double tau1 = 1.0;
    double tau2 = 1.0;
    bool interior = false; // maximizer strictly inside [1/2,2]^2
};

/// sup over tau1, tau2 in [1/2,2] of I(tau1 a - tau2 b) for fields with
/// disjoint supports. Exact tau-decomposition: the only coupling is the
/// interface gradient term, precomputed once; each tau evaluation is O(1).
TauSup tau_sup(const Field& a, const Field& b, const ProblemParams& params,
               int grid_points = 41, int refinements = 3);

/// Interface coupling sum: grad2(a - b) = grad2(a) + grad2(b) + 2*C for
/// disjointly supported a, b.
double interface_coupling(const Field& a, const Field& b);

struct GapRow {
    double eps = 0.0; // eps for (H)_0, R for (H)'
    double I_first = 0.0;
    double I_second = 0.0;
    double I_sum = 0.0;
    double sup_tau = 0.0;
    double tau1 = 1.0, tau2 = 1.0;
    double bound = 0.0; // c0 + c0_infinity
    double delta_v = 0.0; // I(v_eps) - I(v)   (resp. I(psi) - I(psi_R))
    double lq_bubble = 0.0; // int u_eps^q     ((H)_0 only)
};

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

struct GapReport {
    std::string mode; // "H0" or "Hprime"
    std::vector<GapRow> rows;
    double c0 = 0.0;
    double c0_infinity = 0.0;
    ExponentFit fit_grad;   // expected slope (N-2)/2 in eps ((H)_0)
    ExponentFit fit_q;      // expected slope N(1-q/p) in eps ((H)_0)
    std::vector<double> fit_q_eps; // eps ladder used for fit_q (radial route)
    double crossover_eps = 0.0;
    bool dip_achieved = false;   // sup_tau < bound for some row
    double best_margin = 0.0;    // min over rows of sup_tau - bound
    double best_eps = 0.0;
};

/// (H)_0 experiment: scans eps, fits the two competing correction
/// exponents, and reports whether sup_tau I(tau1 u_eps - tau2 v_eps)
/// dips below c0 + S^(N/2)/N.
GapReport energy_gap_experiment_H0(const DomainSpec& domain,
                                   std::shared_ptr<const GridSpec> grid,
                                   const ProblemParams& params, const Field& ground_state,
                                   double c0, const std::vector<double>& eps_list,
                                   int tau_grid = 41, const Point& center = Point{});

/// (H)' experiment: scans R with the pair (v_R, psi_R); bound is
/// c0(bump) + c0(straight cylinder).
GapReport energy_gap_experiment_Hprime(const DomainSpec& domain,
                                       std::shared_ptr<const GridSpec> grid,
                                       const ProblemParams& params, const Field& v,
                                       double c0, const Field& psi, double c0_straight,
                                       const HprimeParams& hp_base,
                                       const std::vector<double>& R_list, int tau_grid = 41);

/// Least-squares fit of log(y) = intercept + slope * log(x).
ExponentFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

} // namespace nehari
