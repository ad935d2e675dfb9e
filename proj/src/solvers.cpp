#include "nehari/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "nehari/parallel.hpp"
#include "nehari/testfunctions.hpp"

namespace nehari {

namespace {

double h1_norm2(const Field& u) { return grad_energy(u); }

void scale_in_place(Field& u, double c) {
    for (double& v : u.values) v *= c;
}

Field project_nehari(const Field& u, const ProblemParams& params, double* level = nullptr,
                     Integrals* ig_out = nullptr) {
    Integrals ig = integrals(u, params.p, params.q);
    double t = nehari_scale(ig, params);
    Field w = u;
    scale_in_place(w, t);
    if (level || ig_out) {
        Integrals igw;
        igw.grad2 = t * t * ig.grad2;
        igw.l2 = t * t * ig.l2;
        igw.lp = std::pow(t, params.p) * ig.lp;
        igw.lq = std::pow(t, params.q) * ig.lq;
        if (level) *level = energy_value(igw, params);
        if (ig_out) *ig_out = igw;
    }
    return w;
}

double gaussian_bump(const Point& x, const Point& c, int dim, double width) {
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) {
        double d = x[a] - c[a];
        r2 += d * d;
    }
    return std::exp(-r2 / (width * width));
}

} // namespace

Field build_initial_guess(const DomainSpec& domain, std::shared_ptr<const GridSpec> grid,
                          const ProblemParams& params, const SolveConfig& cfg, bool nodal) {
    InitKind kind = cfg.init;
    if (kind == InitKind::auto_select) {
        if (nodal)
            kind = InitKind::two_bump;
        else
            kind = (domain.family == Family::ball) ? InitKind::bump : InitKind::eigen_bump;
    }
    const GridSpec& g = *grid;

    switch (kind) {
        case InitKind::bump: {
            Point c{}; // every family is centered at the origin
            double width = domain.base.bounding_radius() / 1.5;
            return sample_field(grid, [&](const Point& x) {
                return gaussian_bump(x, c, g.dim, width);
            });
        }
        case InitKind::eigen_bump: {
            Eigenpair ep = principal_eigenpair(domain.base, g.h, 1e-8);
            double width = std::max(1.0, 1.0 / std::sqrt(ep.lambda1));
            return sample_field(grid, [&](const Point& x) {
                double tr2 = 0.0;
                for (int a = 0; a < g.ell; ++a) tr2 += x[a] * x[a];
                Point y{};
                for (int a = g.ell; a < g.dim; ++a) y[a - g.ell] = x[a];
                double phiy = interpolate(ep.phi, y);
                return phiy * std::exp(-tr2 / (2.0 * width * width));
            });
        }
        case InitKind::instanton: {
            InstantonSpec spec;
            spec.N = params.N;
            spec.eps = cfg.init_eps;
            return instanton(spec, grid);
        }
        case InitKind::two_bump: {
            if (g.ell < 1)
                throw Error(ErrorCode::invalid_argument, "two_bump init needs an axial direction");
            double d = cfg.nodal_offset > 0.0 ? cfg.nodal_offset : g.T / 2.0;
            Eigenpair ep;
            bool have_phi = domain.family != Family::ball;
            if (have_phi) ep = principal_eigenpair(domain.base, g.h, 1e-8);
            double width = 1.5;
            return sample_field(grid, [&](const Point& x) {
                Point cplus{}, cminus{};
                cplus[0] = -d;
                cminus[0] = d;
                double bp = gaussian_bump(x, cplus, g.ell, width);
                double bm = gaussian_bump(x, cminus, g.ell, width);
                double phiy = 1.0;
                if (have_phi) {
                    Point y{};
                    for (int a = g.ell; a < g.dim; ++a) y[a - g.ell] = x[a];
                    phiy = interpolate(ep.phi, y);
                }
                return phiy * (bp - bm);
            });
        }
        case InitKind::file:
            throw Error(ErrorCode::invalid_argument,
                        "file-based init must be loaded by the caller (cli module)");
        case InitKind::auto_select:
            break;
    }
    throw Error(ErrorCode::invalid_argument, "unresolved initial guess kind");
}

namespace {

/// Width of the dominant peak: the smallest axis-aligned extent of the
/// connected run of nodes around the argmax that stay above half the
/// peak value. A resolved profile spans many cells; a collapsing bubble
/// contracts to a few.
double peak_width_estimate(const Field& u) {
    const GridSpec& g = *u.grid;
    std::size_t kmax = 0;
    double mx = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        double a = std::abs(u[k]);
        if (a > mx) {
            mx = a;
            kmax = k;
        }
    }
    if (!(mx > 0.0)) return 1e300;
    const double half = 0.5 * mx;
    const int nnb = 2 * g.dim;
    double min_extent = 1e300;
    for (int axis = 0; axis < g.dim; ++axis) {
        int run = 1;
        for (int dir = 0; dir < 2; ++dir) {
            std::size_t k = kmax;
            while (true) {
                std::int32_t nb = g.neighbor[k * nnb + 2 * axis + dir];
                if (nb < 0 || std::abs(u[static_cast<std::size_t>(nb)]) < half) break;
                k = static_cast<std::size_t>(nb);
                ++run;
                if (run > 1000000) break;
            }
        }
        min_extent = std::min(min_extent, run * g.h);
    }
    return min_extent;
}

bool is_critical(const ProblemParams& params) {
    return params.N >= 3 &&
           std::abs(params.p - ProblemParams::critical_exponent(params.N)) < 1e-12;
}

/// Shared projected-descent loop: Barzilai-Borwein steps in the H1
/// metric, safeguarded by a nonmonotone (last-M) Armijo backtrack.
/// The projection is part-wise for the nodal solver (both parts
/// rescaled onto the Nehari manifold) and plain rescaling otherwise.
Solution descend(Field u, const ProblemParams& params, const SolveConfig& cfg,
                 bool nodal, double init_plus_norm, double init_minus_norm) {
    const double collapse_frac = 1e-6;
    const bool critical = is_critical(params);
    const double resolution_floor = 4.0 * u.grid->h;

    auto project = [&](const Field& v, double* level, Field* out) {
        if (!nodal) {
            Field w = project_nehari(v, params, level);
            *out = std::move(w);
            return;
        }
        auto [vp, vm] = nodal_split(v);
        double np = std::sqrt(h1_norm2(vp));
        double nm = std::sqrt(h1_norm2(vm));
        if (np < collapse_frac * init_plus_norm)
            throw Error(ErrorCode::nodal_collapse, "nodal collapse: positive part vanished");
        if (nm < collapse_frac * init_minus_norm)
            throw Error(ErrorCode::nodal_collapse, "nodal collapse: negative part vanished");
        double lp = 0.0, lm = 0.0;
        Field wp = project_nehari(vp, params, &lp);
        Field wm = project_nehari(vm, params, &lm);
        Field w(v.grid);
        for (std::size_t k = 0; k < w.size(); ++k) w[k] = wp[k] - wm[k];
        *level = lp + lm;
        *out = std::move(w);
    };

    auto sanitize = [&](Field& v) {
        if (!nodal) // positivity by |.|; I is even so the level is unchanged
            for (double& x : v.values) x = std::abs(x);
    };

    sanitize(u);
    double J = 0.0;
    {
        Field w(u.grid);
        project(u, &J, &w);
        u = std::move(w);
    }

    Solution sol;
    sol.history.reserve(std::min(cfg.max_iters + 1, 4096));

    double step = cfg.step0;
    Field g(u.grid), r(u.grid);
    Field u_prev(u.grid), r_prev(u.grid);
    bool have_prev = false, have_warm = false;
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        r = residual(u, params);
        double relres_prev = sol.history.empty() ? 1.0 : sol.history.back().relative_gradient;
        double cg_tol = std::clamp(0.01 * relres_prev, cfg.cg_tol, 1e-2);
        g = poisson_solve(r, cg_tol, 200000, have_warm ? &g : nullptr);
        have_warm = true;
        double gn2 = inner(g, r); // ||g||_H1^2 up to the CG tol
        if (gn2 < 0.0) gn2 = 0.0;
        double un2 = h1_norm2(u);
        double relgrad = std::sqrt(gn2 / un2);
        sol.history.push_back({J, relgrad});
        if (relgrad <= cfg.tol_residual) {
            sol.converged = true;
            break;
        }
        if (critical) {
            double width = peak_width_estimate(u);
            if (width < resolution_floor) {
                sol.concentrated = true;
                sol.bubble_scale = width;
                break;
            }
        }

        // BB1 step in the H1 inner product: <du,du>_H1 / <du,dg>_H1,
        // with <a,b>_H1 = <a, -lap b>_L2 evaluated through the residual
        // difference (-lap dg = dr).
        double s_bb = 0.0;
        if (have_prev) {
            Field du(u.grid);
            for (std::size_t k = 0; k < u.size(); ++k) du[k] = u[k] - u_prev[k];
            double du_dr = 0.0;
            for (std::size_t k = 0; k < u.size(); ++k) du_dr += du[k] * (r[k] - r_prev[k]);
            if (du_dr > 0.0) {
                double du2 = grad_energy(du) / std::pow(u.grid->h, u.grid->dim);
                s_bb = du2 / du_dr;
            }
        }
        double s = s_bb > 0.0 ? std::clamp(s_bb, 1e-6, 1e4) : step;

        u_prev = u;
        r_prev = r;

        bool accepted = false;
        while (s > 1e-14 * cfg.step0) {
            Field v(u.grid);
            for (std::size_t k = 0; k < v.size(); ++k) v[k] = u[k] - s * g[k];
            sanitize(v);
            double Jnew = 0.0;
            Field w(u.grid);
            bool ok = true;
            try {
                project(v, &Jnew, &w);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::nodal_collapse) throw;
                ok = false; // degenerate trial: shrink and retry
            }
            if (ok && Jnew <= J - cfg.armijo_slope * s * gn2) {
                u = std::move(w);
                J = Jnew;
                accepted = true;
                break;
            }
            s *= cfg.armijo_factor;
        }
        if (!accepted) break; // line search stalled below machine step
        step = s;
        have_prev = true;
    }

    sol.iterations = it;
    sol.field = std::move(u);
    sol.level = J;
    return sol;
}

void positivity_polish(Solution& sol, const ProblemParams& params, const SolveConfig& cfg) {
    if (params.lambda < 0.0) return; // rhs sign not guaranteed
    Field f(sol.field.grid);
    const double p = params.p, q = params.q, mu = params.mu, lambda = params.lambda;
    for (std::size_t k = 0; k < f.size(); ++k) {
        double a = sol.field[k];
        f[k] = a > 0.0 ? std::pow(a, p - 1.0) + mu * std::pow(a, q - 1.0) + lambda * a : 0.0;
    }
    Field w = poisson_solve(f, std::min(cfg.cg_tol, 1e-12), 400000, &sol.field);
    for (double& v : w.values) v = std::max(v, 0.0);
    double level = 0.0;
    Field pw = project_nehari(w, params, &level);
    sol.field = std::move(pw);
    sol.level = level;
}

} // namespace

Solution ground_state(const DomainSpec& domain, std::shared_ptr<const GridSpec> grid,
                      const ProblemParams& params, const SolveConfig& cfg,
                      const Field* init_override) {
    params.validate();
    if (init_override && init_override->grid.get() != grid.get())
        throw Error(ErrorCode::dimension_mismatch, "init field lives on a different grid");
    Field u0 = init_override ? *init_override
                             : build_initial_guess(domain, grid, params, cfg, /*nodal=*/false);
    double n0 = std::sqrt(h1_norm2(u0));
    if (!(n0 > 0.0))
        throw Error(ErrorCode::degenerate_domain, "initial guess vanished on this grid");
    Solution sol = descend(std::move(u0), params, cfg, /*nodal=*/false, 0.0, 0.0);
    // One fixed-point contraction u <- Pi (-lap)^(-1) f(u): preserves
    // strict interior positivity and equilibrates the far tails, which
    // the energy line search cannot certify below float resolution.
    if (cfg.polish && !sol.concentrated) positivity_polish(sol, params, cfg);
    sol.report = energy(sol.field, params);
    sol.level = sol.report.I;
    return sol;
}

Solution nodal_solution(const DomainSpec& domain, std::shared_ptr<const GridSpec> grid,
                        const ProblemParams& params, const SolveConfig& cfg,
                        const Field* init_override) {
    params.validate();
    if (init_override && init_override->grid.get() != grid.get())
        throw Error(ErrorCode::dimension_mismatch, "init field lives on a different grid");
    Field w0 = init_override ? *init_override
                             : build_initial_guess(domain, grid, params, cfg, /*nodal=*/true);
    auto [p0, m0] = nodal_split(w0);
    double np0 = std::sqrt(h1_norm2(p0));
    double nm0 = std::sqrt(h1_norm2(m0));
    if (!(np0 > 0.0) || !(nm0 > 0.0))
        throw Error(ErrorCode::degenerate_domain, "nodal init must carry both signs");
    Solution sol = descend(std::move(w0), params, cfg, /*nodal=*/true, np0, nm0);
    sol.report = energy(sol.field, params, /*with_nodal=*/true);
    sol.nodal_defect = sol.report.I - sol.level;
    return sol;
}

RadialShot radial_shooting(int N, double p, double q, double mu, double R_ball, double tol) {
    if (N < 3) throw Error(ErrorCode::invalid_argument, "radial_shooting requires N >= 3");
    if (!(q > 2.0) || !(q < p) || !(mu >= 0.0))
        throw Error(ErrorCode::invalid_argument, "radial_shooting: need 2 < q < p, mu >= 0");
    if (!(R_ball > 0.0)) throw Error(ErrorCode::invalid_argument, "R_ball must be positive");

    auto f = [&](double y) {
        double a = std::abs(y);
        return a > 0.0 ? (std::pow(a, p - 2.0) + mu * std::pow(a, q - 2.0)) * y : 0.0;
    };
    // z' = -f(y) - (N-1)/r z, with the r=0 limit z' = -f(y)/N.
    auto fz = [&](double y, double z, double r) {
        if (r > 0.0) return -f(y) - (N - 1) * z / r;
        return -f(y) / static_cast<double>(N);
    };

    // The core width shrinks like u0^(-(p-2)/2); scale the step count
    // with the amplitude so large shots stay resolved (capped).
    auto steps_for = [&](double u0) {
        double core = std::pow(std::max(u0, 1.0), (p - 2.0) / 2.0);
        double want = 4000.0 * std::max(1.0, core * R_ball / 40.0);
        int n = static_cast<int>(std::min(want, 4.0e6));
        return n + (n % 2); // even, for the Simpson rule
    };

    // Integrates to R and reports u(R); optionally records the profile.
    auto shoot = [&](double u0, std::vector<double>* rr, std::vector<double>* uu,
                     std::vector<double>* zz) {
        const int steps = steps_for(u0);
        const double dr = R_ball / steps;
        double y = u0, z = 0.0, r = 0.0;
        if (rr) {
            rr->push_back(r);
            uu->push_back(y);
            zz->push_back(z);
        }
        for (int i = 0; i < steps; ++i) {
            double k1y = z, k1z = fz(y, z, r);
            double k2y = z + 0.5 * dr * k1z, k2z = fz(y + 0.5 * dr * k1y, z + 0.5 * dr * k1z, r + 0.5 * dr);
            double k3y = z + 0.5 * dr * k2z, k3z = fz(y + 0.5 * dr * k2y, z + 0.5 * dr * k2z, r + 0.5 * dr);
            double k4y = z + dr * k3z, k4z = fz(y + dr * k3y, z + dr * k3z, r + dr);
            y += dr / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            z += dr / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
            r += dr;
            if (rr) {
                rr->push_back(r);
                uu->push_back(y);
                zz->push_back(z);
            }
        }
        return y;
    };

    // Bracket: small u0 stays positive at R (undershoot), large u0 has
    // crossed already. The scan stops where the core would no longer be
    // resolvable; profiles staying positive up to there signal that no
    // amplitude places a zero at R (e.g. mu = 0 at the critical power).
    const double u0_scan_cap = 2000.0;
    double lo = 0.0, hi = 0.0;
    double probe = 1.0;
    double at_probe = shoot(probe, nullptr, nullptr, nullptr);
    if (at_probe > 0.0) {
        lo = probe;
        double cand = probe;
        while (cand <= u0_scan_cap) {
            cand *= 2.0;
            if (shoot(cand, nullptr, nullptr, nullptr) <= 0.0) {
                hi = cand;
                break;
            }
            lo = cand;
        }
        if (hi == 0.0) return RadialShot{}; // stays positive: no solution
    } else {
        hi = probe;
        double cand = probe;
        for (int k = 0; k < 200; ++k) {
            cand *= 0.5;
            if (shoot(cand, nullptr, nullptr, nullptr) > 0.0) {
                lo = cand;
                break;
            }
            hi = cand;
        }
        if (lo == 0.0)
            throw Error(ErrorCode::no_convergence, "radial_shooting failed to bracket u(0)");
    }
    while ((hi - lo) > tol * hi) {
        double mid = 0.5 * (lo + hi);
        if (shoot(mid, nullptr, nullptr, nullptr) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double u0 = 0.5 * (lo + hi);

    RadialShot out;
    out.has_solution = true;
    out.u0 = u0;
    std::vector<double> zz;
    shoot(u0, &out.r, &out.u, &zz);

    // Energy of the radial profile: omega_{N-1} * int (1/2 u'^2 - u^p/p - mu u^q/q) r^(N-1) dr.
    auto dens = [&](std::size_t i) {
        double up = std::pow(std::max(out.u[i], 0.0), p);
        double uq = std::pow(std::max(out.u[i], 0.0), q);
        double w = 0.5 * zz[i] * zz[i] - up / p - mu * uq / q;
        return w * std::pow(out.r[i], N - 1);
    };
    const std::size_t steps = out.r.size() - 1; // even by construction
    const double dr = R_ball / static_cast<double>(steps);
    double sum = 0.0; // composite Simpson
    for (std::size_t i = 0; i + 2 <= steps; i += 2)
        sum += dens(i) + 4.0 * dens(i + 1) + dens(i + 2);
    sum *= dr / 3.0;
    double omega = 2.0 * std::pow(M_PI, N / 2.0) / std::tgamma(N / 2.0);
    out.level = omega * sum;
    return out;
}

} // namespace nehari
