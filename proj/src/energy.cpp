#include "nehari/energy.hpp"

#include <cmath>

#include "nehari/parallel.hpp"

namespace nehari {

double ProblemParams::critical_exponent(int N) {
    if (N < 3)
        throw Error(ErrorCode::invalid_argument, "critical exponent 2N/(N-2) requires N >= 3");
    return 2.0 * N / (N - 2.0);
}

void ProblemParams::validate() const {
    if (N < 2) throw Error(ErrorCode::invalid_argument, "N must be at least 2");
    if (!(q > 2.0) || !(q < p))
        throw Error(ErrorCode::invalid_argument, "require 2 < q < p");
    if (!(mu > 0.0)) throw Error(ErrorCode::invalid_argument, "require mu > 0");
}

double energy_value(const Integrals& ig, const ProblemParams& params) {
    return 0.5 * (ig.grad2 - params.lambda * ig.l2) - ig.lp / params.p -
           params.mu * ig.lq / params.q;
}

double nehari_residual_value(const Integrals& ig, const ProblemParams& params) {
    return ig.grad2 - params.lambda * ig.l2 - ig.lp - params.mu * ig.lq;
}

EnergyReport energy(const Field& u, const ProblemParams& params, bool with_nodal) {
    params.validate();
    EnergyReport rep;
    rep.integrals = integrals(u, params.p, params.q);
    rep.I = energy_value(rep.integrals, params);
    rep.nehari_residual = nehari_residual_value(rep.integrals, params);
    if (with_nodal) {
        auto [up, um] = nodal_split(u);
        Integrals igp = integrals(up, params.p, params.q);
        Integrals igm = integrals(um, params.p, params.q);
        NodalReport nr;
        nr.I_plus = energy_value(igp, params);
        nr.I_minus = energy_value(igm, params);
        nr.residual_plus = nehari_residual_value(igp, params);
        nr.residual_minus = nehari_residual_value(igm, params);
        rep.nodal = nr;
    }
    return rep;
}

Field residual(const Field& u, const ProblemParams& params) {
    params.validate();
    Field r(u.grid);
    apply_neg_laplacian(u, r);
    const double p = params.p, q = params.q, mu = params.mu, lambda = params.lambda;
    const std::size_t nm = u.size();
    const double* v = u.values.data();
    double* rv = r.values.data();
    parallel_for(nm, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            double a = std::abs(v[k]);
            double f = 0.0;
            if (a > 0.0)
                f = (std::pow(a, p - 2.0) + mu * std::pow(a, q - 2.0) + lambda) * v[k];
            rv[k] -= f;
        }
    });
    return r;
}

double nehari_scale(const Integrals& ig, const ProblemParams& params) {
    params.validate();
    const double target = ig.grad2 - params.lambda * ig.l2;
    if (!(ig.lp + ig.lq > 0.0))
        throw Error(ErrorCode::invalid_argument, "nehari_scale requires a nonzero field");
    if (!(target > 0.0))
        throw Error(ErrorCode::invalid_argument,
                    "nehari_scale requires grad2 - lambda*l2 > 0 (is lambda < lambda_1?)");
    const double p = params.p, q = params.q, mu = params.mu;
    auto g = [&](double t) {
        return std::pow(t, p - 2.0) * ig.lp + mu * std::pow(t, q - 2.0) * ig.lq;
    };
    // g is strictly increasing from 0 to infinity for p, q > 2.
    double lo = 1.0, hi = 1.0;
    if (g(1.0) < target) {
        while (g(hi) < target) {
            hi *= 2.0;
            if (hi > 1e150)
                throw Error(ErrorCode::no_convergence, "nehari_scale bracket blew up");
        }
        lo = hi / 2.0;
    } else {
        while (g(lo) > target) {
            lo *= 0.5;
            if (lo < 1e-150)
                throw Error(ErrorCode::no_convergence, "nehari_scale bracket underflow");
        }
        hi = lo * 2.0;
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if (std::abs(gm - target) <= 1e-12 * target && (hi - lo) <= 1e-13 * mid) return mid;
        if (gm < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double nehari_scale(const Field& u, const ProblemParams& params) {
    Integrals ig = integrals(u, params.p, params.q);
    return nehari_scale(ig, params);
}

std::pair<Field, Field> nodal_split(const Field& u) {
    Field up(u.grid), um(u.grid);
    const std::size_t nm = u.size();
    for (std::size_t k = 0; k < nm; ++k) {
        double v = u[k];
        up[k] = v > 0.0 ? v : 0.0;
        um[k] = v < 0.0 ? -v : 0.0;
    }
    return {std::move(up), std::move(um)};
}

TailMasses tail_masses(const Field& u, const ProblemParams& params, double R) {
    params.validate();
    const GridSpec& g = *u.grid;
    if (!(R > 0.0) || (g.T > 0.0 && R >= g.T))
        throw Error(ErrorCode::invalid_argument, "tail_masses needs 0 < R < T");

    const std::size_t nm = u.size();
    const double p = params.p, q = params.q;

    auto radius2 = [&](std::size_t k) {
        Point x = g.mask_coords(k);
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) r2 += x[a] * x[a];
        return r2;
    };
    const double R2 = R * R;

    double lp_tail = 0.0, lq_tail = 0.0, grad_tail = 0.0;
    double lp_tot = 0.0, lq_tot = 0.0, grad_tot = 0.0;
    const int nnb = 2 * g.dim;
    const double* v = u.values.data();
    const std::int32_t* nb = g.neighbor.data();
    for (std::size_t k = 0; k < nm; ++k) {
        double ap = std::pow(std::abs(v[k]), p);
        double aq = std::pow(std::abs(v[k]), q);
        double ge = 0.0;
        const std::int32_t* row = nb + k * nnb;
        for (int a = 0; a < g.dim; ++a) {
            std::int32_t hi = row[2 * a + 1];
            double d = (hi >= 0 ? v[static_cast<std::size_t>(hi)] : 0.0) - v[k];
            ge += d * d;
            if (row[2 * a] < 0) ge += v[k] * v[k];
        }
        lp_tot += ap;
        lq_tot += aq;
        grad_tot += ge;
        if (radius2(k) > R2) {
            lp_tail += ap;
            lq_tail += aq;
            grad_tail += ge;
        }
    }
    // fractions: the cell volumes cancel
    TailMasses out;
    out.p_tail = lp_tot > 0.0 ? lp_tail / lp_tot : 0.0;
    out.q_tail = lq_tot > 0.0 ? lq_tail / lq_tot : 0.0;
    out.grad_tail = grad_tot > 0.0 ? grad_tail / grad_tot : 0.0;
    return out;
}

} // namespace nehari
