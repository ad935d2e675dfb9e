#include "nehari/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "nehari/parallel.hpp"

namespace nehari {

Eigenpair principal_eigenpair_on_grid(std::shared_ptr<const GridSpec> grid, double tol,
                                      int max_iters) {
    const std::size_t nm = grid->n_mask();
    Field phi(grid);
    for (std::size_t k = 0; k < nm; ++k) phi[k] = 1.0; // positive start

    double lambda = 0.0;
    Field Aphi(grid);
    Field next(grid);
    int it = 0;
    for (; it < max_iters; ++it) {
        next = poisson_solve(phi, std::min(tol, 1e-10), 200000, &next);
        double nrm = norm_l2(next);
        if (!(nrm > 0.0))
            throw Error(ErrorCode::no_convergence, "inverse iteration collapsed to zero");
        double inv = 1.0 / nrm;
        for (std::size_t k = 0; k < nm; ++k) next[k] *= inv;
        // Rayleigh quotient and eigen-residual.
        apply_neg_laplacian(next, Aphi);
        double num = chunked_dot(next.values.data(), Aphi.values.data(), nm);
        double den = chunked_dot(next.values.data(), next.values.data(), nm);
        lambda = num / den;
        double res2 = chunked_sum(nm, [&](std::size_t k) {
            double d = Aphi[k] - lambda * next[k];
            return d * d;
        });
        double rel = std::sqrt(res2 / den);
        phi = next;
        if (rel <= tol * std::max(lambda, 1.0)) {
            Eigenpair out;
            out.lambda1 = lambda;
            out.iterations = it + 1;
            out.residual = rel;
            // Fix sign positive, normalize sup-norm to 1.
            double mx = 0.0;
            double sum = 0.0;
            for (std::size_t k = 0; k < nm; ++k) sum += phi[k];
            double sgn = sum >= 0.0 ? 1.0 : -1.0;
            for (std::size_t k = 0; k < nm; ++k) {
                phi[k] *= sgn;
                mx = std::max(mx, std::abs(phi[k]));
            }
            for (std::size_t k = 0; k < nm; ++k) phi[k] /= mx;
            out.phi = std::move(phi);
            return out;
        }
    }
    throw Error(ErrorCode::no_convergence,
                "principal eigenpair did not converge in " + std::to_string(max_iters) +
                    " iterations");
}

Eigenpair principal_eigenpair(const CrossSection& F, double h, double tol, int max_iters) {
    auto grid = discretize_cross_section(F, h);
    return principal_eigenpair_on_grid(grid, tol, max_iters);
}

std::vector<EigenConvergenceRow> eigen_convergence_report(const CrossSection& F,
                                                          const std::vector<double>& h_list,
                                                          double exact) {
    if (h_list.size() < 2)
        throw Error(ErrorCode::invalid_argument, "need at least two h values");
    for (std::size_t i = 1; i < h_list.size(); ++i)
        if (!(h_list[i] < h_list[i - 1]))
            throw Error(ErrorCode::invalid_argument, "h list must be strictly decreasing");

    std::vector<EigenConvergenceRow> rows;
    for (double h : h_list) {
        EigenConvergenceRow r;
        r.h = h;
        r.lambda1 = principal_eigenpair(F, h).lambda1;
        rows.push_back(r);
    }
    double ref = exact > 0.0 ? exact : rows.back().lambda1;
    for (auto& r : rows) r.error = std::abs(r.lambda1 - ref);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        if (rows[i + 1].error > 0.0 && rows[i].error > 0.0) {
            double hr = rows[i].h / rows[i + 1].h;
            rows[i].observed_order =
                std::log(rows[i].error / rows[i + 1].error) / std::log(hr);
        }
    }
    return rows;
}

} // namespace nehari
