#include "nehari/decay.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace nehari {

void EnvelopeSpec::validate() const {
    double shift = rate_shift();
    if (!(lambda1 - shift > 0.0))
        throw Error(ErrorCode::invalid_argument, "envelope requires lambda1 - lambda > 0");
    if (!(alpha > 0.0)) throw Error(ErrorCode::invalid_argument, "alpha must be positive");
    if (ell < 1) throw Error(ErrorCode::invalid_argument, "ell must be >= 1");
    if (variant == EnvelopeVariant::hopf && !(eta < lambda))
        throw Error(ErrorCode::invalid_argument, "hopf variant requires eta < lambda");
}

double comparison_Psi_radial(const EnvelopeSpec& spec, double t_norm) {
    double kappa = spec.lambda1 - spec.rate_shift();
    double theta = 1.0 + kappa * t_norm * t_norm;
    double val = spec.alpha * std::exp(-std::sqrt(theta));
    if (spec.variant == EnvelopeVariant::refined && spec.ell > 1)
        val *= std::pow(t_norm, -(spec.ell - 1) / 2.0);
    return val;
}

double comparison_Psi(const EnvelopeSpec& spec, const double* t) {
    double r2 = 0.0;
    for (int a = 0; a < spec.ell; ++a) r2 += t[a] * t[a];
    return comparison_Psi_radial(spec, std::sqrt(r2));
}

double verify_eigencomputation(const EnvelopeSpec& spec,
                               const std::vector<std::array<double, 2>>& t_samples, double h) {
    spec.validate();
    if (!(h > 0.0)) throw Error(ErrorCode::invalid_argument, "step h must be positive");
    const double kappa = spec.lambda1 - spec.rate_shift();

    double worst = 0.0;
    for (const auto& ts : t_samples) {
        double t[2] = {ts[0], spec.ell > 1 ? ts[1] : 0.0};
        double r2 = t[0] * t[0] + (spec.ell > 1 ? t[1] * t[1] : 0.0);
        double r = std::sqrt(r2);
        if (spec.variant == EnvelopeVariant::refined && r < 4.0 * h)
            throw Error(ErrorCode::invalid_argument,
                        "refined identity samples must stay away from t = 0");
        double theta = 1.0 + kappa * r2;
        double psi = comparison_Psi(spec, t);

        // -lap Psi by central differences over the ell axial coordinates.
        double lap = 0.0;
        for (int a = 0; a < spec.ell; ++a) {
            double tp[2] = {t[0], t[1]};
            double tm[2] = {t[0], t[1]};
            tp[a] += h;
            tm[a] -= h;
            lap += comparison_Psi(spec, tp) - 2.0 * psi + comparison_Psi(spec, tm);
        }
        lap /= h * h;
        double lhs = -lap + kappa * psi;

        double rhs;
        if (spec.variant == EnvelopeVariant::refined) {
            rhs = psi * (kappa / theta + kappa * std::pow(theta, -1.5) +
                         0.5 * (spec.ell - 1) * 0.5 * (spec.ell - 3) / r2);
        } else {
            rhs = kappa * psi *
                  ((spec.ell - 1) / std::sqrt(theta) + 1.0 / theta + std::pow(theta, -1.5));
        }
        double rel = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
        worst = std::max(worst, rel);
    }
    return worst;
}

namespace {

struct SliceData {
    std::vector<double> tnorm;
    std::vector<double> logmax;
};

/// Collects per-axial-slice maxima of |u| over the cross variables for
/// slices with R1 <= |t| <= R2.
SliceData collect_slices(const Field& u, double R1, double R2,
                         const std::vector<double>* override_values = nullptr) {
    const GridSpec& g = *u.grid;
    if (g.ell < 1)
        throw Error(ErrorCode::invalid_argument, "decay fit needs an axial direction");
    if (!(R1 >= 0.0) || !(R2 > R1))
        throw Error(ErrorCode::invalid_argument, "need 0 <= R1 < R2");
    if (g.T > 0.0 && R2 > g.T)
        throw Error(ErrorCode::invalid_argument, "window exceeds the truncation T");

    // Group masked points by their axial multi-index.
    std::map<std::array<int, 2>, std::pair<double, double>> slabs; // idx -> (tnorm, max)
    std::array<int, kMaxDim> idx{};
    const std::vector<double>& vals = override_values ? *override_values : u.values;
    for (std::size_t k = 0; k < u.size(); ++k) {
        double tn = g.axial_radius(k);
        if (tn < R1 || tn > R2) continue;
        g.node_multi_index(g.node_of_mask[k], idx);
        std::array<int, 2> key{idx[0], g.ell > 1 ? idx[1] : 0};
        double a = std::abs(vals[k]);
        auto it = slabs.find(key);
        if (it == slabs.end())
            slabs.emplace(key, std::make_pair(tn, a));
        else
            it->second.second = std::max(it->second.second, a);
    }
    SliceData out;
    for (const auto& [key, tv] : slabs) {
        out.tnorm.push_back(tv.first);
        out.logmax.push_back(tv.second);
    }
    return out;
}

DecayFit fit_slices(SliceData data, bool with_prefactor) {
    std::size_t n = data.tnorm.size();
    if (n < 3)
        throw Error(ErrorCode::invalid_argument, "decay window holds fewer than 3 slices");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(data.logmax[i] > 1e-300))
            throw Error(ErrorCode::underflow,
                        "slice max is numerically zero inside the window; shrink R2");
        data.logmax[i] = std::log(data.logmax[i]);
    }

    // For fixed c, model log m = A - sqrt(1+c t^2) + P log t is linear in
    // (A, P); solve the normal equations and return the SSE.
    auto sse_for = [&](double c, double* A_out, double* P_out) {
        double s11 = 0, s1x = 0, sxx = 0, s1y = 0, sxy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double y = data.logmax[i] + std::sqrt(1.0 + c * data.tnorm[i] * data.tnorm[i]);
            double x = with_prefactor ? std::log(data.tnorm[i]) : 0.0;
            s11 += 1.0;
            s1x += x;
            sxx += x * x;
            s1y += y;
            sxy += x * y;
        }
        double A, P = 0.0;
        if (with_prefactor) {
            double det = s11 * sxx - s1x * s1x;
            A = (sxx * s1y - s1x * sxy) / det;
            P = (s11 * sxy - s1x * s1y) / det;
        } else {
            A = s1y / s11;
        }
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double x = with_prefactor ? std::log(data.tnorm[i]) : 0.0;
            double pred = A - std::sqrt(1.0 + c * data.tnorm[i] * data.tnorm[i]) + P * x;
            double d = data.logmax[i] - pred;
            sse += d * d;
        }
        if (A_out) *A_out = A;
        if (P_out) *P_out = P;
        return sse;
    };

    // Golden-section search over log c.
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::log(1e-4), hi = std::log(1e4);
    double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
    double f1 = sse_for(std::exp(x1), nullptr, nullptr);
    double f2 = sse_for(std::exp(x2), nullptr, nullptr);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = sse_for(std::exp(x1), nullptr, nullptr);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = sse_for(std::exp(x2), nullptr, nullptr);
        }
    }
    double c = std::exp(0.5 * (lo + hi));
    DecayFit fit;
    double A = 0, P = 0;
    double sse = sse_for(c, &A, &P);
    double mean = 0;
    for (double v : data.logmax) mean += v;
    mean /= n;
    double sst = 0;
    for (double v : data.logmax) sst += (v - mean) * (v - mean);
    fit.rate = std::sqrt(c);
    fit.prefactor_exponent = with_prefactor ? P : 0.0;
    fit.r2 = sst > 0.0 ? 1.0 - sse / sst : 1.0;
    fit.amplitude_log = A;
    fit.samples = static_cast<int>(n);
    return fit;
}

} // namespace

DecayFit fit_decay_rate(const Field& u, double R1, double R2, bool with_prefactor) {
    if (with_prefactor && !(R1 > 0.0))
        throw Error(ErrorCode::invalid_argument,
                    "prefactor fits need R1 > 0 (the |t| power is singular at t = 0)");
    return fit_slices(collect_slices(u, R1, R2), with_prefactor);
}

DecayFit fit_axial_gradient_decay(const Field& u, double R1, double R2, bool with_prefactor) {
    const GridSpec& g = *u.grid;
    const int nnb = 2 * g.dim;
    std::vector<double> gradmag(u.size(), 0.0);
    for (std::size_t k = 0; k < u.size(); ++k) {
        const std::int32_t* row = g.neighbor.data() + k * nnb;
        double s = 0.0;
        for (int a = 0; a < g.ell; ++a) {
            double um = row[2 * a] >= 0 ? u[static_cast<std::size_t>(row[2 * a])] : 0.0;
            double up = row[2 * a + 1] >= 0 ? u[static_cast<std::size_t>(row[2 * a + 1])] : 0.0;
            double d = (up - um) / (2.0 * g.h);
            s += d * d;
        }
        gradmag[k] = std::sqrt(s);
    }
    return fit_slices(collect_slices(u, R1, R2, &gradmag), with_prefactor);
}

HopfResult hopf_check(const Field& u, double eta, const Eigenpair& phi, double lambda) {
    if (!(eta < lambda))
        throw Error(ErrorCode::invalid_argument, "hopf_check requires eta < lambda");
    const GridSpec& g = *u.grid;
    double umin = 0.0;
    for (double v : u.values) umin = std::min(umin, v);
    if (umin < -1e-12)
        throw Error(ErrorCode::invalid_argument, "hopf_check requires a nonnegative solution");

    EnvelopeSpec env;
    env.lambda1 = phi.lambda1;
    env.lambda = lambda;
    env.eta = eta;
    env.ell = g.ell;
    env.variant = EnvelopeVariant::hopf;
    env.validate();

    HopfResult res;
    res.beta = 1e300;
    for (std::size_t k = 0; k < u.size(); ++k) {
        Point x = g.mask_coords(k);
        Point y{};
        for (int a = g.ell; a < g.dim; ++a) y[a - g.ell] = x[a];
        double phiy = interpolate(phi.phi, y);
        if (!(phiy > 0.0)) continue;
        double tn = g.axial_radius(k);
        double envval = phiy * comparison_Psi_radial(env, tn);
        double ratio = u[k] / envval;
        if (ratio < res.beta) {
            res.beta = ratio;
            res.contact = x;
        }
    }
    if (res.beta == 1e300) res.beta = 0.0;
    res.passed = res.beta > 0.0;
    return res;
}

} // namespace nehari
