#pragma once

#include "nehari/spectral.hpp"

namespace nehari {

enum class EnvelopeVariant { plain, refined, hopf };

/// Comparison envelope along the cylinder axis:
///   plain:   Psi(t) = alpha exp(-sqrt(1 + (lambda1-lambda)|t|^2))
///   refined: plain * |t|^(-(ell-1)/2)    (asymptotic, evaluated for |t| > 0)
///   hopf:    alpha exp(-sqrt(1 + (lambda1-eta)|t|^2)), eta < lambda
struct EnvelopeSpec {
    double lambda1 = 0.0;
    double lambda = 0.0;
    double eta = 0.0;
    double alpha = 1.0;
    int ell = 1;
    EnvelopeVariant variant = EnvelopeVariant::plain;

    double rate_shift() const { return variant == EnvelopeVariant::hopf ? eta : lambda; }
    void validate() const;
};

/// Pointwise envelope value at t (|t| Euclidean over the ell axial coords).
double comparison_Psi(const EnvelopeSpec& spec, const double* t);
double comparison_Psi_radial(const EnvelopeSpec& spec, double t_norm);

/// Checks the explicit Laplacian identity of the envelope:
///   -lap Psi + kappa Psi = kappa Psi ((ell-1) theta^(-1/2) + theta^(-1) + theta^(-3/2)),
/// (refined variant: Psi (kappa theta^(-1) + kappa theta^(-3/2)
///   + ((ell-1)/2)((ell-3)/2)/|t|^2)), theta = 1 + kappa |t|^2,
/// by central differences at step h. Returns the worst relative
/// residual over the samples; expected O(h^2).
double verify_eigencomputation(const EnvelopeSpec& spec,
                               const std::vector<std::array<double, 2>>& t_samples, double h);

struct DecayFit {
    double rate = 0.0;               // fitted sqrt(c)
    double prefactor_exponent = 0.0; // fitted power of |t| (0 unless requested)
    double r2 = 0.0;
    double amplitude_log = 0.0;
    int samples = 0;
};

/// Fits log max_y |u(t,y)| ~ A - sqrt(1 + c|t|^2) + P log|t| over axial
/// slices with |t| in [R1, R2]. P is fitted only when with_prefactor,
/// otherwise fixed to 0. Separable least squares: linear solve in (A, P)
/// inside a golden-section search over c.
DecayFit fit_decay_rate(const Field& u, double R1, double R2, bool with_prefactor);

/// Same fit applied to |grad_t u| (central differences along the axial axes).
DecayFit fit_axial_gradient_decay(const Field& u, double R1, double R2, bool with_prefactor);

struct HopfResult {
    bool passed = false;
    double beta = 0.0; // largest beta with u >= beta * phi(y) * envelope
    Point contact{};   // where the minimum ratio is attained
};

/// Hopf-type lower bound: u(t,y) >= beta phi(y) exp(-sqrt(1+(lambda1-eta)|t|^2))
/// for the largest admissible beta. Requires u >= 0 and eta < lambda.
HopfResult hopf_check(const Field& u, double eta, const Eigenpair& phi, double lambda = 0.0);

} // namespace nehari
