#pragma once

#include "sllbar/field.hpp"

namespace sllbar {

class NoiseModel;

/// Coefficients of the drift. beta1 may have either sign; beta2..beta5 are
/// positive physical constants.
struct ModelParams {
    double beta1 = 0.0;
    double beta2 = 1.0;
    double beta3 = 1.0;
    double beta4 = 1.0;
    double beta5 = 1.0;

    /// Throws ConfigError unless beta2..beta5 > 0 and all values are finite.
    /// `allow_zero` admits beta2..beta5 = 0, the degenerate limits used by
    /// reduced test problems; run configurations are always strict.
    void validate(bool allow_zero = false) const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

enum class TruncationMode { off, on };

/// Cut-off of the nonlocal cubic term by theta_R(||grad u||_{L^2}).
/// `off` drops the factor entirely.
struct TruncationConfig {
    TruncationMode mode = TruncationMode::off;
    double radius = 0.0;

    void validate() const;
    double factor(double grad_l2) const;

    friend bool operator==(const TruncationConfig&, const TruncationConfig&) = default;
};

/// C-infinity nonincreasing bump: 1 on [0, R], 0 on [2R, inf).
double theta_R(double x, double R);

/// Pi(|u|^2 u)
SpectralField cubic_field(const SpectralField& u);
/// Pi(u x Laplace(u))
SpectralField precession(const SpectralField& u);
/// theta_R(||grad u||) Pi Laplace(|u|^2 u); the factor is 1 when truncation is off.
SpectralField nonlocal_cubic(const SpectralField& u, const TruncationConfig& trunc);

/// The drift split into the pieces of the Galerkin system, each already
/// multiplied by its coefficient.
struct DriftTerms {
    SpectralField diffusion;    // beta1 Laplace(u)
    SpectralField biharmonic;   // -beta2 Laplace^2(u)
    SpectralField penalty;      // beta3 (Pi u - Pi(|u|^2 u))
    SpectralField precession;   // -beta4 Pi(u x Laplace(u))
    SpectralField nonlocal;     // beta5 theta_R Pi Laplace(|u|^2 u)
    SpectralField correction;   // -1/2 sum_j Pi(G_j(u) x h_j)
    double theta_arg = 0.0;     // ||grad u||_{L^2}
    double theta = 1.0;

    explicit DriftTerms(const Grid& g)
        : diffusion(g), biharmonic(g), penalty(g), precession(g), nonlocal(g), correction(g) {}

    /// Linear part beta1 Laplace(u) - beta2 Laplace^2(u).
    SpectralField linear() const;
    /// Everything except the linear part (includes the correction).
    SpectralField nonlinear() const;
    /// Stratonovich drift: all terms except the correction.
    SpectralField stratonovich() const;
    /// Full Ito drift.
    SpectralField total() const;
};

/// Evaluates every drift term at `u`. A null or empty noise model gives a
/// zero correction.
DriftTerms drift_terms(const SpectralField& u, const ModelParams& params, const NoiseModel* noise,
                       const TruncationConfig& trunc, bool with_correction = true);

/// Same, reusing the nodal values of u.
DriftTerms drift_terms(const SpectralField& u, const PhysField& u_nodal, const ModelParams& params,
                       const NoiseModel* noise, const TruncationConfig& trunc,
                       bool with_correction = true);

SpectralField ito_drift(const SpectralField& u, const ModelParams& params,
                        const NoiseModel& noise, const TruncationConfig& trunc);

}  // namespace sllbar
