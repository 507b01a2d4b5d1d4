#include "sllbar/model.hpp"

#include <cmath>
#include <string>

#include "sllbar/noise.hpp"
#include "sllbar/spectral.hpp"

namespace sllbar {

void ModelParams::validate(bool allow_zero) const {
    const double vals[] = {beta1, beta2, beta3, beta4, beta5};
    for (int i = 0; i < 5; ++i)
        if (!std::isfinite(vals[i]))
            throw ConfigError("params.beta" + std::to_string(i + 1) + " must be finite");
    for (int i = 1; i < 5; ++i)
        if (allow_zero ? !(vals[i] >= 0.0) : !(vals[i] > 0.0))
            throw ConfigError("params.beta" + std::to_string(i + 1) +
                              " must be a positive constant (beta2..beta5 > 0)");
}

void TruncationConfig::validate() const {
    if (mode == TruncationMode::on && !(radius > 0.0 && std::isfinite(radius)))
        throw ConfigError("truncation.radius must be > 0 when truncation is on");
}

double TruncationConfig::factor(double grad_l2) const {
    return mode == TruncationMode::on ? theta_R(grad_l2, radius) : 1.0;
}

namespace {
double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
}  // namespace

double theta_R(double x, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("theta_R: R must be positive");
    x = std::fabs(x);
    if (x <= R) return 1.0;
    if (x >= 2.0 * R) return 0.0;
    const double a = bump(2.0 - x / R);
    const double b = bump(x / R - 1.0);
    return a / (a + b);
}

SpectralField cubic_field(const SpectralField& u) {
    return to_spectral(pointwise_cubic(to_physical(u)));
}

SpectralField precession(const SpectralField& u) {
    return to_spectral(pointwise_cross(to_physical(u), to_physical(apply_laplacian(u))));
}

SpectralField nonlocal_cubic(const SpectralField& u, const TruncationConfig& trunc) {
    const double theta = trunc.factor(grad_norm(u));
    SpectralField out(u.grid());
    if (theta == 0.0) return out;
    out = apply_laplacian(cubic_field(u));
    if (theta != 1.0) out *= theta;
    return out;
}

SpectralField DriftTerms::linear() const { return diffusion + biharmonic; }

SpectralField DriftTerms::nonlinear() const {
    SpectralField s = penalty;
    s += precession;
    s += nonlocal;
    s += correction;
    return s;
}

SpectralField DriftTerms::stratonovich() const {
    SpectralField s = linear();
    s += penalty;
    s += precession;
    s += nonlocal;
    return s;
}

SpectralField DriftTerms::total() const {
    SpectralField s = stratonovich();
    s += correction;
    return s;
}

DriftTerms drift_terms(const SpectralField& u, const ModelParams& params, const NoiseModel* noise,
                       const TruncationConfig& trunc, bool with_correction) {
    return drift_terms(u, to_physical(u), params, noise, trunc, with_correction);
}

DriftTerms drift_terms(const SpectralField& u, const PhysField& up, const ModelParams& params,
                       const NoiseModel* noise, const TruncationConfig& trunc,
                       bool with_correction) {
    const Grid& g = u.grid();
    DriftTerms d(g);

    const SpectralField lap = apply_laplacian(u, 1);
    d.diffusion = params.beta1 * lap;
    d.biharmonic = -params.beta2 * apply_laplacian(u, 2);

    const SpectralField cubic = to_spectral(pointwise_cubic(up));

    d.penalty = u;
    d.penalty -= cubic;
    d.penalty *= params.beta3;

    d.precession = to_spectral(pointwise_cross(up, to_physical(lap)));
    d.precession *= -params.beta4;

    d.theta_arg = grad_norm(u);
    d.theta = trunc.factor(d.theta_arg);
    if (d.theta != 0.0) {
        d.nonlocal = apply_laplacian(cubic);
        d.nonlocal *= params.beta5 * d.theta;
    }

    if (with_correction && noise != nullptr && noise->size() > 0)
        d.correction = ito_correction(u, up, *noise);
    return d;
}

SpectralField ito_drift(const SpectralField& u, const ModelParams& params,
                        const NoiseModel& noise, const TruncationConfig& trunc) {
    return drift_terms(u, params, &noise, trunc).total();
}

}  // namespace sllbar
