#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sllbar/initial.hpp"
#include "sllbar/integrator.hpp"

namespace sllbar {

struct ResidualSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::string normalization;
};

/// (Pi(u x Laplace u), u)_{L^2} / (||u||_{H^1} ||u||_{H^2}); 0 for u = 0.
double identity_cross(const SpectralField& u);

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;  // (lhs - rhs) / max(1, |lhs|)
};

/// lhs = (grad(|u|^2 u), grad u) from the spectral pairing
/// sum_k lambda_k (Pi(|u|^2 u))_k u_k; rhs = 2||u . grad u||^2 + || |u| |grad u| ||^2
/// by padded-grid quadrature of nodal gradients.
IdentityCheck identity_cubic_gradient(const SpectralField& u);

/// lhs = (Laplace(|u|^2 u), u) spectrally; rhs = -(2||u . grad u||^2 + || |u| |grad u| ||^2).
IdentityCheck identity_cubic_laplacian(const SpectralField& u);

/// The two quadrature terms 2||u . grad u||^2 and || |u| |grad u| ||^2.
struct GradientProducts {
    double u_dot_grad = 0.0;   // ||u . grad u||^2 (summed over axes)
    double mag_grad = 0.0;     // || |u| |grad u| ||^2
};
GradientProducts gradient_products(const SpectralField& u);

/// Per-step residual of the deterministic L^2 energy identity, with the time
/// derivative of 1/2 ||u||^2 replaced by a forward difference and every other
/// term at the left endpoint. Values are absolute (normalization "none").
/// Throws std::invalid_argument if the states are not equally spaced by dt.
ResidualSeries energy_balance_l2(const std::vector<SolverState>& states, const ModelParams& params,
                                 double dt, const TruncationConfig& trunc = {});

enum class WeakForm { weak, very_weak };

/// Residual of the integral identity satisfied by a pathwise (very) weak
/// solution, tested against phi = e_k in each vector component. Time
/// integrals are left-endpoint sums over the recorded steps; the Stratonovich
/// integral is taken in Ito form plus the 1/2-correction. Returns
/// max_t max_c |lhs - rhs| / (sup_t ||u||_{L^2} ||phi||_{L^2}).
///
/// Requires a record with snapshots at every step (record_every = 1) and
/// the noise model it was run with; throws std::invalid_argument otherwise.
double weak_form_residual(const TrajectoryRecord& traj, std::size_t mode, const ModelParams& params,
                          const NoiseModel& noise, const TruncationConfig& trunc, WeakForm form);

/// First recorded time with ||u||_{H^1} > K.
std::optional<double> stopping_time(const TrajectoryRecord& traj, double K);

/// Coarse-grid solution embedded into the fine grid by zero-filling modes.
SpectralField embed(const SpectralField& coarse, const Grid& fine);

/// sup over common sampled times of ||u_fine - embed(u_coarse)||_{L^2}. Both
/// records need snapshots at the same sample times.
double snapshot_gap(const TrajectoryRecord& coarse, const TrajectoryRecord& fine);

/// Runs the same problem with n_coarse and n_fine modes per axis of `box`
/// (identical seed and increment keys) and returns the snapshot_gap. Throws
/// ConfigError when n_coarse >= n_fine or the noise family is not
/// representable on the coarse grid.
double refinement_gap(const InitialData& u0, const ModelParams& params,
                      const NoiseDescriptor& noise, SolverConfig config, const Grid& box,
                      int n_coarse, int n_fine);

}  // namespace sllbar
