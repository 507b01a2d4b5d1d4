#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sllbar/field.hpp"
#include "sllbar/model.hpp"
#include "sllbar/noise.hpp"

namespace sllbar {

enum class Scheme { imex_em_ito, heun_strat };

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    Scheme scheme = Scheme::imex_em_ito;
    double blowup_K = 1e6;        // threshold on ||u||_{H^1}
    int record_every = 1;
    std::uint64_t seed = 0;
    TruncationConfig truncation;
    /// Each step's Wiener increment is the sum of this many keyed
    /// sub-increments (see IncrementSource).
    std::uint64_t noise_substeps = 1;
    /// Keep coefficient snapshots at every recorded sample.
    bool keep_snapshots = false;

    void validate() const;
    /// Number of steps to reach t_end; t_end must be an integer multiple of dt.
    std::int64_t steps() const;

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct SolverState {
    double t = 0.0;
    SpectralField u;
    std::int64_t step = 0;
};

enum class StopReason { completed, blowup_K, nonfinite, denominator };
std::string to_string(StopReason r);
StopReason stop_reason_from_string(const std::string& s);

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> l2, l4, h1, h2, h3, grad_l2, theta_arg;
    StopReason stop_reason = StopReason::completed;
    double stop_time = 0.0;
    std::int64_t steps_taken = 0;
    /// Present when SolverConfig::keep_snapshots; aligned with `times`.
    std::vector<SpectralField> snapshots;
    /// Last finite state reached.
    std::optional<SpectralField> final_state;

    // Keys of the consumed increments.
    std::uint64_t seed = 0;
    std::uint64_t path = 0;
    std::uint64_t noise_substeps = 1;
    double dt = 0.0;

    std::size_t samples() const { return times.size(); }
};

/// 1 + dt (beta1 lambda + beta2 lambda^2). Throws DenominatorError when the
/// result is <= 1e-8.
double linear_factor(double lambda, double dt, const ModelParams& params);

class DenominatorError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Semi-implicit Euler-Maruyama on the Ito form: the diagonal linear part is
/// implicit, every other term (including the Ito correction) is explicit at
/// the beginning of the step.
SolverState imex_em_step(const SolverState& state, const ModelParams& params,
                         const NoiseModel& noise, const TruncationConfig& trunc,
                         std::span<const double> dw, double dt);

/// Explicit Stratonovich-Heun predictor/corrector, no Ito correction.
SolverState heun_strat_step(const SolverState& state, const ModelParams& params,
                            const NoiseModel& noise, const TruncationConfig& trunc,
                            std::span<const double> dw, double dt);

/// Integrates from u0 until t_end, an H^1 exceedance of blowup_K, or a
/// nonfinite state. Samples are taken at t = 0, every record_every steps,
/// and at the final state.
TrajectoryRecord run_trajectory(const SpectralField& u0, const ModelParams& params,
                                const NoiseModel& noise, const SolverConfig& config,
                                std::uint64_t path = 0);

}  // namespace sllbar
