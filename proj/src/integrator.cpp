#include "sllbar/integrator.hpp"

#include <cmath>
#include <stdexcept>

#include "sllbar/rng.hpp"
#include "sllbar/spectral.hpp"

namespace sllbar {

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::completed:
            return "completed";
        case StopReason::blowup_K:
            return "blowup_K";
        case StopReason::nonfinite:
            return "nonfinite";
        case StopReason::denominator:
            return "denominator";
    }
    return "unknown";
}

StopReason stop_reason_from_string(const std::string& s) {
    if (s == "completed") return StopReason::completed;
    if (s == "blowup_K") return StopReason::blowup_K;
    if (s == "nonfinite") return StopReason::nonfinite;
    if (s == "denominator") return StopReason::denominator;
    throw std::invalid_argument("unknown stop reason '" + s + "'");
}

void SolverConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("solver.dt must be > 0");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("solver.t_end must be > 0");
    if (!(dt <= t_end)) throw ConfigError("solver.dt must not exceed solver.t_end");
    if (!(blowup_K > 0.0)) throw ConfigError("solver.blowup_K must be > 0");
    if (record_every < 1) throw ConfigError("solver.record_every must be >= 1");
    if (noise_substeps < 1) throw ConfigError("solver.noise_substeps must be >= 1");
    truncation.validate();
    steps();
}

std::int64_t SolverConfig::steps() const {
    const double ratio = t_end / dt;
    const auto n = static_cast<std::int64_t>(std::llround(ratio));
    if (n < 1 || std::fabs(ratio - static_cast<double>(n)) > 1e-9 * ratio)
        throw ConfigError("solver.t_end must be an integer multiple of solver.dt");
    return n;
}

double linear_factor(double lambda, double dt, const ModelParams& params) {
    if (!(dt > 0.0)) throw std::invalid_argument("linear_factor: dt must be > 0");
    const double f = 1.0 + dt * (params.beta1 * lambda + params.beta2 * lambda * lambda);
    if (!(f > 1e-8))
        throw DenominatorError("denominator: implicit factor 1 + dt(beta1 lambda + beta2 lambda^2) = " +
                               std::to_string(f) + " at lambda = " + std::to_string(lambda));
    return f;
}

SolverState imex_em_step(const SolverState& state, const ModelParams& params,
                         const NoiseModel& noise, const TruncationConfig& trunc,
                         std::span<const double> dw, double dt) {
    const SpectralField& u = state.u;
    const PhysField up = to_physical(u);
    const DriftTerms terms = drift_terms(u, up, params, &noise, trunc, true);

    SpectralField rhs = terms.nonlinear();
    rhs *= dt;
    rhs += u;
    if (noise.size() > 0) rhs += diffusion_sum(up, noise, dw);

    const auto lam = u.grid().eigenvalues();
    for (std::size_t f = 0; f < lam.size(); ++f) {
        const double inv = 1.0 / linear_factor(lam[f], dt, params);
        for (int c = 0; c < 3; ++c) rhs(c, f) *= inv;
    }
    return SolverState{state.t + dt, std::move(rhs), state.step + 1};
}

namespace {

struct StratonovichParts {
    SpectralField drift;
    SpectralField noise;
};

StratonovichParts strat_parts(const SpectralField& u, const ModelParams& params,
                              const NoiseModel& noise, const TruncationConfig& trunc,
                              std::span<const double> dw) {
    const PhysField up = to_physical(u);
    StratonovichParts p{drift_terms(u, up, params, &noise, trunc, false).stratonovich(),
                        SpectralField(u.grid())};
    if (noise.size() > 0) p.noise = diffusion_sum(up, noise, dw);
    return p;
}

}  // namespace

SolverState heun_strat_step(const SolverState& state, const ModelParams& params,
                            const NoiseModel& noise, const TruncationConfig& trunc,
                            std::span<const double> dw, double dt) {
    const SpectralField& u = state.u;
    const StratonovichParts a0 = strat_parts(u, params, noise, trunc, dw);

    SpectralField predictor = u;
    predictor.axpy(dt, a0.drift);
    predictor += a0.noise;

    const StratonovichParts a1 = strat_parts(predictor, params, noise, trunc, dw);

    SpectralField next = u;
    next.axpy(0.5 * dt, a0.drift);
    next.axpy(0.5 * dt, a1.drift);
    next.axpy(0.5, a0.noise);
    next.axpy(0.5, a1.noise);
    return SolverState{state.t + dt, std::move(next), state.step + 1};
}

namespace {

void record_sample(TrajectoryRecord& rec, const SolverState& s, bool keep_snapshot) {
    rec.times.push_back(s.t);
    rec.l2.push_back(norm_l2(s.u));
    rec.l4.push_back(lp_norm(s.u, 4.0));
    rec.h1.push_back(sobolev_norm(s.u, 1.0));
    rec.h2.push_back(sobolev_norm(s.u, 2.0));
    rec.h3.push_back(sobolev_norm(s.u, 3.0));
    const double g = grad_norm(s.u);
    rec.grad_l2.push_back(g);
    rec.theta_arg.push_back(g);
    if (keep_snapshot) rec.snapshots.push_back(s.u);
}

}  // namespace

TrajectoryRecord run_trajectory(const SpectralField& u0, const ModelParams& params,
                                const NoiseModel& noise, const SolverConfig& config,
                                std::uint64_t path) {
    config.validate();
    params.validate(true);
    if (!(u0.grid() == noise.grid()))
        throw ConfigError("initial data and noise model are on different grids");

    TrajectoryRecord rec;
    rec.seed = config.seed;
    rec.path = path;
    rec.noise_substeps = config.noise_substeps;
    rec.dt = config.dt;

    const std::int64_t n_steps = config.steps();
    SolverState state{0.0, u0, 0};
    record_sample(rec, state, config.keep_snapshots);

    if (config.scheme == Scheme::imex_em_ito) {
        try {
            for (double lam : u0.grid().eigenvalues()) linear_factor(lam, config.dt, params);
        } catch (const DenominatorError&) {
            rec.stop_reason = StopReason::denominator;
            rec.stop_time = 0.0;
            rec.final_state = state.u;
            return rec;
        }
    }

    if (sobolev_norm(state.u, 1.0) > config.blowup_K) {
        rec.stop_reason = StopReason::blowup_K;
        rec.stop_time = 0.0;
        rec.final_state = state.u;
        return rec;
    }

    const IncrementSource increments(config.seed, path, noise.size(), config.dt,
                                     config.noise_substeps);
    std::vector<double> dw;
    for (std::int64_t m = 0; m < n_steps; ++m) {
        increments.fill(static_cast<std::uint64_t>(m), dw);
        SolverState next =
            config.scheme == Scheme::imex_em_ito
                ? imex_em_step(state, params, noise, config.truncation, dw, config.dt)
                : heun_strat_step(state, params, noise, config.truncation, dw, config.dt);
        next.t = static_cast<double>(m + 1) * config.dt;
        rec.steps_taken = m + 1;

        if (!next.u.all_finite()) {
            rec.stop_reason = StopReason::nonfinite;
            rec.stop_time = next.t;
            rec.final_state = state.u;
            return rec;
        }
        state = std::move(next);

        const bool crossed = sobolev_norm(state.u, 1.0) > config.blowup_K;
        if (crossed || (m + 1) % config.record_every == 0 || m + 1 == n_steps)
            record_sample(rec, state, config.keep_snapshots);
        if (crossed) {
            rec.stop_reason = StopReason::blowup_K;
            rec.stop_time = state.t;
            rec.final_state = state.u;
            return rec;
        }
    }
    rec.stop_reason = StopReason::completed;
    rec.stop_time = state.t;
    rec.final_state = std::move(state.u);
    return rec;
}

}  // namespace sllbar
