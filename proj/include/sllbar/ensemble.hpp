#pragma once

#include <string>
#include <vector>

#include "sllbar/integrator.hpp"

namespace sllbar {

enum class NormKind { l2, l4, h1, h2, h3, grad_l2 };
std::string to_string(NormKind k);
NormKind norm_kind_from_string(const std::string& s);
/// Recorded series of a TrajectoryRecord by norm kind.
const std::vector<double>& series(const TrajectoryRecord& rec, NormKind k);

/// Bounded continuous test functionals.
///   tanh_mode:  tanh(c_{k,component} / scale)
///   exp_neg_l2: exp(-||u||_{L^2}^2 / scale)
///   clip_norm:  min(||u||_space, cap)
struct Observable {
    enum class Kind { tanh_mode, exp_neg_l2, clip_norm };
    Kind kind = Kind::exp_neg_l2;
    MultiIndex mode{0, 0, 0};
    int component = 0;
    double scale = 1.0;
    NormKind space = NormKind::l2;
    double cap = 1.0;

    void validate() const;
    double evaluate(const SpectralField& u) const;
    /// Value at sample i of a record; tanh_mode needs snapshots.
    double evaluate(const TrajectoryRecord& rec, std::size_t i) const;
    std::string describe() const;

    friend bool operator==(const Observable&, const Observable&) = default;
};

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

struct SeriesStats {
    std::vector<double> mean;
    std::vector<double> variance;
    std::vector<int> count;
};

struct EnsembleStats {
    int paths = 0;
    std::vector<double> times;  // sample times of the longest path
    std::vector<SeriesStats> norms;  // indexed by NormKind
    int blowups = 0;
    int nonfinite = 0;
    std::vector<TrajectoryRecord> records;  // in path order

    const SeriesStats& norm(NormKind k) const { return norms[static_cast<int>(k)]; }
};

/// Runs M trajectories keyed by path index 0..M-1. `threads` only changes the
/// schedule; results and aggregation order are fixed by path index.
EnsembleStats run_ensemble(const SpectralField& u0, const ModelParams& params,
                           const NoiseModel& noise, const SolverConfig& config, int M,
                           int threads = 1);

/// Builds statistics from finished records (used by run_ensemble).
EnsembleStats aggregate(std::vector<TrajectoryRecord> records);

struct MomentReport {
    double p = 1.0;
    double horizon = 0.0;
    Estimate sup_l2;    // E sup_{s<=t} ||u||_{L2}^{2p}
    Estimate int_h2;    // E (int_0^t ||u||_{H2}^2 ds)^p
    Estimate int_l4;    // E (int_0^t ||u||_{L4}^4 ds)^p
    Estimate sup_h1;    // E sup_{s<=t} ||u||_{H1}^{2p}
    Estimate int_h3;    // E (int_0^t ||u||_{H3}^2 ds)^p
};

MomentReport moment_estimates(const EnsembleStats& stats, double p);

struct GrowthReport {
    std::vector<double> times;
    std::vector<double> cumulative;  // int_0^t E||u||_{H2}^2 ds
    double a = 0.0, b = 0.0, c = 0.0;  // least squares a + b t + c t^2 on [T/5, T]
    double ratio = 0.0;                // |c| T / b
};

GrowthReport h2_time_average(const EnsembleStats& stats);

/// Mean over paths of the fraction of [0, T] during which the chosen norm
/// exceeds R (left-endpoint weights).
double tightness_statistic(const EnsembleStats& stats, double R, NormKind space);

struct Window {
    double begin = 0.0;
    double end = 0.0;

    friend bool operator==(const Window&, const Window&) = default;
};

struct InvariantReport {
    std::vector<double> transition_times;
    std::vector<Estimate> transition;  // E psi(u(t)) over paths
    std::vector<Window> windows;
    std::vector<Estimate> window_means;  // path mean of (1/|W|) int_W psi ds
};

/// Windows default to [T/4, T/2] and [T/2, T] when empty.
InvariantReport invariant_average(const EnsembleStats& stats, const Observable& psi,
                                  double burn_in, std::vector<Window> windows,
                                  const std::vector<double>& transition_times = {});

}  // namespace sllbar
