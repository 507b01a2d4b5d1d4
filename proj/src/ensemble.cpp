#include "sllbar/ensemble.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "sllbar/spectral.hpp"

namespace sllbar {

std::string to_string(NormKind k) {
    switch (k) {
        case NormKind::l2: return "L2";
        case NormKind::l4: return "L4";
        case NormKind::h1: return "H1";
        case NormKind::h2: return "H2";
        case NormKind::h3: return "H3";
        case NormKind::grad_l2: return "grad_L2";
    }
    return "?";
}

NormKind norm_kind_from_string(const std::string& s) {
    if (s == "L2" || s == "l2") return NormKind::l2;
    if (s == "L4" || s == "l4") return NormKind::l4;
    if (s == "H1" || s == "h1") return NormKind::h1;
    if (s == "H2" || s == "h2") return NormKind::h2;
    if (s == "H3" || s == "h3") return NormKind::h3;
    if (s == "grad_L2" || s == "grad_l2") return NormKind::grad_l2;
    throw ConfigError("unknown norm '" + s + "' (expected L2, L4, H1, H2, H3 or grad_L2)");
}

const std::vector<double>& series(const TrajectoryRecord& rec, NormKind k) {
    switch (k) {
        case NormKind::l2: return rec.l2;
        case NormKind::l4: return rec.l4;
        case NormKind::h1: return rec.h1;
        case NormKind::h2: return rec.h2;
        case NormKind::h3: return rec.h3;
        case NormKind::grad_l2: return rec.grad_l2;
    }
    return rec.l2;
}

namespace {

double norm_of(const SpectralField& u, NormKind k) {
    switch (k) {
        case NormKind::l2: return norm_l2(u);
        case NormKind::l4: return lp_norm(u, 4.0);
        case NormKind::h1: return sobolev_norm(u, 1.0);
        case NormKind::h2: return sobolev_norm(u, 2.0);
        case NormKind::h3: return sobolev_norm(u, 3.0);
        case NormKind::grad_l2: return grad_norm(u);
    }
    return 0.0;
}

// Welford accumulation; identical inputs give exactly zero variance.
struct Running {
    int n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / (n - 1) : 0.0; }
    Estimate estimate() const { return {mean, n > 1 ? std::sqrt(variance() / n) : 0.0}; }
};

// Left-endpoint integral of f over the recorded samples.
double left_sum(const std::vector<double>& t, const std::vector<double>& f, double power) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) s += (t[i + 1] - t[i]) * std::pow(f[i], power);
    return s;
}

}  // namespace

void Observable::validate() const {
    switch (kind) {
        case Kind::tanh_mode:
            if (component < 0 || component > 2)
                throw ConfigError("observable tanh_mode: component must be 0, 1 or 2");
            if (!(scale > 0.0)) throw ConfigError("observable tanh_mode: scale must be > 0");
            break;
        case Kind::exp_neg_l2:
            if (!(scale > 0.0)) throw ConfigError("observable exp_neg_l2: scale must be > 0");
            break;
        case Kind::clip_norm:
            if (!(cap > 0.0)) throw ConfigError("observable clip_norm: cap must be > 0");
            break;
    }
}

double Observable::evaluate(const SpectralField& u) const {
    switch (kind) {
        case Kind::tanh_mode: {
            if (!u.grid().contains(mode)) throw ConfigError("observable tanh_mode: mode outside grid");
            return std::tanh(u(component, u.grid().flatten(mode)) / scale);
        }
        case Kind::exp_neg_l2: {
            const double n = norm_l2(u);
            return std::exp(-n * n / scale);
        }
        case Kind::clip_norm:
            return std::min(norm_of(u, space), cap);
    }
    return 0.0;
}

double Observable::evaluate(const TrajectoryRecord& rec, std::size_t i) const {
    switch (kind) {
        case Kind::tanh_mode:
            if (rec.snapshots.size() != rec.times.size())
                throw std::invalid_argument("observable tanh_mode needs coefficient snapshots");
            return evaluate(rec.snapshots[i]);
        case Kind::exp_neg_l2:
            return std::exp(-rec.l2[i] * rec.l2[i] / scale);
        case Kind::clip_norm:
            return std::min(series(rec, space)[i], cap);
    }
    return 0.0;
}

std::string Observable::describe() const {
    switch (kind) {
        case Kind::tanh_mode:
            return "tanh_mode(" + std::to_string(mode[0]) + ":" + std::to_string(mode[1]) + ":" +
                   std::to_string(mode[2]) + "," + std::to_string(component) + "," +
                   std::to_string(scale) + ")";
        case Kind::exp_neg_l2:
            return "exp_neg_l2(" + std::to_string(scale) + ")";
        case Kind::clip_norm:
            return "clip_norm(" + to_string(space) + "," + std::to_string(cap) + ")";
    }
    return "?";
}

EnsembleStats aggregate(std::vector<TrajectoryRecord> records) {
    EnsembleStats st;
    st.paths = static_cast<int>(records.size());
    for (const auto& r : records) {
        if (r.times.size() > st.times.size()) st.times = r.times;
        if (r.stop_reason == StopReason::blowup_K) ++st.blowups;
        if (r.stop_reason == StopReason::nonfinite) ++st.nonfinite;
    }
    const std::size_t T = st.times.size();
    st.norms.resize(6);
    for (int k = 0; k < 6; ++k) {
        SeriesStats& s = st.norms[k];
        std::vector<Running> acc(T);
        for (const auto& r : records) {
            const auto& v = series(r, static_cast<NormKind>(k));
            for (std::size_t i = 0; i < v.size() && i < T; ++i) acc[i].add(v[i]);
        }
        for (const auto& a : acc) {
            s.mean.push_back(a.mean);
            s.variance.push_back(a.variance());
            s.count.push_back(a.n);
        }
    }
    st.records = std::move(records);
    return st;
}

EnsembleStats run_ensemble(const SpectralField& u0, const ModelParams& params,
                           const NoiseModel& noise, const SolverConfig& config, int M,
                           int threads) {
    if (M < 1) throw ConfigError("experiment.paths must be >= 1");
    config.validate();
    params.validate(true);
    threads = std::clamp(threads, 1, M);

    std::vector<TrajectoryRecord> records(M);
    std::vector<std::exception_ptr> errors(M);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int p = next++; p < M; p = next++) {
            try {
                records[p] = run_trajectory(u0, params, noise, config, static_cast<std::uint64_t>(p));
            } catch (...) {
                errors[p] = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (int p = 0; p < M; ++p) {
        if (!errors[p]) continue;
        try {
            std::rethrow_exception(errors[p]);
        } catch (const ConfigError& e) {
            throw ConfigError("path " + std::to_string(p) + ": " + e.what());
        }
    }
    for (int p = 0; p < M; ++p)
        if (records[p].stop_reason == StopReason::denominator)
            throw ConfigError("path " + std::to_string(p) +
                              ": implicit factor 1 + dt(beta1 lambda + beta2 lambda^2) <= 1e-8");
    return aggregate(std::move(records));
}

MomentReport moment_estimates(const EnsembleStats& stats, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("moment_estimates: p must be >= 1");
    if (stats.records.empty()) throw std::invalid_argument("moment_estimates: no paths");
    MomentReport rep;
    rep.p = p;
    rep.horizon = stats.times.empty() ? 0.0 : stats.times.back();
    Running sup_l2, int_h2, int_l4, sup_h1, int_h3;
    for (const auto& r : stats.records) {
        if (r.times.empty())
            throw std::invalid_argument("moment_estimates: path without recorded samples");
        const double ml2 = *std::max_element(r.l2.begin(), r.l2.end());
        const double mh1 = *std::max_element(r.h1.begin(), r.h1.end());
        sup_l2.add(std::pow(ml2, 2.0 * p));
        sup_h1.add(std::pow(mh1, 2.0 * p));
        int_h2.add(std::pow(left_sum(r.times, r.h2, 2.0), p));
        int_l4.add(std::pow(left_sum(r.times, r.l4, 4.0), p));
        int_h3.add(std::pow(left_sum(r.times, r.h3, 2.0), p));
    }
    rep.sup_l2 = sup_l2.estimate();
    rep.int_h2 = int_h2.estimate();
    rep.int_l4 = int_l4.estimate();
    rep.sup_h1 = sup_h1.estimate();
    rep.int_h3 = int_h3.estimate();
    return rep;
}

GrowthReport h2_time_average(const EnsembleStats& stats) {
    const std::size_t T = stats.times.size();
    if (T < 20) throw std::invalid_argument("h2_time_average: need at least 20 sample times");
    GrowthReport rep;
    rep.times = stats.times;

    std::vector<double> mean_sq(T, 0.0);
    for (std::size_t i = 0; i < T; ++i) {
        Running acc;
        for (const auto& r : stats.records)
            if (i < r.h2.size()) acc.add(r.h2[i] * r.h2[i]);
        mean_sq[i] = acc.mean;
    }
    rep.cumulative.assign(T, 0.0);
    for (std::size_t i = 0; i + 1 < T; ++i)
        rep.cumulative[i + 1] = rep.cumulative[i] + (stats.times[i + 1] - stats.times[i]) * mean_sq[i];

    const double horizon = stats.times.back();
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < T; ++i)
        if (stats.times[i] >= horizon / 5.0) idx.push_back(i);
    if (idx.size() < 3) throw std::invalid_argument("h2_time_average: too few samples in fit range");

    // Fit in the scaled variable s = t / T for conditioning.
    Eigen::MatrixXd A(idx.size(), 3);
    Eigen::VectorXd y(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const double s = stats.times[idx[r]] / horizon;
        A(r, 0) = 1.0;
        A(r, 1) = s;
        A(r, 2) = s * s;
        y(r) = rep.cumulative[idx[r]];
    }
    const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(y);
    rep.a = coef(0);
    rep.b = coef(1) / horizon;
    rep.c = coef(2) / (horizon * horizon);
    if (rep.c == 0.0)
        rep.ratio = 0.0;
    else if (rep.b == 0.0)
        rep.ratio = std::numeric_limits<double>::infinity();
    else
        rep.ratio = std::fabs(rep.c) * horizon / rep.b;
    return rep;
}

double tightness_statistic(const EnsembleStats& stats, double R, NormKind space) {
    if (!(R >= 0.0)) throw std::invalid_argument("tightness_statistic: R must be >= 0");
    if (stats.records.empty()) return 0.0;
    double total = 0.0;
    for (const auto& r : stats.records) {
        const auto& v = series(r, space);
        const std::size_t n = r.times.size();
        double frac = 0.0;
        if (n == 1) {
            frac = v[0] > R ? 1.0 : 0.0;
        } else {
            const double span = r.times.back() - r.times.front();
            double above = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i)
                if (v[i] > R) above += r.times[i + 1] - r.times[i];
            frac = span > 0.0 ? above / span : 0.0;
        }
        total += frac;
    }
    return total / static_cast<double>(stats.records.size());
}

InvariantReport invariant_average(const EnsembleStats& stats, const Observable& psi,
                                  double burn_in, std::vector<Window> windows,
                                  const std::vector<double>& transition_times) {
    psi.validate();
    if (stats.times.empty()) throw std::invalid_argument("invariant_average: no samples");
    const double horizon = stats.times.back();
    if (!(burn_in >= 0.0)) throw std::invalid_argument("invariant_average: negative burn-in");
    if (horizon < 2.0 * burn_in)
        throw std::invalid_argument("invariant_average: horizon must be >= 2 * burn_in");
    if (windows.empty()) windows = {{horizon / 4.0, horizon / 2.0}, {horizon / 2.0, horizon}};
    for (const auto& w : windows) {
        if (!(w.begin < w.end)) throw std::invalid_argument("invariant_average: empty window");
        if (w.end > horizon * (1.0 + 1e-12))
            throw std::invalid_argument("invariant_average: window exceeds horizon");
        if (w.begin < burn_in * (1.0 - 1e-12))
            throw std::invalid_argument("invariant_average: window starts before burn-in");
    }

    InvariantReport rep;
    rep.windows = windows;
    rep.transition_times = transition_times;

    std::vector<std::vector<double>> values;
    values.reserve(stats.records.size());
    for (const auto& r : stats.records) {
        std::vector<double> v(r.times.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = psi.evaluate(r, i);
        values.push_back(std::move(v));
    }

    for (double t : transition_times) {
        if (t > horizon * (1.0 + 1e-12))
            throw std::invalid_argument("invariant_average: transition time exceeds horizon");
        Running acc;
        for (std::size_t p = 0; p < values.size(); ++p) {
            const auto& times = stats.records[p].times;
            auto it = std::upper_bound(times.begin(), times.end(), t + 1e-12);
            if (it == times.begin()) continue;
            const std::size_t i = static_cast<std::size_t>(it - times.begin()) - 1;
            acc.add(values[p][i]);
        }
        rep.transition.push_back(acc.estimate());
    }

    for (const auto& w : windows) {
        Running acc;
        for (std::size_t p = 0; p < values.size(); ++p) {
            const auto& times = stats.records[p].times;
            double s = 0.0;
            double covered = 0.0;
            for (std::size_t i = 0; i + 1 < times.size(); ++i) {
                if (times[i] < w.begin - 1e-12 || times[i] >= w.end - 1e-12) continue;
                const double h = times[i + 1] - times[i];
                s += h * values[p][i];
                covered += h;
            }
            if (covered > 0.0) acc.add(s / covered);
        }
        rep.window_means.push_back(acc.estimate());
    }
    return rep;
}

}  // namespace sllbar
