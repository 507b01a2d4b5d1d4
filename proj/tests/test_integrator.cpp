#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sllbar/integrator.hpp"
#include "sllbar/spectral.hpp"

using namespace sllbar;
using std::numbers::pi;

namespace {

Grid line(int N, double L = pi) {
    const double l[] = {L};
    const int n[] = {N};
    return Grid::make(1, l, n);
}

SpectralField constant(const Grid& g, const Vec3& a) {
    SpectralField u(g);
    for (int c = 0; c < 3; ++c) u(c, 0) = a[c] * std::sqrt(g.volume());
    return u;
}

NoiseDescriptor eigen(std::vector<EigenmodeNoise> modes) {
    NoiseDescriptor d;
    d.family = NoiseFamily::eigenmodes;
    d.modes = std::move(modes);
    return d;
}

SolverConfig solver(double dt, double t_end) {
    SolverConfig c;
    c.dt = dt;
    c.t_end = t_end;
    return c;
}

SpectralField smooth_data(const Grid& g) {
    SpectralField u(g);
    u(0, 0) = 0.2;
    u(0, 1) = 0.1;
    u(1, 2) = 0.05;
    u(2, 1) = -0.04;
    u(2, 3) = 0.02;
    return u;
}

}  // namespace

TEST_CASE("solver config validation") {
    CHECK_NOTHROW(solver(0.1, 1.0).validate());
    CHECK(solver(0.1, 1.0).steps() == 10);
    CHECK(solver(1e-4, 1.0).steps() == 10000);
    CHECK_THROWS_AS(solver(0.0, 1.0).validate(), ConfigError);
    CHECK_THROWS_AS(solver(0.1, -1.0).validate(), ConfigError);
    CHECK_THROWS_AS(solver(2.0, 1.0).validate(), ConfigError);
    CHECK_THROWS_AS(solver(0.3, 1.0).validate(), ConfigError);
    SolverConfig c = solver(0.1, 1.0);
    c.record_every = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = solver(0.1, 1.0);
    c.truncation = {TruncationMode::on, 0.0};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    for (auto r : {StopReason::completed, StopReason::blowup_K, StopReason::nonfinite, StopReason::denominator})
        CHECK(stop_reason_from_string(to_string(r)) == r);
}

TEST_CASE("linear factor") {
    CHECK(linear_factor(1.0, 0.1, {1, 1, 1, 1, 1}) == doctest::Approx(1.2));
    CHECK(linear_factor(0.0, 5.0, {-7, 3, 1, 1, 1}) == 1.0);
    CHECK(linear_factor(1.0, 0.1, {-1, 1, 1, 1, 1}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(linear_factor(1.0, 0.5, {-3, 1, 1, 1, 1}), DenominatorError);
    CHECK_THROWS_AS(linear_factor(1.0, 0.5, {-3, 1, 1, 1, 1}), ConfigError);
}

TEST_CASE("imex step examples") {
    const Grid g = line(4);
    const NoiseModel none(g);
    const ModelParams lin{1, 1, 0, 0, 0};
    SpectralField u(g);
    u(0, 1) = 1.0;
    const SolverState s1 = imex_em_step({0.0, u, 0}, lin, none, {}, {}, 0.1);
    CHECK(s1.u(0, 1) == doctest::Approx(1.0 / 1.2).epsilon(1e-15));
    CHECK(s1.t == doctest::Approx(0.1));
    CHECK(s1.step == 1);

    const ModelParams all{0.3, 1, 1, 1, 1};
    const SolverState z = imex_em_step({0.0, SpectralField(g), 0}, all, none, {}, {}, 0.1);
    CHECK(norm_l2(z.u) == 0.0);

    const double s = 1.0 / std::sqrt(3.0);
    const SpectralField unit = constant(g, {s, s, -s});
    const SolverState f = imex_em_step({0.0, unit, 0}, all, none, {}, {}, 0.1);
    CHECK(norm_l2(f.u - unit) < 1e-15);
}

TEST_CASE("heun step examples") {
    const Grid g = line(4);
    const NoiseModel none(g);

    // Noise off: trapezoidal predictor/corrector on a decaying mode, order two.
    const ModelParams lin{1, 1, 0, 0, 0};
    const double rate = 2.0;  // beta1 * 1 + beta2 * 1
    std::vector<double> err;
    for (double dt : {0.1, 0.05, 0.025}) {
        SolverState st{0.0, SpectralField(g), 0};
        st.u(0, 1) = 1.0;
        const int n = static_cast<int>(std::lround(1.0 / dt));
        for (int m = 0; m < n; ++m) st = heun_strat_step(st, lin, none, {}, {}, dt);
        err.push_back(std::fabs(st.u(0, 1) - std::exp(-rate)));
    }
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.1));
    CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.1));

    // u = 0, zero coefficients, constant h: one step gives h dW.
    const double c = 0.3;
    SpectralField h(g);
    h(2, 0) = c * std::sqrt(pi);
    const NoiseModel cn(g, {h});
    const double dw[] = {0.07};
    const SolverState s = heun_strat_step({0.0, SpectralField(g), 0}, {0, 0, 0, 0, 0}, cn, {}, dw, 0.01);
    CHECK(s.u(2, 0) == doctest::Approx(0.07 * c * std::sqrt(pi)).epsilon(1e-14));
}

TEST_CASE("logistic closed form") {
    const Grid g = line(1);
    const NoiseModel none(g);
    const double r0 = 0.25;
    const TrajectoryRecord rec =
        run_trajectory(constant(g, {0.5, 0, 0}), {0, 0, 1, 0, 0}, none, solver(1e-4, 1.0));
    REQUIRE(rec.final_state);
    const double u = (*rec.final_state)(0, 0) / std::sqrt(pi);
    const double e = std::exp(2.0);
    CHECK(std::fabs(u * u - r0 * e / (1 - r0 + r0 * e)) < 1e-4);
    CHECK(std::fabs(u * u - 0.711236) < 1e-4);
    CHECK(rec.stop_reason == StopReason::completed);
    CHECK(rec.stop_time == doctest::Approx(1.0));
    CHECK(rec.steps_taken == 10000);
}

TEST_CASE("blow-up threshold") {
    const Grid g = line(4);
    SpectralField u(g);
    u(0, 0) = 1.0;
    SolverConfig c = solver(0.01, 1.0);
    c.blowup_K = 0.01;
    const TrajectoryRecord rec = run_trajectory(u, {0, 1, 1, 1, 1}, NoiseModel(g), c);
    CHECK(rec.stop_reason == StopReason::blowup_K);
    CHECK(rec.stop_time == 0.0);
    CHECK(rec.samples() == 1);
    CHECK(rec.h1[0] == doctest::Approx(1.0));

    // Logistic growth from a small constant crosses K = 0.9 sqrt(pi) at a recorded sample.
    c.blowup_K = 0.9 * std::sqrt(pi);
    c.t_end = 5.0;
    c.record_every = 7;
    const TrajectoryRecord grow = run_trajectory(constant(g, {0.1, 0, 0}), {0, 0, 1, 0, 0}, NoiseModel(g), c);
    CHECK(grow.stop_reason == StopReason::blowup_K);
    CHECK(grow.h1.back() > c.blowup_K);
    CHECK(grow.times.back() == grow.stop_time);
    CHECK(grow.stop_time < 5.0);
    for (std::size_t i = 0; i + 1 < grow.h1.size(); ++i) CHECK(grow.h1[i] <= c.blowup_K);
}

TEST_CASE("nonfinite state is reported") {
    // Explicit Heun on a stiff biharmonic symbol diverges.
    const Grid g = line(16);
    SolverConfig c = solver(0.1, 50.0);
    c.scheme = Scheme::heun_strat;
    c.blowup_K = 1e300;
    const TrajectoryRecord rec = run_trajectory(smooth_data(g), {0, 1, 0, 0, 0}, NoiseModel(g), c);
    CHECK(rec.stop_reason == StopReason::nonfinite);
    CHECK(rec.stop_time <= 50.0);
    REQUIRE(rec.final_state);
    CHECK(rec.final_state->all_finite());
}

TEST_CASE("denominator guard stops before stepping") {
    const Grid g = line(4);
    const TrajectoryRecord rec = run_trajectory(smooth_data(g), {-10, 1, 1, 1, 1}, NoiseModel(g), solver(0.5, 1.0));
    CHECK(rec.stop_reason == StopReason::denominator);
    CHECK(rec.steps_taken == 0);
}

TEST_CASE("pure dissipation decays monotonically") {
    const Grid g = line(6);
    SpectralField u(g);
    u(1, 2) = 1.0;
    const TrajectoryRecord rec = run_trajectory(u, {0, 1, 0, 0, 0}, NoiseModel(g), solver(0.01, 1.0));
    for (std::size_t i = 0; i + 1 < rec.samples(); ++i) {
        CHECK(rec.l2[i + 1] < rec.l2[i]);
        CHECK(rec.h1[i + 1] < rec.h1[i]);
    }
}

TEST_CASE("sampling schedule") {
    const Grid g = line(4);
    SolverConfig c = solver(0.1, 1.0);
    c.record_every = 3;
    c.keep_snapshots = true;
    const TrajectoryRecord rec = run_trajectory(smooth_data(g), {0, 1, 1, 1, 1}, NoiseModel(g), c);
    const std::vector<double> expect{0.0, 0.3, 0.6, 0.9, 1.0};
    REQUIRE(rec.times.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) CHECK(rec.times[i] == doctest::Approx(expect[i]));
    CHECK(rec.snapshots.size() == rec.times.size());
    CHECK(rec.snapshots.back() == *rec.final_state);
    for (std::size_t i = 0; i < rec.samples(); ++i) {
        CHECK(rec.h1[i] == sobolev_norm(rec.snapshots[i], 1.0));
        CHECK(rec.theta_arg[i] == rec.grad_l2[i]);
    }
}

TEST_CASE("determinism and truncation neutrality") {
    const Grid g = line(12);
    const NoiseModel noise =
        build_noise_modes(eigen({{{1, 0, 0}, 0.1, {0, 0, 1}}, {{2, 0, 0}, 0.05, {0, 1, 0}}}), g);
    SolverConfig c = solver(0.01, 1.0);
    c.seed = 99;
    c.keep_snapshots = true;
    const ModelParams p{0.1, 0.5, 1, 1, 0.5};
    const TrajectoryRecord a = run_trajectory(smooth_data(g), p, noise, c, 3);
    const TrajectoryRecord b = run_trajectory(smooth_data(g), p, noise, c, 3);
    CHECK(a.l2 == b.l2);
    CHECK(a.h3 == b.h3);
    CHECK(a.snapshots == b.snapshots);

    double max_grad = 0.0;
    for (double v : a.grad_l2) max_grad = std::max(max_grad, v);
    SolverConfig t = c;
    t.truncation = {TruncationMode::on, 10.0 * max_grad};
    const TrajectoryRecord tr = run_trajectory(smooth_data(g), p, noise, t, 3);
    CHECK(tr.snapshots == a.snapshots);
    CHECK(tr.h1 == a.h1);

    // A radius inside the trajectory's range changes the result.
    t.truncation = {TruncationMode::on, 0.1 * max_grad};
    CHECK_FALSE(run_trajectory(smooth_data(g), p, noise, t, 3).snapshots == a.snapshots);

    const TrajectoryRecord other = run_trajectory(smooth_data(g), p, noise, c, 4);
    CHECK_FALSE(other.l2 == a.l2);
}

TEST_CASE("strong self-convergence on a shared Brownian path") {
    // Mean over paths of the end-time gap between consecutive dt levels; the
    // levels start below 1 / (beta2 lambda_max^2) so that every mode is resolved.
    const Grid g = line(8);
    const NoiseModel noise =
        build_noise_modes(eigen({{{1, 0, 0}, 0.2, {0, 0, 1}}, {{3, 0, 0}, 0.1, {0, 0, 1}}}), g);
    const ModelParams p{0.1, 0.2, 1, 1, 0.2};
    const int levels = 4, paths = 4;
    std::vector<double> gaps(levels - 1, 0.0);
    for (std::uint64_t path = 0; path < paths; ++path) {
        std::vector<SpectralField> finals;
        for (int k = 0; k < levels; ++k) {
            SolverConfig c = solver(0.002 / std::ldexp(1.0, k), 0.5);
            c.seed = 5;
            c.record_every = 1 << 20;
            c.noise_substeps = 1u << (levels - 1 - k);
            finals.push_back(*run_trajectory(smooth_data(g), p, noise, c, path).final_state);
        }
        for (int k = 0; k + 1 < levels; ++k) gaps[k] += norm_l2(finals[k] - finals[k + 1]) / paths;
    }
    for (std::size_t k = 0; k + 1 < gaps.size(); ++k) CHECK(gaps[k + 1] < gaps[k]);
}
