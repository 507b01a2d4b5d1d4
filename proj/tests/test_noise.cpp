#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sllbar/noise.hpp"
#include "sllbar/rng.hpp"
#include "sllbar/spectral.hpp"

using namespace sllbar;
using std::numbers::pi;

namespace {

Grid line(int N, double L = pi) {
    const double l[] = {L};
    const int n[] = {N};
    return Grid::make(1, l, n);
}

SpectralField random_field(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    SpectralField u(g);
    const auto lam = g.eigenvalues();
    for (int c = 0; c < 3; ++c)
        for (std::size_t f = 0; f < u.size(); ++f) u(c, f) = n(rng) / (1.0 + lam[f]);
    return u;
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

// Noise with one spatially constant h = c.
NoiseModel constant_noise(const Grid& g, const Vec3& c) {
    return NoiseModel(g, {constant(g, c)});
}

SpectralField at_nodes_cross(const SpectralField& a, const SpectralField& b) {
    return to_spectral(pointwise_cross(to_physical(a), to_physical(b)));
}

}  // namespace

TEST_CASE("philox known-answer vectors") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox4x32::generate(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, K{0xffffffffu, 0xffffffffu}) ==
          C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox4x32::generate(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, K{0xa4093822u, 0x299f31d0u}) ==
          C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("increment determinism and errors") {
    const WienerIncrement a = sample_increments(42, 3, 17, 5, 0.01);
    const WienerIncrement b = sample_increments(42, 3, 17, 5, 0.01);
    CHECK(a.dw == b.dw);
    CHECK(a.step == 17);
    CHECK(a.dw.size() == 5);
    CHECK(sample_increments(43, 3, 17, 5, 0.01).dw != a.dw);
    CHECK(sample_increments(42, 4, 17, 5, 0.01).dw != a.dw);
    CHECK(sample_increments(42, 3, 18, 5, 0.01).dw != a.dw);
    // Evaluation order is irrelevant.
    const IncrementSource src(42, 3, 5, 0.01);
    std::vector<double> later;
    src.fill(40, later);
    CHECK(src.at(17).dw == a.dw);
    CHECK_THROWS_AS(sample_increments(1, 0, 0, 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_increments(1, 0, 0, 1, -1.0), std::invalid_argument);
}

TEST_CASE("substep aggregation shares one Brownian path") {
    const double dt = 0.01;
    const IncrementSource coarse(7, 2, 3, dt, 4);
    const IncrementSource fine(7, 2, 3, dt / 4.0, 1);
    for (std::uint64_t m = 0; m < 10; ++m) {
        const auto c = coarse.at(m).dw;
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (std::uint64_t i = 0; i < 4; ++i) s += fine.at(4 * m + i).dw[j];
            CHECK(c[j] == doctest::Approx(s).epsilon(1e-14));
        }
    }
}

TEST_CASE("increment statistics") {
    const double dt = 0.02;
    const int n = 1'000'000;
    double sum = 0.0, sum2 = 0.0;
    for (int m = 0; m < n; ++m) {
        const double v = sample_increments(2024, 0, static_cast<std::uint64_t>(m), 1, dt).dw[0];
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::fabs(mean) < 4.0 * std::sqrt(dt / n));
    CHECK(std::fabs(var - dt) < 0.01 * dt);

    // Distinct paths are uncorrelated.
    const int m = 100'000;
    double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
    for (int k = 0; k < m; ++k) {
        const double x = keyed_normal(5, 0, 0, static_cast<std::uint64_t>(k));
        const double y = keyed_normal(5, 1, 0, static_cast<std::uint64_t>(k));
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    const double cov = sxy / m - (sx / m) * (sy / m);
    const double rho = cov / std::sqrt((sxx / m - sx * sx / m / m) * (syy / m - sy * sy / m / m));
    CHECK(std::fabs(rho) < 4.0 / std::sqrt(static_cast<double>(m)));
}

TEST_CASE("noise family construction and the condition constant") {
    const Grid g = line(8);
    const double sigma = 0.3;
    const NoiseModel one = build_noise_modes(eigen({{{1, 0, 0}, sigma, {0, 0, 1}}}), g);
    CHECK(one.size() == 1);
    CHECK(one.c_h() == doctest::Approx(8.0 * sigma * sigma).epsilon(1e-12));
    CHECK(check_noise_condition(one).c_h == one.c_h());
    CHECK(norm_l2(one.lap_h(0) - apply_laplacian(one.h(0))) == 0.0);

    const NoiseModel two = build_noise_modes(eigen({{{1, 0, 0}, 1.0, {1, 0, 0}}, {{2, 0, 0}, 0.5, {0, 2, 0}}}), g);
    CHECK(std::fabs(two.c_h() - 39.25) < 1e-10);
    // Directions are normalised.
    CHECK(two.h(1)(1, 2) == doctest::Approx(0.5));

    const NoiseModel none = build_noise_modes(NoiseDescriptor{}, g);
    CHECK(none.size() == 0);
    CHECK(none.c_h() == 0.0);
    CHECK(check_noise_condition(none).c_h == 0.0);

    CHECK_THROWS_AS(build_noise_modes(eigen({{{8, 0, 0}, 1.0, {0, 0, 1}}}), g), ConfigError);
    CHECK_THROWS_AS(build_noise_modes(eigen({{{1, 0, 0}, 1.0, {0, 0, 0}}}), g), ConfigError);

    NoiseDescriptor ex;
    ex.family = NoiseFamily::explicit_coefficients;
    ex.coefficients = {{0, {1, 0, 0}, {0, 0, 0.3}}, {0, {2, 0, 0}, {0, 0.1, 0}}, {1, {0, 0, 0}, {0.2, 0, 0}}};
    const NoiseModel e = build_noise_modes(ex, g);
    CHECK(e.size() == 2);
    CHECK(e.h(0)(2, 1) == 0.3);
    CHECK(e.h(0)(1, 2) == 0.1);
    CHECK(e.c_h() == doctest::Approx(0.09 * 8 + 0.01 * 125 + 0.04).epsilon(1e-12));
    ex.coefficients.push_back({0, {9, 0, 0}, {1, 0, 0}});
    CHECK_THROWS_AS(build_noise_modes(ex, g), ConfigError);
}

TEST_CASE("condition constant against a quadrature oracle") {
    // ||h||_{H^3}^2 = ||h||^2 + 3||grad h||^2 + 3||Laplace h||^2 + ||grad Laplace h||^2
    const double l[] = {2.0, 1.5};
    const int n[] = {5, 4};
    const Grid g = Grid::make(2, l, n);
    std::vector<SpectralField> h{random_field(g, 1), random_field(g, 2)};
    const NoiseModel noise(g, h);
    double oracle = 0.0;
    for (const auto& hj : h) {
        const PhysField p = to_physical(hj);
        double grad = 0.0, glap = 0.0;
        for (const auto& d : spectral_gradient(hj)) grad += quadrature_inner(d, d);
        for (const auto& d : spectral_gradient(apply_laplacian(hj))) glap += quadrature_inner(d, d);
        const PhysField lap = to_physical(apply_laplacian(hj));
        oracle += quadrature_inner(p, p) + 3.0 * grad + 3.0 * quadrature_inner(lap, lap) + glap;
    }
    CHECK(std::fabs(check_noise_condition(noise).c_h - oracle) <= 1e-10 * oracle);
}

TEST_CASE("condition warning and tail estimate") {
    const Grid g = line(4);
    NoiseDescriptor d = eigen({{{1, 0, 0}, 1.0, {0, 0, 1}}});
    d.c_h_bound = 9.0;
    CHECK_FALSE(check_noise_condition(build_noise_modes(d, g)).warning);
    d.tail_estimate = 2.0;
    const NoiseCondition c = check_noise_condition(build_noise_modes(d, g));
    REQUIRE(c.warning);
    CHECK(c.tail_estimate == 2.0);
    CHECK(c.c_h == doctest::Approx(8.0));
}

TEST_CASE("diffusion operator") {
    const Grid g = line(8);
    const NoiseModel noise = build_noise_modes(eigen({{{2, 0, 0}, 0.7, {0, 1, 0}}}), g);
    const SpectralField add = noise.h(0) - noise.lap_h(0);
    CHECK(norm_l2(diffusion_apply(SpectralField(g), noise, 0) - add) < 1e-15);

    const Vec3 c{0.1, -0.2, 0.4}, a{0.5, 0.3, -0.1};
    const NoiseModel cn = constant_noise(g, c);
    const SpectralField got = diffusion_apply(constant(g, a), cn, 0);
    const Vec3 ax = cross(a, c);
    for (int k = 0; k < 3; ++k)
        CHECK(got(k, 0) / std::sqrt(pi) == doctest::Approx(-ax[k] + c[k]).epsilon(1e-13));

    // u parallel to h pointwise.
    const SpectralField par = 2.5 * noise.h(0);
    CHECK(norm_l2(diffusion_apply(par, noise, 0) - add) < 1e-14);

    CHECK_THROWS_AS(diffusion_apply(par, noise, 1), std::out_of_range);
    CHECK_THROWS_AS(diffusion_apply(par, noise, -1), std::out_of_range);

    // Affine in u.
    const SpectralField u = random_field(g, 1), v = random_field(g, 2);
    const double al = 0.3;
    const SpectralField lhs = diffusion_apply(al * u + (1 - al) * v, noise, 0);
    const SpectralField rhs = al * diffusion_apply(u, noise, 0) + (1 - al) * diffusion_apply(v, noise, 0);
    CHECK(norm_l2(lhs - rhs) < 1e-12);

    // (u x h, u) = 0
    const SpectralField uh = at_nodes_cross(u, noise.h(0));
    CHECK(std::fabs(inner(uh, u)) < 1e-12);
}

TEST_CASE("diffusion sum matches term-by-term application") {
    const Grid g = line(8);
    const NoiseModel noise =
        build_noise_modes(eigen({{{1, 0, 0}, 0.7, {0, 0, 1}}, {{3, 0, 0}, 0.2, {1, 1, 0}}}), g);
    const SpectralField u = random_field(g, 4);
    const std::vector<double> dw{0.11, -0.07};
    SpectralField expect(g);
    for (int j = 0; j < 2; ++j) expect.axpy(dw[j], diffusion_apply(u, noise, j));
    CHECK(norm_l2(diffusion_sum(to_physical(u), noise, dw) - expect) < 1e-14);
}

TEST_CASE("ito correction") {
    const Grid g = line(8);
    CHECK(norm_l2(ito_correction(random_field(g, 1), NoiseModel(g))) == 0.0);

    const double c = 0.6;
    const NoiseModel cn = constant_noise(g, {0, 0, c});
    const SpectralField corr = ito_correction(constant(g, {1, 0, 0}), cn);
    CHECK(corr(0, 0) / std::sqrt(pi) == doctest::Approx(-0.5 * c * c).epsilon(1e-13));
    CHECK(std::fabs(corr(1, 0)) < 1e-15);
    CHECK(std::fabs(corr(2, 0)) < 1e-15);
    CHECK(norm_l2(ito_correction(SpectralField(g), cn)) < 1e-15);

    // Affine in u and, for u parallel to every h_j, equal to -1/2 sum Pi((h - Laplace h) x h).
    const NoiseModel noise = build_noise_modes(eigen({{{1, 0, 0}, 0.7, {0, 0, 1}}, {{2, 0, 0}, 0.3, {0, 0, 1}}}), g);
    const SpectralField u = random_field(g, 5), v = random_field(g, 6);
    const SpectralField lhs = ito_correction(0.25 * u + 0.75 * v, noise);
    const SpectralField rhs = 0.25 * ito_correction(u, noise) + 0.75 * ito_correction(v, noise);
    CHECK(norm_l2(lhs - rhs) < 1e-13);

    SpectralField par(g);
    par(2, 1) = 0.4;
    par(2, 3) = -0.2;
    SpectralField expect(g);
    for (int j = 0; j < 2; ++j) expect.axpy(-0.5, at_nodes_cross(noise.h(j) - noise.lap_h(j), noise.h(j)));
    CHECK(norm_l2(ito_correction(par, noise) - expect) < 1e-14);

    // Explicit -1/2 sum Pi(G_j(u) x h_j) from the operator definition.
    SpectralField direct(g);
    for (int j = 0; j < 2; ++j) direct.axpy(-0.5, at_nodes_cross(diffusion_apply(u, noise, j), noise.h(j)));
    CHECK(norm_l2(ito_correction(u, noise) - direct) < 1e-13 * norm_l2(direct));
}

TEST_CASE("physical-space noise input reports its projection loss") {
    const Grid g = line(6);
    PhysField p(g);
    for (int i = 0; i < g.padded(0); ++i) p(2, i) = std::cos(2.0 * g.node(0, i));
    const ProjectedField exact = from_physical(p);
    CHECK(exact.relative_loss < 1e-7);
    CHECK(exact.field(2, 2) == doctest::Approx(std::sqrt(pi / 2.0)).epsilon(1e-13));

    PhysField q(g);
    for (int i = 0; i < g.padded(0); ++i) q(0, i) = std::cos(9.0 * g.node(0, i));
    CHECK(from_physical(q).relative_loss == doctest::Approx(1.0).epsilon(1e-10));
}
