#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sllbar/grid.hpp"
#include "sllbar/spectral.hpp"

using namespace sllbar;
using std::numbers::pi;

namespace {

Grid grid1(double L, int N, double pad = 2.0) {
    const double l[] = {L};
    const int n[] = {N};
    return Grid::make(1, l, n, pad);
}

Grid grid_d(int d, int N) {
    const double l[] = {pi, 2.0, 1.5};
    const int n[] = {N, N - 1, N - 2};
    return Grid::make(d, std::span<const double>(l, d), std::span<const int>(n, d));
}

SpectralField random_field(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    SpectralField u(g);
    for (int c = 0; c < 3; ++c)
        for (auto& v : u.component(c)) v = n(rng);
    return u;
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

}  // namespace

TEST_CASE("grid validation") {
    const double l[] = {1.0};
    const int n[] = {4};
    const double bad_l[] = {-1.0};
    const int bad_n[] = {0};
    CHECK_THROWS_AS(Grid::make(0, l, n), ConfigError);
    CHECK_THROWS_AS(Grid::make(1, bad_l, n), ConfigError);
    CHECK_THROWS_AS(Grid::make(1, l, bad_n), ConfigError);
    CHECK_THROWS_AS(Grid::make(1, l, n, 0.5), ConfigError);
    const Grid g = Grid::make(1, l, n, 1.5);
    CHECK(g.padded(0) == 6);
    CHECK(grid1(1.0, 5, 2.0).padded(0) == 10);
    CHECK(grid1(1.0, 5, 1.5).padded(0) == 8);
}

TEST_CASE("neumann eigenpairs") {
    const Basis b = neumann_eigenpairs(grid1(pi, 4));
    REQUIRE(b.eigenvalues.size() == 4);
    for (int k = 0; k < 4; ++k) CHECK(b.eigenvalues[k] == doctest::Approx(k * k).epsilon(1e-15));

    const double l2[] = {pi, pi};
    const int n2[] = {3, 3};
    const Grid g2 = Grid::make(2, l2, n2);
    CHECK(g2.eigenvalues()[g2.flatten({1, 1, 0})] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(grid1(2 * pi, 3).eigenvalues()[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g2.eigenvalues()[0] == 0.0);

    // Stable ascending order: ties keep layout order.
    const Basis b2 = neumann_eigenpairs(g2);
    for (std::size_t i = 1; i < b2.sorted.size(); ++i) {
        const double a = b2.eigenvalues[b2.sorted[i - 1]], c = b2.eigenvalues[b2.sorted[i]];
        CHECK(a <= c);
        if (a == c) CHECK(b2.sorted[i - 1] < b2.sorted[i]);
    }
}

TEST_CASE("layout is row-major with axis 0 slowest") {
    const Grid g = grid_d(3, 4);
    CHECK(g.flatten({0, 0, 1}) == 1);
    CHECK(g.flatten({0, 1, 0}) == static_cast<std::size_t>(g.modes(2)));
    CHECK(g.flatten({1, 0, 0}) == static_cast<std::size_t>(g.modes(1) * g.modes(2)));
    for (std::size_t f = 0; f < g.spectral_size(); ++f) CHECK(g.flatten(g.unflatten(f)) == f);
}

TEST_CASE("discrete Gram matrix is the identity") {
    for (int d = 1; d <= 3; ++d) {
        const Grid g = grid_d(d, 4);
        std::vector<PhysField> modes;
        for (std::size_t f = 0; f < g.spectral_size(); ++f) {
            SpectralField e(g);
            e(0, f) = 1.0;
            modes.push_back(to_physical(e));
        }
        double worst = 0.0;
        for (std::size_t a = 0; a < modes.size(); ++a)
            for (std::size_t b = 0; b < modes.size(); ++b)
                worst = std::max(worst, std::fabs(quadrature_inner(modes[a], modes[b]) - (a == b ? 1.0 : 0.0)));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("transform examples") {
    const Grid g = grid1(pi, 8);
    SpectralField u(g);
    u(0, 1) = 1.0;
    const PhysField p = to_physical(u);
    for (int i = 0; i < g.padded(0); ++i) {
        const double x = g.node(0, i);
        CHECK(x == doctest::Approx((i + 0.5) * pi / g.padded(0)));
        CHECK(p(0, i) == doctest::Approx(std::sqrt(2.0 / pi) * std::cos(x)).epsilon(1e-14));
        CHECK(p(1, i) == 0.0);
    }

    SpectralField c(g);
    c(1, 0) = 2.5 * std::sqrt(pi);
    const PhysField pc = to_physical(c);
    for (std::size_t i = 0; i < pc.size(); ++i) CHECK(pc(1, i) == doctest::Approx(2.5).epsilon(1e-14));

    for (int d = 1; d <= 3; ++d) {
        const Grid gd = grid_d(d, 5);
        const SpectralField r = random_field(gd, 7 + d);
        const SpectralField back = to_spectral(to_physical(r));
        SpectralField diff = back - r;
        CHECK(norm_l2(diff) <= 1e-12 * norm_l2(r));
    }

    const Grid other = grid1(pi, 6);
    PhysField wrong(other);
    CHECK(to_spectral(wrong).grid() == other);
}

TEST_CASE("projection") {
    const Grid g = grid1(1.0, 8);
    const SpectralField u = random_field(g, 3);
    const SpectralField p = project(u, {4, 1, 1});
    for (int k = 0; k < 8; ++k) {
        if (k < 4) CHECK(p(0, k) == u(0, k));
        else CHECK(p(0, k) == 0.0);
    }
    CHECK(project(p, {4, 1, 1}) == p);
    CHECK(norm_l2(p) <= norm_l2(u));
    CHECK_THROWS(project(u, {9, 1, 1}));

    // Self-adjoint.
    const SpectralField v = random_field(g, 4);
    CHECK(std::fabs(inner(project(u, {5, 1, 1}), v) - inner(u, project(v, {5, 1, 1}))) < 1e-12);

    // Commutes with the Laplacian.
    CHECK(norm_l2(apply_laplacian(project(u, {5, 1, 1})) - project(apply_laplacian(u), {5, 1, 1})) == 0.0);
}

TEST_CASE("laplacian") {
    const Grid g = grid1(pi, 4);
    SpectralField u(g);
    u(0, 1) = 3.0;
    CHECK(apply_laplacian(u, 1)(0, 1) == doctest::Approx(-3.0));
    CHECK(apply_laplacian(u, 2)(0, 1) == doctest::Approx(3.0));
    SpectralField c(g);
    c(0, 0) = 1.0;
    c(2, 0) = -2.0;
    CHECK(norm_l2(apply_laplacian(c, 1)) == 0.0);
    CHECK(norm_l2(apply_laplacian(c, 2)) == 0.0);
}

TEST_CASE("spectral gradient") {
    const Grid g = grid1(pi, 6);
    SpectralField u(g);
    u(0, 1) = std::sqrt(pi / 2.0);  // u = cos x
    const auto grad = spectral_gradient(u);
    REQUIRE(grad.size() == 1);
    for (int i = 0; i < g.padded(0); ++i)
        CHECK(grad[0](0, i) == doctest::Approx(-std::sin(g.node(0, i))).epsilon(1e-13));

    SpectralField c(g);
    c(1, 0) = 4.0;
    const auto gc = spectral_gradient(c);
    for (double v : gc[0].component(1)) CHECK(v == 0.0);

    for (int d = 1; d <= 3; ++d) {
        const Grid gd = grid_d(d, 5);
        const SpectralField r = random_field(gd, 11 + d);
        const auto gr = spectral_gradient(r);
        double quad = 0.0;
        for (const auto& ga : gr) quad += quadrature_inner(ga, ga);
        double spectral = 0.0;
        const auto lam = gd.eigenvalues();
        for (int c2 = 0; c2 < 3; ++c2)
            for (std::size_t f = 0; f < r.size(); ++f) spectral += lam[f] * r(c2, f) * r(c2, f);
        CHECK(rel(quad, spectral) < 1e-10);
        CHECK(rel(grad_norm(r), std::sqrt(spectral)) < 1e-12);
    }
}

TEST_CASE("sobolev norms") {
    const Grid g = grid1(pi, 4);
    SpectralField u(g);
    u(0, 1) = 1.0;
    CHECK(sobolev_norm(u, 1.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(sobolev_norm(u, 1.0, true) == doctest::Approx(1.0));

    SpectralField c(g);
    const double a = 0.7;
    c(0, 0) = a * std::sqrt(pi);
    CHECK(sobolev_norm(c, 0.0) == doctest::Approx(a * std::sqrt(pi)));

    SpectralField h(g);
    const double sigma = 0.3;
    h(2, 1) = sigma;
    CHECK(sobolev_norm(h, 3.0) == doctest::Approx(2.0 * std::sqrt(2.0) * sigma).epsilon(1e-14));

    const SpectralField r = random_field(grid_d(2, 5), 5);
    CHECK(rel(sobolev_norm(r, 0.0), norm_l2(r)) < 1e-14);
    // Fast paths agree with the general power.
    for (double s : {1.0, 2.0, 3.0}) {
        const double general = sobolev_norm(r, std::nextafter(s, 4.0));
        CHECK(rel(sobolev_norm(r, s), general) < 1e-12);
    }
    CHECK(sobolev_norm(r, 1.5) > sobolev_norm(r, 1.0));
    CHECK_THROWS(sobolev_norm(r, -1.0));
}

TEST_CASE("lp norms") {
    const double L[] = {2.0, 3.0};
    const int N[] = {4, 3};
    const Grid g = Grid::make(2, L, N);
    SpectralField c(g);
    const double a = 1.3;
    c(0, 0) = a * std::sqrt(g.volume());
    CHECK(lp_norm(c, 4.0) == doctest::Approx(std::pow(a * a * a * a * 6.0, 0.25)).epsilon(1e-13));

    const SpectralField r = random_field(g, 9);
    CHECK(rel(lp_norm(r, 2.0), norm_l2(r)) < 1e-10);

    const Grid g1 = grid1(pi, 8);
    SpectralField u(g1);
    u(0, 1) = std::sqrt(pi / 2.0);
    // Midpoint nodes never hit x = 0, so the nodal max is cos(pi / (2P)).
    CHECK(lp_norm(u, kInfNorm) == doctest::Approx(std::cos(pi / (2.0 * g1.padded(0)))).epsilon(1e-14));
    CHECK(lp_norm(u, kInfNorm) > 0.99);
    CHECK_THROWS(lp_norm(u, 3.0));
}

TEST_CASE("dealiased triple products are exact") {
    // cos(a x) cos(b x) cos(c x) = 1/4 sum over sign choices of cos((a +- b +- c) x).
    const Grid g = grid1(pi, 6);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            for (int c = 0; c < 6; ++c) {
                PhysField p(g);
                for (int i = 0; i < g.padded(0); ++i) {
                    const double x = g.node(0, i);
                    p(0, i) = std::cos(a * x) * std::cos(b * x) * std::cos(c * x);
                }
                const SpectralField s = to_spectral(p);
                std::vector<double> expect(6, 0.0);
                for (int sb : {-1, 1})
                    for (int sc : {-1, 1}) {
                        const int k = std::abs(a + sb * b + sc * c);
                        if (k < 6) expect[k] += 0.25;
                    }
                for (int k = 0; k < 6; ++k) {
                    // Coefficient of cos(kx) against e_k.
                    const double scale = k == 0 ? std::sqrt(pi) : std::sqrt(pi / 2.0);
                    CHECK(std::fabs(s(0, k) - expect[k] * scale) < 1e-10);
                }
            }
}
