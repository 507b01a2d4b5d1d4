#include "sllbar/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sllbar/rng.hpp"
#include "sllbar/spectral.hpp"

namespace sllbar {

double identity_cross(const SpectralField& u) {
    const double scale = sobolev_norm(u, 1.0) * sobolev_norm(u, 2.0);
    if (scale == 0.0) return 0.0;
    return inner(precession(u), u) / scale;
}

GradientProducts gradient_products(const SpectralField& u) {
    const Grid& g = u.grid();
    const PhysField up = to_physical(u);
    const std::vector<PhysField> grads = spectral_gradient(u);
    std::vector<double> dotsq(up.size(), 0.0);
    std::vector<double> magsq(up.size(), 0.0);
    for (std::size_t p = 0; p < up.size(); ++p) {
        const Vec3 v = up.at(p);
        double gsum = 0.0;
        for (const auto& d : grads) {
            const Vec3 dv = d.at(p);
            const double s = dot(v, dv);
            dotsq[p] += s * s;
            gsum += dot(dv, dv);
        }
        magsq[p] = dot(v, v) * gsum;
    }
    return {quadrature(g, dotsq), quadrature(g, magsq)};
}

IdentityCheck identity_cubic_gradient(const SpectralField& u) {
    const SpectralField cubic = cubic_field(u);
    const auto lam = u.grid().eigenvalues();
    IdentityCheck r;
    for (int c = 0; c < 3; ++c)
        for (std::size_t f = 0; f < lam.size(); ++f) r.lhs += lam[f] * cubic(c, f) * u(c, f);
    const GradientProducts gp = gradient_products(u);
    r.rhs = 2.0 * gp.u_dot_grad + gp.mag_grad;
    r.residual = (r.lhs - r.rhs) / std::max(1.0, std::fabs(r.lhs));
    return r;
}

IdentityCheck identity_cubic_laplacian(const SpectralField& u) {
    IdentityCheck r;
    r.lhs = inner(apply_laplacian(cubic_field(u)), u);
    const GradientProducts gp = gradient_products(u);
    r.rhs = -(2.0 * gp.u_dot_grad + gp.mag_grad);
    r.residual = (r.lhs - r.rhs) / std::max(1.0, std::fabs(r.lhs));
    return r;
}

ResidualSeries energy_balance_l2(const std::vector<SolverState>& states, const ModelParams& params,
                                 double dt, const TruncationConfig& trunc) {
    if (!(dt > 0.0)) throw std::invalid_argument("energy_balance_l2: dt must be > 0");
    ResidualSeries out;
    out.normalization = "none";
    for (std::size_t m = 0; m + 1 < states.size(); ++m) {
        const double gap = states[m + 1].t - states[m].t;
        if (std::fabs(gap - dt) > 1e-9 * std::max(1.0, dt))
            throw std::invalid_argument("energy_balance_l2: states are not equally spaced by dt");
        const SpectralField& u = states[m].u;
        const double e0 = 0.5 * inner(u, u);
        const double e1 = 0.5 * inner(states[m + 1].u, states[m + 1].u);
        const double g1 = sobolev_norm(u, 1.0, true);
        const double g2 = sobolev_norm(u, 2.0, true);
        const double l4 = lp_norm(u, 4.0);
        const GradientProducts gp = gradient_products(u);
        const double theta = trunc.factor(g1);
        const double value = (e1 - e0) / dt + params.beta1 * g1 * g1 + params.beta2 * g2 * g2 +
                             params.beta3 * l4 * l4 * l4 * l4 - params.beta3 * 2.0 * e0 +
                             params.beta5 * theta * (2.0 * gp.u_dot_grad + gp.mag_grad);
        out.times.push_back(states[m].t);
        out.values.push_back(value);
    }
    return out;
}

namespace {

// Nodal gradient of the scalar basis function e_k (all three components set).
std::vector<PhysField> basis_gradient(const Grid& g, std::size_t mode) {
    SpectralField phi(g);
    for (int c = 0; c < 3; ++c) phi(c, mode) = 1.0;
    return spectral_gradient(phi);
}

// Per-component quadrature sum_i (a_i, b_i) where a_i, b_i are per-axis fields.
Vec3 paired(const Grid& g, const std::vector<PhysField>& a, const std::vector<PhysField>& b) {
    Vec3 out{0.0, 0.0, 0.0};
    for (int c = 0; c < 3; ++c) {
        std::vector<double> prod(a[0].size(), 0.0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto& x = a[i].component(c);
            const auto& y = b[i].component(c);
            for (std::size_t p = 0; p < prod.size(); ++p) prod[p] += x[p] * y[p];
        }
        out[c] = quadrature(g, prod);
    }
    return out;
}

}  // namespace

double weak_form_residual(const TrajectoryRecord& traj, std::size_t mode, const ModelParams& params,
                          const NoiseModel& noise, const TruncationConfig& trunc, WeakForm form) {
    const std::size_t S = traj.snapshots.size();
    if (S == 0 || S != traj.times.size())
        throw std::invalid_argument("weak_form_residual: trajectory has no snapshots");
    if (!(traj.dt > 0.0)) throw std::invalid_argument("weak_form_residual: missing increment keys");
    for (std::size_t m = 0; m + 1 < S; ++m)
        if (std::fabs(traj.times[m + 1] - traj.times[m] - traj.dt) > 1e-9 * std::max(1.0, traj.dt))
            throw std::invalid_argument("weak_form_residual: snapshots must be taken every step");
    const Grid& g = traj.snapshots.front().grid();
    if (mode >= g.spectral_size()) throw std::invalid_argument("weak_form_residual: bad mode");
    if (!(noise.grid() == g)) throw std::invalid_argument("weak_form_residual: noise grid mismatch");

    const double lam = g.eigenvalues()[mode];
    const double dt = traj.dt;
    const IncrementSource increments(traj.seed, traj.path, noise.size(), dt, traj.noise_substeps);
    const std::vector<PhysField> dphi =
        form == WeakForm::weak ? basis_gradient(g, mode) : std::vector<PhysField>{};

    Vec3 integral{0.0, 0.0, 0.0};
    double worst = 0.0;
    double sup_l2 = 0.0;
    std::vector<double> dw;
    for (std::size_t m = 0; m < S; ++m) sup_l2 = std::max(sup_l2, norm_l2(traj.snapshots[m]));

    for (std::size_t m = 0; m + 1 < S; ++m) {
        const SpectralField& u = traj.snapshots[m];
        const PhysField up = to_physical(u);
        const SpectralField cubic = to_spectral(pointwise_cubic(up));
        const double theta = trunc.factor(grad_norm(u));
        increments.fill(static_cast<std::uint64_t>(m), dw);
        const SpectralField correction = ito_correction(u, noise);
        const SpectralField stochastic =
            noise.size() > 0 ? diffusion_sum(up, noise, dw) : SpectralField(g);

        Vec3 rate{0.0, 0.0, 0.0};
        if (form == WeakForm::weak) {
            const std::vector<PhysField> du = spectral_gradient(u);
            const std::vector<PhysField> dlap = spectral_gradient(apply_laplacian(u));
            std::vector<PhysField> ucross, dcubic;
            for (const auto& d : du) {
                ucross.push_back(pointwise_cross(up, d));
                PhysField dc(g);
                for (std::size_t p = 0; p < up.size(); ++p) {
                    const Vec3 v = up.at(p);
                    const Vec3 dv = d.at(p);
                    const double s = 2.0 * dot(v, dv);
                    const double m2 = dot(v, v);
                    dc.set(p, {s * v[0] + m2 * dv[0], s * v[1] + m2 * dv[1], s * v[2] + m2 * dv[2]});
                }
                dcubic.push_back(std::move(dc));
            }
            const Vec3 grad_grad = paired(g, du, dphi);
            const Vec3 grad_lap = paired(g, dlap, dphi);
            const Vec3 cross_term = paired(g, ucross, dphi);
            const Vec3 cubic_term = paired(g, dcubic, dphi);
            for (int c = 0; c < 3; ++c)
                rate[c] = -params.beta1 * grad_grad[c] + params.beta2 * grad_lap[c] +
                          params.beta4 * cross_term[c] - params.beta5 * theta * cubic_term[c];
        } else {
            const SpectralField prec = precession(u);
            for (int c = 0; c < 3; ++c)
                rate[c] = -params.beta1 * lam * u(c, mode) - params.beta2 * lam * lam * u(c, mode) -
                          params.beta4 * prec(c, mode) - params.beta5 * theta * lam * cubic(c, mode);
        }
        for (int c = 0; c < 3; ++c) {
            rate[c] += params.beta3 * (u(c, mode) - cubic(c, mode)) + correction(c, mode);
            integral[c] += dt * rate[c] + stochastic(c, mode);
            const double lhs = traj.snapshots[m + 1](c, mode) - traj.snapshots[0](c, mode);
            worst = std::max(worst, std::fabs(lhs - integral[c]));
        }
    }
    return sup_l2 > 0.0 ? worst / sup_l2 : worst;
}

std::optional<double> stopping_time(const TrajectoryRecord& traj, double K) {
    for (std::size_t i = 0; i < traj.h1.size(); ++i)
        if (traj.h1[i] > K) return traj.times[i];
    return std::nullopt;
}

SpectralField embed(const SpectralField& coarse, const Grid& fine) {
    const Grid& g = coarse.grid();
    if (g.dim() != fine.dim()) throw std::invalid_argument("embed: dimension mismatch");
    SpectralField out(fine);
    for (std::size_t f = 0; f < g.spectral_size(); ++f) {
        const MultiIndex k = g.unflatten(f);
        if (!fine.contains(k)) throw std::invalid_argument("embed: target grid is coarser");
        const std::size_t ff = fine.flatten(k);
        for (int c = 0; c < 3; ++c) out(c, ff) = coarse(c, f);
    }
    return out;
}

double snapshot_gap(const TrajectoryRecord& coarse, const TrajectoryRecord& fine) {
    if (coarse.snapshots.size() != coarse.times.size() || fine.snapshots.size() != fine.times.size())
        throw std::invalid_argument("snapshot_gap: snapshots required");
    double gap = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < coarse.times.size(); ++i) {
        while (j < fine.times.size() && fine.times[j] < coarse.times[i] - 1e-12) ++j;
        if (j == fine.times.size()) break;
        if (std::fabs(fine.times[j] - coarse.times[i]) > 1e-12) continue;
        const Grid& fg = fine.snapshots[j].grid();
        SpectralField diff = fine.snapshots[j];
        diff -= embed(coarse.snapshots[i], fg);
        gap = std::max(gap, norm_l2(diff));
    }
    return gap;
}

double refinement_gap(const InitialData& u0, const ModelParams& params,
                      const NoiseDescriptor& noise, SolverConfig config, const Grid& box,
                      int n_coarse, int n_fine) {
    if (n_coarse < 1 || n_coarse >= n_fine)
        throw ConfigError("refinement_gap: need 1 <= n_coarse < n_fine");
    auto grid_for = [&](int n) {
        std::array<int, 3> m{1, 1, 1};
        for (int a = 0; a < box.dim(); ++a) m[a] = n;
        return box.with_modes(std::span<const int>(m.data(), box.dim()));
    };
    const Grid coarse = grid_for(n_coarse);
    const Grid fine = grid_for(n_fine);
    const NoiseModel noise_c = build_noise_modes(noise, coarse);
    const NoiseModel noise_f = build_noise_modes(noise, fine);
    config.keep_snapshots = true;
    const TrajectoryRecord rc = run_trajectory(build_initial(u0, coarse), params, noise_c, config);
    const TrajectoryRecord rf = run_trajectory(build_initial(u0, fine), params, noise_f, config);
    return snapshot_gap(rc, rf);
}

}  // namespace sllbar
