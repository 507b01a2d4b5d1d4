#include "sllbar/noise.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sllbar/spectral.hpp"

namespace sllbar {

namespace {

std::string mode_string(const MultiIndex& k, int dim) {
    std::ostringstream os;
    for (int i = 0; i < dim; ++i) os << (i ? ":" : "") << k[i];
    return os.str();
}

}  // namespace

int NoiseDescriptor::count() const {
    switch (family) {
        case NoiseFamily::none:
            return 0;
        case NoiseFamily::eigenmodes:
            return static_cast<int>(modes.size());
        case NoiseFamily::explicit_coefficients: {
            int n = 0;
            for (const auto& c : coefficients) n = std::max(n, c.j + 1);
            return n;
        }
    }
    return 0;
}

NoiseModel::NoiseModel(Grid grid, std::vector<SpectralField> h, std::optional<double> c_h_bound,
                       std::optional<double> tail_estimate)
    : grid_(std::move(grid)), h_(std::move(h)), c_h_bound_(c_h_bound),
      tail_estimate_(tail_estimate) {
    for (const auto& hj : h_) {
        if (!(hj.grid() == grid_)) throw std::invalid_argument("NoiseModel: grid mismatch");
        lap_h_.push_back(apply_laplacian(hj));
        h_phys_.push_back(to_physical(hj));
        SpectralField b = hj;
        b -= lap_h_.back();
        additive_.push_back(std::move(b));
        const double n3 = sobolev_norm(hj, 3.0);
        c_h_ += n3 * n3;
    }
}

NoiseModel build_noise_modes(const NoiseDescriptor& d, const Grid& grid) {
    std::vector<SpectralField> h;
    switch (d.family) {
        case NoiseFamily::none:
            break;
        case NoiseFamily::eigenmodes:
            for (std::size_t j = 0; j < d.modes.size(); ++j) {
                const auto& m = d.modes[j];
                if (!grid.contains(m.mode))
                    throw ConfigError("noise.modes[" + std::to_string(j) + "] = " +
                                      mode_string(m.mode, grid.dim()) + " lies outside the grid");
                if (!std::isfinite(m.sigma)) throw ConfigError("noise.sigmas must be finite");
                const double len = std::sqrt(dot(m.direction, m.direction));
                if (!(len > 0.0) || !std::isfinite(len))
                    throw ConfigError("noise.directions[" + std::to_string(j) + "] must be nonzero");
                SpectralField hj(grid);
                const std::size_t f = grid.flatten(m.mode);
                for (int c = 0; c < 3; ++c) hj(c, f) = m.sigma * m.direction[c] / len;
                h.push_back(std::move(hj));
            }
            break;
        case NoiseFamily::explicit_coefficients: {
            const int n = d.count();
            h.assign(n, SpectralField(grid));
            for (const auto& c : d.coefficients) {
                if (c.j < 0) throw ConfigError("noise.entries: negative index j");
                if (!grid.contains(c.mode))
                    throw ConfigError("noise.entries: mode " + mode_string(c.mode, grid.dim()) +
                                      " lies outside the grid");
                const std::size_t f = grid.flatten(c.mode);
                for (int k = 0; k < 3; ++k) h[c.j](k, f) += c.value[k];
            }
            break;
        }
    }
    return NoiseModel(grid, std::move(h), d.c_h_bound, d.tail_estimate);
}

NoiseCondition check_noise_condition(const NoiseModel& noise) {
    NoiseCondition out;
    for (int j = 0; j < noise.size(); ++j) {
        const double n3 = sobolev_norm(noise.h(j), 3.0);
        out.c_h += n3 * n3;
    }
    out.tail_estimate = noise.tail_estimate();
    if (noise.c_h_bound() && out.c_h + out.tail_estimate.value_or(0.0) > *noise.c_h_bound()) {
        std::ostringstream os;
        os << "C_h = " << out.c_h;
        if (out.tail_estimate) os << " (+ tail " << *out.tail_estimate << ")";
        os << " exceeds the configured bound " << *noise.c_h_bound();
        out.warning = os.str();
    }
    return out;
}

ProjectedField from_physical(const PhysField& values) {
    ProjectedField out{to_spectral(values), 0.0};
    const double total = quadrature_inner(values, values);
    const double kept = inner(out.field, out.field);
    out.relative_loss = total > 0.0 ? std::sqrt(std::max(0.0, total - kept) / total) : 0.0;
    return out;
}

SpectralField diffusion_apply(const SpectralField& u, const NoiseModel& noise, int j) {
    if (j < 0 || j >= noise.size()) throw std::out_of_range("diffusion_apply: j out of range");
    SpectralField g = to_spectral(pointwise_cross(noise.h_physical(j), to_physical(u)));
    g += noise.additive(j);
    return g;
}

SpectralField ito_correction(const SpectralField& u, const PhysField& u_nodal,
                             const NoiseModel& noise) {
    const Grid& grid = u.grid();
    PhysField acc(grid);
    for (int j = 0; j < noise.size(); ++j) {
        const PhysField& hj = noise.h_physical(j);
        SpectralField g = to_spectral(pointwise_cross(hj, u_nodal));
        g += noise.additive(j);
        const PhysField gp = to_physical(g);
        for (std::size_t p = 0; p < acc.size(); ++p) {
            const Vec3 v = cross(gp.at(p), hj.at(p));
            for (int c = 0; c < 3; ++c) acc(c, p) += v[c];
        }
    }
    SpectralField out = to_spectral(acc);
    out *= -0.5;
    return out;
}

SpectralField ito_correction(const SpectralField& u, const NoiseModel& noise) {
    if (noise.size() == 0) return SpectralField(u.grid());
    return ito_correction(u, to_physical(u), noise);
}

SpectralField diffusion_sum(const PhysField& u_nodal, const NoiseModel& noise,
                            std::span<const double> dw) {
    const Grid& grid = u_nodal.grid();
    if (dw.size() != static_cast<std::size_t>(noise.size()))
        throw std::invalid_argument("diffusion_sum: increment count != J");
    SpectralField out(grid);
    if (noise.size() == 0) return out;
    // -u x sum_j h_j dW_j = sum_j dW_j (h_j x u)
    PhysField forcing(grid);
    for (int j = 0; j < noise.size(); ++j) {
        const PhysField& hj = noise.h_physical(j);
        for (int c = 0; c < 3; ++c) {
            auto& dst = forcing.component(c);
            const auto& src = hj.component(c);
            for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += dw[j] * src[p];
        }
    }
    out = to_spectral(pointwise_cross(forcing, u_nodal));
    for (int j = 0; j < noise.size(); ++j) out.axpy(dw[j], noise.additive(j));
    return out;
}

}  // namespace sllbar
