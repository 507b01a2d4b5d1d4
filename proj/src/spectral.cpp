#include "sllbar/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sllbar {

namespace {

// Applies the row-major matrix `m` (rows x cols) along `axis` of a row-major
// array with extents `shape`; shape[axis] must equal cols and becomes rows.
std::vector<double> apply_axis(const std::vector<double>& in, std::array<int, 3>& shape, int axis,
                               const std::vector<double>& m, int rows, int cols) {
    std::size_t outer = 1;
    std::size_t inner_n = 1;
    for (int i = 0; i < axis; ++i) outer *= static_cast<std::size_t>(shape[i]);
    for (int i = axis + 1; i < 3; ++i) inner_n *= static_cast<std::size_t>(shape[i]);

    std::vector<double> out(outer * rows * inner_n, 0.0);
    for (std::size_t o = 0; o < outer; ++o) {
        for (int r = 0; r < rows; ++r) {
            double* dst = out.data() + (o * rows + r) * inner_n;
            const double* mrow = m.data() + static_cast<std::size_t>(r) * cols;
            for (int c = 0; c < cols; ++c) {
                const double w = mrow[c];
                if (w == 0.0) continue;
                const double* src = in.data() + (o * cols + c) * inner_n;
                for (std::size_t i = 0; i < inner_n; ++i) dst[i] += w * src[i];
            }
        }
    }
    shape[axis] = rows;
    return out;
}

// Synthesis of one component; `deriv_axis` selects the axis that uses the
// derivative table (-1 for none).
std::vector<double> synthesize(const Grid& grid, const std::vector<double>& coeffs,
                               int deriv_axis) {
    std::array<int, 3> shape = grid.mode_shape();
    std::vector<double> data = coeffs;
    for (int a = 0; a < grid.dim(); ++a) {
        const auto& t = grid.tables(a);
        data = apply_axis(data, shape, a, a == deriv_axis ? t.dsynth : t.synth, t.nodes, t.modes);
    }
    return data;
}

std::vector<double> analyze(const Grid& grid, const std::vector<double>& values) {
    std::array<int, 3> shape = grid.node_shape();
    std::vector<double> data = values;
    for (int a = 0; a < grid.dim(); ++a) {
        const auto& t = grid.tables(a);
        data = apply_axis(data, shape, a, t.analysis, t.modes, t.nodes);
    }
    return data;
}

double nodal_weight(const Grid& grid) {
    double w = 1.0;
    for (int a = 0; a < grid.dim(); ++a) w *= grid.length(a) / grid.padded(a);
    return w;
}

}  // namespace

PhysField to_physical(const SpectralField& field) {
    PhysField out(field.grid());
    for (int c = 0; c < 3; ++c) out.component(c) = synthesize(field.grid(), field.component(c), -1);
    return out;
}

SpectralField to_spectral(const PhysField& field) {
    SpectralField out(field.grid());
    for (int c = 0; c < 3; ++c) out.component(c) = analyze(field.grid(), field.component(c));
    return out;
}

SpectralField project(const SpectralField& field, const std::array<int, 3>& cutoff) {
    const Grid& g = field.grid();
    for (int a = 0; a < g.dim(); ++a) {
        if (cutoff[a] > g.modes(a))
            throw std::invalid_argument("project: cutoff exceeds stored modes");
        if (cutoff[a] < 0) throw std::invalid_argument("project: negative cutoff");
    }
    SpectralField out = field;
    for (std::size_t f = 0; f < g.spectral_size(); ++f) {
        const MultiIndex k = g.unflatten(f);
        bool keep = true;
        for (int a = 0; a < g.dim(); ++a) keep = keep && k[a] < cutoff[a];
        if (!keep)
            for (int c = 0; c < 3; ++c) out(c, f) = 0.0;
    }
    return out;
}

SpectralField apply_laplacian(const SpectralField& field, int power) {
    if (power < 0) throw std::invalid_argument("apply_laplacian: negative power");
    const auto lam = field.grid().eigenvalues();
    SpectralField out = field;
    for (int c = 0; c < 3; ++c) {
        auto& v = out.component(c);
        for (std::size_t f = 0; f < v.size(); ++f) {
            double m = 1.0;
            for (int p = 0; p < power; ++p) m *= -lam[f];
            v[f] *= m;
        }
    }
    return out;
}

std::vector<PhysField> spectral_gradient(const SpectralField& field) {
    const Grid& g = field.grid();
    std::vector<PhysField> grads;
    grads.reserve(g.dim());
    for (int a = 0; a < g.dim(); ++a) {
        PhysField d(g);
        for (int c = 0; c < 3; ++c) d.component(c) = synthesize(g, field.component(c), a);
        grads.push_back(std::move(d));
    }
    return grads;
}

double sobolev_norm(const SpectralField& field, double s, bool seminorm) {
    if (!(s >= 0.0)) throw std::invalid_argument("sobolev_norm: s must be >= 0");
    const auto lam = field.grid().eigenvalues();
    double sum = 0.0;
    for (std::size_t f = 0; f < lam.size(); ++f) {
        const double base = seminorm ? lam[f] : 1.0 + lam[f];
        double w;
        if (s == 0.0)
            w = 1.0;
        else if (base == 0.0)
            w = 0.0;
        else if (s == 1.0)
            w = base;
        else if (s == 2.0)
            w = base * base;
        else if (s == 3.0)
            w = base * base * base;
        else
            w = std::pow(base, s);
        if (w == 0.0) continue;
        const double m2 = field(0, f) * field(0, f) + field(1, f) * field(1, f) +
                          field(2, f) * field(2, f);
        sum += w * m2;
    }
    return std::sqrt(sum);
}

double lp_norm(const SpectralField& field, double p) {
    const PhysField u = to_physical(field);
    const std::size_t n = u.size();
    if (p == kInfNorm) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::sqrt(dot(u.at(i), u.at(i))));
        return m;
    }
    if (p != 2.0 && p != 4.0) throw std::invalid_argument("lp_norm: p must be 2, 4 or inf");
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double m2 = dot(u.at(i), u.at(i));
        sum += p == 2.0 ? m2 : m2 * m2;
    }
    sum *= nodal_weight(field.grid());
    return p == 2.0 ? std::sqrt(sum) : std::sqrt(std::sqrt(sum));
}

double inner(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("inner: grid mismatch");
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto& x = a.component(c);
        const auto& y = b.component(c);
        for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    }
    return s;
}

double norm_l2(const SpectralField& field) { return std::sqrt(inner(field, field)); }

double grad_norm(const SpectralField& field) { return sobolev_norm(field, 1.0, true); }

double quadrature(const Grid& grid, const std::vector<double>& values) {
    if (values.size() != grid.physical_size()) throw std::invalid_argument("quadrature: size mismatch");
    double s = 0.0;
    for (double v : values) s += v;
    return s * nodal_weight(grid);
}

double quadrature_inner(const PhysField& a, const PhysField& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("quadrature_inner: grid mismatch");
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto& x = a.component(c);
        const auto& y = b.component(c);
        for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    }
    return s * nodal_weight(a.grid());
}

PhysField pointwise_cross(const PhysField& a, const PhysField& b) {
    PhysField out(a.grid());
    for (std::size_t p = 0; p < a.size(); ++p) out.set(p, cross(a.at(p), b.at(p)));
    return out;
}

PhysField pointwise_cubic(const PhysField& u) {
    PhysField out(u.grid());
    for (std::size_t p = 0; p < u.size(); ++p) {
        const Vec3 v = u.at(p);
        const double m2 = dot(v, v);
        out.set(p, {m2 * v[0], m2 * v[1], m2 * v[2]});
    }
    return out;
}

}  // namespace sllbar
