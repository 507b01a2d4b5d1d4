#include "sllbar/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace sllbar {

namespace {

std::shared_ptr<const detail::AxisTables> build_tables(double length, int modes, int nodes) {
    auto t = std::make_shared<detail::AxisTables>();
    t->modes = modes;
    t->nodes = nodes;
    t->length = length;
    t->synth.assign(static_cast<std::size_t>(nodes) * modes, 0.0);
    t->dsynth.assign(static_cast<std::size_t>(nodes) * modes, 0.0);
    t->analysis.assign(static_cast<std::size_t>(modes) * nodes, 0.0);
    t->wavenumber.resize(modes);

    const double pi = std::numbers::pi;
    const double weight = length / nodes;
    const double c0 = 1.0 / std::sqrt(length);
    const double ck = std::sqrt(2.0 / length);
    for (int k = 0; k < modes; ++k) t->wavenumber[k] = k * pi / length;

    for (int p = 0; p < nodes; ++p) {
        // Phase k*pi*(p+1/2)/P reduced modulo 2*pi in integer arithmetic so
        // that large mode numbers keep full accuracy.
        for (int k = 0; k < modes; ++k) {
            const long long num = static_cast<long long>(k) * (2 * p + 1) % (4LL * nodes);
            const double phase = pi * static_cast<double>(num) / (2.0 * nodes);
            const double norm = k == 0 ? c0 : ck;
            const double e = norm * std::cos(phase);
            t->synth[static_cast<std::size_t>(p) * modes + k] = e;
            t->dsynth[static_cast<std::size_t>(p) * modes + k] =
                -norm * t->wavenumber[k] * std::sin(phase);
            t->analysis[static_cast<std::size_t>(k) * nodes + p] = weight * e;
        }
    }
    return t;
}

}  // namespace

Grid Grid::make(int dim, std::span<const double> lengths, std::span<const int> modes,
                double pad_factor) {
    if (dim < 1 || dim > 3) throw ConfigError("grid.dim must be 1, 2 or 3");
    if (lengths.size() < static_cast<std::size_t>(dim) ||
        modes.size() < static_cast<std::size_t>(dim))
        throw ConfigError("grid: need one length and one mode count per axis");
    if (!(pad_factor >= 1.0) || !std::isfinite(pad_factor))
        throw ConfigError("grid.pad_factor must be >= 1");

    Grid g;
    g.dim_ = dim;
    g.pad_factor_ = pad_factor;
    for (int i = 0; i < dim; ++i) {
        if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i]))
            throw ConfigError("grid.lengths must be positive");
        if (modes[i] < 1) throw ConfigError("grid.modes must be >= 1");
        g.lengths_[i] = lengths[i];
        g.modes_[i] = modes[i];
        g.padded_[i] = static_cast<int>(std::ceil(pad_factor * modes[i] - 1e-9));
        g.padded_[i] = std::max(g.padded_[i], modes[i]);
    }
    g.spectral_size_ = 1;
    g.physical_size_ = 1;
    for (int i = 0; i < 3; ++i) {
        g.spectral_size_ *= static_cast<std::size_t>(g.modes_[i]);
        g.physical_size_ *= static_cast<std::size_t>(g.padded_[i]);
        if (i < dim) g.tables_[i] = build_tables(g.lengths_[i], g.modes_[i], g.padded_[i]);
    }

    auto eig = std::make_shared<std::vector<double>>(g.spectral_size_);
    for (std::size_t f = 0; f < g.spectral_size_; ++f) {
        const MultiIndex k = g.unflatten(f);
        double lam = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double w = g.tables_[i]->wavenumber[k[i]];
            lam += w * w;
        }
        (*eig)[f] = lam;
    }
    g.eigenvalues_ = std::move(eig);
    return g;
}

Grid Grid::with_modes(std::span<const int> modes) const {
    return make(dim_, std::span<const double>(lengths_.data(), dim_), modes, pad_factor_);
}

double Grid::volume() const {
    double v = 1.0;
    for (int i = 0; i < dim_; ++i) v *= lengths_[i];
    return v;
}

MultiIndex Grid::unflatten(std::size_t flat) const {
    MultiIndex k{0, 0, 0};
    for (int i = 2; i >= 0; --i) {
        k[i] = static_cast<int>(flat % static_cast<std::size_t>(modes_[i]));
        flat /= static_cast<std::size_t>(modes_[i]);
    }
    return k;
}

std::size_t Grid::flatten(const MultiIndex& k) const {
    std::size_t f = 0;
    for (int i = 0; i < 3; ++i) f = f * static_cast<std::size_t>(modes_[i]) + k[i];
    return f;
}

bool Grid::contains(const MultiIndex& k) const {
    for (int i = 0; i < 3; ++i)
        if (k[i] < 0 || k[i] >= modes_[i]) return false;
    return true;
}

std::span<const double> Grid::eigenvalues() const { return *eigenvalues_; }

double Grid::node(int axis, int p) const {
    return (p + 0.5) * lengths_[axis] / padded_[axis];
}

Basis neumann_eigenpairs(const Grid& grid) {
    Basis b;
    const auto eig = grid.eigenvalues();
    b.eigenvalues.assign(eig.begin(), eig.end());
    b.normalization.resize(eig.size());
    for (std::size_t f = 0; f < eig.size(); ++f) {
        const MultiIndex k = grid.unflatten(f);
        double c = 1.0;
        for (int i = 0; i < grid.dim(); ++i)
            c *= k[i] == 0 ? 1.0 / std::sqrt(grid.length(i)) : std::sqrt(2.0 / grid.length(i));
        b.normalization[f] = c;
    }
    b.sorted.resize(eig.size());
    std::iota(b.sorted.begin(), b.sorted.end(), std::size_t{0});
    std::stable_sort(b.sorted.begin(), b.sorted.end(),
                     [&](std::size_t a, std::size_t c) { return eig[a] < eig[c]; });
    return b;
}

}  // namespace sllbar
