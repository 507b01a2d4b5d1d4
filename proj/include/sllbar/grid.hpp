#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sllbar {

/// Raised for any invalid user-facing configuration (bad grid, bad
/// parameters, malformed descriptors). The CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using MultiIndex = std::array<int, 3>;

namespace detail {
struct AxisTables;
}

/// Rectangular box [0,L_0] x ... x [0,L_{d-1}] with a Neumann cosine basis
/// truncated to N_i modes per axis, and a zero-padded collocation grid of
/// ceil(pad_factor * N_i) midpoint nodes per axis for pseudo-spectral products.
///
/// Coefficient and node arrays are row-major over multi-indices with axis 0
/// slowest. Grid is an immutable value; copies share the precomputed tables.
class Grid {
public:
    static Grid make(int dim, std::span<const double> lengths, std::span<const int> modes,
                     double pad_factor = 2.0);

    /// Same box and pad factor with different per-axis mode counts.
    Grid with_modes(std::span<const int> modes) const;

    int dim() const { return dim_; }
    double length(int axis) const { return lengths_[axis]; }
    int modes(int axis) const { return modes_[axis]; }
    int padded(int axis) const { return padded_[axis]; }
    double pad_factor() const { return pad_factor_; }
    double volume() const;

    std::size_t spectral_size() const { return spectral_size_; }
    std::size_t physical_size() const { return physical_size_; }

    std::array<int, 3> mode_shape() const { return modes_; }
    std::array<int, 3> node_shape() const { return padded_; }

    MultiIndex unflatten(std::size_t flat) const;
    std::size_t flatten(const MultiIndex& k) const;
    bool contains(const MultiIndex& k) const;

    /// lambda_k = sum_i (pi k_i / L_i)^2, in layout order.
    std::span<const double> eigenvalues() const;

    /// Coordinate of node `p` along `axis`.
    double node(int axis, int p) const;

    const detail::AxisTables& tables(int axis) const { return *tables_[axis]; }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.dim_ == b.dim_ && a.lengths_ == b.lengths_ && a.modes_ == b.modes_ &&
               a.pad_factor_ == b.pad_factor_;
    }

private:
    Grid() = default;

    int dim_ = 1;
    std::array<double, 3> lengths_{1.0, 1.0, 1.0};
    std::array<int, 3> modes_{1, 1, 1};
    std::array<int, 3> padded_{1, 1, 1};
    double pad_factor_ = 2.0;
    std::size_t spectral_size_ = 1;
    std::size_t physical_size_ = 1;
    std::array<std::shared_ptr<const detail::AxisTables>, 3> tables_;
    std::shared_ptr<const std::vector<double>> eigenvalues_;
};

namespace detail {

/// Per-axis synthesis/analysis matrices for the orthonormal cosine basis
/// e_0 = 1/sqrt(L), e_k = sqrt(2/L) cos(k pi x / L), sampled at the midpoint
/// nodes x_p = (p + 1/2) L / P. Matrices are stored row-major.
struct AxisTables {
    int modes = 1;
    int nodes = 1;
    double length = 1.0;
    std::vector<double> synth;     // nodes x modes: e_k(x_p)
    std::vector<double> dsynth;    // nodes x modes: e_k'(x_p)
    std::vector<double> analysis;  // modes x nodes: (L/P) e_k(x_p)
    std::vector<double> wavenumber;  // k pi / L
};

}  // namespace detail

/// Eigenpairs of the Neumann Laplacian restricted to the retained modes.
struct Basis {
    std::vector<double> eigenvalues;  // layout order
    std::vector<double> normalization;  // L2 normalisation constant of each mode
    std::vector<std::size_t> sorted;  // flat indices by ascending eigenvalue (stable)
};

Basis neumann_eigenpairs(const Grid& grid);

}  // namespace sllbar
