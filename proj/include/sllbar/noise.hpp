#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sllbar/field.hpp"

namespace sllbar {

/// h_j = sigma * e_k * direction, with e_k the orthonormal eigenfunction of
/// mode k and direction normalised to a unit vector.
struct EigenmodeNoise {
    MultiIndex mode{0, 0, 0};
    double sigma = 0.0;
    Vec3 direction{0.0, 0.0, 1.0};

    friend bool operator==(const EigenmodeNoise&, const EigenmodeNoise&) = default;
};

/// One coefficient of an explicitly listed h_j.
struct NoiseCoefficient {
    int j = 0;
    MultiIndex mode{0, 0, 0};
    Vec3 value{0.0, 0.0, 0.0};

    friend bool operator==(const NoiseCoefficient&, const NoiseCoefficient&) = default;
};

enum class NoiseFamily { none, eigenmodes, explicit_coefficients };

struct NoiseDescriptor {
    NoiseFamily family = NoiseFamily::none;
    std::vector<EigenmodeNoise> modes;           // family == eigenmodes
    std::vector<NoiseCoefficient> coefficients;  // family == explicit_coefficients
    /// A warning is reported when C_h exceeds this bound.
    std::optional<double> c_h_bound;
    /// Analytic estimate of the discarded tail sum over j > J; echoed only.
    std::optional<double> tail_estimate;

    int count() const;

    friend bool operator==(const NoiseDescriptor&, const NoiseDescriptor&) = default;
};

/// Immutable family {h_j} on one grid, with Laplace(h_j), the nodal values of
/// h_j and the additive parts Pi(h_j - Laplace(h_j)) precomputed.
class NoiseModel {
public:
    explicit NoiseModel(Grid grid) : grid_(std::move(grid)) {}
    NoiseModel(Grid grid, std::vector<SpectralField> h, std::optional<double> c_h_bound = {},
               std::optional<double> tail_estimate = {});

    const Grid& grid() const { return grid_; }
    int size() const { return static_cast<int>(h_.size()); }

    const SpectralField& h(int j) const { return h_.at(j); }
    const SpectralField& lap_h(int j) const { return lap_h_.at(j); }
    const PhysField& h_physical(int j) const { return h_phys_.at(j); }
    /// Pi(h_j - Laplace(h_j))
    const SpectralField& additive(int j) const { return additive_.at(j); }

    /// sum_j ||h_j||_{H^3}^2, computed at construction.
    double c_h() const { return c_h_; }
    std::optional<double> c_h_bound() const { return c_h_bound_; }
    std::optional<double> tail_estimate() const { return tail_estimate_; }

private:
    Grid grid_;
    std::vector<SpectralField> h_;
    std::vector<SpectralField> lap_h_;
    std::vector<PhysField> h_phys_;
    std::vector<SpectralField> additive_;
    double c_h_ = 0.0;
    std::optional<double> c_h_bound_;
    std::optional<double> tail_estimate_;
};

/// Throws ConfigError when the descriptor references modes outside `grid`.
NoiseModel build_noise_modes(const NoiseDescriptor& descriptor, const Grid& grid);

struct NoiseCondition {
    double c_h = 0.0;
    std::optional<double> tail_estimate;
    std::optional<std::string> warning;
};

/// Recomputes sum_j ||h_j||_{H^3}^2 and compares it to the configured bound.
NoiseCondition check_noise_condition(const NoiseModel& noise);

/// Spectral form of a nodal field together with the relative L^2 mass lost by
/// projecting onto the retained modes.
struct ProjectedField {
    SpectralField field;
    double relative_loss = 0.0;
};
ProjectedField from_physical(const PhysField& values);

/// G_j(u) = Pi(-u x h_j + h_j - Laplace(h_j))
SpectralField diffusion_apply(const SpectralField& u, const NoiseModel& noise, int j);

/// -1/2 sum_j Pi(G_j(u) x h_j)
SpectralField ito_correction(const SpectralField& u, const NoiseModel& noise);
/// Same, reusing nodal values of u.
SpectralField ito_correction(const SpectralField& u, const PhysField& u_nodal,
                             const NoiseModel& noise);

/// sum_j G_j(u) dW_j, evaluated with a single transform.
SpectralField diffusion_sum(const PhysField& u_nodal, const NoiseModel& noise,
                            std::span<const double> dw);

}  // namespace sllbar
