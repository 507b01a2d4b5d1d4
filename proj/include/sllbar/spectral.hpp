#pragma once

#include <array>
#include <limits>
#include <vector>

#include "sllbar/field.hpp"

namespace sllbar {

/// Synthesis on the padded collocation grid (zero-padding of the retained
/// coefficients).
PhysField to_physical(const SpectralField& field);

/// Analysis on the padded grid followed by truncation to the retained modes,
/// i.e. the Galerkin projection of the sampled field. Exact for
/// trigonometric polynomials of degree < 2 * padded nodes per axis.
SpectralField to_spectral(const PhysField& field);

/// Zeroes every coefficient with some k_i >= cutoff_i.
SpectralField project(const SpectralField& field, const std::array<int, 3>& cutoff);

/// Multiplies mode k by (-lambda_k)^power.
SpectralField apply_laplacian(const SpectralField& field, int power = 1);

/// Exact derivative along each axis, evaluated on the padded grid.
std::vector<PhysField> spectral_gradient(const SpectralField& field);

/// Full norm (sum (1 + lambda)^s |c|^2)^(1/2) or, with `seminorm`, the
/// homogeneous (sum lambda^s |c|^2)^(1/2).
double sobolev_norm(const SpectralField& field, double s, bool seminorm = false);

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// L^p norm by padded-grid quadrature; p in {2, 4, inf}. The sup norm is the
/// maximum nodal Euclidean magnitude.
double lp_norm(const SpectralField& field, double p);

/// (a, b)_{L^2} as a coefficient sum.
double inner(const SpectralField& a, const SpectralField& b);
double norm_l2(const SpectralField& field);
/// ||grad u||_{L^2} = H^1 seminorm.
double grad_norm(const SpectralField& field);

/// (a, b)_{L^2} by midpoint quadrature on the padded grid.
double quadrature_inner(const PhysField& a, const PhysField& b);
/// Integral of a scalar nodal array.
double quadrature(const Grid& grid, const std::vector<double>& values);

/// Pointwise operations on physical fields.
PhysField pointwise_cross(const PhysField& a, const PhysField& b);
/// |u|^2 u at every node.
PhysField pointwise_cubic(const PhysField& u);

}  // namespace sllbar
