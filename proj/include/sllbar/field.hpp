#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "sllbar/grid.hpp"

namespace sllbar {

/// R^3-valued field stored as cosine-basis coefficients, one array per
/// vector component. Any such field satisfies du/dn = dLaplace(u)/dn = 0 on
/// the box boundary.
class SpectralField {
public:
    explicit SpectralField(Grid grid);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return grid_.spectral_size(); }

    std::vector<double>& component(int c) { return coeffs_[c]; }
    const std::vector<double>& component(int c) const { return coeffs_[c]; }

    double& operator()(int c, std::size_t k) { return coeffs_[c][k]; }
    double operator()(int c, std::size_t k) const { return coeffs_[c][k]; }

    bool all_finite() const;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);
    /// this += s * other
    SpectralField& axpy(double s, const SpectralField& other);

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

    friend bool operator==(const SpectralField& a, const SpectralField& b) {
        return a.grid_ == b.grid_ && a.coeffs_ == b.coeffs_;
    }

private:
    Grid grid_;
    std::array<std::vector<double>, 3> coeffs_;
};

/// R^3-valued field sampled on the padded midpoint collocation grid.
class PhysField {
public:
    explicit PhysField(Grid grid);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return grid_.physical_size(); }

    std::vector<double>& component(int c) { return values_[c]; }
    const std::vector<double>& component(int c) const { return values_[c]; }

    double& operator()(int c, std::size_t p) { return values_[c][p]; }
    double operator()(int c, std::size_t p) const { return values_[c][p]; }

    std::array<double, 3> at(std::size_t p) const {
        return {values_[0][p], values_[1][p], values_[2][p]};
    }
    void set(std::size_t p, const std::array<double, 3>& v) {
        values_[0][p] = v[0];
        values_[1][p] = v[1];
        values_[2][p] = v[2];
    }

private:
    Grid grid_;
    std::array<std::vector<double>, 3> values_;
};

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace sllbar
