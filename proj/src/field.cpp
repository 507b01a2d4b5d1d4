#include "sllbar/field.hpp"

#include <cmath>

namespace sllbar {

SpectralField::SpectralField(Grid grid) : grid_(std::move(grid)) {
    for (auto& c : coeffs_) c.assign(grid_.spectral_size(), 0.0);
}

bool SpectralField::all_finite() const {
    for (const auto& c : coeffs_)
        for (double v : c)
            if (!std::isfinite(v)) return false;
    return true;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) { return axpy(1.0, other); }

SpectralField& SpectralField::operator-=(const SpectralField& other) { return axpy(-1.0, other); }

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coeffs_)
        for (double& v : c) v *= s;
    return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& other) {
    if (!(other.grid_ == grid_)) throw std::invalid_argument("SpectralField: grid mismatch");
    for (int c = 0; c < 3; ++c) {
        auto& a = coeffs_[c];
        const auto& b = other.coeffs_[c];
        for (std::size_t k = 0; k < a.size(); ++k) a[k] += s * b[k];
    }
    return *this;
}

PhysField::PhysField(Grid grid) : grid_(std::move(grid)) {
    for (auto& c : values_) c.assign(grid_.physical_size(), 0.0);
}

}  // namespace sllbar
