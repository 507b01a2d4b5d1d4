#pragma once

#include <string>
#include <vector>

#include "sllbar/field.hpp"

namespace sllbar {

/// a * prod_i cos(k_i pi x_i / L_i), i.e. an unnormalised cosine product.
struct ModeAmplitude {
    MultiIndex mode{0, 0, 0};
    Vec3 value{0.0, 0.0, 0.0};

    friend bool operator==(const ModeAmplitude&, const ModeAmplitude&) = default;
};

enum class InitialKind { constant, modes, snapshot };

/// u0 = constant + sum of mode amplitudes (kind constant/modes), or the
/// coefficients stored in a snapshot file. Modes beyond the grid are
/// dropped, which is the Galerkin projection Pi_n u0.
struct InitialData {
    InitialKind kind = InitialKind::constant;
    Vec3 constant{0.0, 0.0, 0.0};
    std::vector<ModeAmplitude> modes;
    std::string file;

    friend bool operator==(const InitialData&, const InitialData&) = default;
};

SpectralField build_initial(const InitialData& data, const Grid& grid);

}  // namespace sllbar
