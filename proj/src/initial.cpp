#include "sllbar/initial.hpp"

#include <cmath>

#include "sllbar/io.hpp"

namespace sllbar {

SpectralField build_initial(const InitialData& data, const Grid& grid) {
    SpectralField u(grid);
    if (data.kind == InitialKind::snapshot) {
        const SpectralField stored = read_snapshot(data.file, grid.pad_factor());
        const Grid& sg = stored.grid();
        if (sg.dim() != grid.dim()) throw ConfigError("initial.file: snapshot dimension does not match grid.dim");
        for (int a = 0; a < grid.dim(); ++a)
            if (sg.length(a) != grid.length(a))
                throw ConfigError("initial.file: snapshot box lengths do not match grid.lengths");
        for (std::size_t f = 0; f < sg.spectral_size(); ++f) {
            const MultiIndex k = sg.unflatten(f);
            if (!grid.contains(k)) continue;
            const std::size_t t = grid.flatten(k);
            for (int c = 0; c < 3; ++c) u(c, t) = stored(c, f);
        }
        return u;
    }
    const double root_volume = std::sqrt(grid.volume());
    for (int c = 0; c < 3; ++c) u(c, 0) = data.constant[c] * root_volume;
    for (const auto& m : data.modes) {
        if (!grid.contains(m.mode)) continue;
        double norm = 1.0;
        for (int a = 0; a < grid.dim(); ++a)
            norm *= std::sqrt((m.mode[a] == 0 ? 1.0 : 2.0) / grid.length(a));
        const std::size_t f = grid.flatten(m.mode);
        for (int c = 0; c < 3; ++c) u(c, f) += m.value[c] / norm;
    }
    return u;
}

}  // namespace sllbar
