#include "nehari/field.hpp"

#include <cmath>

namespace nehari {

Field sample_field(std::shared_ptr<const GridSpec> grid,
                   const std::function<double(const Point&)>& f) {
    Field u(std::move(grid));
    const GridSpec& g = *u.grid;
    for (std::size_t k = 0; k < u.size(); ++k) {
        u[k] = f(g.mask_coords(k));
    }
    return u;
}

double interpolate(const Field& u, const Point& x, bool strict) {
    const GridSpec& g = *u.grid;
    std::array<int, kMaxDim> base{};
    std::array<double, kMaxDim> frac{};
    for (int a = 0; a < g.dim; ++a) {
        double s = (x[a] - g.lo[a]) / g.h;
        double fl = std::floor(s);
        base[a] = static_cast<int>(fl);
        frac[a] = s - fl;
        if (base[a] < -1 || base[a] > g.n[a] - 1) return 0.0;
    }
    double acc = 0.0;
    const int corners = 1 << g.dim;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        std::array<int, kMaxDim> idx{};
        for (int a = 0; a < g.dim; ++a) {
            int bit = (c >> a) & 1;
            idx[a] = base[a] + bit;
            w *= bit ? frac[a] : 1.0 - frac[a];
        }
        std::int32_t mk = g.mask_at(idx);
        if (mk < 0) {
            if (strict && w != 0.0) return 0.0;
            continue;
        }
        acc += w * u[static_cast<std::size_t>(mk)];
    }
    return acc;
}

} // namespace nehari
