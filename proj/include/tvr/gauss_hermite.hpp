#pragma once

#include <cstddef>
#include <vector>

namespace tvr {

// Nodes and weights for \int f(x) e^{-x^2} dx ~ sum w_i f(x_i).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    // E[f(Z)] for Z ~ N(0,1): substitute z = sqrt(2) x.
    template <typename F>
    double expect_standard_normal(F&& f) const {
        double s = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            s += weights[i] * f(1.4142135623730950488016887 * nodes[i]);
        return s * 0.5641895835477562869480795; // 1/sqrt(pi)
    }
};

// Computed once per order via Newton iteration on the Hermite recurrence.
const GaussHermiteRule& gauss_hermite(std::size_t order);

} // namespace tvr
