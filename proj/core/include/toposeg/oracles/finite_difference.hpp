#pragma once

#include "toposeg/grid.hpp"

namespace toposeg::oracles {

// Central finite differences (f(x + h*e) - f(x - h*e)) / 2h per pixel.
// f takes the perturbed grid and returns a scalar. Perturbed likelihood
// values may briefly leave [0,1] at the extremes, so callers should keep
// inputs at distance >= h from the boundary.
template <typename GridT, typename F>
RealGrid finite_difference_gradient(F&& f, const GridT& x, double h) {
    RealGrid grad(x.width(), x.height(), 0.0);
    GridT work = x;
    for (int r = 0; r < x.height(); ++r)
        for (int c = 0; c < x.width(); ++c) {
            const auto saved = work.at(r, c);
            work.at(r, c) = saved + h;
            const double up = f(static_cast<const GridT&>(work));
            work.at(r, c) = saved - h;
            const double down = f(static_cast<const GridT&>(work));
            work.at(r, c) = saved;
            grad.at(r, c) = (up - down) / (2.0 * h);
        }
    return grad;
}

} // namespace toposeg::oracles
