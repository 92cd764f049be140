#pragma once

#include <cstddef>
#include <functional>

#include "subgrowth/nonlinearity.hpp"

namespace subgrowth {

/// Recipe for a strictly increasing nonlinearity whose derivative follows a
/// decreasing base eta but carries a narrow spike of height h_n and width w_n
/// at each integer n >= 1.
struct SpikySpec {
    std::function<double(double)> eta;                  // decreasing, positive
    std::function<double(double)> eta_antiderivative;   // phi(x)=int_0^x eta; optional
    std::function<double(std::size_t)> spike_heights;   // h_n > eta(n)
    std::function<double(std::size_t)> spike_widths;    // w_n in (0,1)
    double f_at_zero = 1.0;
};

/// Assembles f from the exact piecewise antiderivatives of the spiked
/// derivative. Breakpoint values are chained exactly and cached per integer;
/// the cache is internally synchronized. Throws std::invalid_argument when a
/// spike fails h_n > eta(n) or w_n is outside (0,1).
Nonlinearity build_spiky(const SpikySpec& spec);

}  // namespace subgrowth
