#pragma once

#include "mixedfrac/grid_function.hpp"
#include "mixedfrac/representation.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace mixedfrac {

/// Copy of u with the exterior cache filled at every exterior grid node.
GridFunction extend(const GridFunction& u, const Representation& rep);

/// u_1(y) at an arbitrary exterior point.
double extension_value(const GridFunction& u, const Representation& rep, const Point& y);

/// Nonlocal normal derivative at exterior node `k` of the grid, using the cached
/// exterior value there. Throws if the cache is missing or stale.
double neumann_derivative(const GridFunction& u_ext, std::size_t k, const Representation& rep);

/// Nonlocal normal derivative C * integral over the domain of (value - g(y)) K(x - y),
/// where `value` stands for u(x) at the exterior point x and g for the interior
/// function. The integral is resolved to near machine precision.
double neumann_derivative(double value, const std::function<double(const Point&)>& g, const Point& x,
                          const Domain& d, const FracParams& p, const QuadratureRule& q = {});

struct GradientRate {
    bool flat = false;       ///< gradient vanishes along the ray; no slope
    double slope = 0.0;      ///< fitted exponent of |grad u_1| against delta
    double ci_low = 0.0;     ///< 95% confidence band of the slope
    double ci_high = 0.0;
    double r2 = 0.0;
    /// Model comparison |grad| = A + B log(1/delta) against |grad| = c delta^slope.
    double log_coefficient = 0.0;
    double aic_log = 0.0;
    double aic_power = 0.0;
    bool log_preferred = false;
    std::vector<double> delta;
    std::vector<double> gradient;
};

/// Measures |grad u_1| by centred differences with step delta/4 along an outward
/// ray through the grid's exterior shells in [delta_lo, delta_hi] (defaults:
/// [delta_min, h]) and fits the slope of log|grad u_1| against log delta.
/// Throws std::invalid_argument when fewer than five shells are available.
GradientRate exterior_gradient_rate(const GridFunction& u, const Representation& rep,
                                    std::optional<double> delta_lo = std::nullopt,
                                    std::optional<double> delta_hi = std::nullopt, double angle = 0.0);

}  // namespace mixedfrac
