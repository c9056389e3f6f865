#pragma once

#include <cstddef>
#include <span>

namespace mixedfrac {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double rss = 0.0;
    double slope_se = 0.0;
    double ci_half = 0.0;  ///< half width of the 95% interval of the slope
    std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least squares y = slope x; r2 is the centred coefficient of determination.
LineFit fit_proportional(std::span<const double> x, std::span<const double> y);

/// Akaike information criterion for Gaussian residuals.
double aic(double rss, std::size_t n, int parameters);

}  // namespace mixedfrac
