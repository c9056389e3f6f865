#include "mixedfrac/stats.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mixedfrac {

namespace {

double t_quantile(std::size_t dof) {
    if (dof == 0) {
        return std::numeric_limits<double>::infinity();
    }
    const boost::math::students_t dist(static_cast<double>(dof));
    return boost::math::quantile(boost::math::complement(dist, 0.025));
}

}  // namespace

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("fit_line needs at least two paired samples");
    }
    const auto n = x.size();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("fit_line: abscissae are all equal");
    }
    LineFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = y[k] - f.intercept - f.slope * x[k];
        f.rss += r * r;
    }
    f.r2 = syy > 0.0 ? 1.0 - f.rss / syy : 1.0;
    if (n > 2) {
        f.slope_se = std::sqrt(f.rss / static_cast<double>(n - 2) / sxx);
        f.ci_half = t_quantile(n - 2) * f.slope_se;
    }
    return f;
}

LineFit fit_proportional(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) {
        throw std::invalid_argument("fit_proportional needs paired samples");
    }
    const auto n = x.size();
    double sxx = 0.0;
    double sxy = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
        my += y[k];
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("fit_proportional: all abscissae are zero");
    }
    my /= static_cast<double>(n);
    LineFit f;
    f.n = n;
    f.slope = sxy / sxx;
    double syy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = y[k] - f.slope * x[k];
        f.rss += r * r;
        syy += (y[k] - my) * (y[k] - my);
    }
    f.r2 = syy > 0.0 ? 1.0 - f.rss / syy : 1.0;
    if (n > 1) {
        f.slope_se = std::sqrt(f.rss / static_cast<double>(n - 1) / sxx);
        f.ci_half = t_quantile(n - 1) * f.slope_se;
    }
    return f;
}

double aic(double rss, std::size_t n, int parameters) {
    const double nn = static_cast<double>(n);
    const double floor = std::numeric_limits<double>::min();
    return nn * std::log(std::max(rss, floor) / nn) + 2.0 * parameters;
}

}  // namespace mixedfrac
