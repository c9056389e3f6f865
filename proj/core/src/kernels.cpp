#include "mixedfrac/kernels.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mixedfrac {

namespace {

// Integral of r^p over [r0, r0 + len].
double power_integral_len(double p, double r0, double len) {
    if (len <= 0.0) {
        return 0.0;
    }
    const double lg = std::log1p(len / r0);
    const double e = p + 1.0;
    const double x = e * lg;
    if (std::abs(x) > 0.5) {
        return (std::pow(r0 + len, e) - std::pow(r0, e)) / e;
    }
    const double f = x == 0.0 ? 1.0 : std::expm1(x) / x;
    return std::pow(r0, e) * lg * f;
}

void require_exterior(const Point& x, const Domain& d) {
    if (!(d.signed_distance(x) > 0.0)) {
        throw std::invalid_argument("point must lie outside the closure of the domain");
    }
}

double regional_kernel_1d(double x, double y, const Domain& d, const FracParams& p, const QuadratureRule& q,
                          double r_trunc, double& tail) {
    const double a = d.lower();
    const double b = d.upper();
    const double len = b - a;
    const double pk = -1.0 - 2.0 * p.s;
    const std::array<double, 1> extra{r_trunc};
    const Nodes1D t = exterior_panels(len, q, extra);
    double sum = 0.0;
    tail = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double tk = t.x[k];
        const double f = power_integral_len(pk, tk, len);
        // right side z = b + t, left side z = a - t
        const double right = std::pow(b + tk - x, pk) * std::pow(b + tk - y, pk);
        const double left = std::pow(x - a + tk, pk) * std::pow(y - a + tk, pk);
        const double contrib = t.w[k] * (right + left) / f;
        sum += contrib;
        if (tk > r_trunc) {
            tail += contrib;
        }
    }
    // beyond the last panel the integrand is t^{-1-2s} / |Omega| on each side
    const double t_end = len * std::pow(10.0, q.far_decades);
    const double asym = 2.0 * std::pow(t_end, -2.0 * p.s) / (2.0 * p.s * len);
    tail += asym;
    return sum + asym;
}

double regional_kernel_2d(const Point& x, const Point& y, const Domain& d, const FracParams& p,
                          const QuadratureRule& q, double r_trunc, double& tail) {
    const double R = d.radius();
    const Point& c = d.center();
    const double tau = 2.0 * p.s;
    const double pk = -2.0 - tau;
    const double delta = std::min(d.distance_to_boundary(x), d.distance_to_boundary(y));
    const std::array<double, 1> extra{r_trunc};
    const Nodes1D t = exterior_panels(R, q, extra);
    double sum = 0.0;
    tail = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double rho = R + t.x[k];
        if (!(rho > R)) {
            // below the spacing of doubles near R; the integrand vanishes like t^{2s} there
            continue;
        }
        const double f = disk_boundary_factor(rho, R, tau, q);
        const double ratio = rho / (delta + t.x[k]);
        const int n = static_cast<int>(std::clamp(std::ceil(40.0 * ratio), 64.0, 65536.0));
        double ring = 0.0;
        for (int m = 0; m < n; ++m) {
            const double th = 2.0 * std::numbers::pi * m / n;
            const Point z = c + rho * Point(std::cos(th), std::sin(th));
            ring += std::pow((z - x).norm(), pk) * std::pow((z - y).norm(), pk);
        }
        ring *= 2.0 * std::numbers::pi / n;
        const double contrib = t.w[k] * rho * ring / f;
        sum += contrib;
        if (t.x[k] > r_trunc) {
            tail += contrib;
        }
    }
    const double t_end = R * std::pow(10.0, q.far_decades);
    const double asym = 2.0 * std::numbers::pi * std::pow(t_end, -tau) / (tau * d.measure());
    tail += asym;
    return sum + asym;
}

}  // namespace

FracParams FracParams::make(int N, double s) {
    if (N != 1 && N != 2) {
        throw std::invalid_argument("dimension must be 1 or 2");
    }
    return FracParams{s, N, normalization_constant(N, s)};
}

double normalization_constant(int N, double s) {
    if (!(s > 0.0 && s < 1.0)) {
        throw std::invalid_argument("fractional order s must lie in (0, 1), got " + std::to_string(s));
    }
    const double n2 = 0.5 * N;
    return std::pow(std::numbers::pi, -n2) * std::pow(2.0, 2.0 * s) * s * std::tgamma(n2 + s) / std::tgamma(1.0 - s);
}

double power_integral(double p, double r0, double r1) {
    if (!(r0 > 0.0) || r1 < r0) {
        throw std::invalid_argument("power_integral requires 0 < r0 <= r1");
    }
    return power_integral_len(p, r0, r1 - r0);
}

Chord disk_chord(double D, double R, double phi) {
    const double b = D * std::cos(phi);
    const double sp = D * std::sin(phi);
    const double disc = std::max(0.0, (R - sp) * (R + sp));
    const double sq = std::sqrt(disc);
    // (D^2 - R^2) / (b + sq) avoids cancellation for points near the circle
    return {(D - R) * (D + R) / (b + sq), b + sq};
}

double disk_boundary_factor(double D, double R, double tau, const QuadratureRule& q) {
    if (!(D > R)) {
        throw std::invalid_argument("point must lie outside the closed disk");
    }
    const double pk = -1.0 - tau;
    const double phi_m = std::asin(std::min(1.0, R / D));
    const auto& rule = gauss_legendre(q.panel_order);
    auto radial = [&](double phi) {
        const Chord ch = disk_chord(D, R, phi);
        return power_integral_len(pk, ch.r_in, ch.r_out - ch.r_in);
    };
    double sum = 0.0;
    // graded panels towards phi = 0 where the integrand peaks for points near the circle
    const double half = 0.5 * phi_m;
    const auto breaks = graded_breaks(std::ldexp(half, -q.grading_levels), half, q.panel_ratio);
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double lo = breaks[k];
        const double len = breaks[k + 1] - lo;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            sum += len * rule.w[j] * radial(lo + len * rule.x[j]);
        }
    }
    // square-root endpoint at the tangent angle: phi = phi_m - half v^2
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
        const double v = rule.x[j];
        sum += rule.w[j] * 2.0 * half * v * radial(phi_m - half * v * v);
    }
    return 2.0 * sum;
}

double general_tail_integral(const Point& x, double tau, const Domain& d, const QuadratureRule& q) {
    if (!(tau > 0.0)) {
        throw std::invalid_argument("tau must be positive");
    }
    require_exterior(x, d);
    if (d.shape() == Shape::Interval) {
        const double len = d.upper() - d.lower();
        const double r0 = d.distance_to_boundary(x);
        return power_integral_len(-1.0 - tau, r0, len);
    }
    return disk_boundary_factor((x - d.center()).norm(), d.radius(), tau, q);
}

double boundary_factor(const Point& x, const Domain& d, const FracParams& p, const QuadratureRule& q) {
    return general_tail_integral(x, 2.0 * p.s, d, q);
}

RegionalKernelValue regional_kernel(const Point& x, const Point& y, const Domain& d, const FracParams& p,
                                    const QuadratureRule& q, double r_trunc) {
    if (!d.contains(x) || !d.contains(y)) {
        throw std::invalid_argument("regional_kernel needs interior points");
    }
    const double r = (x - y).norm();
    if (r == 0.0) {
        throw std::invalid_argument("regional_kernel is singular on the diagonal");
    }
    RegionalKernelValue out;
    out.r_trunc = r_trunc > 0.0 ? r_trunc : default_r_trunc(d);
    out.singular = kernel(r, p);
    out.k_omega = d.shape() == Shape::Interval
                      ? regional_kernel_1d(x.x(), y.x(), d, p, q, out.r_trunc, out.tail)
                      : regional_kernel_2d(x, y, d, p, q, out.r_trunc, out.tail);
    out.value = out.singular + out.k_omega;
    return out;
}

}  // namespace mixedfrac
