#pragma once

#include "mixedfrac/geometry.hpp"
#include "mixedfrac/quadrature.hpp"

#include <cmath>

namespace mixedfrac {

/// Fractional order together with its normalisation constant.
struct FracParams {
    double s = 0.5;
    int N = 1;
    double C = 0.0;

    /// Validates s in (0, 1) and N in {1, 2}; throws std::invalid_argument.
    static FracParams make(int N, double s);
};

/// pi^{-N/2} 2^{2s} s Gamma(N/2 + s) / Gamma(1 - s).
double normalization_constant(int N, double s);

/// |r|^{-N-2s}
inline double kernel(double r, const FracParams& p) { return std::pow(r, -p.N - 2.0 * p.s); }

/// Integral of r^p over [r0, r1] for 0 < r0 <= r1, stable for p near -1.
double power_integral(double p, double r0, double r1);

/// Entry and exit distances of the ray from an exterior point at distance D from the
/// centre of a disk of radius R, at angle phi to the inward radial direction.
struct Chord {
    double r_in = 0.0;
    double r_out = 0.0;
};
Chord disk_chord(double D, double R, double phi);

/// Integral over the domain of |x - y|^{-N-tau} for exterior x.
double general_tail_integral(const Point& x, double tau, const Domain& d, const QuadratureRule& q = {});

/// F(x): integral over the domain of |x - y|^{-N-2s}. Throws for x in the closure.
double boundary_factor(const Point& x, const Domain& d, const FracParams& p, const QuadratureRule& q = {});

/// F for a disk as a function of the distance D > R from the centre.
double disk_boundary_factor(double D, double R, double tau, const QuadratureRule& q = {});

struct RegionalKernelValue {
    double value = 0.0;     ///< K(x, y) + k(x, y)
    double singular = 0.0;  ///< K(x, y)
    double k_omega = 0.0;   ///< exterior coupling k(x, y)
    double tail = 0.0;      ///< part of k(x, y) from distances beyond r_trunc
    double r_trunc = 0.0;
};

/// Regional kernel for interior x != y. The exterior integral is carried out to
/// infinity; `tail` reports the share coming from beyond r_trunc (distance to the
/// boundary). Non-positive r_trunc selects 8 diam.
RegionalKernelValue regional_kernel(const Point& x, const Point& y, const Domain& d, const FracParams& p,
                                    const QuadratureRule& q = {}, double r_trunc = -1.0);

}  // namespace mixedfrac
