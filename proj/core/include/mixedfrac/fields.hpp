#pragma once

#include "mixedfrac/geometry.hpp"
#include "mixedfrac/representation.hpp"
#include "mixedfrac/solver.hpp"

#include <functional>
#include <random>
#include <string>
#include <string_view>

namespace mixedfrac {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;

/// Named analytic coefficients. Scalars: a number, const(c), linear, sin(k),
/// cos(k), gauss(x0,sigma) in 1D or gauss(x0,y0,sigma) in 2D, zero. Coordinates
/// are relative to the domain: x in [0, 1] across an interval, and centred and
/// scaled by the radius on a disk. "file:PATH" reads tabulated samples, one
/// "x,value" (or "x,y,value") row per line in physical coordinates: linear
/// interpolation on an interval, nearest sample on a disk. Throws ConfigError
/// for unknown names.
ScalarField scalar_preset(std::string_view spec, const Domain& d);

/// Vector presets: zero, a number or const(c) (all components), const(cx,cy),
/// sin, swirl.
VectorField vector_preset(std::string_view spec, const Domain& d);

/// Random smooth function: a short cosine series with random phases and
/// amplitudes decaying like 1/k, scaled to sup norm about `amplitude`.
ScalarField random_smooth(std::mt19937_64& rng, const Domain& d, double amplitude = 1.0, int modes = 4);

/// floor + exp(random_smooth): smooth and bounded below by `floor`.
ScalarField random_positive(std::mt19937_64& rng, const Domain& d, double floor, double amplitude = 1.0);

VectorField random_drift(std::mt19937_64& rng, const Domain& d, double amplitude = 1.0);

enum class SourceKind { Zero, Nonnegative, Signed };

struct Coefficients {
    VectorField q;
    ScalarField a;
    ScalarField f;
};

/// Random (q, a, f) with a >= a_floor and f of the requested kind.
Coefficients random_coefficients(std::mt19937_64& rng, const Domain& d, SourceKind kind, double a_floor = 0.1);

ProblemData make_problem(const Representation& rep, const Coefficients& c, double gamma = 1.0);

}  // namespace mixedfrac
