#pragma once

#include <span>
#include <vector>

namespace mixedfrac {

/// Nodes and weights on [0, 1].
struct Rule1D {
    std::vector<double> x;
    std::vector<double> w;
};

/// Gauss-Legendre rule mapped to [0, 1]. Supported orders: 3, 4, 7, 10, 15, 20, 25, 30.
const Rule1D& gauss_legendre(int order);

/// Flat list of quadrature nodes and weights.
struct Nodes1D {
    std::vector<double> x;
    std::vector<double> w;

    void append(double a, double b, const Rule1D& rule);
    [[nodiscard]] std::size_t size() const { return x.size(); }
    [[nodiscard]] double weight_sum() const;
};

/// Knobs of every quadrature in the library.
struct QuadratureRule {
    int panel_order = 15;        ///< GL order on exterior panels
    int cell_order_near = 10;    ///< GL order for cell moments at 2h <= r < 8h
    int cell_order_far = 7;      ///< GL order for cell moments at r >= 8h
    int grading_levels = 50;     ///< geometric halvings below the domain length
    int far_decades = 12;        ///< exterior panels reach length * 10^far_decades
    double panel_ratio = 2.0;    ///< ratio of consecutive geometric panels
    double near_radius_cells = 1.0;  ///< near-field radius in units of h
};

/// Geometric breakpoints 0 < t_0 < ... covering [0, t_max]: the first panel is
/// [0, t_min], then t_min * ratio^k up to t_max, with the given interior
/// breakpoints inserted.
std::vector<double> graded_breaks(double t_min, double t_max, double ratio,
                                  std::span<const double> extra = {});

/// Composite rule over consecutive breakpoints.
Nodes1D composite(std::span<const double> breaks, const Rule1D& rule);

/// Exterior rule on t in (0, T) for one side of an interval of length `length`:
/// graded towards t = 0, stretched out to length * 10^far_decades.
Nodes1D exterior_panels(double length, const QuadratureRule& q, std::span<const double> extra = {});

}  // namespace mixedfrac
