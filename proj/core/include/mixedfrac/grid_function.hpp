#pragma once

#include "mixedfrac/geometry.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>

namespace mixedfrac {

/// Identifies the discretisation an exterior cache was computed for.
struct ExteriorTag {
    double s = 0.0;
    double r_trunc = 0.0;
    std::uint64_t grid = 0;

    friend bool operator==(const ExteriorTag&, const ExteriorTag&) = default;
};

/// Values on the interior and boundary nodes of a grid, plus the extension onto
/// the exterior nodes once it has been computed.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(const Grid& g, Eigen::VectorXd interior, Eigen::VectorXd boundary);

    /// Samples f on interior and boundary nodes.
    static GridFunction sample(const Grid& g, const std::function<double(const Point&)>& f);
    static GridFunction constant(const Grid& g, double c);

    [[nodiscard]] const Eigen::VectorXd& interior() const { return interior_; }
    [[nodiscard]] const Eigen::VectorXd& boundary() const { return boundary_; }
    [[nodiscard]] std::uint64_t grid_fingerprint() const { return grid_; }

    void set_interior(Eigen::VectorXd v);
    void set_boundary(Eigen::VectorXd v);

    [[nodiscard]] bool has_exterior() const { return exterior_.has_value(); }
    /// Throws std::logic_error when no cache is attached.
    [[nodiscard]] const Eigen::VectorXd& exterior() const;
    [[nodiscard]] const ExteriorTag& exterior_tag() const;
    [[nodiscard]] bool exterior_matches(const ExteriorTag& tag) const;

    void attach_exterior(Eigen::VectorXd values, const ExteriorTag& tag);
    void drop_exterior();

    [[nodiscard]] double interior_min() const;
    [[nodiscard]] double interior_max() const;

    /// a*u + b*v on interior and boundary nodes; the result has no exterior cache.
    friend GridFunction combine(double a, const GridFunction& u, double b, const GridFunction& v);

private:
    std::uint64_t grid_ = 0;
    Eigen::VectorXd interior_;
    Eigen::VectorXd boundary_;
    std::optional<Eigen::VectorXd> exterior_;
    ExteriorTag tag_;
};

GridFunction combine(double a, const GridFunction& u, double b, const GridFunction& v);

}  // namespace mixedfrac
