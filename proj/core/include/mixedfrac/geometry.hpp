#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mixedfrac {

/// Points live in the plane; one-dimensional problems use the first coordinate
/// and keep the second at zero.
using Point = Eigen::Vector2d;

inline Point point1d(double x) { return Point(x, 0.0); }

enum class Shape { Interval, Disk };

/// Bounded computational domain: an open interval (a, b) or an open disk.
class Domain {
public:
    static Domain interval(double a, double b);
    static Domain disk(const Point& center, double radius);

    [[nodiscard]] Shape shape() const { return shape_; }
    [[nodiscard]] int dimension() const { return shape_ == Shape::Interval ? 1 : 2; }

    /// Interval endpoints (a, b); for a disk, (center.x - r, center.x + r).
    [[nodiscard]] double lower() const { return lo_; }
    [[nodiscard]] double upper() const { return hi_; }
    [[nodiscard]] const Point& center() const { return center_; }
    [[nodiscard]] double radius() const { return radius_; }

    [[nodiscard]] double diameter() const;
    /// Lebesgue measure (length or area).
    [[nodiscard]] double measure() const;

    /// True for points of the open set.
    [[nodiscard]] bool contains(const Point& x) const;
    /// Negative inside, zero on the boundary, positive outside.
    [[nodiscard]] double signed_distance(const Point& x) const;
    [[nodiscard]] double distance_to_boundary(const Point& x) const;

    /// Closest boundary point to an exterior x. Throws std::invalid_argument for
    /// points of the closure.
    [[nodiscard]] Point nearest_boundary_point(const Point& x) const;

    /// Unit outward normal at (the projection onto the boundary of) x.
    [[nodiscard]] Point outward_normal(const Point& x) const;

    [[nodiscard]] std::string describe() const;

private:
    Domain() = default;

    Shape shape_ = Shape::Interval;
    double lo_ = 0.0;
    double hi_ = 1.0;
    Point center_ = Point::Zero();
    double radius_ = 0.0;
};

// Free-function spellings used throughout the library.
inline double distance_to_boundary(const Point& x, const Domain& d) { return d.distance_to_boundary(x); }
inline Point nearest_boundary_point(const Point& x, const Domain& d) { return d.nearest_boundary_point(x); }

/// How exterior collars are laid out around the domain.
struct ShellPolicy {
    /// Smallest exterior distance; a non-positive value selects h^2.
    double delta_min = -1.0;
    /// Growth factor of the shell distances between h and R_trunc.
    double growth = 1.25;
    /// Points per exterior shell for disks; zero selects ~2*pi*R/h (at least 32).
    int points_per_shell = 0;
};

struct ExteriorNode {
    Point position;
    double delta = 0.0;   ///< distance to the boundary
    std::size_t shell = 0;
};

/// Node sets of a discretisation: interior lattice, boundary points and exterior
/// shells. Immutable once built.
struct Grid {
    double h = 0.0;
    double r_trunc = 0.0;
    double delta_min = 0.0;

    std::vector<Point> interior;
    std::vector<Point> boundary;
    std::vector<ExteriorNode> exterior;
    /// Strictly increasing shell distances; exterior[k].shell indexes this.
    std::vector<double> shells;

    /// 2D only: lattice coordinates (i, j) of interior nodes, x = c + h*(i, j).
    std::vector<std::array<int, 2>> lattice;

    /// Hash of the construction parameters and node positions; used to tag
    /// caches derived from this grid.
    std::uint64_t fingerprint = 0;

    [[nodiscard]] std::size_t interior_count() const { return interior.size(); }
};

/// Builds the node sets. Throws std::invalid_argument if h is too coarse for the
/// domain (fewer than two interior nodes) or R_trunc < 2 diam.
Grid build_grid(const Domain& d, double h, double r_trunc, const ShellPolicy& policy = {});

/// Default truncation radius: 8 diam.
inline double default_r_trunc(const Domain& d) { return 8.0 * d.diameter(); }

}  // namespace mixedfrac
