#pragma once

#include "mixedfrac/geometry.hpp"
#include "mixedfrac/grid_function.hpp"
#include "mixedfrac/kernels.hpp"
#include "mixedfrac/quadrature.hpp"

#include <Eigen/Core>

#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace mixedfrac {

/// Writable row view; also binds to rows of column-major matrices.
using RowRef = Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

/// The function a grid function stands for inside the domain, and everything
/// derived from it: extension weights, nonlocal operator rows and the boundary
/// closure used by the solver.
///
/// Nodal coefficients are indexed by representation nodes (`nodes()`); the
/// closure matrix maps solver unknowns (interior node values) to them.
class Representation {
public:
    virtual ~Representation() = default;

    [[nodiscard]] const Domain& domain() const { return domain_; }
    [[nodiscard]] const Grid& grid() const { return grid_; }
    [[nodiscard]] const FracParams& params() const { return params_; }
    [[nodiscard]] const QuadratureRule& rule() const { return rule_; }
    [[nodiscard]] ExteriorTag tag() const { return {params_.s, grid_.r_trunc, grid_.fingerprint}; }

    [[nodiscard]] const std::vector<Point>& nodes() const { return nodes_; }
    [[nodiscard]] Eigen::Index node_count() const { return static_cast<Eigen::Index>(nodes_.size()); }
    /// Integral of each nodal basis function over the domain.
    [[nodiscard]] const Eigen::VectorXd& nodal_weights() const { return weights_; }
    /// node_count x interior_count.
    [[nodiscard]] const Eigen::MatrixXd& closure() const { return closure_; }
    /// Row of the interior-node operator (-Delta)^s applied to the extension,
    /// interior_count x node_count, normalisation constant included.
    [[nodiscard]] const Eigen::MatrixXd& nonlocal_rows() const { return rows_; }

    [[nodiscard]] virtual Eigen::VectorXd nodal_values(const GridFunction& u) const = 0;
    /// Grid function whose boundary values follow from the closure.
    [[nodiscard]] GridFunction from_interior(const Eigen::VectorXd& interior) const;

    /// psi_j(y) for exterior y: nonnegative, summing to one, with u_1(y) = sum_j psi_j(y) u_j.
    virtual void extension_row(const Point& y, RowRef psi) const = 0;
    [[nodiscard]] Eigen::MatrixXd extension_matrix(std::span<const Point> ys) const;
    /// Extension weights at the grid's exterior nodes, computed on first use.
    [[nodiscard]] const Eigen::MatrixXd& exterior_extension() const;

    /// Value of the represented function at a point of the closed domain.
    [[nodiscard]] virtual double evaluate(const Eigen::VectorXd& nodal, const Point& x) const = 0;

protected:
    Representation(const Domain& d, const Grid& g, const FracParams& p, const QuadratureRule& q)
        : domain_(d), grid_(g), params_(p), rule_(q) {}

    Domain domain_;
    Grid grid_;
    FracParams params_;
    QuadratureRule rule_;
    std::vector<Point> nodes_;
    Eigen::VectorXd weights_;
    Eigen::MatrixXd closure_;
    Eigen::MatrixXd rows_;

private:
    mutable std::once_flag exterior_once_;
    mutable Eigen::MatrixXd exterior_;
};

/// Continuous piecewise-linear function on a uniform partition of an interval,
/// nodes a = x_0 < ... < x_M = b. The closure is the second-order one-sided
/// Neumann condition u_0 = (4u_1 - u_2)/3, u_M = (4u_{M-1} - u_{M-2})/3.
///
/// Near field |z| <= h of the nonlocal rows uses the quadratic through the three
/// nearest nodes; all other contributions are exact integrals of the
/// piecewise-linear function and of its extension.
class PiecewiseLinear1D final : public Representation {
public:
    PiecewiseLinear1D(const Domain& d, const Grid& g, const FracParams& p, const QuadratureRule& q);

    [[nodiscard]] Eigen::VectorXd nodal_values(const GridFunction& u) const override;
    void extension_row(const Point& y, RowRef psi) const override;
    [[nodiscard]] double evaluate(const Eigen::VectorXd& nodal, const Point& x) const override;

    [[nodiscard]] int cells() const { return cells_; }
    [[nodiscard]] double h() const { return h_; }

    /// Integrals of the two hat-function pieces on one cell against r^p, where the
    /// cell spans distances [rn, rn + h] from the target: {near node, far node}.
    [[nodiscard]] std::pair<double, double> cell_moments(double rn, double p) const;

    /// Unnormalised extension numerators: integral of phi_j(z) |y - z|^{-1-2s}.
    void extension_numerators(double y, RowRef out) const;
    /// Extension weights at distance t > 0 beyond the right (side > 0) or left
    /// endpoint; exact for distances below the spacing of doubles near b.
    void extension_row_beyond(int side, double t, RowRef psi) const;

private:
    void assemble_rows();
    void numerators_beyond(int side, double t, RowRef out) const;

    int cells_ = 0;
    double h_ = 0.0;
};

/// Piecewise-constant function on the cells of a square lattice inside a disk;
/// the strip between the lattice squares and the circle belongs to the nearest
/// lattice node. Classical Neumann closure is the first-order staircase
/// condition (ghost value equals the node value).
class PiecewiseConstant2D final : public Representation {
public:
    PiecewiseConstant2D(const Domain& d, const Grid& g, const FracParams& p, const QuadratureRule& q);

    [[nodiscard]] Eigen::VectorXd nodal_values(const GridFunction& u) const override;
    void extension_row(const Point& y, RowRef psi) const override;
    [[nodiscard]] double evaluate(const Eigen::VectorXd& nodal, const Point& x) const override;

    /// Index of the lattice node owning x, or -1 outside the disk.
    [[nodiscard]] long owner(const Point& x) const;
    /// Index of the node at lattice offset (i, j), or -1.
    [[nodiscard]] long node_at(int i, int j) const;

    /// Quadrature of the boundary strip: points, weights, owning node.
    struct StripPoint {
        Point x;
        double w;
        long owner;
    };
    [[nodiscard]] const std::vector<StripPoint>& strip() const { return strip_; }

private:
    void build_strip();
    void assemble_rows();
    [[nodiscard]] double square_moment(const Point& y, const Point& centre) const;

    int span_ = 0;
    std::vector<long> index_;  // (2 span + 1)^2 lattice lookup
    std::vector<StripPoint> strip_;
};

/// Exterior of a disk in polar coordinates about the centre: radial panels graded
/// towards the circle, angular resolution following the distance to it.
struct WeightedPoints {
    std::vector<Point> x;
    std::vector<double> w;
};
WeightedPoints disk_exterior_rule(const Domain& d, double h, const QuadratureRule& q);

/// Builds the representation matching the domain shape.
std::shared_ptr<const Representation> make_representation(const Domain& d, const Grid& g, const FracParams& p,
                                                          const QuadratureRule& q = {});

}  // namespace mixedfrac
