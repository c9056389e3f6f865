#pragma once

#include "mixedfrac/grid_function.hpp"
#include "mixedfrac/representation.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace mixedfrac {

/// Discrete operators at interior nodes, acting on representation nodal values
/// (interior_count x node_count).
struct OperatorStencil {
    Eigen::MatrixXd laplacian;                ///< -Delta
    std::array<Eigen::MatrixXd, 2> gradient;  ///< d/dx, d/dy (second unused in 1D)
    Eigen::MatrixXd nonlocal;                 ///< (-Delta)^s of the extension
};

OperatorStencil build_stencils(const Representation& rep);

/// -Delta u at interior node i.
double local_laplacian(const GridFunction& u, std::size_t i, const Representation& rep);

/// grad u at interior node i (second component zero in 1D).
Point gradient(const GridFunction& u, std::size_t i, const Representation& rep);

/// (-Delta)^s u~ at interior node i from the assembled operator row. Requires a
/// current exterior cache.
double frac_laplacian_extended(const GridFunction& u_ext, std::size_t i, const Representation& rep);

/// (-Delta)^s u~ at every interior node.
Eigen::VectorXd frac_laplacian_all(const GridFunction& u_ext, const Representation& rep);

/// Split of (-Delta)^s u~(x) used for diagnostics. Contributions are scaled by
/// C_{N,s} so that the parts add up to `total`:
///   interior_near + exterior_near + far = total   (y in the domain / y outside
///   with |y - x| <= 1 / |y - x| > 1), and
///   a[0] + a[1] + a[2] + a[3] + a_far = total     (symmetric split by whether
///   x + z and x - z lie in the domain, |z| <= 1).
struct NonlocalBreakdown {
    double total = 0.0;
    double interior_near = 0.0;
    double exterior_near = 0.0;
    double far = 0.0;
    std::array<double, 4> a{};
    double a_far = 0.0;
};

/// Independent per-node evaluation of (-Delta)^s u~ with quadrature panels
/// aligned to the class boundaries; agrees with the assembled row to quadrature
/// accuracy.
NonlocalBreakdown frac_laplacian_breakdown(const GridFunction& u_ext, std::size_t i, const Representation& rep);

/// Breakdown at every interior node; shares the exterior samples between nodes.
std::vector<NonlocalBreakdown> frac_laplacian_breakdown_all(const GridFunction& u_ext, const Representation& rep);

}  // namespace mixedfrac
