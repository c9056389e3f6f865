#pragma once

#include "mixedfrac/extension.hpp"
#include "mixedfrac/fields.hpp"
#include "mixedfrac/representation.hpp"
#include "mixedfrac/solver.hpp"
#include "mixedfrac/stats.hpp"

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mixedfrac {

/// One side-by-side evaluation of an identity.
struct IdentityReport {
    std::string name;
    double left = 0.0;
    double right = 0.0;
    double abs_error = 0.0;
    double rel_error = 0.0;
    double auxiliary = 0.0;  ///< integration by parts: the exterior Neumann term
    double h = 0.0;
    std::size_t quadrature_points = 0;
    double r_trunc = 0.0;
};

/// Quadrature over the domain used by the identity checks. Each half cell is
/// mapped by x = x_k + (h/2) xi^m towards its node and integrated with Gauss
/// points in xi, which absorbs the |x - x_k|^{1-2s} behaviour of the pointwise
/// operator at the kinks. m = 0 picks the smallest m with m (2 - 2s) >= 3.
struct IdentityQuadrature {
    int points_per_half_cell = 7;
    int grading_power = 0;
};

/// Both sides of the bilinear identity for an interval:
///   C [ iint_{Omega^2} (u(x)-u(y))(v(x)-v(y)) (|x-y|^{-1-2s} + k_Omega(x,y)) ]
///   = C [ iint_Q (u~(x)-u~(y))(v~(x)-v~(y)) |x-y|^{-1-2s} ].
/// The left side evaluates k_Omega through its exterior integral; the right
/// side uses the extension values. Intervals only.
IdentityReport bilinear_equivalence(const GridFunction& u, const GridFunction& v, const Representation& rep,
                                    const IdentityQuadrature& xq = {});

/// (C/2) iint_Q (u~(x)-u~(y))(v(x)-v(y)) |x-y|^{-1-2s}
///   = int_Omega v (-Delta)^s u~ + int_{R \ Omega} v N_s u~.
/// v outside the domain is its extension unless `v_exterior` is given.
/// Intervals only.
IdentityReport integration_by_parts(const GridFunction& u, const GridFunction& v, const Representation& rep,
                                   const ScalarField& v_exterior = {}, const IdentityQuadrature& xq = {});

struct Seminorms {
    double gradient_sq = 0.0;  ///< int_Omega |grad u|^2
    double q_double = 0.0;     ///< iint_Q |u~(x)-u~(y)|^2 |x-y|^{-1-2s}
    double omega_double = 0.0; ///< iint_{Omega^2} |u(x)-u(y)|^2 |x-y|^{-1-2s}
    double omega_k = 0.0;      ///< iint_{Omega^2} |u(x)-u(y)|^2 k_Omega(x,y)
    double s = 0.0;            ///< [u]_s
    double s_k = 0.0;          ///< [u]_{s,K}
    double l1_s = 0.0;         ///< int_R |u~(y)| / (1 + |y|^{1+2s})
};

/// Intervals only.
Seminorms seminorms(const GridFunction& u, const Representation& rep, const IdentityQuadrature& xq = {});

/// Identity evaluated on a sequence of grids h0, h0/2, ... for fixed smooth u, v.
/// non_increasing: no level's relative error exceeds the previous one, errors
/// below identity_roundoff_floor counting as equal.
struct IdentityStudy {
    std::vector<IdentityReport> levels;
    bool non_increasing = false;
};

inline constexpr double identity_roundoff_floor = 1e-10;

enum class Identity { Bilinear, IntegrationByParts };

IdentityStudy identity_refinement(Identity which, const ScalarField& u, const ScalarField& v, const Domain& d,
                                  double s, double h0, int levels = 3, const IdentityQuadrature& xq = {});

struct MaxPrincipleTrial {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    double s = 0.0;
    double min_interior = 0.0;  ///< minimum of the represented function on the closed domain
    double min_exterior = 0.0;  ///< minimum of the extension over exterior nodes
    bool violation = false;
};

struct MaxPrincipleSummary {
    std::vector<MaxPrincipleTrial> trials;
    std::size_t violations = 0;
    double worst_interior = 0.0;
    double worst_exterior_gap = 0.0;  ///< min over trials of min_exterior - min_interior
};

using ProblemSampler = std::function<Coefficients(std::mt19937_64&)>;

/// Solves at gamma = 1 for `trials` sampled problems, cycling through the given
/// discretisations; trial k draws from a generator seeded by (seed, k). Records
/// a violation when min_interior < -tol or min_exterior < min_interior - tol.
MaxPrincipleSummary max_principle_campaign(std::size_t trials, std::uint64_t seed,
                                           std::span<const std::shared_ptr<const Representation>> reps,
                                           const ProblemSampler& sampler, double tol = 1e-8);

/// Exterior gradient and boundary-factor exponents along one outward ray.
struct RateStudy {
    double s = 0.0;
    GradientRate gradient;
    LineFit factor_fit;
    std::vector<double> delta;
    std::vector<double> factor;
};

RateStudy rate_study(const GridFunction& u, const Representation& rep, std::optional<double> delta_lo = std::nullopt,
                     std::optional<double> delta_hi = std::nullopt, double angle = 0.0);

/// max over check points of |N_s u~_h(x)| where u~_h extends the grid samples of
/// g and the interior integral uses g itself.
double neumann_residual(const ScalarField& g, const Representation& rep, std::span<const Point> checks);

/// Exterior points at fixed distances from the boundary, on both sides of an
/// interval or along four rays of a disk.
std::vector<Point> neumann_check_points(const Domain& d);

struct ContractionStudy {
    std::vector<double> eps;
    std::vector<double> rho;
    LineFit fit;  ///< rho = c eps
};

ContractionStudy contraction_study(std::shared_ptr<const Representation> rep, const ProblemData& pd, double gamma0,
                                   std::span<const double> eps, const Eigen::VectorXd& phi1,
                                   const Eigen::VectorXd& phi2);

struct SurrogateRow {
    double s = 0.0;
    double p = 0.0;
    double h = 0.0;
    double w2p = 0.0;
    double f_lp = 0.0;
    double ratio = 0.0;
};

/// Ratio of the discrete W^{2,p} surrogate of the gamma = 1 solution to ||f||_p
/// on each grid spacing.
std::vector<SurrogateRow> w2p_study(const Domain& d, double s, double p, const Coefficients& c,
                                    std::span<const double> hs);

/// Whether (s, p) lies in one of the two ranges where a unique solution is
/// known to exist: (N-1)/(2N) < s < 1/2 with N < p < 1/(1-2s), or 1/2 <= s < 1/2 + 1/(2p)
/// with p > N.
bool in_existence_range(int N, double s, double p);
std::optional<std::string> existence_range_warning(int N, double s, double p);

// Brute-force oracles for intervals: Boost adaptive quadrature of the same
// discrete model, independent of the library's cell moments and panels.

/// u~(y) at an exterior point for the piecewise-linear function with the given
/// nodal values.
double oracle_extension(const PiecewiseLinear1D& rep, const Eigen::VectorXd& nodal, double y, double tol = 1e-13);

/// (-Delta)^s u~ at interior node i (near field |z| <= h by the same quadratic
/// model as the assembled rows).
double oracle_frac_laplacian(const PiecewiseLinear1D& rep, const Eigen::VectorXd& nodal, std::size_t i,
                             double tol = 1e-12);

/// K_Omega(x, y) = |x-y|^{-1-2s} + k_Omega(x, y) with the exterior integral taken
/// to infinity and F computed by adaptive quadrature.
double oracle_regional_kernel(double x, double y, const Domain& d, const FracParams& p, double tol = 1e-11);

struct OracleRow {
    std::string quantity;
    std::size_t samples = 0;
    double max_abs = 0.0;
    double max_rel = 0.0;
    double oracle_tol = 0.0;
};

/// With a finite `cutoff` the oracle drops the exterior beyond that distance
/// from each endpoint, giving a family of coarser references.
OracleRow compare_operator_oracle(const PiecewiseLinear1D& rep, const Eigen::VectorXd& nodal, double tol = 1e-12,
                                  double cutoff = std::numeric_limits<double>::infinity());

/// Regional kernel at every pair of distinct interior nodes (every `stride`-th
/// node).
OracleRow compare_kernel_oracle(const Representation& rep, std::size_t stride = 1, double tol = 1e-11);

}  // namespace mixedfrac
