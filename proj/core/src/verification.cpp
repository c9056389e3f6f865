#include "mixedfrac/verification.hpp"

#include "mixedfrac/errors.hpp"
#include "mixedfrac/kernels.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace mixedfrac {

namespace {

const PiecewiseLinear1D& as_interval(const Representation& rep, std::string_view what) {
    const auto* r = dynamic_cast<const PiecewiseLinear1D*>(&rep);
    if (r == nullptr) {
        throw ConfigError(fmt::format("{} is implemented for intervals only", what));
    }
    return *r;
}

// Quadrature point with its distances to both endpoints and to both nodes of
// its cell, kept separately to avoid cancellation.
struct XPoint {
    double x;
    double w;
    double dl;
    double dr;
    int cell;
    double to_left;   // x - x_cell
    double to_right;  // x_{cell+1} - x
};

std::vector<XPoint> x_rule(const PiecewiseLinear1D& rep, const IdentityQuadrature& xq) {
    const double a = rep.domain().lower();
    const int M = rep.cells();
    const double h = rep.h();
    const double s = rep.params().s;
    const int m = xq.grading_power > 0 ? xq.grading_power : static_cast<int>(std::ceil(3.0 / (2.0 - 2.0 * s) - 1e-12));
    const Rule1D& g = gauss_legendre(xq.points_per_half_cell);
    std::vector<XPoint> out;
    out.reserve(static_cast<std::size_t>(2 * M) * g.x.size());
    for (int k = 0; k < M; ++k) {
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            const double d = 0.5 * h * std::pow(g.x[j], m);
            const double w = 0.5 * h * m * std::pow(g.x[j], m - 1) * g.w[j];
            out.push_back({a + k * h + d, w, k * h + d, (M - k) * h - d, k, d, h - d});
            out.push_back({a + (k + 1) * h - d, w, (k + 1) * h - d, (M - 1 - k) * h + d, k, h - d, d});
        }
    }
    return out;
}

double pl_value(const Eigen::VectorXd& nodal, const XPoint& p, double h) {
    const double th = p.to_left / h;
    return (1.0 - th) * nodal[p.cell] + th * nodal[p.cell + 1];
}

// iint_{Omega^2} (u(x)-u(y))(v(x)-v(y)) |x-y|^{-1-2s} for piecewise-linear u, v.
double omega_omega(const PiecewiseLinear1D& rep, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    const int M = rep.cells();
    const double h = rep.h();
    const double s = rep.params().s;
    const double pk = -1.0 - 2.0 * s;
    Eigen::VectorXd au(M);
    Eigen::VectorXd av(M);
    for (int k = 0; k < M; ++k) {
        au[k] = (u[k + 1] - u[k]) / h;
        av[k] = (v[k + 1] - v[k]) / h;
    }
    double total = 0.0;
    // same cell
    const double same = 2.0 * std::pow(h, 3.0 - 2.0 * s) / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s));
    for (int k = 0; k < M; ++k) {
        total += au[k] * av[k] * same;
    }
    // neighbouring cells: x = x_{k+1} - r theta, y = x_{k+1} + r (1 - theta)
    const Rule1D& g3 = gauss_legendre(3);
    const Rule1D& g20 = gauss_legendre(20);
    for (int k = 0; k + 1 < M; ++k) {
        auto poly = [&](double t0, double t1) {
            double acc = 0.0;
            for (std::size_t j = 0; j < g3.x.size(); ++j) {
                const double th = t0 + (t1 - t0) * g3.x[j];
                acc += g3.w[j] * (au[k] * th + au[k + 1] * (1.0 - th)) * (av[k] * th + av[k + 1] * (1.0 - th));
            }
            return (t1 - t0) * acc;
        };
        double part = std::pow(h, 3.0 - 2.0 * s) / (3.0 - 2.0 * s) * poly(0.0, 1.0);
        for (std::size_t j = 0; j < g20.x.size(); ++j) {
            const double r = h + h * g20.x[j];
            part += h * g20.w[j] * std::pow(r, 2.0 - 2.0 * s) * poly(1.0 - h / r, h / r);
        }
        total += 2.0 * part;
    }
    // separated cells
    for (int k = 0; k < M; ++k) {
        for (int l = k + 2; l < M; ++l) {
            const Rule1D& g = gauss_legendre(l - k <= 3 ? 15 : (l - k <= 8 ? 10 : 7));
            double part = 0.0;
            for (std::size_t i = 0; i < g.x.size(); ++i) {
                const double ux = u[k] + au[k] * h * g.x[i];
                const double vx = v[k] + av[k] * h * g.x[i];
                for (std::size_t j = 0; j < g.x.size(); ++j) {
                    const double uy = u[l] + au[l] * h * g.x[j];
                    const double vy = v[l] + av[l] * h * g.x[j];
                    const double r = (l - k) * h + h * (g.x[j] - g.x[i]);
                    part += g.w[i] * g.w[j] * (ux - uy) * (vx - vy) * std::pow(r, pk);
                }
            }
            total += 2.0 * h * h * part;
        }
    }
    return total;
}

// Exterior nodes t on one side with extension weights psi(t) (rows).
struct ExteriorSide {
    int side;
    Nodes1D t;
    Eigen::MatrixXd psi;
    Eigen::VectorXd f;  // F at each node, exact
};

std::array<ExteriorSide, 2> exterior_sides(const PiecewiseLinear1D& rep) {
    const double len = rep.domain().diameter();
    const double pk = -1.0 - 2.0 * rep.params().s;
    const Nodes1D t = exterior_panels(len, rep.rule());
    std::array<ExteriorSide, 2> out{ExteriorSide{1, t, {}, {}}, ExteriorSide{-1, t, {}, {}}};
    for (auto& e : out) {
        e.psi.resize(static_cast<Eigen::Index>(t.size()), rep.node_count());
        e.f.resize(static_cast<Eigen::Index>(t.size()));
        for (std::size_t q = 0; q < t.size(); ++q) {
            rep.extension_row_beyond(e.side, t.x[q], e.psi.row(static_cast<Eigen::Index>(q)));
            e.f[static_cast<Eigen::Index>(q)] = power_integral(pk, t.x[q], t.x[q] + len);
        }
    }
    return out;
}

double tail_start(const PiecewiseLinear1D& rep) {
    return rep.domain().diameter() * std::pow(10.0, rep.rule().far_decades);
}

struct Prepared {
    const PiecewiseLinear1D& rep;
    std::vector<XPoint> xs;
    std::array<ExteriorSide, 2> ext;
    double pk;
};

Prepared prepare(const PiecewiseLinear1D& rep, const IdentityQuadrature& xq) {
    return {rep, x_rule(rep, xq), exterior_sides(rep), -1.0 - 2.0 * rep.params().s};
}

double kernel_to(const XPoint& p, const ExteriorSide& e, double t, double pk) {
    return std::pow((e.side > 0 ? p.dr : p.dl) + t, pk);
}

IdentityReport make_report(std::string name, double left, double right, const Prepared& pr) {
    IdentityReport r;
    r.name = std::move(name);
    r.left = left;
    r.right = right;
    r.abs_error = std::abs(left - right);
    const double scale = std::max(std::abs(left), std::abs(right));
    r.rel_error = scale > 0.0 ? r.abs_error / scale : 0.0;
    r.h = pr.rep.h();
    r.quadrature_points = pr.xs.size() + 2 * pr.ext[0].t.size();
    r.r_trunc = tail_start(pr.rep);
    return r;
}

// (-Delta)^s u~ at an arbitrary point of the domain for the piecewise-linear u.
double frac_at(const Prepared& pr, const Eigen::VectorXd& u, const XPoint& p, const std::array<Eigen::VectorXd, 2>& ue,
               double mean) {
    const auto& rep = pr.rep;
    const int M = rep.cells();
    const double h = rep.h();
    const double s = rep.params().s;
    const int k = p.cell;
    const double ux = pl_value(u, p, h);
    const double slope = (u[k + 1] - u[k]) / h;
    const double dl0 = p.to_left;
    const double dr0 = p.to_right;
    // principal value over the own cell
    double acc = dr0 >= dl0 ? -slope * power_integral(-2.0 * s, dl0, dr0) : slope * power_integral(-2.0 * s, dr0, dl0);
    for (int j = k + 1; j < M; ++j) {
        const auto [near, far] = rep.cell_moments(dr0 + (j - k - 1) * h, pr.pk);
        acc += ux * (near + far) - u[j] * near - u[j + 1] * far;
    }
    for (int j = 0; j < k; ++j) {
        const auto [near, far] = rep.cell_moments(dl0 + (k - j - 1) * h, pr.pk);
        acc += ux * (near + far) - u[j + 1] * near - u[j] * far;
    }
    const double T = tail_start(rep);
    for (std::size_t e = 0; e < 2; ++e) {
        const auto& side = pr.ext[e];
        for (std::size_t q = 0; q < side.t.size(); ++q) {
            acc += side.t.w[q] * (ux - ue[e][static_cast<Eigen::Index>(q)]) * kernel_to(p, side, side.t.x[q], pr.pk);
        }
        acc += (ux - mean) * std::pow((side.side > 0 ? p.dr : p.dl) + T, -2.0 * s) / (2.0 * s);
    }
    return rep.params().C * acc;
}

std::vector<double> values_at(const Prepared& pr, const Eigen::VectorXd& nodal) {
    std::vector<double> out;
    out.reserve(pr.xs.size());
    for (const auto& p : pr.xs) {
        out.push_back(pl_value(nodal, p, pr.rep.h()));
    }
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

IdentityReport bilinear_equivalence(const GridFunction& u, const GridFunction& v, const Representation& rep_in,
                                    const IdentityQuadrature& xq) {
    const auto& rep = as_interval(rep_in, "bilinear_equivalence");
    const Prepared pr = prepare(rep, xq);
    const Eigen::VectorXd un = rep.nodal_values(u);
    const Eigen::VectorXd vn = rep.nodal_values(v);
    const double C = rep.params().C;
    const double shared = omega_omega(rep, un, vn);
    const auto ux = values_at(pr, un);
    const auto vx = values_at(pr, vn);

    double via_k = 0.0;
    double via_q = 0.0;
    for (const auto& side : pr.ext) {
        const Eigen::VectorXd ue = side.psi * un;
        const Eigen::VectorXd ve = side.psi * vn;
        for (std::size_t q = 0; q < side.t.size(); ++q) {
            double s1 = 0.0;
            double su = 0.0;
            double sv = 0.0;
            double suv = 0.0;
            for (std::size_t i = 0; i < pr.xs.size(); ++i) {
                const double wk = pr.xs[i].w * kernel_to(pr.xs[i], side, side.t.x[q], pr.pk);
                s1 += wk;
                su += wk * ux[i];
                sv += wk * vx[i];
                suv += wk * ux[i] * vx[i];
            }
            const auto qi = static_cast<Eigen::Index>(q);
            // k_Omega route: iint (u(x)-u(y))(v(x)-v(y)) K(x-z) K(y-z) dx dy / F(z)
            via_k += side.t.w[q] * 2.0 * (suv * s1 - su * sv) / side.f[qi];
            // Q route: 2 int_Omega (u(x)-u~(z))(v(x)-v~(z)) K(x-z) dx
            via_q += side.t.w[q] * 2.0 * (suv - ue[qi] * sv - ve[qi] * su + ue[qi] * ve[qi] * s1);
        }
    }
    return make_report("bilinear_equivalence", C * (shared + via_k), C * (shared + via_q), pr);
}

IdentityReport integration_by_parts(const GridFunction& u, const GridFunction& v, const Representation& rep_in,
                                   const ScalarField& v_exterior, const IdentityQuadrature& xq) {
    const auto& rep = as_interval(rep_in, "integration_by_parts");
    const Prepared pr = prepare(rep, xq);
    const Eigen::VectorXd un = rep.nodal_values(u);
    const Eigen::VectorXd vn = rep.nodal_values(v);
    const double C = rep.params().C;
    const double s = rep.params().s;
    const double a = rep.domain().lower();
    const double b = rep.domain().upper();
    const Eigen::RowVectorXd m = rep.nodal_weights().transpose() / rep.domain().diameter();
    const double u_mean = m.dot(un);
    const double T = tail_start(rep);
    const auto ux = values_at(pr, un);
    const auto vx = values_at(pr, vn);

    std::array<Eigen::VectorXd, 2> ue;
    std::array<Eigen::VectorXd, 2> ve;
    for (std::size_t e = 0; e < 2; ++e) {
        const auto& side = pr.ext[e];
        ue[e] = side.psi * un;
        if (v_exterior) {
            ve[e].resize(static_cast<Eigen::Index>(side.t.size()));
            for (std::size_t q = 0; q < side.t.size(); ++q) {
                const double z = side.side > 0 ? b + side.t.x[q] : a - side.t.x[q];
                ve[e][static_cast<Eigen::Index>(q)] = v_exterior(point1d(z));
            }
        } else {
            ve[e] = side.psi * vn;
        }
    }

    double q_side = omega_omega(rep, un, vn);
    double neumann = 0.0;
    for (std::size_t e = 0; e < 2; ++e) {
        const auto& side = pr.ext[e];
        for (std::size_t q = 0; q < side.t.size(); ++q) {
            const auto qi = static_cast<Eigen::Index>(q);
            double cross = 0.0;
            double flux = 0.0;
            for (std::size_t i = 0; i < pr.xs.size(); ++i) {
                const double wk = pr.xs[i].w * kernel_to(pr.xs[i], side, side.t.x[q], pr.pk);
                cross += wk * (ux[i] - ue[e][qi]) * (vx[i] - ve[e][qi]);
                flux += wk * (ue[e][qi] - ux[i]);
            }
            q_side += 2.0 * side.t.w[q] * cross;
            neumann += side.t.w[q] * ve[e][qi] * C * flux;
        }
    }
    // far tail: u~ and v tend to their limits, the kernel is integrated exactly
    const double v_far = v_exterior ? 0.5 * (v_exterior(point1d(b + T)) + v_exterior(point1d(a - T))) : m.dot(vn);
    double tail = 0.0;
    for (std::size_t i = 0; i < pr.xs.size(); ++i) {
        tail += pr.xs[i].w * (ux[i] - u_mean) * (vx[i] - v_far) *
                (std::pow(pr.xs[i].dr + T, -2.0 * s) + std::pow(pr.xs[i].dl + T, -2.0 * s)) / (2.0 * s);
    }
    q_side += 2.0 * tail;

    double interior = 0.0;
    for (std::size_t i = 0; i < pr.xs.size(); ++i) {
        interior += pr.xs[i].w * vx[i] * frac_at(pr, un, pr.xs[i], ue, u_mean);
    }
    IdentityReport r = make_report("integration_by_parts", 0.5 * C * q_side, interior + neumann, pr);
    r.auxiliary = neumann;
    return r;
}

Seminorms seminorms(const GridFunction& u, const Representation& rep_in, const IdentityQuadrature& xq) {
    const auto& rep = as_interval(rep_in, "seminorms");
    const Prepared pr = prepare(rep, xq);
    const Eigen::VectorXd un = rep.nodal_values(u);
    const double s = rep.params().s;
    const double h = rep.h();
    const double a = rep.domain().lower();
    const double b = rep.domain().upper();
    const double T = tail_start(rep);
    const double u_mean = (rep.nodal_weights().transpose() / rep.domain().diameter()).dot(un);
    const auto ux = values_at(pr, un);

    Seminorms out;
    for (int k = 0; k < rep.cells(); ++k) {
        const double slope = (un[k + 1] - un[k]) / h;
        out.gradient_sq += h * slope * slope;
    }
    out.omega_double = omega_omega(rep, un, un);
    double cross = 0.0;
    for (std::size_t i = 0; i < pr.xs.size(); ++i) {
        const double d = ux[i] - u_mean;
        cross += pr.xs[i].w * d * d *
                 (std::pow(pr.xs[i].dr + T, -2.0 * s) + std::pow(pr.xs[i].dl + T, -2.0 * s)) / (2.0 * s);
        out.l1_s += pr.xs[i].w * std::abs(ux[i]) / (1.0 + std::pow(std::abs(pr.xs[i].x), 1.0 + 2.0 * s));
    }
    for (const auto& side : pr.ext) {
        const Eigen::VectorXd ue = side.psi * un;
        for (std::size_t q = 0; q < side.t.size(); ++q) {
            const auto qi = static_cast<Eigen::Index>(q);
            double s1 = 0.0;
            double su = 0.0;
            double suu = 0.0;
            double sq = 0.0;
            for (std::size_t i = 0; i < pr.xs.size(); ++i) {
                const double wk = pr.xs[i].w * kernel_to(pr.xs[i], side, side.t.x[q], pr.pk);
                s1 += wk;
                su += wk * ux[i];
                suu += wk * ux[i] * ux[i];
                sq += wk * (ux[i] - ue[qi]) * (ux[i] - ue[qi]);
            }
            out.omega_k += side.t.w[q] * 2.0 * (suu * s1 - su * su) / side.f[qi];
            cross += side.t.w[q] * sq;
            const double z = side.side > 0 ? b + side.t.x[q] : a - side.t.x[q];
            out.l1_s += side.t.w[q] * std::abs(ue[qi]) / (1.0 + std::pow(std::abs(z), 1.0 + 2.0 * s));
        }
    }
    out.l1_s += std::abs(u_mean) * (std::pow(std::abs(b) + T, -2.0 * s) + std::pow(std::abs(a) + T, -2.0 * s)) / (2.0 * s);
    out.q_double = out.omega_double + 2.0 * cross;
    out.s = std::sqrt(out.gradient_sq + out.q_double);
    out.s_k = std::sqrt(out.gradient_sq + out.omega_double + out.omega_k);
    return out;
}

IdentityStudy identity_refinement(Identity which, const ScalarField& u, const ScalarField& v, const Domain& d,
                                  double s, double h0, int levels, const IdentityQuadrature& xq) {
    if (levels < 1) {
        throw ConfigError("identity_refinement needs at least one level");
    }
    IdentityStudy out;
    for (int l = 0; l < levels; ++l) {
        const double h = std::ldexp(h0, -l);
        const Grid g = build_grid(d, h, default_r_trunc(d));
        const auto rep = make_representation(d, g, FracParams::make(d.dimension(), s));
        const GridFunction uu = GridFunction::sample(g, u);
        const GridFunction vv = GridFunction::sample(g, v);
        out.levels.push_back(which == Identity::Bilinear ? bilinear_equivalence(uu, vv, *rep, xq)
                                                         : integration_by_parts(uu, vv, *rep, {}, xq));
    }
    out.non_increasing = true;
    for (std::size_t l = 1; l < out.levels.size(); ++l) {
        if (out.levels[l].rel_error > std::max(out.levels[l - 1].rel_error, identity_roundoff_floor)) {
            out.non_increasing = false;
        }
    }
    return out;
}

MaxPrincipleSummary max_principle_campaign(std::size_t trials, std::uint64_t seed,
                                           std::span<const std::shared_ptr<const Representation>> reps,
                                           const ProblemSampler& sampler, double tol) {
    if (reps.empty()) {
        throw ConfigError("max_principle_campaign needs at least one discretisation");
    }
    MaxPrincipleSummary out;
    out.trials.resize(trials);
    const auto n = static_cast<long>(trials);
#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < n; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        const auto& rep = reps[idx % reps.size()];
        MaxPrincipleTrial t;
        t.index = idx;
        t.seed = splitmix64(seed + idx);
        t.s = rep->params().s;
        std::mt19937_64 rng(t.seed);
        const ProblemData pd = make_problem(*rep, sampler(rng), 1.0);
        const GridFunction u = solve_fixed_gamma(assemble(rep, pd), *rep);
        t.min_interior = rep->nodal_values(u).minCoeff();
        t.min_exterior = extend(u, *rep).exterior().minCoeff();
        t.violation = t.min_interior < -tol || t.min_exterior < t.min_interior - tol;
        out.trials[idx] = t;
    }
    out.worst_interior = std::numeric_limits<double>::infinity();
    out.worst_exterior_gap = std::numeric_limits<double>::infinity();
    for (const auto& t : out.trials) {
        out.violations += t.violation ? 1 : 0;
        out.worst_interior = std::min(out.worst_interior, t.min_interior);
        out.worst_exterior_gap = std::min(out.worst_exterior_gap, t.min_exterior - t.min_interior);
    }
    return out;
}

RateStudy rate_study(const GridFunction& u, const Representation& rep, std::optional<double> delta_lo,
                     std::optional<double> delta_hi, double angle) {
    RateStudy out;
    out.s = rep.params().s;
    out.gradient = exterior_gradient_rate(u, rep, delta_lo, delta_hi, angle);
    const auto& d = rep.domain();
    Point nu;
    Point foot;
    if (d.shape() == Shape::Interval) {
        const bool right = std::cos(angle) >= 0.0;
        nu = point1d(right ? 1.0 : -1.0);
        foot = point1d(right ? d.upper() : d.lower());
    } else {
        nu = Point(std::cos(angle), std::sin(angle));
        foot = d.center() + d.radius() * nu;
    }
    std::vector<double> lx;
    std::vector<double> ly;
    for (double delta : out.gradient.delta) {
        const double f = boundary_factor(foot + delta * nu, d, rep.params(), rep.rule());
        out.delta.push_back(delta);
        out.factor.push_back(f);
        lx.push_back(std::log(delta));
        ly.push_back(std::log(f));
    }
    out.factor_fit = fit_line(lx, ly);
    return out;
}

double neumann_residual(const ScalarField& g, const Representation& rep, std::span<const Point> checks) {
    const GridFunction u = GridFunction::sample(rep.grid(), g);
    double worst = 0.0;
    for (const auto& x : checks) {
        const double value = extension_value(u, rep, x);
        worst = std::max(worst, std::abs(neumann_derivative(value, g, x, rep.domain(), rep.params(), rep.rule())));
    }
    return worst;
}

std::vector<Point> neumann_check_points(const Domain& d) {
    std::vector<Point> out;
    const double scale = d.diameter();
    for (double delta : {0.01, 0.05, 0.2, 1.0}) {
        if (d.shape() == Shape::Interval) {
            out.push_back(point1d(d.upper() + delta * scale));
            out.push_back(point1d(d.lower() - delta * scale));
        } else {
            for (int k = 0; k < 4; ++k) {
                const double th = 0.3 + 0.5 * std::numbers::pi * k;
                out.push_back(d.center() + (d.radius() + delta * scale) * Point(std::cos(th), std::sin(th)));
            }
        }
    }
    return out;
}

ContractionStudy contraction_study(std::shared_ptr<const Representation> rep, const ProblemData& pd, double gamma0,
                                   std::span<const double> eps, const Eigen::VectorXd& phi1,
                                   const Eigen::VectorXd& phi2) {
    const Assembler parts(std::move(rep), pd);
    const FactoredSystem l(parts.system(gamma0));
    ContractionStudy out;
    for (double e : eps) {
        out.eps.push_back(e);
        out.rho.push_back(contraction_ratio(phi1, phi2, e, l, parts));
    }
    out.fit = fit_proportional(out.eps, out.rho);
    return out;
}

std::vector<SurrogateRow> w2p_study(const Domain& d, double s, double p, const Coefficients& c,
                                    std::span<const double> hs) {
    std::vector<SurrogateRow> out;
    for (double h : hs) {
        const Grid g = build_grid(d, h, default_r_trunc(d));
        const auto rep = make_representation(d, g, FracParams::make(d.dimension(), s));
        const ProblemData pd = make_problem(*rep, c, 1.0);
        const GridFunction u = solve_fixed_gamma(assemble(rep, pd), *rep);
        SurrogateRow row;
        row.s = s;
        row.p = p;
        row.h = h;
        row.w2p = w2p_surrogate(u, *rep, p);
        row.f_lp = lp_norm(pd.f, h, d.dimension(), p);
        row.ratio = row.f_lp > 0.0 ? row.w2p / row.f_lp : 0.0;
        out.push_back(row);
    }
    return out;
}

bool in_existence_range(int N, double s, double p) {
    const double n = N;
    const bool low = (n - 1.0) / (2.0 * n) < s && s < 0.5 && n < p && p < 1.0 / (1.0 - 2.0 * s);
    const bool high = p > n && 0.5 <= s && s < 0.5 + 1.0 / (2.0 * p);
    return low || high;
}

std::optional<std::string> existence_range_warning(int N, double s, double p) {
    if (in_existence_range(N, s, p)) {
        return std::nullopt;
    }
    return fmt::format(
        "(s, p) = ({}, {}) lies outside the existence ranges for N = {}: need {} < s < 1/2 with {} < p < 1/(1-2s), "
        "or 1/2 <= s < 1/2 + 1/(2p) with p > {}",
        s, p, N, (N - 1.0) / (2.0 * N), N, N);
}

}  // namespace mixedfrac
