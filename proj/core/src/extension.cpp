#include "mixedfrac/extension.hpp"

#include "mixedfrac/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mixedfrac {

namespace {

void require_cache(const GridFunction& u, const Representation& rep) {
    if (!u.has_exterior()) {
        throw std::logic_error("grid function has no exterior values; call extend() first");
    }
    if (!u.exterior_matches(rep.tag())) {
        throw std::logic_error("exterior values are stale for this discretisation; call extend() again");
    }
}

double neumann_1d(double value, const std::function<double(const Point&)>& g, double x, const Domain& d,
                  const FracParams& p, const QuadratureRule& q) {
    const double a = d.lower();
    const double b = d.upper();
    const double len = b - a;
    const double pk = -1.0 - 2.0 * p.s;
    const bool right = x > b;
    const double r0 = right ? x - b : a - x;
    const auto breaks = graded_breaks(std::ldexp(len, -q.grading_levels), len, q.panel_ratio);
    const Nodes1D u = composite(breaks, gauss_legendre(q.panel_order));
    double sum = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double y = right ? b - u.x[k] : a + u.x[k];
        sum += u.w[k] * (value - g(point1d(y))) * std::pow(r0 + u.x[k], pk);
    }
    return p.C * sum;
}

double neumann_2d(double value, const std::function<double(const Point&)>& g, const Point& x, const Domain& d,
                  const FracParams& p, const QuadratureRule& q) {
    const double R = d.radius();
    const Point rel = d.center() - x;
    const double D = rel.norm();
    const double base = std::atan2(rel.y(), rel.x());
    const double pk = -1.0 - 2.0 * p.s;
    const double phi_m = std::asin(std::min(1.0, R / D));
    const Rule1D& ga = gauss_legendre(q.panel_order);
    const Rule1D& gr = gauss_legendre(10);
    auto ray = [&](double phi) {
        const Chord ch = disk_chord(D, R, phi);
        const double len = ch.r_out - ch.r_in;
        const auto breaks = graded_breaks(std::max(len * 1e-9, 1e-300), len, 2.0);
        double acc = 0.0;
        for (double sign : {-1.0, 1.0}) {
            const double th = base + sign * phi;
            const Point e(std::cos(th), std::sin(th));
            double part = 0.0;
            for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
                const double lo = breaks[k];
                const double w = breaks[k + 1] - lo;
                for (std::size_t j = 0; j < gr.x.size(); ++j) {
                    const double r = ch.r_in + lo + w * gr.x[j];
                    part += w * gr.w[j] * (value - g(x + r * e)) * std::pow(r, pk);
                }
            }
            acc += part;
        }
        return acc;
    };
    const double half = 0.5 * phi_m;
    const auto breaks = graded_breaks(std::ldexp(half, -30), half, 2.0);
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double lo = breaks[k];
        const double len = breaks[k + 1] - lo;
        for (std::size_t j = 0; j < ga.x.size(); ++j) {
            sum += len * ga.w[j] * ray(lo + len * ga.x[j]);
        }
    }
    for (std::size_t j = 0; j < ga.x.size(); ++j) {
        const double v = ga.x[j];
        sum += ga.w[j] * 2.0 * half * v * ray(phi_m - half * v * v);
    }
    return p.C * sum;
}

}  // namespace

GridFunction extend(const GridFunction& u, const Representation& rep) {
    GridFunction out = u;
    const Eigen::VectorXd nodal = rep.nodal_values(u);
    out.attach_exterior(rep.exterior_extension() * nodal, rep.tag());
    return out;
}

double extension_value(const GridFunction& u, const Representation& rep, const Point& y) {
    Eigen::RowVectorXd psi(rep.node_count());
    rep.extension_row(y, psi);
    return psi.dot(rep.nodal_values(u));
}

double neumann_derivative(const GridFunction& u_ext, std::size_t k, const Representation& rep) {
    require_cache(u_ext, rep);
    const auto& g = rep.grid();
    if (k >= g.exterior.size()) {
        throw std::out_of_range("exterior node index out of range");
    }
    const Point& x = g.exterior[k].position;
    const double f = boundary_factor(x, rep.domain(), rep.params(), rep.rule());
    Eigen::RowVectorXd psi(rep.node_count());
    rep.extension_row(x, psi);
    const double mean = psi.dot(rep.nodal_values(u_ext));
    return rep.params().C * f * (u_ext.exterior()[static_cast<Eigen::Index>(k)] - mean);
}

double neumann_derivative(double value, const std::function<double(const Point&)>& g, const Point& x,
                          const Domain& d, const FracParams& p, const QuadratureRule& q) {
    if (!(d.signed_distance(x) > 0.0)) {
        throw std::invalid_argument("nonlocal normal derivative is defined at exterior points only");
    }
    return d.shape() == Shape::Interval ? neumann_1d(value, g, x.x(), d, p, q) : neumann_2d(value, g, x, d, p, q);
}

GradientRate exterior_gradient_rate(const GridFunction& u, const Representation& rep, std::optional<double> delta_lo,
                                    std::optional<double> delta_hi, double angle) {
    const auto& g = rep.grid();
    const auto& d = rep.domain();
    const double lo = delta_lo.value_or(g.delta_min) * (1.0 - 1e-12);
    const double hi = delta_hi.value_or(g.h) * (1.0 + 1e-12);
    std::vector<double> shells;
    for (double s : g.shells) {
        if (s >= lo && s <= hi) {
            shells.push_back(s);
        }
    }
    if (shells.size() < 5) {
        throw std::invalid_argument("exterior_gradient_rate needs at least five shells in the fitting window");
    }

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
    const Point tangent(-nu.y(), nu.x());
    const Eigen::VectorXd nodal = rep.nodal_values(u);
    Eigen::RowVectorXd psi(rep.node_count());
    auto u1 = [&](const Point& y) {
        rep.extension_row(y, psi);
        return psi.dot(nodal);
    };

    GradientRate out;
    const double scale = std::max(1.0, nodal.cwiseAbs().maxCoeff());
    for (double delta : shells) {
        const Point x = foot + delta * nu;
        const double eta = 0.25 * delta;
        const double dn = (u1(x + eta * nu) - u1(x - eta * nu)) / (2.0 * eta);
        double dt = 0.0;
        if (d.dimension() == 2) {
            dt = (u1(x + eta * tangent) - u1(x - eta * tangent)) / (2.0 * eta);
        }
        out.delta.push_back(delta);
        out.gradient.push_back(std::hypot(dn, dt));
    }
    const double gmax = *std::max_element(out.gradient.begin(), out.gradient.end());
    if (gmax <= 1e-10 * scale) {
        out.flat = true;
        out.slope = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    std::vector<double> lx;
    std::vector<double> ly;
    std::vector<double> linv;
    for (std::size_t k = 0; k < out.delta.size(); ++k) {
        lx.push_back(std::log(out.delta[k]));
        ly.push_back(std::log(std::max(out.gradient[k], 1e-300)));
        linv.push_back(-lx.back());
    }
    const LineFit power = fit_line(lx, ly);
    out.slope = power.slope;
    out.ci_low = power.slope - power.ci_half;
    out.ci_high = power.slope + power.ci_half;
    out.r2 = power.r2;

    const LineFit logm = fit_line(linv, out.gradient);
    out.log_coefficient = logm.slope;
    double rss_power = 0.0;
    for (std::size_t k = 0; k < out.delta.size(); ++k) {
        const double pred = std::exp(power.intercept + power.slope * lx[k]);
        rss_power += (out.gradient[k] - pred) * (out.gradient[k] - pred);
    }
    out.aic_power = aic(rss_power, out.delta.size(), 2);
    out.aic_log = aic(logm.rss, out.delta.size(), 2);
    out.log_preferred = out.aic_log < out.aic_power;
    return out;
}

}  // namespace mixedfrac
