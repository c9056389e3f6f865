#include "mixedfrac/verification.hpp"

#include "mixedfrac/errors.hpp"
#include "mixedfrac/kernels.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace mixedfrac {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

template <class F>
double gk(F&& f, double lo, double hi, double tol) {
    if (hi <= lo) {
        return 0.0;
    }
    // mapped to [0, 1]: Boost's error control misbehaves on very short intervals
    const double w = hi - lo;
    return w * GK::integrate([&](double x) { return f(lo + w * x); }, 0.0, 1.0, 15, tol);
}

// int_{r0}^{r1} f(r) dr with f singular or steep at r = 0, split geometrically.
template <class F>
double graded(F&& f, double r0, double r1, double tol) {
    double total = 0.0;
    double lo = r0;
    if (r0 <= 0.0) {
        // bounded integrand: the first 2^-40 of the range by its midpoint value
        lo = r1 * std::ldexp(1.0, -40);
        total += lo * f(0.5 * lo);
    }
    while (lo < r1) {
        const double hi = std::min(r1, 2.0 * lo);
        total += gk(f, lo, hi, tol);
        lo = hi;
    }
    return total;
}

// Integral over [0, inf) of a function with a possible endpoint singularity at
// 0 and algebraic decay: graded Gauss-Kronrod on [0, L], exp-sinh beyond.
template <class F>
double half_line(F&& f, double L, double tol) {
    boost::math::quadrature::exp_sinh<double> es;
    const double near = graded(f, 0.0, L, tol);
    const double far = es.integrate(f, L, std::numeric_limits<double>::infinity(), tol);
    return near + far;
}

// As half_line, but stopping at `cutoff`.
template <class F>
double truncated_half_line(F&& f, double L, double cutoff, double tol) {
    if (!std::isfinite(cutoff)) {
        return half_line(f, L, tol);
    }
    double total = graded(f, 0.0, std::min(L, cutoff), tol);
    for (double lo = L; lo < cutoff; lo *= 2.0) {
        total += gk(f, lo, std::min(cutoff, 2.0 * lo), tol);
    }
    return total;
}

// u~ at distance t beyond one endpoint, every distance measured from the
// target to avoid cancellation.
class ExtensionOracle {
public:
    ExtensionOracle(const PiecewiseLinear1D& rep, const Eigen::VectorXd& nodal, double tol)
        : rep_(rep), u_(nodal), tol_(tol), pk_(-1.0 - 2.0 * rep.params().s) {}

    double beyond(int side, double t) const {
        const auto key = std::make_pair(side, t);
        if (const auto it = cache_.find(key); it != cache_.end()) {
            return it->second;
        }
        if (!(t > 0.0)) {
            throw std::invalid_argument("oracle extension needs a positive distance");
        }
        const int M = rep_.cells();
        const double h = rep_.h();
        if (t > 1e9 * rep_.domain().diameter()) {
            // u~ = mean + O(diam / t) there
            return 0.5 * (u_.head(u_.size() - 1).mean() + u_.tail(u_.size() - 1).mean());
        }
        const double scale = t + rep_.domain().diameter();
        double num = 0.0;
        double den = 0.0;
        for (int k = 0; k < M; ++k) {
            // cell at distances [t + k h, t + (k+1) h]; node near = end k, far = end k+1
            const int near = side > 0 ? M - k : k;
            const int far = side > 0 ? M - k - 1 : k + 1;
            const double r0 = t + k * h;
            auto value = [&](double r) {
                const double th = (r - r0) / h;
                return ((1.0 - th) * u_[near] + th * u_[far]) * std::pow(r / scale, pk_);
            };
            auto weight = [&](double r) { return std::pow(r / scale, pk_); };
            num += cell(value, r0, t, k);
            den += cell(weight, r0, t, k);
        }
        const double v = num / den;
        cache_.emplace(key, v);
        return v;
    }

    double at(double y) const {
        const double a = rep_.domain().lower();
        const double b = rep_.domain().upper();
        if (y > b) {
            return beyond(1, y - b);
        }
        if (y < a) {
            return beyond(-1, a - y);
        }
        throw std::invalid_argument("oracle_extension needs an exterior point");
    }

private:
    template <class F>
    double cell(F& f, double r0, double t, int k) const {
        const double h = rep_.h();
        if (k == 0 && t < h) {
            // first cell: refine towards distance t
            double total = 0.0;
            double lo = r0;
            double width = t;
            while (lo < r0 + h) {
                const double hi = std::min(r0 + h, lo + width);
                total += gk(f, lo, hi, tol_);
                lo = hi;
                width *= 2.0;
            }
            return total;
        }
        return gk(f, r0, r0 + h, tol_);
    }

    const PiecewiseLinear1D& rep_;
    const Eigen::VectorXd& u_;
    double tol_;
    double pk_;
    mutable std::map<std::pair<int, double>, double> cache_;
};

double frac_laplacian_with(const PiecewiseLinear1D& rep, const Eigen::VectorXd& u, std::size_t i,
                           const ExtensionOracle& ext, double tol,
                           double cutoff = std::numeric_limits<double>::infinity()) {
    const int M = rep.cells();
    const auto n = static_cast<int>(i);
    if (n < 1 || n >= M) {
        throw std::out_of_range("oracle_frac_laplacian: interior node index out of range");
    }
    const double h = rep.h();
    const double s = rep.params().s;
    const double pk = -1.0 - 2.0 * s;
    const double len = rep.domain().diameter();
    const double ui = u[n];
    auto pl = [&](int k, double th) { return (1.0 - th) * u[k] + th * u[k + 1]; };

    // near field: quadratic through the three nearest nodes
    const double d2 = (u[n + 1] - 2.0 * ui + u[n - 1]) / (h * h);
    double acc = -d2 * std::pow(h, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    // remaining cells of the domain, by distance r from x_i
    for (int k = n + 1; k < M; ++k) {
        const double r0 = (k - n) * h;
        acc += gk([&](double r) { return (ui - pl(k, (r - r0) / h)) * std::pow(r, pk); }, r0, r0 + h, tol);
    }
    for (int k = 0; k < n - 1; ++k) {
        const double r0 = (n - k - 1) * h;
        acc += gk([&](double r) { return (ui - pl(k, 1.0 - (r - r0) / h)) * std::pow(r, pk); }, r0, r0 + h, tol);
    }
    // exterior: distances t beyond each endpoint
    const double dr = (M - n) * h;
    const double dl = n * h;
    acc += truncated_half_line([&](double t) { return (ui - ext.beyond(1, t)) * std::pow(dr + t, pk); }, len, cutoff,
                               tol);
    acc += truncated_half_line([&](double t) { return (ui - ext.beyond(-1, t)) * std::pow(dl + t, pk); }, len,
                               cutoff, tol);
    return rep.params().C * acc;
}

// F at distance t beyond the boundary of an interval of length len, in units
// of (t + len)^{-1-2s}.
double oracle_f_scaled(double t, double len, double pk, double tol) {
    const double scale = t + len;
    auto f = [&](double r) { return std::pow((t + r) / scale, pk); };
    double total = 0.0;
    double lo = 0.0;
    double width = t;
    while (lo < len) {
        const double hi = std::min(len, lo + width);
        total += gk(f, lo, hi, tol);
        lo = hi;
        width *= 2.0;
    }
    return total;
}

}  // namespace

double oracle_extension(const PiecewiseLinear1D& rep, const Eigen::VectorXd& nodal, double y, double tol) {
    return ExtensionOracle(rep, nodal, tol).at(y);
}

double oracle_frac_laplacian(const PiecewiseLinear1D& rep, const Eigen::VectorXd& nodal, std::size_t i, double tol) {
    // constants are annihilated exactly
    const Eigen::VectorXd centred = nodal.array() - nodal.mean();
    const ExtensionOracle ext(rep, centred, tol);
    return frac_laplacian_with(rep, centred, i, ext, tol);
}

double oracle_regional_kernel(double x, double y, const Domain& d, const FracParams& p, double tol) {
    if (d.shape() != Shape::Interval) {
        throw ConfigError("the regional kernel oracle covers intervals only");
    }
    const double a = d.lower();
    const double b = d.upper();
    const double len = b - a;
    const double pk = -1.0 - 2.0 * p.s;
    double k = 0.0;
    for (const auto& [dx, dy] : {std::pair{b - x, b - y}, std::pair{x - a, y - a}}) {
        k += half_line(
            [&, dx = dx, dy = dy](double t) {
                if (!std::isfinite(t)) {
                    return 0.0;
                }
                return std::pow((dx + t) / (t + len), pk) * std::pow(dy + t, pk) / oracle_f_scaled(t, len, pk, 1e-14);
            },
            len, tol);
    }
    return std::pow(std::abs(x - y), pk) + k;
}

OracleRow compare_operator_oracle(const PiecewiseLinear1D& rep, const Eigen::VectorXd& nodal, double tol,
                                  double cutoff) {
    const Eigen::VectorXd centred = nodal.array() - nodal.mean();
    const ExtensionOracle ext(rep, centred, tol);
    const Eigen::VectorXd lib = rep.nonlocal_rows() * nodal;
    OracleRow row{"frac_laplacian", 0, 0.0, 0.0, tol};
    for (int n = 1; n < rep.cells(); ++n) {
        const double ref = frac_laplacian_with(rep, centred, static_cast<std::size_t>(n), ext, tol, cutoff);
        const double err = std::abs(lib[n - 1] - ref);
        row.max_abs = std::max(row.max_abs, err);
        row.max_rel = std::max(row.max_rel, err / std::max(std::abs(ref), 1e-300));
        ++row.samples;
    }
    return row;
}

OracleRow compare_kernel_oracle(const Representation& rep, std::size_t stride, double tol) {
    if (rep.domain().shape() != Shape::Interval) {
        throw ConfigError("the regional kernel oracle covers intervals only");
    }
    const auto& nodes = rep.grid().interior;
    const std::size_t step = std::max<std::size_t>(1, stride);
    OracleRow row{"regional_kernel", 0, 0.0, 0.0, tol};
    for (std::size_t i = 0; i < nodes.size(); i += step) {
        for (std::size_t j = i + step; j < nodes.size(); j += step) {
            const double lib = regional_kernel(nodes[i], nodes[j], rep.domain(), rep.params(), rep.rule()).value;
            const double ref = oracle_regional_kernel(nodes[i].x(), nodes[j].x(), rep.domain(), rep.params(), tol);
            const double err = std::abs(lib - ref);
            row.max_abs = std::max(row.max_abs, err);
            row.max_rel = std::max(row.max_rel, err / std::abs(ref));
            ++row.samples;
        }
    }
    return row;
}

}  // namespace mixedfrac
