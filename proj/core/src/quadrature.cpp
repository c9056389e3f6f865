#include "mixedfrac/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <iterator>
#include <string>
#include <utility>
#include <numeric>
#include <stdexcept>

namespace mixedfrac {

namespace {

template <unsigned N>
Rule1D make_rule() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& abs = G::abscissa();
    const auto& wts = G::weights();
    Rule1D r;
    // Boost stores the non-negative half of the symmetric rule on [-1, 1].
    for (std::size_t k = 0; k < abs.size(); ++k) {
        const double t = abs[k];
        const double wk = 0.5 * wts[k];
        if (t == 0.0) {
            r.x.push_back(0.5);
            r.w.push_back(wk);
        } else {
            r.x.push_back(0.5 - 0.5 * t);
            r.w.push_back(wk);
            r.x.push_back(0.5 + 0.5 * t);
            r.w.push_back(wk);
        }
    }
    std::vector<std::size_t> idx(r.x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return r.x[i] < r.x[j]; });
    Rule1D out;
    for (auto i : idx) {
        out.x.push_back(r.x[i]);
        out.w.push_back(r.w[i]);
    }
    return out;
}

Rule1D symmetric_rule(std::initializer_list<std::pair<double, double>> half) {
    Rule1D r;
    for (const auto& [t, w] : half) {
        r.x.push_back(0.5 - 0.5 * t);
        r.w.push_back(0.5 * w);
    }
    for (auto it = std::rbegin(half); it != std::rend(half); ++it) {
        if (it->first != 0.0) {
            r.x.push_back(0.5 + 0.5 * it->first);
            r.w.push_back(0.5 * it->second);
        }
    }
    return r;
}

}  // namespace

const Rule1D& gauss_legendre(int order) {
    static const Rule1D r3 = symmetric_rule({{0.7745966692414833770, 5.0 / 9.0}, {0.0, 8.0 / 9.0}});
    static const Rule1D r4 = symmetric_rule(
        {{0.8611363115940525752, 0.3478548451374538574}, {0.3399810435848562648, 0.6521451548625461426}});
    static const Rule1D r7 = make_rule<7>();
    static const Rule1D r10 = make_rule<10>();
    static const Rule1D r15 = make_rule<15>();
    static const Rule1D r20 = make_rule<20>();
    static const Rule1D r25 = make_rule<25>();
    static const Rule1D r30 = make_rule<30>();
    switch (order) {
        case 3: return r3;
        case 4: return r4;
        case 7: return r7;
        case 10: return r10;
        case 15: return r15;
        case 20: return r20;
        case 25: return r25;
        case 30: return r30;
        default: throw std::invalid_argument("unsupported Gauss-Legendre order " + std::to_string(order));
    }
}

void Nodes1D::append(double a, double b, const Rule1D& rule) {
    const double len = b - a;
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
        x.push_back(a + len * rule.x[k]);
        w.push_back(len * rule.w[k]);
    }
}

double Nodes1D::weight_sum() const { return std::accumulate(w.begin(), w.end(), 0.0); }

std::vector<double> graded_breaks(double t_min, double t_max, double ratio, std::span<const double> extra) {
    if (!(t_min > 0.0) || !(t_max > t_min) || !(ratio > 1.0)) {
        throw std::invalid_argument("graded_breaks: need 0 < t_min < t_max and ratio > 1");
    }
    std::vector<double> b{0.0};
    for (double t = t_min; t < t_max; t *= ratio) {
        b.push_back(t);
    }
    b.push_back(t_max);
    for (double e : extra) {
        if (e > 0.0 && e < t_max) {
            b.push_back(e);
        }
    }
    std::sort(b.begin(), b.end());
    // drop slivers created by inserted breakpoints
    std::vector<double> out{b.front()};
    for (std::size_t k = 1; k < b.size(); ++k) {
        if (b[k] - out.back() > 1e-14 * std::max(1.0, std::abs(b[k]))) {
            out.push_back(b[k]);
        } else if (k == b.size() - 1) {
            out.back() = b[k];
        }
    }
    return out;
}

Nodes1D composite(std::span<const double> breaks, const Rule1D& rule) {
    Nodes1D n;
    n.x.reserve(rule.x.size() * breaks.size());
    n.w.reserve(rule.x.size() * breaks.size());
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        n.append(breaks[k], breaks[k + 1], rule);
    }
    return n;
}

Nodes1D exterior_panels(double length, const QuadratureRule& q, std::span<const double> extra) {
    const double t_min = std::ldexp(length, -q.grading_levels);
    const double t_max = length * std::pow(10.0, q.far_decades);
    const auto b = graded_breaks(t_min, t_max, q.panel_ratio, extra);
    return composite(b, gauss_legendre(q.panel_order));
}

}  // namespace mixedfrac
