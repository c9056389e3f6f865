#include "mixedfrac/representation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mixedfrac {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Integral of |z|^{-2s} over the unit square centred at the origin.
double unit_square_moment(double s) {
    const Rule1D& g = gauss_legendre(30);
    const double e = 2.0 - 2.0 * s;
    double sum = 0.0;
    for (std::size_t k = 0; k < g.x.size(); ++k) {
        const double th = 0.25 * std::numbers::pi * g.x[k];
        sum += g.w[k] * std::pow(0.5 / std::cos(th), e) / e;
    }
    return 8.0 * 0.25 * std::numbers::pi * sum;
}

// Integral of |w|^{p} over the square of side `side` centred at c (c away from 0).
double square_integral(const Point& c, double side, double p, int sub, const Rule1D& g) {
    const double hs = side / sub;
    double sum = 0.0;
    for (int a = 0; a < sub; ++a) {
        for (int b = 0; b < sub; ++b) {
            const double x0 = c.x() - 0.5 * side + a * hs;
            const double y0 = c.y() - 0.5 * side + b * hs;
            for (std::size_t i = 0; i < g.x.size(); ++i) {
                for (std::size_t j = 0; j < g.x.size(); ++j) {
                    const double r = std::hypot(x0 + hs * g.x[i], y0 + hs * g.x[j]);
                    sum += g.w[i] * g.w[j] * std::pow(r, p);
                }
            }
        }
    }
    return sum * hs * hs;
}

// Distance from an interior point x (relative to the centre) to the circle along e.
double ray_to_circle(const Point& x, const Point& e, double R) {
    const double b = x.dot(e);
    const double c = R * R - x.squaredNorm();
    return c / (b + std::sqrt(b * b + c));
}

// Integral of |x - z|^{-2-2s} over the exterior of the disk.
double exterior_mass(const Point& x, double R, double s) {
    const double delta = R - x.norm();
    const int n = static_cast<int>(std::clamp(std::ceil(60.0 * R / delta), 256.0, 1.0e6));
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double th = two_pi * k / n;
        sum += std::pow(ray_to_circle(x, Point(std::cos(th), std::sin(th)), R), -2.0 * s);
    }
    return sum * two_pi / n / (2.0 * s);
}

}  // namespace

WeightedPoints disk_exterior_rule(const Domain& d, double h, const QuadratureRule& q) {
    const double R = d.radius();
    std::vector<double> breaks{0.0};
    for (double t = h / 64.0; t < 4.0 * R; t *= 2.0) {
        breaks.push_back(t);
    }
    const double t_end = R * std::pow(10.0, q.far_decades);
    for (double t = 4.0 * R; t < t_end; t *= 8.0) {
        breaks.push_back(t);
    }
    breaks.push_back(t_end);
    const Nodes1D radial = composite(breaks, gauss_legendre(10));
    WeightedPoints out;
    for (std::size_t k = 0; k < radial.size(); ++k) {
        const double t = radial.x[k];
        const double rho = R + t;
        const int n = static_cast<int>(std::clamp(std::ceil(6.0 * two_pi * rho / (t + h)), 32.0, 4096.0));
        for (int m = 0; m < n; ++m) {
            const double th = two_pi * (m + 0.5) / n;
            out.x.push_back(d.center() + rho * Point(std::cos(th), std::sin(th)));
            out.w.push_back(radial.w[k] * rho * two_pi / n);
        }
    }
    return out;
}

PiecewiseConstant2D::PiecewiseConstant2D(const Domain& d, const Grid& g, const FracParams& p,
                                         const QuadratureRule& q)
    : Representation(d, g, p, q) {
    if (d.shape() != Shape::Disk || p.N != 2) {
        throw std::invalid_argument("PiecewiseConstant2D needs a disk and N = 2");
    }
    if (d.diameter() > 1.0 + 1e-12) {
        throw std::invalid_argument("nonlocal operator needs diam(Omega) <= 1; rescale the domain");
    }
    nodes_ = g.interior;
    for (const auto& ij : g.lattice) {
        span_ = std::max({span_, std::abs(ij[0]), std::abs(ij[1])});
    }
    span_ += 3;
    const std::size_t side = 2 * static_cast<std::size_t>(span_) + 1;
    index_.assign(side * side, -1);
    for (std::size_t k = 0; k < g.lattice.size(); ++k) {
        const auto [i, j] = g.lattice[k];
        index_[static_cast<std::size_t>(j + span_) * side + static_cast<std::size_t>(i + span_)] =
            static_cast<long>(k);
    }
    const auto n = static_cast<Eigen::Index>(nodes_.size());
    closure_ = Eigen::MatrixXd::Identity(n, n);
    build_strip();
    weights_ = Eigen::VectorXd::Constant(n, g.h * g.h);
    for (const auto& sp : strip_) {
        weights_[sp.owner] += sp.w;
    }
    assemble_rows();
}

long PiecewiseConstant2D::node_at(int i, int j) const {
    if (std::abs(i) > span_ || std::abs(j) > span_) {
        return -1;
    }
    const std::size_t side = 2 * static_cast<std::size_t>(span_) + 1;
    return index_[static_cast<std::size_t>(j + span_) * side + static_cast<std::size_t>(i + span_)];
}

long PiecewiseConstant2D::owner(const Point& x) const {
    const Point r = (x - domain_.center()) / grid_.h;
    if ((x - domain_.center()).norm() > domain_.radius() * (1.0 + 1e-12)) {
        return -1;
    }
    const int i0 = static_cast<int>(std::lround(r.x()));
    const int j0 = static_cast<int>(std::lround(r.y()));
    if (const long k = node_at(i0, j0); k >= 0) {
        return k;
    }
    long best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int dj = -3; dj <= 3; ++dj) {
        for (int di = -3; di <= 3; ++di) {
            const long k = node_at(i0 + di, j0 + dj);
            if (k < 0) {
                continue;
            }
            const double dist = (r - Point(i0 + di, j0 + dj)).squaredNorm();
            if (dist < best_d) {
                best_d = dist;
                best = k;
            }
        }
    }
    return best;
}

void PiecewiseConstant2D::build_strip() {
    const double R = domain_.radius();
    const double h = grid_.h;
    const int n_theta = static_cast<int>(std::ceil(two_pi * R / (0.25 * h)));
    std::vector<double> breaks;
    for (int k = 0; k <= 4; ++k) {
        breaks.push_back(R - 1.5 * h + 0.375 * h * k);
    }
    breaks.back() = R;
    const Nodes1D radial = composite(breaks, gauss_legendre(7));
    for (std::size_t k = 0; k < radial.size(); ++k) {
        const double rho = radial.x[k];
        for (int m = 0; m < n_theta; ++m) {
            const double th = two_pi * (m + 0.5) / n_theta;
            const Point x = domain_.center() + rho * Point(std::cos(th), std::sin(th));
            const Point r = (x - domain_.center()) / h;
            if (node_at(static_cast<int>(std::lround(r.x())), static_cast<int>(std::lround(r.y()))) >= 0) {
                continue;
            }
            strip_.push_back({x, radial.w[k] * rho * two_pi / n_theta, owner(x)});
        }
    }
}

Eigen::VectorXd PiecewiseConstant2D::nodal_values(const GridFunction& u) const {
    if (u.grid_fingerprint() != grid_.fingerprint) {
        throw std::invalid_argument("grid function belongs to a different grid");
    }
    return u.interior();
}

double PiecewiseConstant2D::square_moment(const Point& y, const Point& centre) const {
    const double h = grid_.h;
    const double p = -2.0 - 2.0 * params_.s;
    const double dist = (y - centre).lpNorm<Eigen::Infinity>();
    if (dist > 3.0 * h) {
        // two-point Gauss tensor rule
        const double o = 0.5 * h / std::numbers::sqrt3;
        double sum = 0.0;
        for (double dx : {-o, o}) {
            for (double dy : {-o, o}) {
                sum += std::pow((centre + Point(dx, dy) - y).norm(), p);
            }
        }
        return 0.25 * h * h * sum;
    }
    return square_integral(centre - y, h, p, dist > 1.5 * h ? 1 : 3, gauss_legendre(7));
}

void PiecewiseConstant2D::extension_row(const Point& y, RowRef psi) const {
    if (!(domain_.signed_distance(y) > 0.0)) {
        throw std::invalid_argument("extension is defined outside the closed disk only");
    }
    const double p = -2.0 - 2.0 * params_.s;
    for (Eigen::Index j = 0; j < psi.size(); ++j) {
        psi[j] = square_moment(y, nodes_[static_cast<std::size_t>(j)]);
    }
    for (const auto& sp : strip_) {
        psi[sp.owner] += sp.w * std::pow((sp.x - y).norm(), p);
    }
    psi /= psi.sum();
}

double PiecewiseConstant2D::evaluate(const Eigen::VectorXd& nodal, const Point& x) const {
    const long k = owner(x);
    if (k < 0) {
        throw std::invalid_argument("evaluate: point outside the closed disk");
    }
    return nodal[k];
}

void PiecewiseConstant2D::assemble_rows() {
    const double h = grid_.h;
    const double s = params_.s;
    const double C = params_.C;
    const double R = domain_.radius();
    const double p = -2.0 - 2.0 * s;
    const auto n = static_cast<Eigen::Index>(nodes_.size());
    const auto& lat = grid_.lattice;

    // lattice squares: table over offsets, scaled by h^{-2s}
    int reach = 0;
    for (const auto& ij : lat) {
        reach = std::max({reach, std::abs(ij[0]), std::abs(ij[1])});
    }
    reach *= 2;
    const auto side = static_cast<std::size_t>(2 * reach + 1);
    std::vector<double> table(side * side, 0.0);
    const Rule1D& g7 = gauss_legendre(7);
    for (int dj = -reach; dj <= reach; ++dj) {
        for (int di = -reach; di <= reach; ++di) {
            if (di == 0 && dj == 0) {
                continue;
            }
            const int m = std::max(std::abs(di), std::abs(dj));
            const int sub = m <= 1 ? 4 : (m <= 3 ? 2 : 1);
            table[static_cast<std::size_t>(dj + reach) * side + static_cast<std::size_t>(di + reach)] =
                square_integral(Point(di, dj), 1.0, p, sub, g7);
        }
    }
    const double hs = std::pow(h, -2.0 * s);
    const double near = C * unit_square_moment(s) * hs / 4.0;

    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto [ir, jr] = lat[static_cast<std::size_t>(r)];
        for (Eigen::Index k = 0; k < n; ++k) {
            if (k == r) {
                continue;
            }
            const auto [ik, jk] = lat[static_cast<std::size_t>(k)];
            c(r, k) += C * hs *
                       table[static_cast<std::size_t>(jk - jr + reach) * side + static_cast<std::size_t>(ik - ir + reach)];
        }
        for (const auto& sp : strip_) {
            if (sp.owner != r) {
                c(r, sp.owner) += C * sp.w * std::pow((sp.x - nodes_[static_cast<std::size_t>(r)]).norm(), p);
            }
        }
        for (const auto& [di, dj] : {std::pair{1, 0}, std::pair{-1, 0}, std::pair{0, 1}, std::pair{0, -1}}) {
            if (const long nb = node_at(ir + di, jr + dj); nb >= 0) {
                c(r, nb) += near;
            }
        }
    }

    const WeightedPoints ext = disk_exterior_rule(domain_, h, rule_);
    const Eigen::RowVectorXd m = weights_.transpose() / weights_.sum();
    const Eigen::MatrixXd psi = extension_matrix(ext.x).rowwise() - m;
    Eigen::MatrixXd gm(n, static_cast<Eigen::Index>(ext.x.size()));
#pragma omp parallel for schedule(static)
    for (Eigen::Index r = 0; r < n; ++r) {
        for (std::size_t q = 0; q < ext.x.size(); ++q) {
            gm(r, static_cast<Eigen::Index>(q)) = ext.w[q] * std::pow((ext.x[q] - nodes_[static_cast<std::size_t>(r)]).norm(), p);
        }
    }
    c.noalias() += C * (gm * psi);
    for (Eigen::Index r = 0; r < n; ++r) {
        c.row(r) += C * exterior_mass(nodes_[static_cast<std::size_t>(r)] - domain_.center(), R, s) * m;
    }

    rows_ = -c;
    for (Eigen::Index r = 0; r < n; ++r) {
        rows_(r, r) = 0.0;
        rows_(r, r) = -rows_.row(r).sum();
    }
}

}  // namespace mixedfrac
