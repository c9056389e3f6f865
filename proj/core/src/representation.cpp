#include "mixedfrac/representation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mixedfrac {

GridFunction Representation::from_interior(const Eigen::VectorXd& interior) const {
    if (interior.size() != closure_.cols()) {
        throw std::invalid_argument("interior vector size does not match the grid");
    }
    const Eigen::VectorXd nodal = closure_ * interior;
    Eigen::VectorXd bd(static_cast<Eigen::Index>(grid_.boundary.size()));
    for (std::size_t k = 0; k < grid_.boundary.size(); ++k) {
        bd[static_cast<Eigen::Index>(k)] = evaluate(nodal, grid_.boundary[k]);
    }
    return {grid_, interior, std::move(bd)};
}

Eigen::MatrixXd Representation::extension_matrix(std::span<const Point> ys) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(ys.size()), node_count());
    const auto n = static_cast<long>(ys.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (long k = 0; k < n; ++k) {
        extension_row(ys[static_cast<std::size_t>(k)], out.row(k));
    }
    return out;
}

const Eigen::MatrixXd& Representation::exterior_extension() const {
    std::call_once(exterior_once_, [this] {
        std::vector<Point> ys;
        ys.reserve(grid_.exterior.size());
        for (const auto& e : grid_.exterior) {
            ys.push_back(e.position);
        }
        exterior_ = extension_matrix(ys);
    });
    return exterior_;
}

PiecewiseLinear1D::PiecewiseLinear1D(const Domain& d, const Grid& g, const FracParams& p, const QuadratureRule& q)
    : Representation(d, g, p, q) {
    if (d.shape() != Shape::Interval || p.N != 1) {
        throw std::invalid_argument("PiecewiseLinear1D needs an interval and N = 1");
    }
    if (d.diameter() > 1.0 + 1e-12) {
        throw std::invalid_argument("nonlocal operator needs diam(Omega) <= 1; rescale the domain");
    }
    cells_ = static_cast<int>(g.interior.size()) + 1;
    h_ = g.h;
    nodes_.reserve(static_cast<std::size_t>(cells_) + 1);
    for (int k = 0; k <= cells_; ++k) {
        nodes_.push_back(point1d(d.lower() + k * h_));
    }
    nodes_.back() = point1d(d.upper());
    weights_ = Eigen::VectorXd::Constant(cells_ + 1, h_);
    weights_[0] = weights_[cells_] = 0.5 * h_;

    const int n = cells_ - 1;
    closure_ = Eigen::MatrixXd::Zero(cells_ + 1, n);
    for (int k = 0; k < n; ++k) {
        closure_(k + 1, k) = 1.0;
    }
    closure_(0, 0) = 4.0 / 3.0;
    closure_(0, 1) = -1.0 / 3.0;
    closure_(cells_, n - 1) = 4.0 / 3.0;
    closure_(cells_, n - 2) = -1.0 / 3.0;

    assemble_rows();
}

Eigen::VectorXd PiecewiseLinear1D::nodal_values(const GridFunction& u) const {
    if (u.grid_fingerprint() != grid_.fingerprint) {
        throw std::invalid_argument("grid function belongs to a different grid");
    }
    Eigen::VectorXd v(cells_ + 1);
    v[0] = u.boundary()[0];
    v.segment(1, cells_ - 1) = u.interior();
    v[cells_] = u.boundary()[1];
    return v;
}

std::pair<double, double> PiecewiseLinear1D::cell_moments(double rn, double p) const {
    if (rn < 2.0 * h_) {
        const double j0 = power_integral(p, rn, rn + h_);
        const double j1 = power_integral(p + 1.0, rn, rn + h_);
        const double far = (j1 - rn * j0) / h_;
        return {j0 - far, far};
    }
    const Rule1D& g = gauss_legendre(rn < 8.0 * h_ ? rule_.cell_order_near : rule_.cell_order_far);
    double near = 0.0;
    double far = 0.0;
    for (std::size_t k = 0; k < g.x.size(); ++k) {
        const double f = g.w[k] * h_ * std::pow(rn + h_ * g.x[k], p);
        far += g.x[k] * f;
        near += (1.0 - g.x[k]) * f;
    }
    return {near, far};
}

void PiecewiseLinear1D::numerators_beyond(int side, double t, RowRef out) const {
    const double pk = -1.0 - 2.0 * params_.s;
    out.setZero();
    for (int k = 0; k < cells_; ++k) {
        if (side > 0) {
            const auto [near, far] = cell_moments(t + (cells_ - 1 - k) * h_, pk);
            out[k + 1] += near;
            out[k] += far;
        } else {
            const auto [near, far] = cell_moments(t + k * h_, pk);
            out[k] += near;
            out[k + 1] += far;
        }
    }
}

void PiecewiseLinear1D::extension_numerators(double y, RowRef out) const {
    if (y > domain_.upper()) {
        numerators_beyond(1, y - domain_.upper(), out);
    } else if (y < domain_.lower()) {
        numerators_beyond(-1, domain_.lower() - y, out);
    } else {
        throw std::invalid_argument("extension is defined outside the closed interval only");
    }
}

void PiecewiseLinear1D::extension_row_beyond(int side, double t, RowRef psi) const {
    if (!(t > 0.0)) {
        throw std::invalid_argument("extension is defined outside the closed interval only");
    }
    numerators_beyond(side, t, psi);
    psi /= psi.sum();
}

void PiecewiseLinear1D::extension_row(const Point& y, RowRef psi) const {
    extension_numerators(y.x(), psi);
    psi /= psi.sum();
}

double PiecewiseLinear1D::evaluate(const Eigen::VectorXd& nodal, const Point& x) const {
    const double t = (x.x() - domain_.lower()) / h_;
    if (t < -1e-12 || t > cells_ + 1e-12) {
        throw std::invalid_argument("evaluate: point outside the closed interval");
    }
    const int k = std::clamp(static_cast<int>(std::floor(t)), 0, cells_ - 1);
    const double th = std::clamp(t - k, 0.0, 1.0);
    return (1.0 - th) * nodal[k] + th * nodal[k + 1];
}

void PiecewiseLinear1D::assemble_rows() {
    const int M = cells_;
    const int n = M - 1;
    const double s = params_.s;
    const double C = params_.C;
    const double pk = -1.0 - 2.0 * s;
    const double a = domain_.lower();
    const double b = domain_.upper();
    const double len = b - a;

    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, M + 1);

    // interior cells: moments depend only on the node-to-cell offset
    std::vector<std::pair<double, double>> mom(static_cast<std::size_t>(M));
    for (int d = 1; d < M; ++d) {
        mom[static_cast<std::size_t>(d)] = cell_moments(d * h_, pk);
    }
    const double near_field = C * std::pow(h_, -2.0 * s) / (2.0 - 2.0 * s);
    for (int r = 0; r < n; ++r) {
        const int i = r + 1;
        c(r, i - 1) += near_field;
        c(r, i + 1) += near_field;
        for (int k = i + 1; k < M; ++k) {
            const auto& [near, far] = mom[static_cast<std::size_t>(k - i)];
            c(r, k) += C * near;
            c(r, k + 1) += C * far;
        }
        for (int k = 0; k + 1 < i; ++k) {
            const auto& [near, far] = mom[static_cast<std::size_t>(i - k - 1)];
            c(r, k + 1) += C * near;
            c(r, k) += C * far;
        }
    }

    // exterior: psi_j = m_j + (psi_j - m_j), the constant part integrated exactly
    const Nodes1D t = exterior_panels(len, rule_);
    const auto Q = static_cast<Eigen::Index>(t.size());
    const Eigen::RowVectorXd m = weights_.transpose() / len;
    Eigen::MatrixXd psi_r(Q, M + 1);
#pragma omp parallel for schedule(dynamic, 16)
    for (Eigen::Index q = 0; q < Q; ++q) {
        extension_row_beyond(1, t.x[static_cast<std::size_t>(q)], psi_r.row(q));
        psi_r.row(q) -= m;
    }
    // the uniform partition is symmetric: left-side weights are the mirror image
    const Eigen::MatrixXd psi_l = psi_r.rowwise().reverse();
    Eigen::MatrixXd g_r(n, Q);
    Eigen::MatrixXd g_l(n, Q);
    for (int r = 0; r < n; ++r) {
        const double x = nodes_[static_cast<std::size_t>(r + 1)].x();
        for (Eigen::Index q = 0; q < Q; ++q) {
            const double tq = t.x[static_cast<std::size_t>(q)];
            const double wq = t.w[static_cast<std::size_t>(q)];
            g_r(r, q) = wq * std::pow(b - x + tq, pk);
            g_l(r, q) = wq * std::pow(x - a + tq, pk);
        }
    }
    c.noalias() += C * (g_r * psi_r);
    c.noalias() += C * (g_l * psi_l);
    for (int r = 0; r < n; ++r) {
        const double x = nodes_[static_cast<std::size_t>(r + 1)].x();
        const double mass = (std::pow(b - x, -2.0 * s) + std::pow(x - a, -2.0 * s)) / (2.0 * s);
        c.row(r) += C * mass * m;
    }

    rows_ = -c;
    for (int r = 0; r < n; ++r) {
        const int i = r + 1;
        rows_(r, i) = 0.0;
        rows_(r, i) = -rows_.row(r).sum();
    }
}

std::shared_ptr<const Representation> make_representation(const Domain& d, const Grid& g, const FracParams& p,
                                                          const QuadratureRule& q) {
    if (d.dimension() != p.N) {
        throw std::invalid_argument("fractional parameters and domain disagree on the dimension");
    }
    if (d.shape() == Shape::Interval) {
        return std::make_shared<PiecewiseLinear1D>(d, g, p, q);
    }
    return std::make_shared<PiecewiseConstant2D>(d, g, p, q);
}

}  // namespace mixedfrac
