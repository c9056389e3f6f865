#include "mixedfrac/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
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

const PiecewiseConstant2D* as_2d(const Representation& rep) {
    return dynamic_cast<const PiecewiseConstant2D*>(&rep);
}

// Neighbour indices (+x, -x, +y, -y) of lattice node r, -1 where absent.
std::array<long, 4> lattice_neighbours(const PiecewiseConstant2D& rep, std::size_t r) {
    const auto [i, j] = rep.grid().lattice[r];
    return {rep.node_at(i + 1, j), rep.node_at(i - 1, j), rep.node_at(i, j + 1), rep.node_at(i, j - 1)};
}

// Bins a one-sided contribution C (u(x) - u~(x + z)) K(z) dz.
struct Binner {
    NonlocalBreakdown& out;

    void add(double value, bool y_inside, bool mirror_inside, bool within_unit) {
        if (!within_unit) {
            out.far += value;
            out.a_far += value;
            return;
        }
        (y_inside ? out.interior_near : out.exterior_near) += value;
        if (y_inside && mirror_inside) {
            out.a[0] += value;
        } else if (y_inside || mirror_inside) {
            out.a[1] += 0.5 * value;
            out.a[2] += 0.5 * value;
        } else {
            out.a[3] += value;
        }
    }
};

NonlocalBreakdown breakdown_1d(const PiecewiseLinear1D& rep, const Eigen::VectorXd& u, std::size_t idx) {
    const auto& d = rep.domain();
    const auto& p = rep.params();
    const double a = d.lower();
    const double b = d.upper();
    const double len = b - a;
    const double h = rep.h();
    const int M = rep.cells();
    const int i = static_cast<int>(idx) + 1;
    const double x = rep.nodes()[static_cast<std::size_t>(i)].x();
    const double C = p.C;
    const double pk = -1.0 - 2.0 * p.s;
    const double dl = x - a;
    const double dr = b - x;

    NonlocalBreakdown out;
    Binner bin{out};

    // |z| <= h: quadratic through the three nearest nodes
    const double d2 = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
    bin.add(-C * d2 * std::pow(h, 2.0 - 2.0 * p.s) / (2.0 - 2.0 * p.s), true, true, true);

    // interior cells beyond the near field
    const Rule1D& g15 = gauss_legendre(15);
    for (int k = 0; k < M; ++k) {
        if (k == i - 1 || k == i) {
            continue;
        }
        const double x0 = rep.nodes()[static_cast<std::size_t>(k)].x();
        double acc = 0.0;
        for (std::size_t j = 0; j < g15.x.size(); ++j) {
            const double y = x0 + h * g15.x[j];
            const double uy = (1.0 - g15.x[j]) * u[k] + g15.x[j] * u[k + 1];
            acc += h * g15.w[j] * (u[i] - uy) * std::pow(std::abs(y - x), pk);
        }
        const double mid = x0 + 0.5 * h;
        const double mirror = 2.0 * x - mid;
        bin.add(C * acc, true, mirror > a && mirror < b, true);
    }

    // exterior sides: u~ = mean + sum_j u_j (psi_j - m_j)
    const Eigen::RowVectorXd m = rep.nodal_weights().transpose() / len;
    const double mean = m.dot(u);
    Eigen::RowVectorXd psi(M + 1);
    for (int side = 0; side < 2; ++side) {
        const double dn = side == 0 ? dr : dl;  // distance from x to this boundary
        const double dm = side == 0 ? dl : dr;  // distance to the opposite one
        // class boundaries along t = distance beyond the boundary
        const double t_mirror = dm - dn;   // beyond: x - z leaves the domain too
        const double t_unit = 1.0 - dn;    // beyond: |z| > 1
        const std::array<double, 2> extra{t_mirror, t_unit};
        const Nodes1D t = exterior_panels(len, rep.rule(), extra);
        for (std::size_t k = 0; k < t.size(); ++k) {
            const double tk = t.x[k];
            rep.extension_row_beyond(side == 0 ? 1 : -1, tk, psi);
            const double rem = (psi - m).dot(u);
            const double z = dn + tk;
            bin.add(-C * t.w[k] * rem * std::pow(z, pk), false, tk < t_mirror, z <= 1.0);
        }
        // constant part, exactly, per class interval
        const double c0 = C * (u[i] - mean);
        const double z_mirror = std::max(dn, dm);
        bin.add(c0 * power_integral(pk, dn, std::max(dn, z_mirror)), false, true, true);
        bin.add(c0 * power_integral(pk, std::max(dn, z_mirror), 1.0), false, false, true);
        bin.add(c0 / (2.0 * p.s), false, false, false);
    }
    out.total = out.interior_near + out.exterior_near + out.far;
    return out;
}

// Extension values on the exterior rule, shared by every node of one breakdown.
struct ExteriorSamples {
    WeightedPoints rule;
    Eigen::VectorXd value;
};

ExteriorSamples exterior_samples(const PiecewiseConstant2D& rep, const Eigen::VectorXd& u) {
    ExteriorSamples out{disk_exterior_rule(rep.domain(), rep.grid().h, rep.rule()), {}};
    out.value = rep.extension_matrix(out.rule.x) * u;
    return out;
}

NonlocalBreakdown breakdown_2d(const PiecewiseConstant2D& rep, const Eigen::VectorXd& u, std::size_t idx,
                               const ExteriorSamples& ext) {
    const auto& d = rep.domain();
    const auto& p = rep.params();
    const double h = rep.grid().h;
    const double C = p.C;
    const double pk = -2.0 - 2.0 * p.s;
    const Point x = rep.nodes()[idx];
    const double ui = u[static_cast<Eigen::Index>(idx)];

    NonlocalBreakdown out;
    Binner bin{out};
    auto add_point = [&](const Point& y, double w, double uy, bool inside) {
        const Point z = y - x;
        bin.add(C * w * (ui - uy) * std::pow(z.norm(), pk), inside, d.contains(x - z), z.norm() <= 1.0);
    };

    // own square: quadratic correction through the five-point Laplacian
    const Rule1D& g30 = gauss_legendre(30);
    double is = 0.0;
    for (std::size_t k = 0; k < g30.x.size(); ++k) {
        const double th = 0.25 * std::numbers::pi * g30.x[k];
        is += g30.w[k] * std::pow(0.5 / std::cos(th), 2.0 - 2.0 * p.s) / (2.0 - 2.0 * p.s);
    }
    is *= 2.0 * std::numbers::pi;
    double lap = 0.0;
    for (long nb : lattice_neighbours(rep, idx)) {
        if (nb >= 0) {
            lap += ui - u[nb];
        }
    }
    bin.add(C * is * std::pow(h, -2.0 * p.s) / 4.0 * lap, true, true, true);

    // other squares, tensor Gauss rule
    const Rule1D& g7 = gauss_legendre(7);
    for (std::size_t k = 0; k < rep.nodes().size(); ++k) {
        if (k == idx) {
            continue;
        }
        const Point c = rep.nodes()[k];
        const int sub = (c - x).lpNorm<Eigen::Infinity>() <= 1.5 * h ? 4 : 1;
        const double hs = h / sub;
        for (int a1 = 0; a1 < sub; ++a1) {
            for (int a2 = 0; a2 < sub; ++a2) {
                for (std::size_t i1 = 0; i1 < g7.x.size(); ++i1) {
                    for (std::size_t i2 = 0; i2 < g7.x.size(); ++i2) {
                        const Point y = c + Point(-0.5 * h + (a1 + g7.x[i1]) * hs, -0.5 * h + (a2 + g7.x[i2]) * hs);
                        add_point(y, hs * hs * g7.w[i1] * g7.w[i2], u[static_cast<Eigen::Index>(k)], true);
                    }
                }
            }
        }
    }
    for (const auto& sp : rep.strip()) {
        if (sp.owner != static_cast<long>(idx)) {
            add_point(sp.x, sp.w, u[sp.owner], true);
        }
    }
    // exterior
    for (std::size_t q = 0; q < ext.rule.x.size(); ++q) {
        add_point(ext.rule.x[q], ext.rule.w[q], ext.value[static_cast<Eigen::Index>(q)], false);
    }
    const double t_end = d.radius() * std::pow(10.0, rep.rule().far_decades);
    const Eigen::RowVectorXd m = rep.nodal_weights().transpose() / rep.nodal_weights().sum();
    bin.add(C * (ui - m.dot(u)) * 2.0 * std::numbers::pi * std::pow(t_end, -2.0 * p.s) / (2.0 * p.s), false, false,
            false);
    out.total = out.interior_near + out.exterior_near + out.far;
    return out;
}

}  // namespace

OperatorStencil build_stencils(const Representation& rep) {
    const auto n = static_cast<Eigen::Index>(rep.grid().interior.size());
    const Eigen::Index nodes = rep.node_count();
    const double h = rep.grid().h;
    OperatorStencil st;
    st.laplacian = Eigen::MatrixXd::Zero(n, nodes);
    st.gradient[0] = Eigen::MatrixXd::Zero(n, nodes);
    st.gradient[1] = Eigen::MatrixXd::Zero(n, nodes);
    st.nonlocal = rep.nonlocal_rows();
    if (rep.domain().dimension() == 1) {
        for (Eigen::Index r = 0; r < n; ++r) {
            const Eigen::Index i = r + 1;
            st.laplacian(r, i - 1) = -1.0 / (h * h);
            st.laplacian(r, i) = 2.0 / (h * h);
            st.laplacian(r, i + 1) = -1.0 / (h * h);
            st.gradient[0](r, i - 1) = -0.5 / h;
            st.gradient[0](r, i + 1) = 0.5 / h;
        }
        return st;
    }
    const auto* rep2 = as_2d(rep);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto nb = lattice_neighbours(*rep2, static_cast<std::size_t>(r));
        for (long k : nb) {
            if (k >= 0) {
                st.laplacian(r, r) += 1.0 / (h * h);
                st.laplacian(r, k) -= 1.0 / (h * h);
            }
        }
        for (int axis = 0; axis < 2; ++axis) {
            const long plus = nb[static_cast<std::size_t>(2 * axis)];
            const long minus = nb[static_cast<std::size_t>(2 * axis + 1)];
            auto& g = st.gradient[static_cast<std::size_t>(axis)];
            if (plus >= 0 && minus >= 0) {
                g(r, plus) += 0.5 / h;
                g(r, minus) -= 0.5 / h;
            } else if (plus >= 0) {
                g(r, plus) += 1.0 / h;
                g(r, r) -= 1.0 / h;
            } else if (minus >= 0) {
                g(r, r) += 1.0 / h;
                g(r, minus) -= 1.0 / h;
            }
        }
    }
    return st;
}

double local_laplacian(const GridFunction& u, std::size_t i, const Representation& rep) {
    const Eigen::VectorXd v = rep.nodal_values(u);
    const double h = rep.grid().h;
    if (i >= rep.grid().interior.size()) {
        throw std::out_of_range("interior node index out of range");
    }
    if (rep.domain().dimension() == 1) {
        const auto k = static_cast<Eigen::Index>(i) + 1;
        return (2.0 * v[k] - v[k - 1] - v[k + 1]) / (h * h);
    }
    double acc = 0.0;
    for (long nb : lattice_neighbours(*as_2d(rep), i)) {
        if (nb >= 0) {
            acc += v[static_cast<Eigen::Index>(i)] - v[nb];
        }
    }
    return acc / (h * h);
}

Point gradient(const GridFunction& u, std::size_t i, const Representation& rep) {
    const Eigen::VectorXd v = rep.nodal_values(u);
    const double h = rep.grid().h;
    if (i >= rep.grid().interior.size()) {
        throw std::out_of_range("interior node index out of range");
    }
    if (rep.domain().dimension() == 1) {
        const auto k = static_cast<Eigen::Index>(i) + 1;
        return point1d((v[k + 1] - v[k - 1]) / (2.0 * h));
    }
    const auto nb = lattice_neighbours(*as_2d(rep), i);
    const double ui = v[static_cast<Eigen::Index>(i)];
    Point g = Point::Zero();
    for (int axis = 0; axis < 2; ++axis) {
        const long plus = nb[static_cast<std::size_t>(2 * axis)];
        const long minus = nb[static_cast<std::size_t>(2 * axis + 1)];
        if (plus >= 0 && minus >= 0) {
            g[axis] = (v[plus] - v[minus]) / (2.0 * h);
        } else if (plus >= 0) {
            g[axis] = (v[plus] - ui) / h;
        } else if (minus >= 0) {
            g[axis] = (ui - v[minus]) / h;
        }
    }
    return g;
}

double frac_laplacian_extended(const GridFunction& u_ext, std::size_t i, const Representation& rep) {
    require_cache(u_ext, rep);
    if (i >= rep.grid().interior.size()) {
        throw std::out_of_range("interior node index out of range");
    }
    return rep.nonlocal_rows().row(static_cast<Eigen::Index>(i)).dot(rep.nodal_values(u_ext));
}

Eigen::VectorXd frac_laplacian_all(const GridFunction& u_ext, const Representation& rep) {
    require_cache(u_ext, rep);
    return rep.nonlocal_rows() * rep.nodal_values(u_ext);
}

NonlocalBreakdown frac_laplacian_breakdown(const GridFunction& u_ext, std::size_t i, const Representation& rep) {
    require_cache(u_ext, rep);
    if (i >= rep.grid().interior.size()) {
        throw std::out_of_range("interior node index out of range");
    }
    const Eigen::VectorXd u = rep.nodal_values(u_ext);
    if (const auto* r1 = dynamic_cast<const PiecewiseLinear1D*>(&rep)) {
        return breakdown_1d(*r1, u, i);
    }
    const auto& r2 = *as_2d(rep);
    return breakdown_2d(r2, u, i, exterior_samples(r2, u));
}

std::vector<NonlocalBreakdown> frac_laplacian_breakdown_all(const GridFunction& u_ext, const Representation& rep) {
    require_cache(u_ext, rep);
    const Eigen::VectorXd u = rep.nodal_values(u_ext);
    const std::size_t n = rep.grid().interior.size();
    std::vector<NonlocalBreakdown> out(n);
    if (const auto* r1 = dynamic_cast<const PiecewiseLinear1D*>(&rep)) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = breakdown_1d(*r1, u, i);
        }
        return out;
    }
    const auto& r2 = *as_2d(rep);
    const ExteriorSamples ext = exterior_samples(r2, u);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = breakdown_2d(r2, u, i, ext);
    }
    return out;
}

}  // namespace mixedfrac
