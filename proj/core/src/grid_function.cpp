#include "mixedfrac/grid_function.hpp"

#include <stdexcept>

namespace mixedfrac {

GridFunction::GridFunction(const Grid& g, Eigen::VectorXd interior, Eigen::VectorXd boundary)
    : grid_(g.fingerprint), interior_(std::move(interior)), boundary_(std::move(boundary)) {
    if (static_cast<std::size_t>(interior_.size()) != g.interior.size() ||
        static_cast<std::size_t>(boundary_.size()) != g.boundary.size()) {
        throw std::invalid_argument("grid function size does not match the grid");
    }
    if (!interior_.allFinite() || !boundary_.allFinite()) {
        throw std::invalid_argument("grid function values must be finite");
    }
}

GridFunction GridFunction::sample(const Grid& g, const std::function<double(const Point&)>& f) {
    Eigen::VectorXd in(static_cast<Eigen::Index>(g.interior.size()));
    Eigen::VectorXd bd(static_cast<Eigen::Index>(g.boundary.size()));
    for (std::size_t k = 0; k < g.interior.size(); ++k) {
        in[static_cast<Eigen::Index>(k)] = f(g.interior[k]);
    }
    for (std::size_t k = 0; k < g.boundary.size(); ++k) {
        bd[static_cast<Eigen::Index>(k)] = f(g.boundary[k]);
    }
    return {g, std::move(in), std::move(bd)};
}

GridFunction GridFunction::constant(const Grid& g, double c) {
    return {g, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.interior.size()), c),
            Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.boundary.size()), c)};
}

void GridFunction::set_interior(Eigen::VectorXd v) {
    if (v.size() != interior_.size()) {
        throw std::invalid_argument("interior size mismatch");
    }
    interior_ = std::move(v);
    exterior_.reset();
}

void GridFunction::set_boundary(Eigen::VectorXd v) {
    if (v.size() != boundary_.size()) {
        throw std::invalid_argument("boundary size mismatch");
    }
    boundary_ = std::move(v);
    exterior_.reset();
}

const Eigen::VectorXd& GridFunction::exterior() const {
    if (!exterior_) {
        throw std::logic_error("grid function has no exterior values; call extend() first");
    }
    return *exterior_;
}

const ExteriorTag& GridFunction::exterior_tag() const {
    if (!exterior_) {
        throw std::logic_error("grid function has no exterior values; call extend() first");
    }
    return tag_;
}

bool GridFunction::exterior_matches(const ExteriorTag& tag) const { return exterior_ && tag_ == tag; }

void GridFunction::attach_exterior(Eigen::VectorXd values, const ExteriorTag& tag) {
    if (tag.grid != grid_) {
        throw std::invalid_argument("exterior values belong to a different grid");
    }
    exterior_ = std::move(values);
    tag_ = tag;
}

void GridFunction::drop_exterior() { exterior_.reset(); }

double GridFunction::interior_min() const { return interior_.minCoeff(); }
double GridFunction::interior_max() const { return interior_.maxCoeff(); }

GridFunction combine(double a, const GridFunction& u, double b, const GridFunction& v) {
    if (u.grid_ != v.grid_) {
        throw std::invalid_argument("cannot combine grid functions on different grids");
    }
    GridFunction out;
    out.grid_ = u.grid_;
    out.interior_ = a * u.interior_ + b * v.interior_;
    out.boundary_ = a * u.boundary_ + b * v.boundary_;
    return out;
}

}  // namespace mixedfrac
