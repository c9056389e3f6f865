#include "mixedfrac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mixedfrac {

namespace {

void mix(std::uint64_t& h, double v) {
    std::uint64_t bits = 0;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(v));
    // FNV-1a over the 8 bytes
    for (int k = 0; k < 8; ++k) {
        h ^= (bits >> (8 * k)) & 0xffu;
        h *= 0x100000001b3ull;
    }
}

std::vector<double> shell_distances(double h, double delta_min, double r_trunc, double growth) {
    std::vector<double> out;
    // geometric refinement towards the boundary: h, h/2, ... >= delta_min
    for (double d = h; d >= delta_min * (1.0 - 1e-12); d *= 0.5) {
        out.push_back(d);
    }
    // graded coarsening out to the truncation radius
    for (double d = h * growth; d < r_trunc; d *= growth) {
        out.push_back(d);
    }
    out.push_back(r_trunc);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double x, double y) { return std::abs(x - y) <= 1e-12 * y; }),
              out.end());
    return out;
}

}  // namespace

Domain Domain::interval(double a, double b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("interval requires finite a < b");
    }
    Domain d;
    d.shape_ = Shape::Interval;
    d.lo_ = a;
    d.hi_ = b;
    d.center_ = point1d(0.5 * (a + b));
    d.radius_ = 0.5 * (b - a);
    return d;
}

Domain Domain::disk(const Point& center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius) || !center.allFinite()) {
        throw std::invalid_argument("disk requires a finite centre and radius > 0");
    }
    Domain d;
    d.shape_ = Shape::Disk;
    d.center_ = center;
    d.radius_ = radius;
    d.lo_ = center.x() - radius;
    d.hi_ = center.x() + radius;
    return d;
}

double Domain::diameter() const { return 2.0 * radius_; }

double Domain::measure() const {
    return shape_ == Shape::Interval ? hi_ - lo_ : std::numbers::pi * radius_ * radius_;
}

bool Domain::contains(const Point& x) const { return signed_distance(x) < 0.0; }

double Domain::signed_distance(const Point& x) const {
    if (shape_ == Shape::Interval) {
        const double t = x.x();
        if (t <= lo_) return lo_ - t;
        if (t >= hi_) return t - hi_;
        return -std::min(t - lo_, hi_ - t);
    }
    return (x - center_).norm() - radius_;
}

double Domain::distance_to_boundary(const Point& x) const { return std::abs(signed_distance(x)); }

Point Domain::nearest_boundary_point(const Point& x) const {
    if (signed_distance(x) <= 0.0) {
        throw std::invalid_argument("nearest_boundary_point is defined for exterior points only");
    }
    if (shape_ == Shape::Interval) {
        return point1d(x.x() < lo_ ? lo_ : hi_);
    }
    const Point r = x - center_;
    return center_ + radius_ * r / r.norm();
}

Point Domain::outward_normal(const Point& x) const {
    if (shape_ == Shape::Interval) {
        return point1d(x.x() < center_.x() ? -1.0 : 1.0);
    }
    const Point r = x - center_;
    const double n = r.norm();
    if (n == 0.0) {
        throw std::invalid_argument("outward normal undefined at the disk centre");
    }
    return r / n;
}

std::string Domain::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (shape_ == Shape::Interval) {
        os << "interval(" << lo_ << "," << hi_ << ")";
    } else {
        os << "disk(" << center_.x() << "," << center_.y() << "," << radius_ << ")";
    }
    return os.str();
}

Grid build_grid(const Domain& d, double h, double r_trunc, const ShellPolicy& policy) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("grid spacing must be positive");
    }
    if (r_trunc < 2.0 * d.diameter() * (1.0 - 1e-12)) {
        throw std::invalid_argument("R_trunc must be at least 2 diam(Omega)");
    }
    if (!(policy.growth > 1.0)) {
        throw std::invalid_argument("shell growth factor must exceed 1");
    }

    Grid g;
    g.r_trunc = r_trunc;

    if (d.shape() == Shape::Interval) {
        const double len = d.upper() - d.lower();
        if (h > len) {
            throw std::invalid_argument("grid spacing larger than the domain");
        }
        const auto cells = static_cast<long>(std::llround(len / h));
        if (cells < 3) {
            throw std::invalid_argument("grid spacing too coarse: need at least two interior nodes");
        }
        g.h = len / static_cast<double>(cells);
        for (long k = 1; k < cells; ++k) {
            g.interior.push_back(point1d(d.lower() + static_cast<double>(k) * g.h));
        }
        g.boundary = {point1d(d.lower()), point1d(d.upper())};
    } else {
        const double radius = d.radius();
        if (h > radius) {
            throw std::invalid_argument("grid spacing larger than the domain");
        }
        g.h = h;
        // Keep lattice nodes whose whole h x h cell lies inside the disk.
        const double keep = radius - h / std::numbers::sqrt2;
        const int span = static_cast<int>(std::ceil(radius / h)) + 1;
        for (int j = -span; j <= span; ++j) {
            for (int i = -span; i <= span; ++i) {
                const Point p = d.center() + h * Point(i, j);
                if ((p - d.center()).norm() <= keep) {
                    g.interior.push_back(p);
                    g.lattice.push_back({i, j});
                }
            }
        }
        if (g.interior.size() < 2) {
            throw std::invalid_argument("grid spacing too coarse: need at least two interior nodes");
        }
        const int nb = std::max(16, static_cast<int>(std::ceil(2.0 * std::numbers::pi * radius / h)));
        for (int k = 0; k < nb; ++k) {
            const double th = 2.0 * std::numbers::pi * k / nb;
            g.boundary.push_back(d.center() + radius * Point(std::cos(th), std::sin(th)));
        }
    }

    g.delta_min = policy.delta_min > 0.0 ? policy.delta_min : g.h * g.h;
    if (g.delta_min > g.h) {
        g.delta_min = g.h;
    }
    g.shells = shell_distances(g.h, g.delta_min, r_trunc, policy.growth);

    if (d.shape() == Shape::Interval) {
        for (std::size_t k = 0; k < g.shells.size(); ++k) {
            const double delta = g.shells[k];
            g.exterior.push_back({point1d(d.lower() - delta), delta, k});
            g.exterior.push_back({point1d(d.upper() + delta), delta, k});
        }
    } else {
        const int per_shell = policy.points_per_shell > 0
                                  ? policy.points_per_shell
                                  : std::max(32, static_cast<int>(std::ceil(2.0 * std::numbers::pi * d.radius() / g.h)));
        for (std::size_t k = 0; k < g.shells.size(); ++k) {
            const double rr = d.radius() + g.shells[k];
            for (int m = 0; m < per_shell; ++m) {
                // stagger alternate shells by half a step
                const double th = 2.0 * std::numbers::pi * (m + 0.5 * static_cast<double>(k % 2)) / per_shell;
                g.exterior.push_back({d.center() + rr * Point(std::cos(th), std::sin(th)), g.shells[k], k});
            }
        }
    }

    std::uint64_t fp = 0xcbf29ce484222325ull;
    mix(fp, static_cast<double>(d.dimension()));
    mix(fp, g.h);
    mix(fp, g.r_trunc);
    mix(fp, g.delta_min);
    for (const auto& p : g.interior) {
        mix(fp, p.x());
        mix(fp, p.y());
    }
    for (const auto& e : g.exterior) {
        mix(fp, e.position.x());
        mix(fp, e.position.y());
    }
    g.fingerprint = fp;
    return g;
}

}  // namespace mixedfrac
