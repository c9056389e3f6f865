#include "mixedfrac/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <ostream>

namespace mixedfrac {

namespace {

double sup(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Hager-style 1-norm estimate of A^{-1} from the factorisation.
double inverse_norm_estimate(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
    const Eigen::Index n = lu.rows();
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    double est = 0.0;
    for (int it = 0; it < 5; ++it) {
        const Eigen::VectorXd y = lu.solve(x);
        const double ny = y.lpNorm<1>();
        if (it > 0 && ny <= est) {
            break;
        }
        est = ny;
        const Eigen::VectorXd xi = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
        const Eigen::VectorXd z = lu.transpose().solve(xi);
        Eigen::Index j = 0;
        if (z.cwiseAbs().maxCoeff(&j) <= z.dot(x)) {
            break;
        }
        x.setZero();
        x[j] = 1.0;
    }
    return est;
}

}  // namespace

void ProblemData::validate(const Representation& rep) const {
    const auto n = static_cast<Eigen::Index>(rep.grid().interior.size());
    const int N = rep.domain().dimension();
    if (a.size() != n || f.size() != n || q.rows() != n || q.cols() != N) {
        throw ConfigError(fmt::format("problem data sizes do not match the grid ({} interior nodes, N = {})", n, N));
    }
    if (!a.allFinite() || !f.allFinite() || !q.allFinite()) {
        throw ConfigError("coefficients must be finite at every node");
    }
    if (a.minCoeff() < 0.0) {
        throw ConfigError("reaction coefficient a must be nonnegative");
    }
    if (a.maxCoeff() <= 0.0) {
        throw ConfigError("reaction coefficient a must not vanish identically");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw ConfigError("gamma must lie in [0, 1]");
    }
    if (p.N != N || p.s != rep.params().s) {
        throw ConfigError("fractional parameters differ from those of the discretisation");
    }
}

Assembler::Assembler(std::shared_ptr<const Representation> rep, ProblemData pd) : rep_(std::move(rep)), pd_(std::move(pd)) {
    pd_.validate(*rep_);
    const OperatorStencil st = build_stencils(*rep_);
    const Eigen::MatrixXd& E = rep_->closure();
    Eigen::MatrixXd derivative = st.laplacian;
    for (int d = 0; d < rep_->domain().dimension(); ++d) {
        derivative += pd_.q.col(d).asDiagonal() * st.gradient[static_cast<std::size_t>(d)];
    }
    local_ = derivative * E;
    local_.diagonal() += pd_.a;
    nonlocal_ = st.nonlocal * E;
}

LinearSystem Assembler::system(double gamma) const {
    LinearSystem sys{local_ + gamma * nonlocal_, pd_.f, gamma};
    for (Eigen::Index r = 0; r < sys.A.rows(); ++r) {
        if (!sys.A.row(r).allFinite()) {
            throw NumericalError(fmt::format("assembly produced a non-finite entry in row {}", r));
        }
        if (sys.A.row(r).cwiseAbs().maxCoeff() == 0.0) {
            throw NumericalError(fmt::format("assembly produced an empty row {}", r));
        }
    }
    return sys;
}

LinearSystem assemble(std::shared_ptr<const Representation> rep, const ProblemData& pd) {
    return Assembler(std::move(rep), pd).system(pd.gamma);
}

FactoredSystem::FactoredSystem(LinearSystem sys) : sys_(std::move(sys)), lu_(sys_.A) {
    const double anorm = sys_.A.cwiseAbs().colwise().sum().maxCoeff();
    const double inv = inverse_norm_estimate(lu_);
    rcond_ = (anorm > 0.0 && std::isfinite(inv)) ? 1.0 / (anorm * inv) : 0.0;
    if (!(rcond_ > 1e-14)) {
        throw NumericalError(fmt::format("system is numerically singular (rcond estimate {:.3e})", rcond_));
    }
}

Eigen::VectorXd FactoredSystem::solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = lu_.solve(rhs);
    x += lu_.solve(rhs - sys_.A * x);
    return x;
}

GridFunction solve_fixed_gamma(const LinearSystem& sys, const Representation& rep, SolveInfo* info) {
    const FactoredSystem fs(sys);
    const Eigen::VectorXd u = fs.solve(sys.b);
    if (!u.allFinite()) {
        throw NumericalError("dense solve produced non-finite values");
    }
    if (info != nullptr) {
        info->residual = sup(sys.A * u - sys.b);
        info->rcond = fs.rcond();
        info->inverse_norm = fs.rcond() > 0.0 ? 1.0 / (fs.rcond() * sys.A.cwiseAbs().colwise().sum().maxCoeff()) : 0.0;
    }
    return rep.from_interior(u);
}

Eigen::VectorXd fixed_point_step(const Eigen::VectorXd& phi, const Eigen::VectorXd& v0, double eps,
                                 const FactoredSystem& l_gamma0, const Assembler& parts) {
    return l_gamma0.solve(-eps * (parts.nonlocal() * (v0 + phi)));
}

GridFunction fixed_point_step(const GridFunction& phi, const GridFunction& v0, double gamma0, double eps,
                              std::shared_ptr<const Representation> rep, const ProblemData& pd) {
    const Assembler parts(rep, pd);
    const FactoredSystem l(parts.system(gamma0));
    return rep->from_interior(fixed_point_step(phi.interior(), v0.interior(), eps, l, parts));
}

double contraction_ratio(const Eigen::VectorXd& phi1, const Eigen::VectorXd& phi2, double eps,
                         const FactoredSystem& l_gamma0, const Assembler& parts) {
    const double den = sup(phi2 - phi1);
    if (den == 0.0) {
        throw std::invalid_argument("contraction_ratio needs two distinct arguments");
    }
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(phi1.size());
    return sup(fixed_point_step(phi2, zero, eps, l_gamma0, parts) - fixed_point_step(phi1, zero, eps, l_gamma0, parts)) /
           den;
}

void ContinuationTrace::write_csv(std::ostream& out) const {
    out << "gamma,eps,iters,residual,rho,sup_norm\n";
    for (const auto& r : records) {
        out << fmt::format("{:.17g},{:.17g},{},{:.17g},{:.17g},{:.17g}\n", r.gamma, r.eps, r.iterations, r.residual,
                           r.rho, r.sup_norm);
    }
}

ContinuationResult continuation_solve(std::shared_ptr<const Representation> rep, const ProblemData& pd, double target,
                                      const EpsPolicy& policy) {
    if (!(target > 0.0 && target <= 1.0)) {
        throw ConfigError("continuation target must lie in (0, 1]");
    }
    if (!(policy.initial > 0.0 && policy.max >= policy.initial && policy.min > 0.0 && policy.tolerance > 0.0)) {
        throw ConfigError("invalid eps policy");
    }
    const Assembler parts(rep, pd);
    ContinuationResult out;

    double gamma = 0.0;
    auto l = std::make_unique<FactoredSystem>(parts.system(gamma));
    Eigen::VectorXd v0 = l->solve(pd.f);
    double eps = policy.initial;
    int quick_steps = 0;

    const double snap = 1e-12 * target;
    while (target - gamma > snap) {
        const double step = target - gamma - eps <= snap ? target - gamma : eps;
        const double tol = policy.tolerance * std::max(1.0, sup(v0));
        Eigen::VectorXd phi = Eigen::VectorXd::Zero(v0.size());
        double prev = std::numeric_limits<double>::infinity();
        double rho = 0.0;
        int growth = 0;
        int iters = 0;
        bool converged = false;
        while (iters < policy.max_iterations) {
            const Eigen::VectorXd next = fixed_point_step(phi, v0, step, *l, parts);
            ++iters;
            const double diff = sup(next - phi);
            phi = next;
            if (!std::isfinite(diff)) {
                break;
            }
            if (diff <= tol) {
                converged = true;
                break;
            }
            if (std::isfinite(prev) && prev > 100.0 * tol) {
                rho = std::max(rho, diff / prev);
            }
            growth = diff > prev ? growth + 1 : 0;
            if (growth >= 3) {
                break;
            }
            prev = diff;
        }
        if (!converged) {
            eps *= 0.5;
            ++out.trace.halvings;
            quick_steps = 0;
            if (eps < policy.min) {
                throw NumericalError(fmt::format("continuation stalled at gamma = {:.6g}: eps fell below {:.1e}", gamma,
                                                 policy.min));
            }
            continue;
        }

        gamma = (target - gamma - step <= snap) ? target : gamma + step;
        v0 += phi;
        l = std::make_unique<FactoredSystem>(parts.system(gamma));
        const LinearSystem& sys = l->system();
        out.trace.records.push_back({gamma, step, iters, sup(sys.A * v0 - sys.b), rho, sup(v0)});

        quick_steps = iters == 1 ? quick_steps + 1 : 0;
        if (quick_steps >= policy.grow_after) {
            eps = std::min(policy.max, 2.0 * eps);
            quick_steps = 0;
        }
    }

    const Eigen::VectorXd direct = l->solve(pd.f);
    out.trace.direct_difference = sup(v0 - direct);
    out.trace.mismatch = out.trace.direct_difference > policy.direct_tolerance * std::max(1.0, sup(direct));
    out.u = rep->from_interior(v0);
    return out;
}

double lp_norm(const Eigen::VectorXd& v, double h, int N, double p) {
    if (!(p >= 1.0)) {
        throw std::invalid_argument("lp_norm needs p >= 1");
    }
    return std::pow(std::pow(h, N) * v.cwiseAbs().array().pow(p).sum(), 1.0 / p);
}

double w2p_surrogate(const GridFunction& u, const Representation& rep, double p) {
    const OperatorStencil st = build_stencils(rep);
    const Eigen::VectorXd nodal = rep.nodal_values(u);
    const int N = rep.domain().dimension();
    const double h = rep.grid().h;
    Eigen::VectorXd grad = (st.gradient[0] * nodal).cwiseAbs();
    if (N == 2) {
        grad = grad.cwiseProduct(grad) + (st.gradient[1] * nodal).cwiseAbs2();
        grad = grad.cwiseSqrt();
    }
    const Eigen::VectorXd second = st.laplacian * nodal;
    const double sum = std::pow(lp_norm(u.interior(), h, N, p), p) + std::pow(lp_norm(grad, h, N, p), p) +
                       std::pow(lp_norm(second, h, N, p), p);
    return std::pow(sum, 1.0 / p);
}

}  // namespace mixedfrac
