#pragma once

#include "mixedfrac/errors.hpp"
#include "mixedfrac/grid_function.hpp"
#include "mixedfrac/operators.hpp"
#include "mixedfrac/representation.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <iosfwd>
#include <memory>
#include <vector>

namespace mixedfrac {

/// Coefficients of L_gamma u = -Delta u + gamma (-Delta)^s u~ + q . grad u + a u,
/// sampled at interior nodes.
struct ProblemData {
    Eigen::MatrixXd q;  ///< interior_count x N drift
    Eigen::VectorXd a;  ///< reaction, a >= 0 and not identically zero
    Eigen::VectorXd f;  ///< source
    FracParams p;
    double gamma = 1.0;

    /// Throws ConfigError when a sample is non-finite, a < 0, a == 0, sizes
    /// disagree with the representation or gamma lies outside [0, 1].
    void validate(const Representation& rep) const;
};

struct LinearSystem {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    double gamma = 0.0;
};

/// Operator parts independent of gamma, acting on interior unknowns:
/// A_gamma = local + gamma * nonlocal.
class Assembler {
public:
    Assembler(std::shared_ptr<const Representation> rep, ProblemData pd);

    [[nodiscard]] const Representation& representation() const { return *rep_; }
    [[nodiscard]] const ProblemData& data() const { return pd_; }
    [[nodiscard]] const Eigen::MatrixXd& local() const { return local_; }
    [[nodiscard]] const Eigen::MatrixXd& nonlocal() const { return nonlocal_; }

    /// Throws NumericalError naming the first row that is zero or non-finite.
    [[nodiscard]] LinearSystem system(double gamma) const;

private:
    std::shared_ptr<const Representation> rep_;
    ProblemData pd_;
    Eigen::MatrixXd local_;
    Eigen::MatrixXd nonlocal_;
};

LinearSystem assemble(std::shared_ptr<const Representation> rep, const ProblemData& pd);

struct SolveInfo {
    double residual = 0.0;  ///< ||A u - b||_inf
    double rcond = 0.0;     ///< reciprocal condition estimate (1-norm)
    double inverse_norm = 0.0;  ///< estimate of ||A^{-1}||_1
};

/// Dense LU with one step of iterative refinement. Throws NumericalError when
/// the factorisation is numerically singular.
class FactoredSystem {
public:
    explicit FactoredSystem(LinearSystem sys);

    [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    [[nodiscard]] const LinearSystem& system() const { return sys_; }
    [[nodiscard]] double rcond() const { return rcond_; }

private:
    LinearSystem sys_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    double rcond_ = 0.0;
};

GridFunction solve_fixed_gamma(const LinearSystem& sys, const Representation& rep, SolveInfo* info = nullptr);

/// J_eps(phi) = psi with L_{gamma0} psi = -eps W (v0 + phi), where W is the
/// nonlocal part of the operator on interior unknowns.
Eigen::VectorXd fixed_point_step(const Eigen::VectorXd& phi, const Eigen::VectorXd& v0, double eps,
                                 const FactoredSystem& l_gamma0, const Assembler& parts);

GridFunction fixed_point_step(const GridFunction& phi, const GridFunction& v0, double gamma0, double eps,
                              std::shared_ptr<const Representation> rep, const ProblemData& pd);

/// ||J_eps(phi2) - J_eps(phi1)||_inf / ||phi2 - phi1||_inf.
double contraction_ratio(const Eigen::VectorXd& phi1, const Eigen::VectorXd& phi2, double eps,
                         const FactoredSystem& l_gamma0, const Assembler& parts);

struct EpsPolicy {
    double initial = 0.1;
    double max = 0.1;
    double min = 1e-6;
    int grow_after = 2;        ///< consecutive one-iteration steps before doubling
    double tolerance = 1e-11;  ///< sup-norm stop, relative to max(1, ||v0||_inf)
    int max_iterations = 200;
    double direct_tolerance = 1e-8;
};

struct TraceRecord {
    double gamma = 0.0;
    double eps = 0.0;
    int iterations = 0;
    double residual = 0.0;
    double rho = 0.0;
    double sup_norm = 0.0;
};

struct ContinuationTrace {
    std::vector<TraceRecord> records;
    int halvings = 0;
    double direct_difference = 0.0;  ///< ||u_continuation - u_direct||_inf at the target
    bool mismatch = false;

    void write_csv(std::ostream& out) const;
};

struct ContinuationResult {
    GridFunction u;
    ContinuationTrace trace;
};

/// Advances gamma from 0 to `target` by fixed-point iteration of J_eps. Throws
/// NumericalError when eps falls below the policy minimum.
ContinuationResult continuation_solve(std::shared_ptr<const Representation> rep, const ProblemData& pd,
                                      double target = 1.0, const EpsPolicy& policy = {});

/// Discrete l^p norm with cell weights h^N.
double lp_norm(const Eigen::VectorXd& v, double h, int N, double p);

/// (||u||_p^p + ||grad u||_p^p + ||D^2 u||_p^p)^{1/p} from difference quotients
/// at interior nodes.
double w2p_surrogate(const GridFunction& u, const Representation& rep, double p);

}  // namespace mixedfrac
