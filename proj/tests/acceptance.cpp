#include "mixedfrac/extension.hpp"
#include "mixedfrac/fields.hpp"
#include "mixedfrac/solver.hpp"
#include "mixedfrac/verification.hpp"

#include <fmt/format.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

using namespace mixedfrac;

namespace {

const Domain unit = Domain::interval(0.0, 1.0);
constexpr std::array orders{0.3, 0.5, 0.7};

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::shared_ptr<const Representation> rep_for(const Domain& d, double h, double s) {
    const Grid g = build_grid(d, h, default_r_trunc(d));
    return make_representation(d, g, FracParams::make(d.dimension(), s));
}

double sup(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

void note(const std::string& line) { std::printf("    %s\n", line.c_str()); }

Outcome constant_solutions() {
    double worst = 0.0;
    int runs = 0;
    for (const double s : orders) {
        const auto rep = rep_for(unit, 1.0 / 200.0, s);
        for (const double gamma : {0.0, 0.5, 1.0}) {
            const Coefficients c{vector_preset("sin", unit), scalar_preset("1", unit), scalar_preset("1", unit)};
            const ProblemData pd = make_problem(*rep, c, gamma);
            const GridFunction u = gamma > 0.0 ? continuation_solve(rep, pd, gamma).u
                                               : solve_fixed_gamma(assemble(rep, pd), *rep);
            const double err = sup(rep->nodal_values(u).array() - 1.0);
            note(fmt::format("s={} gamma={} ||u-1||_inf={:.3e}", s, gamma, err));
            worst = std::max(worst, err);
            ++runs;
        }
    }
    return {worst <= 1e-10, fmt::format("max ||u-1||_inf = {:.3e} over {} runs (bound 1e-10)", worst, runs)};
}

Outcome zero_source() {
    std::mt19937_64 rng(2002);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const double s = orders[static_cast<std::size_t>(k) % orders.size()];
        const auto rep = rep_for(unit, 1.0 / 200.0, s);
        const ProblemData pd = make_problem(*rep, random_coefficients(rng, unit, SourceKind::Zero), 1.0);
        const double cont = sup(rep->nodal_values(continuation_solve(rep, pd).u));
        const double direct = sup(rep->nodal_values(solve_fixed_gamma(assemble(rep, pd), *rep)));
        note(fmt::format("preset {} s={} continuation {:.3e} direct {:.3e}", k, s, cont, direct));
        worst = std::max({worst, cont, direct});
    }
    return {worst <= 1e-10, fmt::format("max ||u||_inf = {:.3e} over 10 presets (bound 1e-10)", worst)};
}

Outcome max_principle() {
    // 70 trials on the interval at h = 1/200 and 30 on a disk of radius 1/2 at h = 1/16
    const Domain disk = Domain::disk(Point(0.0, 0.0), 0.5);
    std::size_t trials = 0;
    std::size_t violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& [d, h, count, seed] : {std::tuple{unit, 1.0 / 200.0, 70, 3003}, std::tuple{disk, 1.0 / 16.0, 30, 3004}}) {
        std::vector<std::shared_ptr<const Representation>> reps;
        for (const double s : orders) {
            reps.push_back(rep_for(d, h, s));
        }
        const auto summary = max_principle_campaign(
            static_cast<std::size_t>(count), static_cast<std::uint64_t>(seed), reps,
            [d = d](std::mt19937_64& rng) { return random_coefficients(rng, d, SourceKind::Nonnegative); }, 1e-8);
        note(fmt::format("{}: {} trials, {} violations, worst min_Omega u = {:.4e}, worst exterior gap = {:.3e}",
                         d.describe(), summary.trials.size(), summary.violations, summary.worst_interior,
                         summary.worst_exterior_gap));
        trials += summary.trials.size();
        violations += summary.violations;
        worst = std::min(worst, summary.worst_interior);
        gap = std::min(gap, summary.worst_exterior_gap);
    }
    return {violations == 0 && trials == 100,
            fmt::format("{} violations in {} trials; worst min_Omega u {:.3e}, worst exterior gap {:.3e}", violations,
                        trials, worst, gap)};
}

Outcome neumann_residual_refinement() {
    std::mt19937_64 rng(4004);
    const auto checks = neumann_check_points(unit);
    double worst_ratio = std::numeric_limits<double>::infinity();
    std::array<std::shared_ptr<const Representation>, 6> reps;
    for (std::size_t k = 0; k < orders.size(); ++k) {
        reps[2 * k] = rep_for(unit, 1.0 / 50.0, orders[k]);
        reps[2 * k + 1] = rep_for(unit, 1.0 / 100.0, orders[k]);
    }
    for (int k = 0; k < 20; ++k) {
        const std::size_t o = static_cast<std::size_t>(k) % orders.size();
        const ScalarField g = random_smooth(rng, unit);
        const double coarse = neumann_residual(g, *reps[2 * o], checks);
        const double fine = neumann_residual(g, *reps[2 * o + 1], checks);
        note(fmt::format("function {:2} s={} residual h=1/50 {:.3e} h=1/100 {:.3e} ratio {:.2f}", k, orders[o], coarse,
                         fine, coarse / fine));
        worst_ratio = std::min(worst_ratio, coarse / fine);
    }
    return {worst_ratio >= 2.0, fmt::format("smallest residual ratio r(h)/r(h/2) = {:.3f} over 20 functions (>= 2)",
                                            worst_ratio)};
}

Outcome identity_suite() {
    std::mt19937_64 rng(5005);
    int studies = 0;
    int good = 0;
    double worst = 0.0;
    for (int pair = 0; pair < 10; ++pair) {
        const ScalarField u = random_smooth(rng, unit);
        const ScalarField v = random_smooth(rng, unit);
        for (const double s : orders) {
            for (const auto which : {Identity::Bilinear, Identity::IntegrationByParts}) {
                const IdentityStudy st = identity_refinement(which, u, v, unit, s, 0.02, 3);
                const double e0 = st.levels.front().rel_error;
                const bool ok = st.non_increasing && e0 <= 2e-2;
                note(fmt::format("pair {} s={} {:<22} rel errors {:.2e} {:.2e} {:.2e}{}", pair, s,
                                 st.levels.front().name, st.levels[0].rel_error, st.levels[1].rel_error,
                                 st.levels[2].rel_error, ok ? "" : "  <-- fails"));
                ++studies;
                good += ok ? 1 : 0;
                worst = std::max(worst, e0);
            }
        }
    }
    return {good == studies, fmt::format("{}/{} studies within 2e-2 and non-increasing over 3 levels (worst {:.2e})",
                                         good, studies, worst)};
}

Outcome gradient_exponents() {
    bool ok = true;
    std::string summary;
    for (const double s : {0.25, 0.5, 0.75}) {
        const auto rep = rep_for(unit, 1.0 / 200.0, s);
        const GridFunction u = GridFunction::sample(rep->grid(), scalar_preset("linear", unit));
        for (const double angle : {0.0, std::numbers::pi}) {
            const RateStudy r = rate_study(u, *rep, std::nullopt, std::nullopt, angle);
            const auto& g = r.gradient;
            bool grad_ok = false;
            if (s == 0.25) {
                grad_ok = !g.flat && g.slope >= -0.6 && g.slope <= -0.4;
            } else if (s == 0.5) {
                grad_ok = !g.flat && g.log_preferred;
            } else {
                grad_ok = !g.flat && g.slope >= -0.1;
            }
            const bool factor_ok = std::abs(r.factor_fit.slope + 2.0 * s) <= 0.05;
            ok = ok && grad_ok && factor_ok;
            note(fmt::format("s={} side={} gradient slope {:+.4f} [{:+.4f},{:+.4f}] AIC log {:.1f} power {:.1f} -> {} | "
                             "F slope {:+.4f} (target {:+.2f})",
                             s, angle == 0.0 ? "right" : "left", g.slope, g.ci_low, g.ci_high, g.aic_log, g.aic_power,
                             g.log_preferred ? "log" : "power", r.factor_fit.slope, -2.0 * s));
            if (angle == 0.0) {
                summary += fmt::format("{}s={}: grad {:+.3f}{}, F {:+.3f}", summary.empty() ? "" : "; ", s, g.slope,
                                       s == 0.5 ? (g.log_preferred ? " (log)" : " (power)") : "", r.factor_fit.slope);
            }
        }
    }
    return {ok, summary};
}

Outcome contraction() {
    std::mt19937_64 rng(7007);
    const std::array eps{0.01, 0.02, 0.05, 0.1};
    bool ok = true;
    std::string summary;
    for (const double s : orders) {
        const auto rep = rep_for(unit, 1.0 / 100.0, s);
        const ProblemData pd = make_problem(*rep, random_coefficients(rng, unit, SourceKind::Signed), 1.0);
        const auto n = static_cast<Eigen::Index>(rep->grid().interior.size());
        std::normal_distribution<double> normal;
        Eigen::VectorXd phi1(n);
        Eigen::VectorXd phi2(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            phi1[i] = normal(rng);
            phi2[i] = normal(rng);
        }
        const ContractionStudy st = contraction_study(rep, pd, 0.5, eps, phi1, phi2);
        const double rho05 = st.rho[2];
        ok = ok && st.fit.r2 >= 0.99 && rho05 < 1.0;
        note(fmt::format("s={} rho = {:.4e} {:.4e} {:.4e} {:.4e}; fit rho = {:.4f} eps, R^2 = {:.6f}", s, st.rho[0],
                         st.rho[1], st.rho[2], st.rho[3], st.fit.slope, st.fit.r2));
        summary += fmt::format("{}s={}: R^2 {:.4f}, rho(0.05) {:.3f}", summary.empty() ? "" : "; ", s, st.fit.r2, rho05);
    }
    return {ok, summary};
}

Outcome continuation_vs_direct() {
    std::mt19937_64 rng(8008);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const double s = orders[static_cast<std::size_t>(k) % orders.size()];
        const auto rep = rep_for(unit, 1.0 / 200.0, s);
        const ProblemData pd = make_problem(*rep, random_coefficients(rng, unit, SourceKind::Signed), 1.0);
        const auto cont = continuation_solve(rep, pd);
        SolveInfo info;
        const GridFunction direct = solve_fixed_gamma(assemble(rep, pd), *rep, &info);
        const double diff = sup(rep->nodal_values(cont.u) - rep->nodal_values(direct));
        note(fmt::format("preset {} s={} steps {} halvings {} ||u_cont - u_direct||_inf = {:.3e} (rcond {:.2e})", k, s,
                         cont.trace.records.size(), cont.trace.halvings, diff, info.rcond));
        worst = std::max(worst, diff);
    }
    return {worst <= 1e-8, fmt::format("max difference {:.3e} over 10 presets (bound 1e-8)", worst)};
}

Outcome brute_force_oracles() {
    double op = 0.0;
    double kern = 0.0;
    for (const double s : orders) {
        const auto rep = rep_for(unit, 1.0 / 32.0, s);
        const auto& r1 = dynamic_cast<const PiecewiseLinear1D&>(*rep);
        const Eigen::VectorXd nodal =
            rep->nodal_values(GridFunction::sample(rep->grid(), scalar_preset("cos(1.5)", unit)));
        const OracleRow a = compare_operator_oracle(r1, nodal);
        const OracleRow b = compare_kernel_oracle(*rep, 2);
        note(fmt::format("s={} operator: {} nodes max abs {:.3e} | kernel: {} pairs max rel {:.3e}", s, a.samples,
                         a.max_abs, b.samples, b.max_rel));
        op = std::max(op, a.max_abs);
        kern = std::max(kern, b.max_rel);
    }
    return {op <= 1e-8 && kern <= 1e-6,
            fmt::format("operator max abs {:.3e} (<= 1e-8), kernel max rel {:.3e} (<= 1e-6)", op, kern)};
}

Outcome surrogate_bound() {
    const Coefficients c{vector_preset("sin", unit), scalar_preset("1", unit), scalar_preset("cos(2)", unit)};
    const std::array hs{1.0 / 50.0, 1.0 / 100.0, 1.0 / 200.0};
    bool ok = true;
    double worst = 0.0;
    note("    s     p       h        W2p      ||f||_p    ratio");
    for (const auto& [s, p] : {std::pair{0.35, 2.0}, std::pair{0.4, 1.5}, std::pair{0.5, 2.0}, std::pair{0.55, 3.0},
                               std::pair{0.6, 2.0}}) {
        if (!in_existence_range(1, s, p)) {
            return {false, fmt::format("sample ({}, {}) outside the existence ranges", s, p)};
        }
        const auto rows = w2p_study(unit, s, p, c, hs);
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (const auto& r : rows) {
            note(fmt::format("{:5.2f} {:5.2f} {:9.6f} {:10.5f} {:10.5f} {:8.5f}", r.s, r.p, r.h, r.w2p, r.f_lp, r.ratio));
            lo = std::min(lo, r.ratio);
            hi = std::max(hi, r.ratio);
        }
        const double variation = hi / lo - 1.0;
        worst = std::max(worst, variation);
        ok = ok && variation < 0.2;
    }
    return {ok, fmt::format("largest ratio variation over h in {{1/50, 1/100, 1/200}}: {:.2f}% (< 20%)", 100.0 * worst)};
}

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    const std::vector<Criterion> criteria{
        {1, "constant-solution exactness", constant_solutions},
        {2, "trivial kernel for f = 0", zero_source},
        {3, "maximum-principle campaign", max_principle},
        {4, "nonlocal Neumann residual refinement", neumann_residual_refinement},
        {5, "identity suite", identity_suite},
        {6, "gradient blow-up and boundary-factor exponents", gradient_exponents},
        {7, "contraction of the continuation map", contraction},
        {8, "continuation vs direct solve", continuation_vs_direct},
        {9, "brute-force oracles", brute_force_oracles},
        {10, "W^{2,p} surrogate boundedness", surrogate_bound},
    };
    std::set<int> selected;
    for (int k = 1; k < argc; ++k) {
        selected.insert(std::stoi(argv[k]));
    }
    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.contains(c.id)) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), secs);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
