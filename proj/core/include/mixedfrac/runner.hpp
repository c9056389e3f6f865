#pragma once

#include "mixedfrac/geometry.hpp"
#include "mixedfrac/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mixedfrac {

/// Settings of one run. Read from a plain "key = value" file; '#' starts a
/// comment. Lists are comma separated.
///
///   domain = interval(0,1) | disk(cx,cy,r)
///   h, r_trunc (0: 8 diam), shell.delta_min, shell.growth, shell.points
///   s, p (Lebesgue exponent, diagnostic only)
///   q, a, f: coefficient presets (see scalar_preset / vector_preset)
///   gamma, method = continuation | direct
///   eps.initial, eps.max, eps.min, eps.grow_after
///   tol.fixed_point, tol.max_iterations, tol.direct, tol.max_principle
///   verify.s, verify.u, verify.v, verify.h0, verify.levels, verify.random_pairs, verify.tolerance
///   rates.s, rates.u, rates.delta_lo, rates.delta_hi
///   oracle.s, oracle.h, oracle.u, oracle.stride, oracle.tol, oracle.max_abs, oracle.max_rel
///   maxprinciple.s, maxprinciple.trials
///   output, seed
struct RunConfig {
    std::string domain = "interval(0,1)";
    double h = 0.01;
    double r_trunc = 0.0;
    ShellPolicy shells;
    double s = 0.5;
    double p = 2.0;
    std::string q = "zero";
    std::string a = "1";
    std::string f = "1";
    double gamma = 1.0;
    std::string method = "continuation";
    EpsPolicy eps;
    double max_principle_tol = 1e-8;

    std::vector<double> verify_s;
    std::string verify_u = "cos(1.5)";
    std::string verify_v = "gauss(0.3,0.25)";
    double verify_h0 = 0.02;
    int verify_levels = 3;
    int verify_random_pairs = 0;
    double verify_tolerance = 2e-2;

    std::vector<double> rates_s{0.25, 0.5, 0.75};
    std::string rates_u = "linear";
    double rates_delta_lo = 0.0;
    double rates_delta_hi = 0.0;

    std::vector<double> oracle_s;
    double oracle_h = 1.0 / 32.0;
    std::string oracle_u = "cos(1.5)";
    int oracle_stride = 4;
    double oracle_tol = 1e-12;
    double oracle_max_abs = 1e-8;
    double oracle_max_rel = 1e-6;

    std::vector<double> maxprinciple_s;
    int maxprinciple_trials = 100;

    std::filesystem::path output = "out";
    std::uint64_t seed = 0;

    /// Applies one setting; throws ConfigError for unknown keys or bad values.
    void set(std::string_view key, std::string_view value);
    static RunConfig parse(std::string_view text, std::string_view origin = "<config>");
    static RunConfig load(const std::filesystem::path& path);

    /// Throws ConfigError if a preset does not exist or a value is out of range.
    void validate() const;
    [[nodiscard]] Domain make_domain() const;
    [[nodiscard]] double truncation_radius() const;

    /// Every effective setting as sorted "key=value" lines.
    [[nodiscard]] std::string canonical() const;
    /// FNV-1a hash of canonical().
    [[nodiscard]] std::uint64_t hash() const;
};

/// Exit statuses of the command-line front end.
enum class ExitStatus : int { Ok = 0, ConfigError = 2, NumericalError = 3 };

/// Each command validates the configuration, writes its CSV files and
/// <command>_summary.txt below config.output and prints the summary to `log`. Errors
/// propagate as ConfigError / NumericalError.
void cmd_solve(const RunConfig& config, std::ostream& log);
void cmd_verify(const RunConfig& config, std::ostream& log);
void cmd_rates(const RunConfig& config, std::ostream& log);
void cmd_oracle(const RunConfig& config, std::ostream& log);
void cmd_maxprinciple(const RunConfig& config, std::ostream& log);

[[nodiscard]] const std::vector<std::string>& command_names();

/// Runs a named command and maps exceptions to exit statuses, writing the
/// diagnostic to `err`.
ExitStatus run_command(std::string_view name, const RunConfig& config, std::ostream& log, std::ostream& err);

/// Writes `contents` to `path` through a temporary file in the same directory
/// and a rename.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

void set_thread_count(int threads);

}  // namespace mixedfrac
