#include "mixedfrac/fields.hpp"

#include "mixedfrac/errors.hpp"

#include <fmt/format.h>

#include <cctype>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <numbers>
#include <vector>

namespace mixedfrac {

namespace {

struct Call {
    std::string name;
    std::vector<double> args;
    bool bare_number = false;
};

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return std::string(s);
}

double parse_number(std::string_view s, std::string_view context) {
    const std::string t = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError(fmt::format("cannot read a number from '{}' in preset '{}'", t, context));
    }
    return v;
}

Call parse_call(std::string_view spec) {
    const std::string s = trim(spec);
    if (s.empty()) {
        throw ConfigError("empty coefficient preset");
    }
    Call c;
    const auto open = s.find('(');
    if (open == std::string::npos) {
        if (std::isdigit(static_cast<unsigned char>(s.front())) || s.front() == '-' || s.front() == '+' || s.front() == '.') {
            c.bare_number = true;
            c.args.push_back(parse_number(s, spec));
            return c;
        }
        c.name = s;
        return c;
    }
    if (s.back() != ')') {
        throw ConfigError(fmt::format("unbalanced parentheses in preset '{}'", s));
    }
    c.name = trim(std::string_view(s).substr(0, open));
    std::string_view body = std::string_view(s).substr(open + 1, s.size() - open - 2);
    while (!body.empty()) {
        const auto comma = body.find(',');
        c.args.push_back(parse_number(body.substr(0, comma), spec));
        if (comma == std::string_view::npos) {
            break;
        }
        body.remove_prefix(comma + 1);
    }
    return c;
}

void expect_args(const Call& c, std::size_t lo, std::size_t hi, std::string_view spec) {
    if (c.args.size() < lo || c.args.size() > hi) {
        throw ConfigError(fmt::format("preset '{}' takes {} to {} arguments", spec, lo, hi));
    }
}

// Reference coordinates: [0, 1] across an interval, unit disk for a disk.
std::function<Point(const Point&)> reference_map(const Domain& d) {
    if (d.shape() == Shape::Interval) {
        const double a = d.lower();
        const double len = d.upper() - a;
        return [a, len](const Point& x) { return point1d((x.x() - a) / len); };
    }
    const Point c = d.center();
    const double r = d.radius();
    return [c, r](const Point& x) -> Point { return (x - c) / r; };
}

struct Sample {
    Point x;
    double value;
};

std::vector<Sample> read_table(const std::string& path, int dim) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot open coefficient table '{}'", path));
    }
    std::vector<Sample> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::replace(line.begin(), line.end(), ',', ' ');
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#' || std::isalpha(static_cast<unsigned char>(t.front()))) {
            continue;
        }
        std::istringstream is(t);
        std::vector<double> v;
        double x = 0.0;
        while (is >> x) {
            v.push_back(x);
        }
        if (static_cast<int>(v.size()) != dim + 1 || !is.eof()) {
            throw ConfigError(fmt::format("{}:{}: expected {} numbers per row", path, lineno, dim + 1));
        }
        out.push_back({dim == 1 ? point1d(v[0]) : Point(v[0], v[1]), v.back()});
    }
    if (out.empty()) {
        throw ConfigError(fmt::format("coefficient table '{}' has no rows", path));
    }
    return out;
}

// Linear interpolation in 1D (constant beyond the ends), nearest sample in 2D.
ScalarField tabulated(const std::string& path, const Domain& d) {
    auto rows = read_table(path, d.dimension());
    if (d.dimension() == 1) {
        std::sort(rows.begin(), rows.end(), [](const Sample& a, const Sample& b) { return a.x.x() < b.x.x(); });
        return [rows](const Point& p) {
            const double x = p.x();
            if (x <= rows.front().x.x()) {
                return rows.front().value;
            }
            if (x >= rows.back().x.x()) {
                return rows.back().value;
            }
            const auto it =
                std::upper_bound(rows.begin(), rows.end(), x, [](double v, const Sample& s) { return v < s.x.x(); });
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            const double th = (x - lo.x.x()) / (hi.x.x() - lo.x.x());
            return (1.0 - th) * lo.value + th * hi.value;
        };
    }
    return [rows](const Point& p) {
        const auto it = std::min_element(rows.begin(), rows.end(), [&](const Sample& a, const Sample& b) {
            return (a.x - p).squaredNorm() < (b.x - p).squaredNorm();
        });
        return it->value;
    };
}

}  // namespace

ScalarField scalar_preset(std::string_view spec, const Domain& d) {
    if (const std::string t = trim(spec); t.rfind("file:", 0) == 0) {
        return tabulated(t.substr(5), d);
    }
    const Call c = parse_call(spec);
    const auto ref = reference_map(d);
    const bool two = d.dimension() == 2;
    if (c.bare_number || c.name == "const") {
        expect_args(c, 1, 1, spec);
        const double v = c.args[0];
        return [v](const Point&) { return v; };
    }
    if (c.name == "zero") {
        return [](const Point&) { return 0.0; };
    }
    if (c.name == "linear") {
        return [ref, two](const Point& x) {
            const Point r = ref(x);
            return two ? r.x() + 0.5 * r.y() : r.x();
        };
    }
    if (c.name == "sin" || c.name == "cos") {
        expect_args(c, 0, 1, spec);
        const double k = c.args.empty() ? 1.0 : c.args[0];
        const bool use_sin = c.name == "sin";
        return [ref, two, k, use_sin](const Point& x) {
            const Point r = ref(x);
            const double t = std::numbers::pi * k * (two ? r.x() + r.y() : r.x());
            return use_sin ? std::sin(t) : std::cos(t);
        };
    }
    if (c.name == "gauss") {
        expect_args(c, two ? 3 : 2, two ? 3 : 2, spec);
        const Point x0 = two ? Point(c.args[0], c.args[1]) : point1d(c.args[0]);
        const double sigma = c.args.back();
        if (!(sigma > 0.0)) {
            throw ConfigError(fmt::format("gauss width must be positive in '{}'", spec));
        }
        return [ref, x0, sigma](const Point& x) { return std::exp(-(ref(x) - x0).squaredNorm() / (2.0 * sigma * sigma)); };
    }
    throw ConfigError(fmt::format("unknown scalar preset '{}'", spec));
}

VectorField vector_preset(std::string_view spec, const Domain& d) {
    const Call c = parse_call(spec);
    const auto ref = reference_map(d);
    const bool two = d.dimension() == 2;
    if (c.name == "zero") {
        return [](const Point&) { return Point::Zero().eval(); };
    }
    if (c.bare_number || c.name == "const") {
        expect_args(c, 1, 2, spec);
        const Point v = c.args.size() == 2 ? Point(c.args[0], c.args[1]) : Point(c.args[0], two ? c.args[0] : 0.0);
        if (!two && v.y() != 0.0) {
            throw ConfigError(fmt::format("drift preset '{}' has a second component on an interval", spec));
        }
        return [v](const Point&) { return v; };
    }
    if (c.name == "sin") {
        return [ref, two](const Point& x) {
            const Point r = ref(x);
            const double pi = std::numbers::pi;
            return two ? Point(std::sin(pi * r.y()), std::sin(pi * r.x())) : point1d(std::sin(2.0 * pi * r.x()));
        };
    }
    if (c.name == "swirl") {
        if (!two) {
            throw ConfigError("swirl drift needs a two-dimensional domain");
        }
        return [ref](const Point& x) {
            const Point r = ref(x);
            return Point(-r.y(), r.x());
        };
    }
    throw ConfigError(fmt::format("unknown drift preset '{}'", spec));
}

ScalarField random_smooth(std::mt19937_64& rng, const Domain& d, double amplitude, int modes) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    struct Mode {
        double c, k, l, phi;
    };
    std::vector<Mode> terms;
    double total = 0.0;
    for (int k = 0; k <= modes; ++k) {
        const int l_max = d.dimension() == 2 ? modes - k : 0;
        for (int l = 0; l <= l_max; ++l) {
            const double c = unit(rng) / (1.0 + k + l);
            terms.push_back({c, static_cast<double>(k), static_cast<double>(l), phase(rng)});
            total += std::abs(c);
        }
    }
    const double scale = total > 0.0 ? amplitude / total : 0.0;
    const auto ref = reference_map(d);
    return [terms, scale, ref](const Point& x) {
        const Point r = ref(x);
        double v = 0.0;
        for (const auto& m : terms) {
            v += m.c * std::cos(std::numbers::pi * (m.k * r.x() + m.l * r.y()) + m.phi);
        }
        return scale * v;
    };
}

ScalarField random_positive(std::mt19937_64& rng, const Domain& d, double floor, double amplitude) {
    auto g = random_smooth(rng, d, amplitude);
    return [g, floor](const Point& x) { return floor + std::exp(g(x)); };
}

VectorField random_drift(std::mt19937_64& rng, const Domain& d, double amplitude) {
    auto gx = random_smooth(rng, d, amplitude);
    if (d.dimension() == 1) {
        return [gx](const Point& x) { return point1d(gx(x)); };
    }
    auto gy = random_smooth(rng, d, amplitude);
    return [gx, gy](const Point& x) { return Point(gx(x), gy(x)); };
}

Coefficients random_coefficients(std::mt19937_64& rng, const Domain& d, SourceKind kind, double a_floor) {
    Coefficients c;
    c.q = random_drift(rng, d, 2.0);
    c.a = random_positive(rng, d, a_floor, 1.0);
    switch (kind) {
        case SourceKind::Zero:
            c.f = [](const Point&) { return 0.0; };
            break;
        case SourceKind::Nonnegative: {
            auto g = random_smooth(rng, d, 2.0);
            c.f = [g](const Point& x) { return std::exp(g(x)); };
            break;
        }
        case SourceKind::Signed:
            c.f = random_smooth(rng, d, 2.0);
            break;
    }
    return c;
}

ProblemData make_problem(const Representation& rep, const Coefficients& c, double gamma) {
    const auto& nodes = rep.grid().interior;
    const auto n = static_cast<Eigen::Index>(nodes.size());
    const int N = rep.domain().dimension();
    ProblemData pd;
    pd.q.resize(n, N);
    pd.a.resize(n);
    pd.f.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Point& x = nodes[static_cast<std::size_t>(i)];
        const Point qv = c.q(x);
        for (int k = 0; k < N; ++k) {
            pd.q(i, k) = qv[k];
        }
        pd.a[i] = c.a(x);
        pd.f[i] = c.f(x);
    }
    pd.p = rep.params();
    pd.gamma = gamma;
    return pd;
}

}  // namespace mixedfrac
