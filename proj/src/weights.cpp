#include "wfs/weights.hpp"

#include "wfs/errors.hpp"
#include "wfs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace wfs::weights {

// ---------------------------------------------------------------------------
// WeightFunction

WeightFunction WeightFunction::log() {
    WeightFunction w;
    w.kind_ = WeightKind::Log;
    return w;
}

WeightFunction WeightFunction::gevrey(double s) {
    if (!(s >= 1.0)) throw ConfigError("Gevrey weight requires s >= 1, got " + std::to_string(s));
    WeightFunction w;
    w.kind_ = WeightKind::Gevrey;
    w.s_ = s;
    return w;
}

WeightFunction WeightFunction::tabulated(std::vector<double> radii, std::vector<double> values) {
    if (radii.size() < 2 || radii.size() != values.size()) {
        throw ConfigError("tabulated weight needs at least two (radius, value) rows");
    }
    if (radii.front() != 0.0 || values.front() != 0.0) {
        throw ConfigError("tabulated weight must start at (0, 0)");
    }
    for (std::size_t i = 1; i < radii.size(); ++i) {
        if (!(radii[i] > radii[i - 1])) throw ConfigError("tabulated weight radii must be strictly increasing");
        if (values[i] < values[i - 1]) throw ConfigError("tabulated weight values must be nondecreasing");
    }
    WeightFunction w;
    w.kind_ = WeightKind::Tabulated;
    w.radii_ = std::make_shared<const std::vector<double>>(std::move(radii));
    w.values_ = std::make_shared<const std::vector<double>>(std::move(values));
    return w;
}

WeightFunction WeightFunction::from_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open weight table '" + path + "'");
    std::vector<double> radii;
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        double r = 0.0;
        double v = 0.0;
        if (!(row >> r >> v)) throw ConfigError("malformed weight table row: '" + line + "'");
        radii.push_back(r);
        values.push_back(v);
    }
    return tabulated(std::move(radii), std::move(values));
}

double WeightFunction::radial(double r) const {
    switch (kind_) {
        case WeightKind::Log:
            return std::log1p(r);
        case WeightKind::Gevrey:
            return s_ == 1.0 ? r : std::pow(r, 1.0 / s_);
        case WeightKind::Tabulated: {
            const auto& rs = *radii_;
            const auto& vs = *values_;
            if (r > rs.back()) {
                throw ExtrapolationError("tabulated weight queried at radius " + std::to_string(r) +
                                         " beyond table end " + std::to_string(rs.back()));
            }
            const auto it = std::upper_bound(rs.begin(), rs.end(), r);
            if (it == rs.end()) return vs.back();
            const std::size_t i = static_cast<std::size_t>(it - rs.begin());
            const double f = (r - rs[i - 1]) / (rs[i] - rs[i - 1]);
            return vs[i - 1] + f * (vs[i] - vs[i - 1]);
        }
    }
    return 0.0;
}

std::string WeightFunction::name() const {
    switch (kind_) {
        case WeightKind::Log: return "log";
        case WeightKind::Gevrey: {
            std::ostringstream os;
            os << "gevrey(" << s_ << ")";
            return os.str();
        }
        case WeightKind::Tabulated: return "tabulated";
    }
    return "?";
}

nlohmann::json WeightFunction::to_json() const {
    nlohmann::json j;
    switch (kind_) {
        case WeightKind::Log: j["kind"] = "log"; break;
        case WeightKind::Gevrey: j["kind"] = "gevrey"; j["s"] = s_; break;
        case WeightKind::Tabulated:
            j["kind"] = "tabulated";
            j["rows"] = radii_->size();
            j["max_radius"] = radii_->back();
            break;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Reports

std::string to_string(Diagnostic d) {
    switch (d) {
        case Diagnostic::HoldsToDepth: return "holds-to-depth";
        case Diagnostic::FailsAtP: return "fails-at-p";
        case Diagnostic::ConvergentDiagnostic: return "convergent-diagnostic";
        case Diagnostic::DivergentDiagnostic: return "divergent-diagnostic";
    }
    return "?";
}

const ConditionEntry& ConditionReport::at(const std::string& name) const {
    for (const auto& e : entries) {
        if (e.name == name) return e;
    }
    throw std::out_of_range("no condition entry '" + name + "'");
}

nlohmann::json ConditionReport::to_json() const {
    nlohmann::json j;
    j["subject"] = subject;
    j["extent"] = extent;
    j["conditions"] = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json c;
        c["name"] = e.name;
        c["verdict"] = to_string(e.verdict);
        c["failing_index"] = e.failing_index ? nlohmann::json(*e.failing_index) : nlohmann::json(nullptr);
        c["values"] = e.values;
        c["series"] = e.series;
        c["note"] = e.note;
        j["conditions"].push_back(c);
    }
    return j;
}

namespace {

// Dyadic block ratio test shared by the integrability and summability checks.
Diagnostic ratio_diagnostic(const std::vector<double>& blocks, double threshold, double& worst_ratio) {
    worst_ratio = 0.0;
    if (blocks.size() < 3) {
        worst_ratio = std::numeric_limits<double>::quiet_NaN();
        return Diagnostic::DivergentDiagnostic;
    }
    const std::size_t n = blocks.size();
    const std::size_t tail = std::min<std::size_t>(3, n - 1);
    for (std::size_t k = n - tail; k < n; ++k) {
        const double r = blocks[k - 1] > 0.0 ? blocks[k] / blocks[k - 1] : 0.0;
        worst_ratio = std::max(worst_ratio, r);
    }
    return worst_ratio < threshold ? Diagnostic::ConvergentDiagnostic : Diagnostic::DivergentDiagnostic;
}

Vec random_in_ball(std::mt19937_64& rng, int dim, double radius) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal(rng);
    const double n = v.norm();
    if (n == 0.0) return Vec::Zero(dim);
    const double r = radius * std::pow(unit(rng), 1.0 / dim);
    return v * (r / n);
}

double unit_sphere_area(int dim) {
    return 2.0 * std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

ConditionReport check_weight_conditions(const WeightFunction& w, double sample_radius, int n_samples,
                                        const CheckConfig& cfg) {
    if (n_samples < 2) throw ConfigError("check_weight_conditions needs n_samples >= 2");
    if (!(sample_radius > 2.0)) throw ConfigError("check_weight_conditions needs sample_radius > 2");
    ConditionReport report;
    report.subject = w.name();
    report.extent = sample_radius;

    // Subadditivity on random pairs and colinear pairs (xi, k xi).
    {
        std::mt19937_64 rng(cfg.seed);
        double worst = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n_samples; ++i) {
            const Vec a = random_in_ball(rng, cfg.dim, 0.5 * sample_radius);
            const Vec b = random_in_ball(rng, cfg.dim, 0.5 * sample_radius);
            worst = std::max(worst, w(a + b) - w(a) - w(b));
        }
        const double ks[] = {0.25, 0.5, 1.0, 2.0, 4.0};
        for (int i = 0; i < n_samples; ++i) {
            const Vec a = random_in_ball(rng, cfg.dim, 0.2 * sample_radius);
            for (double k : ks) {
                const Vec b = k * a;
                worst = std::max(worst, w(a + b) - w(a) - w(b));
            }
        }
        ConditionEntry e;
        e.name = "alpha";
        e.values["max_violation"] = worst;
        e.verdict = worst <= cfg.identity_tol ? Diagnostic::HoldsToDepth : Diagnostic::FailsAtP;
        e.note = "subadditivity on random and colinear pairs";
        report.entries.push_back(e);
    }

    // Integrability of omega / |xi|^(d+1) outside the unit ball, radially.
    {
        const double area = unit_sphere_area(cfg.dim);
        std::vector<double> shells;
        std::vector<double> partial;
        double total = 0.0;
        for (double lo = 1.0; 2.0 * lo <= sample_radius; lo *= 2.0) {
            const quad::Rule rule = quad::gauss_legendre(32, lo, 2.0 * lo);
            double s = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double r = rule.nodes[i];
                s += rule.weights[i] * w.radial(r) / (r * r);
            }
            s *= area;
            shells.push_back(s);
            total += s;
            partial.push_back(total);
        }
        ConditionEntry e;
        e.name = "beta";
        double worst = 0.0;
        e.verdict = ratio_diagnostic(shells, cfg.ratio_threshold, worst);
        e.values["worst_tail_ratio"] = worst;
        e.values["truncated_integral"] = total;
        e.series = shells;
        e.note = "dyadic shell contributions; partial integrals in 'partial'";
        report.entries.push_back(e);
        ConditionEntry p;
        p.name = "beta_partial";
        p.verdict = e.verdict;
        p.series = partial;
        report.entries.push_back(p);
    }

    // Lower bound omega >= a + C log(1 + |xi|).
    {
        std::vector<double> x;
        std::vector<double> y;
        const auto grid = geometric_grid(1.0, sample_radius, 64);
        for (double r : grid) {
            x.push_back(std::log1p(r));
            y.push_back(w.radial(r));
        }
        const double c = least_squares_slope(x, y);
        double a = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < x.size(); ++i) a = std::min(a, y[i] - c * x[i]);
        a = std::min(a, w.radial(0.0));
        ConditionEntry e;
        e.name = "gamma";
        e.values["a"] = a;
        e.values["C"] = c;
        e.verdict = c > 0.0 ? Diagnostic::HoldsToDepth : Diagnostic::FailsAtP;
        report.entries.push_back(e);
    }

    // omega / log(1 + |xi|) should keep increasing at the largest radii.
    {
        ConditionEntry e;
        e.name = "gamma0";
        std::vector<double> ratios;
        for (int k = 3; k >= 0; --k) {
            const double r = sample_radius / std::pow(2.0, k);
            ratios.push_back(w.radial(r) / std::log1p(r));
        }
        bool increasing = true;
        for (std::size_t i = 1; i < ratios.size(); ++i) increasing = increasing && ratios[i] > ratios[i - 1];
        increasing = increasing && ratios.back() > 1.05 * ratios.front();
        e.series = ratios;
        e.values["last_ratio"] = ratios.back();
        e.verdict = increasing ? Diagnostic::HoldsToDepth : Diagnostic::FailsAtP;
        e.note = "slope diagnostic omega/log(1+|xi|) at the four largest dyadic radii";
        report.entries.push_back(e);
    }
    return report;
}

// ---------------------------------------------------------------------------
// WeightSequence

WeightSequence WeightSequence::factorial_power(double s, long depth) {
    std::ostringstream name;
    name << "(p!)^" << s;
    return generated([s](long p) { return s * std::lgamma(static_cast<double>(p) + 1.0); }, depth, name.str());
}

WeightSequence WeightSequence::generated(const std::function<double(long)>& log_m, long depth, std::string name) {
    if (depth < 0) throw ConfigError("weight sequence depth must be nonnegative");
    std::vector<double> values(static_cast<std::size_t>(depth) + 1);
    for (long p = 0; p <= depth; ++p) values[static_cast<std::size_t>(p)] = log_m(p);
    return from_log_values(std::move(values), std::move(name));
}

WeightSequence WeightSequence::from_log_values(std::vector<double> log_m, std::string name) {
    if (log_m.empty()) throw ConfigError("weight sequence needs at least M_0");
    if (std::abs(log_m[0]) > 1e-12) throw ConfigError("weight sequence must have M_0 = 1");
    for (double v : log_m) {
        if (!std::isfinite(v)) throw ConfigError("weight sequence values must be positive and finite");
    }
    log_m[0] = 0.0;
    WeightSequence m;
    m.log_ = std::make_shared<const std::vector<double>>(std::move(log_m));
    m.name_ = std::move(name);
    return m;
}

double WeightSequence::log_m(long p) const {
    if (p < 0 || p > depth()) {
        throw DepthError("weight sequence '" + name_ + "' queried at p=" + std::to_string(p) +
                         " beyond cached depth " + std::to_string(depth()));
    }
    return (*log_)[static_cast<std::size_t>(p)];
}

// ---------------------------------------------------------------------------
// Associated function

AssociatedFunction::AssociatedFunction(const WeightSequence& m) : depth_(m.depth()) {
    const auto y = m.log_values();
    // Lower convex hull of the points (p, log M_p), monotone chain.
    for (long p = 0; p <= depth_; ++p) {
        const double yp = y[static_cast<std::size_t>(p)];
        while (vertices_.size() >= 2) {
            const long p1 = vertices_[vertices_.size() - 2];
            const long p2 = vertices_.back();
            const double y1 = vertex_log_[vertex_log_.size() - 2];
            const double y2 = vertex_log_.back();
            // Drop p2 if it lies on or above the chord p1 -> p.
            const double cross = (y2 - y1) * static_cast<double>(p - p1) - (yp - y1) * static_cast<double>(p2 - p1);
            if (cross >= 0.0) {
                vertices_.pop_back();
                vertex_log_.pop_back();
            } else {
                break;
            }
        }
        vertices_.push_back(p);
        vertex_log_.push_back(yp);
    }
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
        slopes_.push_back((vertex_log_[i + 1] - vertex_log_[i]) /
                          static_cast<double>(vertices_[i + 1] - vertices_[i]));
    }
}

AssociatedValue AssociatedFunction::unchecked(double t) const {
    if (!(t > 0.0)) throw ConfigError("associated function needs t > 0");
    const double x = std::log(t);
    // First vertex whose outgoing edge is at least as steep as log t.
    const auto it = std::lower_bound(slopes_.begin(), slopes_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - slopes_.begin());
    AssociatedValue out;
    out.argmax = vertices_[i];
    out.value = static_cast<double>(vertices_[i]) * x - vertex_log_[i];
    return out;
}

AssociatedValue AssociatedFunction::operator()(double t) const {
    const AssociatedValue v = unchecked(t);
    if (v.argmax == depth_ && depth_ > 0) {
        throw TruncationError("associated function at t=" + std::to_string(t) +
                              " is maximized at the cached depth " + std::to_string(depth_));
    }
    return v;
}

AssociatedValue associated_function_scan(const WeightSequence& m, double t) {
    if (!(t > 0.0)) throw ConfigError("associated function needs t > 0");
    const double x = std::log(t);
    AssociatedValue best{-std::numeric_limits<double>::infinity(), 0};
    for (long p = 0; p <= m.depth(); ++p) {
        const double v = static_cast<double>(p) * x - m.log_m(p);
        if (v > best.value) best = {v, p};
    }
    return best;
}

AssociatedValue associated_function(const WeightSequence& m, double t) {
    return AssociatedFunction(m)(t);
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = n == 1 ? lo : std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return out;
}

Regularized log_convex_regularization(const WeightSequence& m, long p, std::span<const double> t_grid) {
    if (t_grid.size() < 3) throw ConfigError("regularization grid needs at least 3 points");
    const AssociatedFunction assoc(m);
    std::vector<double> vals(t_grid.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        vals[i] = static_cast<double>(p) * std::log(t_grid[i]) - assoc(t_grid[i]).value;
        if (vals[i] > vals[best]) best = i;
    }
    // A boundary maximizer is only a truncation if the values still rise toward it.
    const double tol = 1e-12 * std::max(1.0, std::abs(vals[best]));
    if ((best == 0 && vals[0] > vals[1] + tol) ||
        (best == t_grid.size() - 1 && vals[best] > vals[best - 1] + tol)) {
        throw TruncationError("log-convex regularization of p=" + std::to_string(p) +
                              " is attained at the grid boundary");
    }
    return {std::exp(vals[best]), vals[best], best};
}

// ---------------------------------------------------------------------------
// Sequence conditions

ConditionReport check_sequence_conditions(const WeightSequence& m, long depth, const CheckConfig& cfg) {
    if (depth < 3) throw ConfigError("check_sequence_conditions needs depth >= 3");
    if (depth > m.depth()) throw DepthError("sequence cached only to depth " + std::to_string(m.depth()));
    ConditionReport report;
    report.subject = m.name();
    report.extent = static_cast<double>(depth);

    {
        ConditionEntry e;
        e.name = "M.1";
        for (long p = 1; p < depth; ++p) {
            const double lhs = 2.0 * m.log_m(p);
            const double rhs = m.log_m(p - 1) + m.log_m(p + 1);
            if (lhs > rhs + cfg.identity_tol * std::max(1.0, std::abs(rhs))) {
                e.verdict = Diagnostic::FailsAtP;
                e.failing_index = p;
                break;
            }
        }
        report.entries.push_back(e);
    }

    // (M.2)': log(M_{p+1}/M_p) <= log A + p log H
    {
        std::vector<double> x;
        std::vector<double> r;
        for (long p = 0; p < depth; ++p) {
            x.push_back(static_cast<double>(p));
            r.push_back(m.log_m(p + 1) - m.log_m(p));
        }
        const double log_h = std::max(0.0, least_squares_slope(x, r));
        double log_a = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < x.size(); ++i) log_a = std::max(log_a, r[i] - x[i] * log_h);
        ConditionEntry e;
        e.name = "M.2'";
        e.values["A"] = std::exp(log_a);
        e.values["H"] = std::exp(log_h);
        e.verdict = std::isfinite(log_a) ? Diagnostic::HoldsToDepth : Diagnostic::FailsAtP;
        e.note = "constants fitted on the cached range";
        report.entries.push_back(e);
    }

    // (M.2): log M_p - min_{1<=q<=p}(log M_q + log M_{p-q}) <= log A + p log H
    {
        const long cap = std::min<long>(depth, 2000);
        std::vector<double> x;
        std::vector<double> r;
        for (long p = 1; p <= cap; ++p) {
            double best = std::numeric_limits<double>::infinity();
            for (long q = 1; q <= p; ++q) best = std::min(best, m.log_m(q) + m.log_m(p - q));
            x.push_back(static_cast<double>(p));
            r.push_back(m.log_m(p) - best);
        }
        const double log_h = std::max(0.0, least_squares_slope(x, r));
        double log_a = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < x.size(); ++i) log_a = std::max(log_a, r[i] - x[i] * log_h);
        ConditionEntry e;
        e.name = "M.2";
        e.values["A"] = std::exp(log_a);
        e.values["H"] = std::exp(log_h);
        e.values["checked_depth"] = static_cast<double>(cap);
        e.verdict = Diagnostic::HoldsToDepth;
        report.entries.push_back(e);
    }

    // (M.3)': sum M_{p-1}/M_p
    {
        ConditionEntry e;
        e.name = "M.3'";
        std::vector<double> blocks;
        double partial = 0.0;
        double block = 0.0;
        long block_end = 2;
        std::vector<double> partials;
        for (long p = 1; p <= depth; ++p) {
            const double term = std::exp(m.log_m(p - 1) - m.log_m(p));
            partial += term;
            block += term;
            if (p + 1 == block_end) {
                blocks.push_back(block);
                partials.push_back(partial);
                block = 0.0;
                block_end *= 2;
            }
        }
        double worst = 0.0;
        e.verdict = ratio_diagnostic(blocks, cfg.ratio_threshold, worst);
        e.values["partial_sum"] = partial;
        e.values["worst_block_ratio"] = worst;
        if (e.verdict == Diagnostic::ConvergentDiagnostic && !blocks.empty()) {
            // Geometric continuation of the dyadic blocks past the cached depth.
            e.values["tail_estimate"] = blocks.back() * worst / (1.0 - worst);
        }
        e.series = partials;
        e.note = "series are partial sums at p = 2^k - 1";
        report.entries.push_back(e);
    }

    // (M.5): trend of (M_p / p!)^(1/p)
    {
        ConditionEntry e;
        e.name = "M.5";
        std::vector<double> lp;
        std::vector<double> lr;
        double min_ratio = std::numeric_limits<double>::infinity();
        for (long p = 1; p <= depth; ++p) {
            const double lratio = (m.log_m(p) - std::lgamma(static_cast<double>(p) + 1.0)) / static_cast<double>(p);
            const double ratio = std::exp(lratio);
            e.series.push_back(ratio);
            min_ratio = std::min(min_ratio, ratio);
            lp.push_back(std::log(static_cast<double>(p)));
            lr.push_back(lratio);
        }
        const double trend = least_squares_slope(lp, lr);
        e.values["ratio_constant"] = min_ratio;
        e.values["log_trend"] = trend;
        e.values["beurling"] = trend > 0.05 ? 1.0 : 0.0;
        e.verdict = trend >= -0.05 ? Diagnostic::HoldsToDepth : Diagnostic::FailsAtP;
        e.note = "Roumieu diagnostic: (M_p/p!)^(1/p) bounded below; 'beurling' flags growth to infinity";
        report.entries.push_back(e);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Auxiliary sequence

AuxiliaryValue auxiliary_sequence(const WeightSequence& m, const WeightSequence& n, long p) {
    if (p > m.depth() || p > n.depth()) throw DepthError("auxiliary sequence needs both sequences cached to p");
    AuxiliaryValue best{std::numeric_limits<double>::infinity(), 0};
    for (long q = 0; q <= p; ++q) {
        const double v = m.log_m(q) + n.log_m(p - q);
        if (v < best.log_value) best = {v, q};
    }
    return best;
}

WeightSequence auxiliary_sequence(const WeightSequence& m, const WeightSequence& n) {
    const long depth = std::min(m.depth(), n.depth());
    std::vector<double> values(static_cast<std::size_t>(depth) + 1);
    for (long p = 0; p <= depth; ++p) values[static_cast<std::size_t>(p)] = auxiliary_sequence(m, n, p).log_value;
    return WeightSequence::from_log_values(std::move(values), "Q[" + m.name() + "," + n.name() + "]");
}

// ---------------------------------------------------------------------------
// Moderate weights

namespace {

// Slope of the rightmost edge of the upper hull of {(x_i, y_i)} together with
// the origin: the smallest lambda whose constant does not blow up at the largest
// sampled omega values.
// Slope of the upper hull edge over x = frac * max x.
double upper_hull_slope(std::vector<std::pair<double, double>> pts, double frac) {
    pts.emplace_back(0.0, 0.0);
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            const double cross = (b.first - a.first) * (pt.second - a.second) - (b.second - a.second) * (pt.first - a.first);
            if (cross >= 0.0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(pt);
    }
    if (hull.size() < 2) return 0.0;
    const double x = frac * hull.back().first;
    for (std::size_t i = 1; i < hull.size(); ++i) {
        const auto& a = hull[i - 1];
        const auto& b = hull[i];
        if (b.first >= x && b.first > a.first) return std::max(0.0, (b.second - a.second) / (b.first - a.first));
    }
    return 0.0;
}

}  // namespace

ModerateFit is_moderate(const std::function<double(const Vec&)>& log_v, const WeightFunction& w, int pair_samples,
                        const ModerateConfig& cfg) {
    if (pair_samples < 4) throw ConfigError("is_moderate needs at least 4 pairs");
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::pair<double, double>> all;
    std::vector<std::pair<double, double>> inner;
    auto add = [&](const Vec& a, const Vec& b) {
        const double la = log_v(a);
        const double lab = log_v(a + b);
        if (!std::isfinite(la) || !std::isfinite(lab)) throw NotModerate("weight is not positive and finite on samples");
        const std::pair<double, double> pt{w(b), lab - la};
        all.push_back(pt);
        if (a.norm() <= 0.5 * cfg.radius && b.norm() <= 0.5 * cfg.radius) inner.push_back(pt);
    };
    for (int i = 0; i < pair_samples; ++i) add(random_in_ball(rng, cfg.dim, cfg.radius), random_in_ball(rng, cfg.dim, cfg.radius));
    for (int i = 0; i < pair_samples; ++i) {
        const Vec a = random_in_ball(rng, cfg.dim, cfg.radius);
        const double len = a.norm();
        if (len == 0.0) continue;
        for (double frac : {0.25, 0.5, 1.0}) add(a, a * (frac * cfg.radius / len));
        add(a * 0.0, a);
    }
    ModerateFit fit;
    fit.lambda_mod = upper_hull_slope(all, 0.5);
    fit.lambda_half_radius = upper_hull_slope(inner, 0.5);
    double log_c = 0.0;
    for (const auto& [x, y] : all) log_c = std::max(log_c, y - fit.lambda_mod * x);
    fit.c_mod = std::exp(log_c);
    if (fit.lambda_mod > cfg.growth_factor * fit.lambda_half_radius + cfg.slack || !std::isfinite(fit.c_mod)) {
        throw NotModerate("moderateness exponent grows with the sampling radius: lambda(R)=" +
                          std::to_string(fit.lambda_mod) + ", lambda(R/2)=" + std::to_string(fit.lambda_half_radius));
    }
    return fit;
}

}  // namespace wfs::weights
