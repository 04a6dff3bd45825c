#include "wfs/microlocal.hpp"

#include "wfs/errors.hpp"

#include <algorithm>
#include <cmath>

namespace wfs::microlocal {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Regular: return "Regular";
        case Verdict::Singular: return "Singular";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "?";
}

std::string to_string(Mode m) {
    switch (m) {
        case Mode::FourierLebesgue: return "FourierLebesgue";
        case Mode::Roumieu: return "Roumieu";
        case Mode::Beurling: return "Beurling";
        case Mode::Quasianalytic: return "Quasianalytic";
        case Mode::SupFamily: return "SupFamily";
        case Mode::InfFamily: return "InfFamily";
    }
    return "?";
}

nlohmann::json Thresholds::to_json() const {
    return {{"lambda_min", lambda_min}, {"floor_band", floor_band},     {"trend_growth", trend_growth},
            {"trend_decay", trend_decay}, {"c_cap_factor", c_cap_factor}, {"geometric", geometric},
            {"tail_tol", tail_tol},       {"sup_tol", sup_tol}};
}

namespace {

nlohmann::json finite_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

nlohmann::json vec_json(const Vec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    std::vector<double> residuals;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw InsufficientData("shell maxima share one weight value; no slope can be fitted");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        f.residuals.push_back(r);
        sse += r * r;
    }
    f.slope_se = x.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
    return f;
}

// Shared tail diagnostics over terms already in log form (q * log-term for finite q).
SeminormValue summarize(const std::vector<double>& terms, const std::vector<double>& norms, double q, double radius,
                        const Thresholds& th) {
    SeminormValue out;
    out.count = terms.size();
    std::vector<double> head, tail;
    for (std::size_t i = 0; i < terms.size(); ++i) (norms[i] >= 0.5 * radius ? tail : head).push_back(terms[i]);
    if (std::isinf(q)) {
        const double hmax = head.empty() ? -kInfinity : *std::max_element(head.begin(), head.end());
        const double tmax = tail.empty() ? -kInfinity : *std::max_element(tail.begin(), tail.end());
        out.log_value = std::max(hmax, tmax);
        out.tail_ratio = std::isinf(out.log_value) ? 0.0 : std::exp(tmax - out.log_value);
        if (std::isinf(tmax)) {
            out.tail_growth = -kInfinity;
        } else if (std::isinf(hmax)) {
            out.tail_growth = kInfinity;
        } else {
            out.tail_growth = tmax - hmax;
        }
        out.finite = out.tail_growth <= th.sup_tol;
    } else {
        const double total = log_sum_exp(terms);
        const double t = log_sum_exp(tail);
        out.log_value = total / q;
        out.tail_ratio = std::isinf(total) ? 0.0 : std::exp(t - total);
        out.tail_growth = out.tail_ratio;
        out.finite = out.tail_ratio <= th.tail_tol;
    }
    out.value = std::exp(out.log_value);
    return out;
}

void check_q(double q, double radius) {
    if (!(q >= 1.0)) throw ConfigError("seminorm exponent q must be >= 1 or infinite");
    if (!(radius > 0.0)) throw ConfigError("seminorm radius must be positive");
}

}  // namespace

nlohmann::json SeminormValue::to_json() const {
    return {{"log_value", finite_or_null(log_value)}, {"value", finite_or_null(value)},
            {"tail_ratio", finite_or_null(tail_ratio)}, {"tail_growth", finite_or_null(tail_growth)},
            {"finite", finite}, {"count", count}};
}

LogWeight unit_weight() {
    return [](const Vec&) { return 0.0; };
}

LogWeight exp_weight(const weights::WeightFunction& w, double lambda) {
    return [w, lambda](const Vec& xi) { return lambda * w(xi); };
}

double log_sum_exp(const std::vector<double>& logs) {
    double m = -kInfinity;
    for (double x : logs) m = std::max(m, x);
    if (std::isinf(m)) return m;
    double s = 0.0;
    for (double x : logs) s += std::exp(x - m);
    return m + std::log(s);
}

SeminormValue fl_seminorm_lattice(const LocalizedSpectrum& ls, const lattice::Cone& cone, const lattice::Lattice& lat,
                                  const LogWeight& log_v, double q, double radius, const Thresholds& th, Exec exec) {
    check_q(q, radius);
    const auto pts = lattice::enumerate_in_cone(lat, cone, 0.0, radius);
    if (pts.empty()) throw EmptyCone("no lattice points of the cone within the radius");
    std::vector<Vec> xs;
    std::vector<double> norms;
    for (const auto& p : pts) {
        xs.push_back(p.mu);
        norms.push_back(p.norm);
    }
    const auto logs = ls.log_abs(xs, exec);
    std::vector<double> terms(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double t = logs[i] + log_v(xs[i]);
        terms[i] = std::isinf(q) ? t : q * t;
    }
    return summarize(terms, norms, q, radius, th);
}

SeminormValue fl_seminorm_continuous(const LocalizedSpectrum& ls, const lattice::Cone& cone, const LogWeight& log_v,
                                     double q, double radius, const Thresholds& th,
                                     const sampling::PolarRuleSpec& spec, Exec exec) {
    check_q(q, radius);
    const auto rule = sampling::polar_rule(cone, radius, spec);
    const auto logs = ls.log_abs(rule.points, exec);
    std::vector<double> terms(rule.points.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double t = logs[i] + log_v(rule.points[i]);
        terms[i] = std::isinf(q) ? t : q * t + std::log(rule.weights[i]);
    }
    return summarize(terms, rule.norms, q, radius, th);
}

LambdaFit lambda_fit(const LocalizedSpectrum& ls, const lattice::Cone& cone, const lattice::Lattice* lat,
                     const weights::WeightFunction& w, const LambdaFitOptions& opts, Exec exec) {
    const sampling::ShellPlan plan(opts.r_min, opts.r_max);
    if (plan.count() < 3) throw InsufficientData("lambda fit needs at least three dyadic shells between R_min and R");
    sampling::ConeSamples cs;
    if (opts.continuous) {
        cs = sampling::continuous_cone(cone, plan, opts.spacing);
    } else {
        if (!lat) throw ConfigError("lattice lambda fit needs a lattice");
        cs = sampling::lattice_cone(*lat, cone, plan);
    }
    if (cs.points.empty()) throw EmptyCone("no sample points of the cone between R_min and R");
    const auto logs = ls.log_abs(cs.points, exec);
    std::vector<double> floor(cs.points.size());
    for_each_index(exec, cs.points.size(), [&](std::size_t i) { floor[i] = ls.window_log_abs(cs.points[i]); });

    LambdaFit out;
    out.shells.resize(static_cast<std::size_t>(plan.count()));
    for (int k = 0; k < plan.count(); ++k) {
        auto& s = out.shells[static_cast<std::size_t>(k)];
        s.index = k;
        s.inner = plan.inner(k);
        s.outer = plan.outer(k);
    }
    std::vector<std::size_t> arg(out.shells.size(), cs.points.size());
    std::vector<std::size_t> floor_arg(out.shells.size(), cs.points.size());
    for (std::size_t i = 0; i < cs.points.size(); ++i) {
        const auto k = static_cast<std::size_t>(cs.shells[i]);
        auto& s = out.shells[k];
        ++s.count;
        if (logs[i] > s.log_max) {
            s.log_max = logs[i];
            arg[k] = i;
        }
        if (floor[i] > s.floor_log_max) {
            s.floor_log_max = floor[i];
            floor_arg[k] = i;
        }
    }
    for (std::size_t k = 0; k < out.shells.size(); ++k) {
        auto& s = out.shells[k];
        if (arg[k] < cs.points.size()) {
            s.argmax = cs.points[arg[k]];
            s.omega = w(s.argmax);
        }
        if (floor_arg[k] < cs.points.size()) s.floor_omega = w(cs.points[floor_arg[k]]);
    }
    if (opts.keep_samples) {
        out.samples.reserve(cs.points.size());
        for (std::size_t i = 0; i < cs.points.size(); ++i) out.samples.push_back({cs.points[i], logs[i], cs.shells[i]});
    }

    std::vector<double> x, y, fx, fy;
    for (const auto& s : out.shells) {
        if (std::isfinite(s.log_max)) {
            x.push_back(s.omega);
            y.push_back(s.log_max);
        }
        if (std::isfinite(s.floor_log_max)) {
            fx.push_back(s.floor_omega);
            fy.push_back(s.floor_log_max);
        }
    }
    if (x.empty()) {
        // phi f vanishes identically on the sampled cone.
        out.vanishing = true;
        out.roumieu = Verdict::Regular;
        out.beurling = Verdict::Regular;
        return out;
    }
    if (x.size() < 3) throw InsufficientData("fewer than three shells with nonzero maxima");
    const LineFit fit = fit_line(x, y);
    out.lambda = -fit.slope;
    out.band = 2.0 * fit.slope_se;
    out.residuals = fit.residuals;
    if (fx.size() >= 2) out.floor_lambda = -fit_line(fx, fy).slope;
    const double top = *std::max_element(y.begin(), y.end());
    out.tail_ratio = std::exp(y.back() - top);
    for (std::size_t k = 0; k + 1 < x.size(); ++k) out.local_slopes.push_back(-(y[k + 1] - y[k]) / (x[k + 1] - x[k]));

    const Thresholds& th = opts.thresholds;
    const bool floor_bound = out.floor_lambda > th.lambda_min && out.lambda >= (1.0 - th.floor_band) * out.floor_lambda;
    // Trend statistics: fits over the lowest and the highest three shells, which
    // averages out lobe-to-lobe jitter of the shell maxima.
    if (x.size() == 3) {
        out.lambda_low = out.local_slopes[0];
        out.lambda_high = out.local_slopes[1];
    } else {
        const std::size_t n = x.size();
        out.lambda_low = -fit_line({x.begin(), x.begin() + 3}, {y.begin(), y.begin() + 3}).slope;
        out.lambda_high = -fit_line({x.begin() + static_cast<long>(n) - 3, x.end()},
                                    {y.begin() + static_cast<long>(n) - 3, y.end()}).slope;
    }
    const double last = out.lambda_high;
    const double earlier = out.lambda_low;

    if (floor_bound) {
        out.beurling = Verdict::Indeterminate;
    } else if (last > th.lambda_min && last >= th.trend_growth * std::max(earlier, th.lambda_min)) {
        out.beurling = Verdict::Regular;
    } else {
        out.beurling = Verdict::Singular;
    }

    if (out.lambda <= th.lambda_min) {
        out.roumieu = Verdict::Singular;
    } else if (floor_bound) {
        out.roumieu = Verdict::Indeterminate;
    } else if (earlier > 0.0 && last <= th.trend_decay * earlier) {
        out.roumieu = Verdict::Singular;
    } else {
        out.roumieu = Verdict::Regular;
    }
    return out;
}

nlohmann::json LambdaFit::to_json() const {
    nlohmann::json shells_json = nlohmann::json::array();
    for (const auto& s : shells) {
        shells_json.push_back({{"index", s.index},
                               {"inner", s.inner},
                               {"outer", s.outer},
                               {"count", s.count},
                               {"log_max", finite_or_null(s.log_max)},
                               {"omega", s.omega},
                               {"argmax", s.argmax.size() ? vec_json(s.argmax) : nlohmann::json(nullptr)},
                               {"floor_log_max", finite_or_null(s.floor_log_max)}});
    }
    return {{"lambda", lambda},
            {"band", band},
            {"residuals", residuals},
            {"local_slopes", local_slopes},
            {"lambda_low", lambda_low},
            {"lambda_high", lambda_high},
            {"floor_lambda", floor_lambda},
            {"tail_ratio", tail_ratio},
            {"vanishing", vanishing},
            {"roumieu", to_string(roumieu)},
            {"beurling", to_string(beurling)},
            {"shells", shells_json}};
}

std::vector<FamilyVerdict> wf_family(const LocalizedSpectrum& ls, FamilyMode mode,
                                     const std::vector<FamilyMember>& family, const std::vector<lattice::Cone>& cones,
                                     const lattice::Lattice& lat, double radius, const Thresholds& th, Exec exec) {
    if (family.empty()) throw ConfigError("weight family is empty");
    std::vector<FamilyVerdict> out(cones.size());
    for (auto& fv : out) fv.members.resize(family.size());
    const std::size_t m = family.size();
    for_each_index(exec, cones.size() * m, [&](std::size_t t) {
        const std::size_t c = t / m, j = t % m;
        out[c].members[j] = fl_seminorm_lattice(ls, cones[c], lat, family[j].log_v, family[j].q, radius, th);
    });
    for (auto& fv : out) {
        const bool any = std::any_of(fv.members.begin(), fv.members.end(), [](const auto& s) { return s.finite; });
        const bool all = std::all_of(fv.members.begin(), fv.members.end(), [](const auto& s) { return s.finite; });
        const bool regular = mode == FamilyMode::Inf ? any : all;
        fv.verdict = regular ? Verdict::Regular : Verdict::Singular;
    }
    return out;
}

}  // namespace wfs::microlocal
