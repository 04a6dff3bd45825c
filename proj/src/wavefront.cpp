#include "wfs/wavefront.hpp"

#include "wfs/errors.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace wfs::microlocal {

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

lattice::Cone cone_at(double theta, double half_angle) {
    Vec axis(2);
    axis << std::cos(theta), std::sin(theta);
    return lattice::Cone(axis, half_angle);
}

CutoffFamily family_at(const Vec& x0, const AnalyzerConfig& cfg, const Window& window) {
    return CutoffFamily({x0, 0.0}, {x0, window.support_radius()}, cfg.p_max, cfg.cutoff);
}

PairResult run_pair(const TestDistribution& f, const Vec& x0, double theta, const AnalyzerConfig& cfg,
                    const lattice::Lattice& lat, const Window& window, const CutoffFamily* family, Exec exec) {
    PairResult out;
    out.x0 = x0;
    out.theta = theta;
    const lattice::Cone cone = cone_at(theta, cfg.half_angle);
    if (cfg.mode == Mode::Quasianalytic) {
        QuasianalyticOptions qo;
        qo.p_max = cfg.p_max;
        qo.r_min = cfg.r_min;
        qo.r_max = cfg.r_max;
        qo.thresholds = cfg.thresholds;
        const auto n = weights::WeightSequence::factorial_power(cfg.sequence_s, cfg.p_max + 1);
        const auto r = quasianalytic_test(f, x0, cone, lat, n, *family, qo, exec);
        out.verdict = r.verdict;
        out.estimate = r.c_sup;
        out.band = 0.0;
        out.floor = std::nan("");
        out.tail_ratio = r.growth.empty() ? 0.0 : r.growth.back();
        out.detail = r.to_json();
        return out;
    }
    const LocalizedSpectrum ls(f, window, x0);
    LambdaFitOptions lo;
    lo.r_min = cfg.r_min;
    lo.r_max = cfg.r_max;
    lo.continuous = cfg.continuous;
    lo.spacing = cfg.spacing;
    lo.keep_samples = cfg.keep_samples;
    lo.thresholds = cfg.thresholds;
    const bool fit_only = cfg.mode == Mode::Roumieu || cfg.mode == Mode::Beurling;
    nlohmann::json fit_json;
    LambdaFit fit;
    try {
        fit = lambda_fit(ls, cone, &lat, cfg.omega, lo, exec);
        out.floor = fit.floor_lambda;
        out.samples = std::move(fit.samples);
        fit.samples.clear();
        fit_json = fit.to_json();
    } catch (const InsufficientData&) {
        // The seminorm modes do not need the slope; they report their own failures.
        if (fit_only) throw;
        out.floor = std::nan("");
    }
    switch (cfg.mode) {
        case Mode::Roumieu:
        case Mode::Beurling:
            out.verdict = cfg.mode == Mode::Roumieu ? fit.roumieu : fit.beurling;
            out.estimate = fit.lambda;
            out.band = fit.band;
            out.tail_ratio = fit.tail_ratio;
            out.detail = fit_json;
            break;
        case Mode::FourierLebesgue: {
            const auto log_v = exp_weight(cfg.omega, cfg.fl_lambda);
            const SeminormValue s = cfg.continuous
                                        ? fl_seminorm_continuous(ls, cone, log_v, cfg.q, cfg.r_max, cfg.thresholds, {}, exec)
                                        : fl_seminorm_lattice(ls, cone, lat, log_v, cfg.q, cfg.r_max, cfg.thresholds, exec);
            out.verdict = s.finite ? Verdict::Regular : Verdict::Singular;
            out.estimate = s.log_value;
            out.tail_ratio = s.tail_ratio;
            out.detail = {{"seminorm", s.to_json()}, {"fit", fit_json}};
            break;
        }
        case Mode::SupFamily:
        case Mode::InfFamily: {
            std::vector<FamilyMember> members;
            for (double l : cfg.family_lambdas) members.push_back({exp_weight(cfg.omega, l), cfg.q, std::to_string(l)});
            const auto fam = wf_family(ls, cfg.mode == Mode::SupFamily ? FamilyMode::Sup : FamilyMode::Inf, members,
                                       {cone}, lat, cfg.r_max, cfg.thresholds, exec);
            out.verdict = fam[0].verdict;
            double best = 0.0;
            nlohmann::json ms = nlohmann::json::array();
            for (std::size_t j = 0; j < members.size(); ++j) {
                if (fam[0].members[j].finite) best = std::max(best, cfg.family_lambdas[j]);
                ms.push_back({{"lambda", cfg.family_lambdas[j]}, {"seminorm", fam[0].members[j].to_json()}});
            }
            out.estimate = best;
            out.tail_ratio = fam[0].members.back().tail_ratio;
            out.detail = {{"members", ms}, {"fit", fit_json}};
            break;
        }
        case Mode::Quasianalytic: break;
    }
    return out;
}

}  // namespace

nlohmann::json AnalyzerConfig::to_json() const {
    nlohmann::json j = {{"mode", to_string(mode)},
                        {"omega", omega.to_json()},
                        {"half_angle", half_angle},
                        {"r_min", r_min},
                        {"r_max", r_max},
                        {"continuous", continuous},
                        {"thresholds", thresholds.to_json()}};
    if (continuous) j["spacing"] = spacing;
    if (mode == Mode::FourierLebesgue || mode == Mode::SupFamily || mode == Mode::InfFamily) {
        j["q"] = finite_or_null(q);
    }
    if (mode == Mode::FourierLebesgue) j["fl_lambda"] = fl_lambda;
    if (mode == Mode::SupFamily || mode == Mode::InfFamily) j["family_lambdas"] = family_lambdas;
    if (mode == Mode::Quasianalytic) {
        j["sequence_s"] = sequence_s;
        j["p_max"] = p_max;
        j["cutoff"] = {{"smoothing_s0", cutoff.smoothing_s0}, {"design_radius", cutoff.design_radius}};
    }
    return j;
}

nlohmann::json PairResult::to_json() const {
    return {{"x0", vec_json(x0)},
            {"theta", theta},
            {"verdict", to_string(verdict)},
            {"estimate", finite_or_null(estimate)},
            {"band", finite_or_null(band)},
            {"floor", finite_or_null(floor)},
            {"tail_ratio", finite_or_null(tail_ratio)}};
}

nlohmann::json WaveFrontEstimate::to_json() const {
    nlohmann::json ps = nlohmann::json::array();
    for (const auto& p : pairs) ps.push_back(p.to_json());
    nlohmann::json s = nlohmann::json::array();
    for (const auto& x : seeds) s.push_back(vec_json(x));
    nlohmann::json j = metadata;
    j["config_hash"] = config_hash;
    j["seeds"] = s;
    j["direction_count"] = direction_count;
    j["max_gap"] = max_gap;
    j["pairs"] = ps;
    return j;
}

std::vector<double> direction_angles(int count) {
    if (count < 1) throw ConfigError("direction count must be positive");
    std::vector<double> out;
    for (int k = 0; k < count; ++k) out.push_back(2.0 * kPi * k / count);
    return out;
}

void require_separation(const lattice::Lattice& lat, double rho, const std::string& what) {
    const auto sep = lattice::check_separation(lat, rho);
    if (sep.separated) return;
    std::ostringstream w;
    w.precision(17);
    w << "(";
    for (int i = 0; i < sep.witness.size(); ++i) w << (i ? ", " : "") << sep.witness[i];
    w << ")";
    std::ostringstream msg;
    msg << what << " of radius " << rho << " contains the dual lattice vector " << w.str() << " of length "
        << sep.shortest;
    throw SeparationError(msg.str(), w.str());
}

PairResult analyze_pair(const TestDistribution& f, const Vec& x0, double theta, const AnalyzerConfig& cfg,
                        const lattice::Lattice& lat, const Window& window, Exec exec) {
    if (f.dim() != 2 || lat.dim() != 2) throw Unsupported("direction grids are implemented for d = 2");
    if (cfg.mode == Mode::Quasianalytic) {
        const CutoffFamily family = family_at(x0, cfg, window);
        require_separation(lat, family.support_radius(), "cut-off support ball");
        return run_pair(f, x0, theta, cfg, lat, window, &family, exec);
    }
    require_separation(lat, window.support_radius(), "window support ball");
    return run_pair(f, x0, theta, cfg, lat, window, nullptr, exec);
}

WaveFrontEstimate estimate_wavefront(const TestDistribution& f, const std::vector<Vec>& seeds, int direction_count,
                                     const AnalyzerConfig& cfg, const lattice::Lattice& lat, const Window& window,
                                     Exec exec) {
    if (f.dim() != 2 || lat.dim() != 2) throw Unsupported("direction grids are implemented for d = 2");
    if (seeds.empty()) throw ConfigError("no seed points");
    const auto angles = direction_angles(direction_count);
    std::vector<CutoffFamily> families;
    if (cfg.mode == Mode::Quasianalytic) {
        for (const auto& x0 : seeds) families.push_back(family_at(x0, cfg, window));
        require_separation(lat, families.front().support_radius(), "cut-off support ball");
    } else {
        require_separation(lat, window.support_radius(), "window support ball");
    }
    WaveFrontEstimate out;
    out.seeds = seeds;
    out.direction_count = direction_count;
    out.max_gap = 2.0 * kPi / direction_count;
    out.pairs.resize(seeds.size() * angles.size());
    for_each_index(exec, out.pairs.size(), [&](std::size_t t) {
        const std::size_t s = t / angles.size(), k = t % angles.size();
        out.pairs[t] = run_pair(f, seeds[s], angles[k], cfg, lat, window,
                                families.empty() ? nullptr : &families[s], Exec::Serial);
    });
    out.metadata = {{"lattice", lat.to_json()},
                    {"window", window.to_json()},
                    {"analyzer", cfg.to_json()},
                    {"source", f.to_json()}};
    return out;
}

}  // namespace wfs::microlocal
