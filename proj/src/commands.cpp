#include "wfs/commands.hpp"

#include "wfs/errors.hpp"
#include "wfs/fourier.hpp"
#include "wfs/localize.hpp"
#include "wfs/microlocal.hpp"
#include "wfs/svg.hpp"
#include "wfs/wavefront.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace wfs::cli {

namespace {

Exec exec_for(const config::RunConfig& cfg) {
    omp_set_num_threads(cfg.threads);
    return cfg.threads > 1 ? Exec::Parallel : Exec::Serial;
}

nlohmann::json vec_json(const Vec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const TestDistribution& need_distribution(const config::RunConfig& cfg) {
    if (!cfg.distribution) throw ConfigError("distribution: is required for this command");
    return *cfg.distribution;
}

std::vector<Vec> need_seeds(const config::RunConfig& cfg) {
    if (cfg.seeds.empty()) throw ConfigError("seeds: at least one seed point is required");
    return cfg.seeds;
}

Window make_window(const config::RunConfig& cfg) { return Window(cfg.window, cfg.dim()); }

std::string samples_csv(const std::vector<std::pair<std::size_t, const microlocal::PairResult*>>& pairs) {
    std::ostringstream s;
    s << "seed,theta,shell,point,log_modulus\n";
    for (const auto& [seed, p] : pairs) {
        for (const auto& d : p->samples) {
            s << seed << ',' << num(p->theta) << ',' << d.shell << ',';
            for (int i = 0; i < d.point.size(); ++i) s << (i ? " " : "") << num(d.point[i]);
            s << ',' << (std::isfinite(d.log_modulus) ? num(d.log_modulus) : std::string("-inf")) << '\n';
        }
    }
    return s.str();
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"weights-check", "lattice-info", "fourier-series",
                                                "analyze",       "wavefront",    "equivalence"};
    return names;
}

nlohmann::json cmd_weights_check(const config::RunConfig& cfg) {
    weights::CheckConfig cc;
    cc.dim = cfg.dim();
    cc.seed = cfg.seed;
    const auto& wc = cfg.weights_check;
    nlohmann::json out;
    out["omega"] = cfg.omega.to_json();
    out["omega_conditions"] = weights::check_weight_conditions(cfg.omega, wc.sample_radius, wc.samples, cc).to_json();
    if (cfg.sequence_s) {
        const auto m = weights::WeightSequence::factorial_power(*cfg.sequence_s, wc.depth + 1);
        out["sequence_conditions"] = weights::check_sequence_conditions(m, wc.depth, cc).to_json();
    }
    if (wc.moderate_lambda >= 0.0) {
        weights::ModerateConfig mc;
        mc.dim = cfg.dim();
        mc.seed = cfg.seed;
        const double l = wc.moderate_lambda;
        const auto fit = weights::is_moderate(microlocal::exp_weight(cfg.omega, l), cfg.omega, wc.samples, mc);
        out["moderate"] = {{"lambda", l}, {"c_mod", fit.c_mod}, {"lambda_mod", fit.lambda_mod},
                           {"lambda_half_radius", fit.lambda_half_radius}};
    }
    return out;
}

nlohmann::json cmd_lattice_info(const config::RunConfig& cfg) {
    const auto& lat = cfg.lattice;
    const Window w = make_window(cfg);
    const auto sv = lattice::shortest_vector(lat);
    const auto dsv = lattice::shortest_vector(lat.dual());
    const auto sep = lattice::check_separation(lat, w.support_radius());
    const auto count = lattice::enumerate_points(lat, cfg.analyzer.r_max).size();
    return {{"lattice", lat.to_json()},
            {"shortest_vector", {{"k", vec_json(sv.k.cast<double>())}, {"mu", vec_json(sv.mu)}, {"norm", sv.norm}}},
            {"dual_shortest_vector",
             {{"k", vec_json(dsv.k.cast<double>())}, {"mu", vec_json(dsv.mu)}, {"norm", dsv.norm}}},
            {"window", w.to_json()},
            {"separation",
             {{"radius", w.support_radius()}, {"separated", sep.separated}, {"witness", vec_json(sep.witness)},
              {"shortest", sep.shortest}}},
            {"points_within_r_max", count},
            {"r_max", cfg.analyzer.r_max}};
}

nlohmann::json cmd_fourier_series(const config::RunConfig& cfg, Artifacts& files) {
    const Exec exec = exec_for(cfg);
    const auto& fs = cfg.fourier;
    const auto& lat = cfg.lattice;
    const int d = lat.dim();
    fourier::RegionQuadrature q;
    q.order = fs.order;
    q.panels = fs.panels;
    fourier::FourierCoefficients coeffs;
    std::optional<fourier::FourierCoefficients> reference;
    std::string route_name, reference_name;
    nlohmann::json source;

    switch (fs.source) {
        case config::FourierSourceKind::PeriodizedGaussian: {
            const double w = fs.width;
            const double reach = fs.n_trunc * lattice::shortest_vector(lat).norm;
            const auto translates = lattice::enumerate_points(lat, reach);
            auto g = [&translates, w](const Vec& x) {
                double s = 0.0;
                for (const auto& t : translates) s += std::exp(-kPi * (x + t.mu).squaredNorm() / (w * w));
                return cplx(s, 0.0);
            };
            coeffs = fourier::coefficients_by_region(g, lat, fs.radius, q, exec);
            route_name = "region";
            fourier::FourierCoefficients exact = coeffs;
            for (std::size_t i = 0; i < exact.duals.size(); ++i) {
                exact.values[i] = std::pow(w, d) * std::exp(-kPi * w * w * exact.duals[i].norm * exact.duals[i].norm) /
                                  lat.covolume();
            }
            reference = exact;
            reference_name = "closed_form";
            source = {{"kind", "periodized_gaussian"}, {"width", w}, {"n_trunc", fs.n_trunc}};
            break;
        }
        case config::FourierSourceKind::Harmonic: {
            if (static_cast<int>(fs.harmonic.size()) != d) throw ConfigError("fourier.source.k: dimension differs from the lattice");
            IVec k(d);
            for (int i = 0; i < d; ++i) k[i] = fs.harmonic[static_cast<std::size_t>(i)];
            const Vec nu = lat.dual_generator() * k.cast<double>();
            auto g = [nu](const Vec& x) { return std::conj(unit_phase(nu.dot(x))); };
            coeffs = fourier::coefficients_by_region(g, lat, fs.radius, q, exec);
            route_name = "region";
            source = {{"kind", "harmonic"}, {"k", fs.harmonic}, {"nu", vec_json(nu)}};
            break;
        }
        case config::FourierSourceKind::Windowed: {
            const auto& f = need_distribution(cfg);
            if (fs.x0.size() != d) throw ConfigError("fourier.source.x0: dimension differs from the lattice");
            const LocalizedSpectrum ls(f, make_window(cfg), fs.x0);
            const auto src = fourier::compact_source(ls);
            if (src.value) {
                coeffs = fourier::coefficients_by_region(fourier::periodize(src, lat), lat, fs.radius, q, exec);
                route_name = "region";
                if (fs.cross_check) {
                    reference = fourier::coefficients_by_window(src, lat, fs.radius, exec);
                    reference_name = "window";
                }
            } else {
                if (fs.cross_check) throw Unsupported("the region route needs pointwise values; this source has none");
                coeffs = fourier::coefficients_by_window(src, lat, fs.radius, exec);
                route_name = "window";
            }
            source = {{"kind", "windowed"}, {"distribution", f.to_json()}, {"x0", vec_json(fs.x0)}};
            break;
        }
    }

    std::ostringstream csv;
    for (int i = 0; i < d; ++i) csv << "k" << i << ',';
    for (int i = 0; i < d; ++i) csv << "mu" << i << ',';
    csv << "re,im,abs";
    if (reference) csv << ",ref_re,ref_im,rel_delta";
    csv << '\n';
    double max_rel = 0.0, max_abs = 0.0;
    std::size_t nonzero = 0;
    for (std::size_t j = 0; j < coeffs.duals.size(); ++j) {
        const auto& p = coeffs.duals[j];
        const cplx c = coeffs.values[j];
        if (std::abs(c) > 1e-12) ++nonzero;
        for (int i = 0; i < d; ++i) csv << p.k[i] << ',';
        for (int i = 0; i < d; ++i) csv << num(p.mu[i]) << ',';
        csv << num(c.real()) << ',' << num(c.imag()) << ',' << num(std::abs(c));
        if (reference) {
            const cplx r = reference->values[j];
            const double delta = std::abs(c - r);
            const double rel = std::abs(r) > 0.0 ? delta / std::abs(r) : delta;
            max_rel = std::max(max_rel, rel);
            max_abs = std::max(max_abs, delta);
            csv << ',' << num(r.real()) << ',' << num(r.imag()) << ',' << num(rel);
        }
        csv << '\n';
    }
    files.emplace_back(cfg.output.csv.empty() ? "coefficients.csv" : cfg.output.csv, csv.str());
    nlohmann::json out = {{"source", source},
                          {"lattice", lat.to_json()},
                          {"route", route_name},
                          {"quadrature", {{"order", fs.order}, {"panels", fs.panels}}},
                          {"radius", fs.radius},
                          {"count", coeffs.duals.size()},
                          {"nonzero", nonzero}};
    if (reference) {
        out["reference"] = reference_name;
        out["max_rel_delta"] = max_rel;
        out["max_abs_delta"] = max_abs;
    }
    if (coeffs.duals.size() > 1) {
        try {
            out["growth"] = fourier::classify_growth(coeffs, cfg.omega).to_json();
        } catch (const InsufficientData& e) {
            out["growth"] = {{"verdict", "Indeterminate"}, {"note", e.what()}};
        }
    }
    return out;
}

nlohmann::json cmd_analyze(const config::RunConfig& cfg, Artifacts& files) {
    const Exec exec = exec_for(cfg);
    const auto& f = need_distribution(cfg);
    const auto seeds = need_seeds(cfg);
    auto a = cfg.analyzer;
    a.keep_samples = a.keep_samples || !cfg.output.csv.empty();
    const auto p = microlocal::analyze_pair(f, seeds.front(), cfg.theta, a, cfg.lattice, make_window(cfg), exec);
    if (a.keep_samples && a.mode != microlocal::Mode::Quasianalytic) {
        files.emplace_back(cfg.output.csv.empty() ? "samples.csv" : cfg.output.csv, samples_csv({{0, &p}}));
    }
    nlohmann::json out = p.to_json();
    out["detail"] = p.detail;
    out["analyzer"] = a.to_json();
    out["lattice"] = cfg.lattice.to_json();
    out["window"] = make_window(cfg).to_json();
    out["source"] = f.to_json();
    return out;
}

nlohmann::json cmd_wavefront(const config::RunConfig& cfg, Artifacts& files) {
    const Exec exec = exec_for(cfg);
    const auto& f = need_distribution(cfg);
    const auto seeds = need_seeds(cfg);
    auto a = cfg.analyzer;
    a.keep_samples = a.mode != microlocal::Mode::Quasianalytic;
    auto est = microlocal::estimate_wavefront(f, seeds, cfg.directions, a, cfg.lattice, make_window(cfg), exec);
    est.config_hash = cfg.hash;
    std::vector<std::pair<std::size_t, const microlocal::PairResult*>> all;
    std::size_t singular = 0;
    for (std::size_t i = 0; i < est.pairs.size(); ++i) {
        all.emplace_back(i / static_cast<std::size_t>(est.direction_count), &est.pairs[i]);
        if (est.pairs[i].verdict == microlocal::Verdict::Singular) ++singular;
    }
    if (a.keep_samples) files.emplace_back(cfg.output.csv.empty() ? "samples.csv" : cfg.output.csv, samples_csv(all));
    const std::string prefix = cfg.output.svg_prefix.empty() ? "polar" : cfg.output.svg_prefix;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        std::ostringstream title;
        title << f.name() << " seed " << s << " (";
        for (int i = 0; i < seeds[s].size(); ++i) title << (i ? ", " : "") << seeds[s][i];
        title << ") " << microlocal::to_string(a.mode);
        files.emplace_back(prefix + "_seed" + std::to_string(s) + ".svg", svg::polar_plot(est, s, title.str()));
    }
    nlohmann::json out = est.to_json();
    out["singular_pairs"] = singular;
    return out;
}

nlohmann::json cmd_equivalence(const config::RunConfig& cfg) {
    const Exec exec = exec_for(cfg);
    const auto& f = need_distribution(cfg);
    const auto seeds = need_seeds(cfg);
    const Window window = make_window(cfg);
    std::vector<weights::WeightFunction> omegas = cfg.equivalence.omegas;
    if (omegas.empty()) omegas.push_back(cfg.omega);
    const auto angles = microlocal::direction_angles(cfg.directions);
    microlocal::require_separation(cfg.lattice, window.support_radius(), "window support ball");

    struct Task {
        std::size_t omega, seed, dir;
    };
    std::vector<Task> tasks;
    for (std::size_t o = 0; o < omegas.size(); ++o) {
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            for (std::size_t k = 0; k < angles.size(); ++k) tasks.push_back({o, s, k});
        }
    }
    std::vector<nlohmann::json> rows(tasks.size());
    std::vector<double> deltas(tasks.size()), tols(tasks.size());
    for_each_index(exec, tasks.size(), [&](std::size_t t) {
        const auto& task = tasks[t];
        const LocalizedSpectrum ls(f, window, seeds[task.seed]);
        Vec axis(2);
        axis << std::cos(angles[task.dir]), std::sin(angles[task.dir]);
        const lattice::Cone cone(axis, cfg.analyzer.half_angle);
        microlocal::LambdaFitOptions lo;
        lo.r_min = cfg.analyzer.r_min;
        lo.r_max = cfg.analyzer.r_max;
        lo.spacing = cfg.analyzer.spacing;
        lo.thresholds = cfg.analyzer.thresholds;
        const auto lat_fit = microlocal::lambda_fit(ls, cone, &cfg.lattice, omegas[task.omega], lo);
        lo.continuous = true;
        const auto cont_fit = microlocal::lambda_fit(ls, cone, nullptr, omegas[task.omega], lo);
        deltas[t] = std::abs(lat_fit.lambda - cont_fit.lambda);
        tols[t] = cfg.equivalence.tolerance * std::max(cont_fit.lambda, 0.2);
        rows[t] = {{"omega", omegas[task.omega].to_json()},
                   {"x0", vec_json(seeds[task.seed])},
                   {"theta", angles[task.dir]},
                   {"lambda_lattice", lat_fit.lambda},
                   {"lambda_continuous", cont_fit.lambda},
                   {"delta", deltas[t]},
                   {"tolerance", tols[t]},
                   {"pass", deltas[t] <= tols[t]},
                   {"verdict_lattice", microlocal::to_string(lat_fit.beurling)},
                   {"verdict_continuous", microlocal::to_string(cont_fit.beurling)}};
    });
    double max_delta = 0.0;
    bool pass = true;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        max_delta = std::max(max_delta, deltas[t]);
        pass = pass && deltas[t] <= tols[t];
    }
    return {{"source", f.to_json()},
            {"lattice", cfg.lattice.to_json()},
            {"window", window.to_json()},
            {"relative_tolerance", cfg.equivalence.tolerance},
            {"pairs", rows},
            {"max_delta", max_delta},
            {"pass", pass}};
}

nlohmann::json run_command(const std::string& name, const config::RunConfig& cfg, Artifacts& files) {
    const auto t0 = std::chrono::steady_clock::now();
    nlohmann::json result;
    if (name == "weights-check") {
        result = cmd_weights_check(cfg);
    } else if (name == "lattice-info") {
        result = cmd_lattice_info(cfg);
    } else if (name == "fourier-series") {
        result = cmd_fourier_series(cfg, files);
    } else if (name == "analyze") {
        result = cmd_analyze(cfg, files);
    } else if (name == "wavefront") {
        result = cmd_wavefront(cfg, files);
    } else if (name == "equivalence") {
        result = cmd_equivalence(cfg);
    } else {
        throw ConfigError("unknown command '" + name + "'");
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {{"tool", kToolName},
            {"version", kToolVersion},
            {"command", name},
            {"config_hash", cfg.hash},
            {"config", cfg.echo},
            {"result", result},
            {"timings", {{"total_seconds", seconds}, {"threads", cfg.threads}}}};
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return kConfigError;
    if (dynamic_cast<const SeparationError*>(&e)) return kSeparationError;
    if (dynamic_cast<const EmptyCone*>(&e) || dynamic_cast<const InsufficientData*>(&e) ||
        dynamic_cast<const GeometryError*>(&e) || dynamic_cast<const SupportError*>(&e) ||
        dynamic_cast<const DepthError*>(&e) || dynamic_cast<const Unsupported*>(&e) ||
        dynamic_cast<const SingularGenerator*>(&e)) {
        return kDomainError;
    }
    return kNumericError;
}

nlohmann::json deterministic_part(nlohmann::json report) {
    report.erase("timings");
    return report;
}

}  // namespace wfs::cli
