#include "wfs/quasianalytic.hpp"

#include "wfs/errors.hpp"
#include "wfs/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wfs::microlocal {

namespace {

nlohmann::json finite_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

}  // namespace

QuasianalyticResult quasianalytic_test(const TestDistribution& f, const Vec& x0, const lattice::Cone& cone,
                                       const lattice::Lattice& lat, const weights::WeightSequence& n,
                                       const CutoffFamily& family, const QuasianalyticOptions& opts, Exec exec) {
    const int p_max = opts.p_max;
    if (p_max < 4) throw ConfigError("quasianalytic test needs p_max >= 4");
    if (family.max_index() < p_max) throw DepthError("cut-off family is shallower than p_max");
    if (n.depth() < p_max) throw DepthError("weight sequence is shorter than p_max");
    if ((x0 - family.center()).cwiseAbs().maxCoeff() >= family.plateau_half_width()) {
        throw ConfigError("analysis point lies outside the cut-off plateau");
    }
    const auto sep = lattice::check_separation(lat, family.support_radius());
    if (!sep.separated) {
        std::ostringstream w;
        w << "(";
        for (int i = 0; i < sep.witness.size(); ++i) w << (i ? ", " : "") << sep.witness[i];
        w << ")";
        throw SeparationError("cut-off support ball meets the dual lattice", w.str());
    }
    const sampling::ShellPlan plan(opts.r_min, opts.r_max);
    if (plan.count() < 2) throw InsufficientData("quasianalytic test needs at least two shells");
    const auto cs = sampling::lattice_cone(lat, cone, plan);
    if (cs.points.empty()) throw EmptyCone("no lattice points of the cone between R_min and R");

    const Thresholds& th = opts.thresholds;
    QuasianalyticResult out;
    const auto shells = static_cast<std::size_t>(plan.count());
    out.shell_max.assign(static_cast<std::size_t>(p_max), std::vector<double>(shells, -kInfinity));
    std::vector<double> log_norm(cs.points.size());
    for (std::size_t i = 0; i < cs.points.size(); ++i) log_norm[i] = std::log(cs.norms[i]);
    for (int p = 1; p <= p_max; ++p) {
        const LocalizedSpectrum fp = apply_cutoff(family, f, p);
        const auto logs = fp.log_abs(cs.points, exec);
        auto& row = out.shell_max[static_cast<std::size_t>(p - 1)];
        for (std::size_t i = 0; i < cs.points.size(); ++i) {
            const auto k = static_cast<std::size_t>(cs.shells[i]);
            row[k] = std::max(row[k], logs[i] + p * log_norm[i]);
        }
    }
    out.vanishing = std::all_of(out.shell_max.begin(), out.shell_max.end(), [](const auto& row) {
        return std::all_of(row.begin(), row.end(), [](double x) { return std::isinf(x); });
    });
    if (out.vanishing) {
        out.verdict = Verdict::Regular;
        return out;
    }
    std::vector<double> mid;
    for (int p = 1; p <= p_max; ++p) {
        const auto& row = out.shell_max[static_cast<std::size_t>(p - 1)];
        const double s = *std::max_element(row.begin(), row.end());
        out.c_hat.push_back(std::exp((s - n.log_m(p)) / p));
        const double g = row[shells - 1] - row[shells - 2];
        out.growth.push_back(g);
        out.geometric.push_back(g >= th.geometric * p * std::log(2.0));
        if (p >= 4) mid.push_back(out.c_hat.back());
    }
    std::vector<double> sorted = mid;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t h = sorted.size() / 2;
    const double median = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
    out.c_cap = th.c_cap_factor * median;
    out.c_sup = *std::max_element(mid.begin(), mid.end());

    bool singular = true;
    for (int p = p_max - 2; p <= p_max; ++p) singular = singular && out.geometric[static_cast<std::size_t>(p - 1)];
    bool any_geometric = false;
    for (int p = 4; p <= p_max; ++p) any_geometric = any_geometric || out.geometric[static_cast<std::size_t>(p - 1)];
    if (singular) {
        out.verdict = Verdict::Singular;
    } else if (!any_geometric && out.c_sup <= out.c_cap) {
        out.verdict = Verdict::Regular;
    } else {
        out.verdict = Verdict::Indeterminate;
    }
    return out;
}

nlohmann::json QuasianalyticResult::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : shell_max) {
        nlohmann::json r = nlohmann::json::array();
        for (double x : row) r.push_back(finite_or_null(x));
        rows.push_back(r);
    }
    nlohmann::json c = nlohmann::json::array(), g = nlohmann::json::array();
    for (double x : c_hat) c.push_back(finite_or_null(x));
    for (double x : growth) g.push_back(finite_or_null(x));
    return {{"verdict", to_string(verdict)},
            {"shell_max", rows},
            {"c_hat", c},
            {"growth", g},
            {"geometric", geometric},
            {"c_cap", finite_or_null(c_cap)},
            {"c_sup", finite_or_null(c_sup)},
            {"vanishing", vanishing}};
}

}  // namespace wfs::microlocal
