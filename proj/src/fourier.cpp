#include "wfs/fourier.hpp"

#include "wfs/errors.hpp"
#include "wfs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wfs::fourier {

using lattice::Lattice;

std::optional<cplx> FourierCoefficients::at(const IVec& k) const {
    for (std::size_t i = 0; i < duals.size(); ++i) {
        if (duals[i].k == k) return values[i];
    }
    return std::nullopt;
}

FourierCoefficients coefficients_by_region(const PeriodicSource& g, const Lattice& lat, double radius,
                                           const RegionQuadrature& q, Exec exec) {
    const int d = lat.dim();
    const double lo = q.shape == lattice::RegionShape::Centered ? -0.5 : 0.0;
    // In lattice coordinates u the cell is a unit cube and c_k = int g(T u) e^{-2 pi i k . u} du.
    const quad::Rule rule = quad::composite(q.order, q.panels, lo, lo + 1.0);
    const std::size_t n = rule.nodes.size();
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= n;
    std::vector<std::vector<double>> u_nodes(static_cast<std::size_t>(d), rule.nodes);
    if (q.shift) {
        for (int i = 0; i < d; ++i) {
            for (auto& u : u_nodes[static_cast<std::size_t>(i)]) u += (*q.shift)[i];
        }
    }
    std::vector<cplx> samples(total);
    for_each_index(exec, total, [&](std::size_t flat) {
        Vec u(d);
        double w = 1.0;
        std::size_t rem = flat;
        for (int i = d - 1; i >= 0; --i) {
            const std::size_t j = rem % n;
            rem /= n;
            u[i] = u_nodes[static_cast<std::size_t>(i)][j];
            w *= rule.weights[j];
        }
        samples[flat] = w * g(lat.generator() * u);
    });

    FourierCoefficients out;
    out.lattice = lat;
    out.radius = radius;
    out.duals = lattice::enumerate_points(lat.dual(), radius);
    out.values.resize(out.duals.size());
    for_each_index(exec, out.duals.size(), [&](std::size_t m) {
        const IVec& k = out.duals[m].k;
        // Phase tables per axis, then one pass over the samples.
        std::vector<std::vector<cplx>> phase(static_cast<std::size_t>(d), std::vector<cplx>(n));
        for (int i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                phase[static_cast<std::size_t>(i)][j] =
                    unit_phase(static_cast<double>(k[i]) * u_nodes[static_cast<std::size_t>(i)][j]);
            }
        }
        cplx sum = 0.0;
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::size_t rem = flat;
            cplx ph = 1.0;
            for (int i = d - 1; i >= 0; --i) {
                ph *= phase[static_cast<std::size_t>(i)][rem % n];
                rem /= n;
            }
            sum += samples[flat] * ph;
        }
        out.values[m] = sum;
    });
    return out;
}

CompactSource compact_source(const LocalizedSpectrum& ls) {
    CompactSource g;
    const auto* lsp = &ls;
    g.spectrum = [lsp](const Vec& xi) { return (*lsp)(xi); };
    if (ls.source().kind() == DistKind::Delta) {
        g.center = ls.source().center();
        g.support_radius = 0.0;
        return g;
    }
    g.value = [lsp](const Vec& x) {
        const double w = lsp->window_at(x);
        return w == 0.0 ? 0.0 : w * lsp->source()(x);
    };
    g.center = ls.x0();
    g.support_radius = std::sqrt(static_cast<double>(ls.dim())) * ls.profile().support();
    return g;
}

CompactSource delta_source(const Vec& x_c) {
    CompactSource g;
    g.spectrum = [x_c](const Vec& xi) { return unit_phase(xi.dot(x_c)); };
    g.center = x_c;
    g.support_radius = 0.0;
    return g;
}

PeriodicSource periodize(const CompactSource& g, const Lattice& lat) {
    if (!g.value) throw Unsupported("periodization needs pointwise values");
    return [g, lat](const Vec& x) {
        // Translates x + mu that can meet the support ball.
        const lattice::FundamentalRegion region(lat, lattice::RegionShape::Centered);
        const lattice::Reduced r = region.reduce(x - g.center);
        const Vec base = r.t + g.center;  // x - mu0 with mu0 = r.mu
        const double reach = g.support_radius + region.diameter_bound() + 1e-12;
        double sum = 0.0;
        for (const auto& p : lattice::enumerate_points(lat, reach)) {
            const Vec y = base + p.mu;
            if ((y - g.center).norm() <= g.support_radius * (1.0 + 1e-12)) sum += g.value(y);
        }
        return cplx(sum, 0.0);
    };
}

FourierCoefficients coefficients_by_window(const CompactSource& g, const Lattice& lat, double radius, Exec exec) {
    const double shortest = lattice::shortest_vector(lat).norm;
    if (!(2.0 * g.support_radius < shortest)) {
        throw SupportError("source support ball (radius " + std::to_string(g.support_radius) +
                           ") overlaps its lattice translates (shortest vector " + std::to_string(shortest) + ")");
    }
    FourierCoefficients out;
    out.lattice = lat;
    out.radius = radius;
    out.duals = lattice::enumerate_points(lat.dual(), radius);
    out.values.resize(out.duals.size());
    const double inv = 1.0 / lat.covolume();
    for_each_index(exec, out.duals.size(), [&](std::size_t m) { out.values[m] = inv * g.spectrum(out.duals[m].mu); });
    return out;
}

cplx synthesize(const FourierCoefficients& c, const Vec& x) {
    // In lattice coordinates mu* . x = k . (T^{-1} x), reduced to a unit phase.
    const Vec u = c.lattice.coordinates(x);
    cplx sum = 0.0;
    for (std::size_t m = 0; m < c.duals.size(); ++m) {
        double phase = 0.0;
        for (int i = 0; i < u.size(); ++i) phase += static_cast<double>(c.duals[m].k[i]) * (u[i] - std::floor(u[i]));
        sum += c.values[m] * std::conj(unit_phase(phase));
    }
    return sum;
}

PartitionOfUnity::PartitionOfUnity(Lattice lat, Window seed) : lat_(std::move(lat)), seed_(std::move(seed)) {
    if (seed_.dim() != lat_.dim()) throw ConfigError("seed window and lattice dimensions differ");
    if (std::abs(seed_.spec().mass - lat_.covolume()) > 1e-12 * lat_.covolume()) {
        throw ConfigError("partition-of-unity seed must have integral |Lambda|");
    }
    const Mat& t = lat_.generator();
    diagonal_ = true;
    for (int i = 0; i < t.rows(); ++i) {
        for (int j = 0; j < t.cols(); ++j) {
            if (i != j && t(i, j) != 0.0) diagonal_ = false;
        }
    }
    if (!diagonal_ && lat_.dim() != 2) throw Unsupported("partition of unity for non-diagonal generators needs d = 2");
}

PartitionOfUnity build_partition_of_unity(const Lattice& lat, const Window& seed) { return {lat, seed}; }

double PartitionOfUnity::spectrum(const Vec& xi) const {
    double v = seed_.spectrum(xi);
    for (int j = 0; j < lat_.dim(); ++j) v *= sinc_2pi(xi.dot(lat_.generator().col(j)));
    return v;
}

double PartitionOfUnity::support_radius() const {
    double r = seed_.support_radius();
    for (int j = 0; j < lat_.dim(); ++j) r += lat_.generator().col(j).norm();
    return r;
}

double PartitionOfUnity::operator()(const Vec& x) const {
    // eta(x) = (2^d |Lambda|)^{-1} int over the parallelepiped x - T[-1,1]^d of phi.
    const Profile1D& psi = seed_.profile();
    const Mat& t = lat_.generator();
    const int d = lat_.dim();
    if (diagonal_) {
        double v = 1.0;
        for (int i = 0; i < d; ++i) {
            const double a = std::abs(t(i, i));
            v *= (psi.cdf(x[i] + a) - psi.cdf(x[i] - a)) / (2.0 * a);
        }
        return v;
    }
    // d = 2: integrate psi(y1) [Psi(upper(y1)) - Psi(lower(y1))] over y1, split at the corners.
    const double h = psi.support();
    std::vector<double> breaks{-h, h};
    for (int sx : {-1, 1}) {
        for (int sy : {-1, 1}) breaks.push_back(x[0] - t(0, 0) * sx - t(0, 1) * sy);
    }
    std::sort(breaks.begin(), breaks.end());
    auto y2_range = [&](double y1, double& lo, double& hi) {
        // Points x - T s with s in [-1,1]^2 and first coordinate y1.
        const double s = x[0] - y1;  // = t00 s1 + t01 s2
        lo = std::numeric_limits<double>::infinity();
        hi = -lo;
        auto take = [&](double s1, double s2) {
            if (s1 < -1.0 - 1e-12 || s1 > 1.0 + 1e-12 || s2 < -1.0 - 1e-12 || s2 > 1.0 + 1e-12) return;
            const double y2 = x[1] - t(1, 0) * s1 - t(1, 1) * s2;
            lo = std::min(lo, y2);
            hi = std::max(hi, y2);
        };
        for (double e : {-1.0, 1.0}) {
            if (t(0, 1) != 0.0) take(e, (s - t(0, 0) * e) / t(0, 1));
            if (t(0, 0) != 0.0) take((s - t(0, 1) * e) / t(0, 0), e);
        }
    };
    double sum = 0.0;
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
        const double a0 = std::max(breaks[b], -h);
        const double a1 = std::min(breaks[b + 1], h);
        if (a1 <= a0) continue;
        const quad::Rule rule = quad::composite(20, 4, a0, a1);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double y1 = rule.nodes[i];
            double lo = 0.0;
            double hi = 0.0;
            y2_range(y1, lo, hi);
            if (!(hi > lo)) continue;
            sum += rule.weights[i] * psi(y1) * (psi.cdf(hi) - psi.cdf(lo));
        }
    }
    return sum / (4.0 * lat_.covolume());
}

double PartitionOfUnity::periodized_sum(const Vec& x, double radius) const {
    const double reach = support_radius();
    double sum = 0.0;
    double comp = 0.0;
    for (const auto& p : lattice::enumerate_points(lat_, radius)) {
        const Vec y = x + p.mu;
        if (y.norm() > reach) continue;
        // Kahan summation.
        const double term = (*this)(y) - comp;
        const double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    return sum;
}

PoissonReport poisson_check(const std::function<cplx(const Vec&)>& g, const std::function<cplx(const Vec&)>& g_hat,
                            const Lattice& lat, const std::vector<Vec>& x_grid, double n_trunc) {
    PoissonReport rep;
    const auto pts = lattice::enumerate_points(lat, n_trunc);
    const auto duals = lattice::enumerate_points(lat.dual(), n_trunc);
    const double outer = 0.9 * n_trunc;
    for (const auto& x : x_grid) {
        cplx lhs = 0.0;
        for (const auto& p : pts) {
            const cplx v = g(x + p.mu);
            lhs += v;
            if (p.norm >= outer) rep.lhs_last_term = std::max(rep.lhs_last_term, std::abs(v));
        }
        cplx rhs = 0.0;
        for (const auto& p : duals) {
            const cplx v = g_hat(p.mu);
            rhs += v * std::conj(unit_phase(p.mu.dot(x)));
            if (p.norm >= outer) rep.rhs_last_term = std::max(rep.rhs_last_term, std::abs(v));
        }
        rhs /= lat.covolume();
        rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(lhs - rhs));
    }
    return rep;
}

std::string to_string(GrowthVerdict v) {
    switch (v) {
        case GrowthVerdict::RapidDecay: return "rapid_decay";
        case GrowthVerdict::ModerateGrowth: return "moderate_growth";
        case GrowthVerdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

nlohmann::json GrowthClass::to_json() const {
    return {{"verdict", to_string(verdict)}, {"lambda_hat", lambda_hat},     {"slope", slope},
            {"intercept", intercept},        {"residual_rms", residual_rms}, {"shell_omega", shell_omega},
            {"shell_log_max", shell_log_max}};
}

GrowthClass classify_growth(const FourierCoefficients& c, const weights::WeightFunction& w, const GrowthConfig& cfg) {
    constexpr double kClamp = -690.0;  // log(1e-300)
    std::vector<double> best;
    std::vector<double> best_omega;
    for (std::size_t m = 0; m < c.duals.size(); ++m) {
        const double r = c.duals[m].norm;
        if (r < cfg.r_min) continue;
        const auto k = static_cast<std::size_t>(std::floor(std::log2(r / cfg.r_min)));
        if (k >= best.size()) {
            best.resize(k + 1, -std::numeric_limits<double>::infinity());
            best_omega.resize(k + 1, 0.0);
        }
        const double lv = std::log(std::abs(c.values[m]));
        if (lv > best[k]) {
            best[k] = lv;
            best_omega[k] = w(c.duals[m].mu);
        }
    }
    GrowthClass out;
    for (std::size_t k = 0; k < best.size(); ++k) {
        if (best[k] > kClamp) {
            out.shell_omega.push_back(best_omega[k]);
            out.shell_log_max.push_back(best[k]);
        }
    }
    if (out.shell_omega.size() < 3) throw InsufficientData("growth classification needs at least 3 nonzero shells");
    const auto& x = out.shell_omega;
    const auto& y = out.shell_log_max;
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    out.intercept = my - out.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - out.intercept - out.slope * x[i];
        ss += r * r;
    }
    out.residual_rms = std::sqrt(ss / n);
    out.lambda_hat = -out.slope;
    if (out.slope < -cfg.b_min) {
        out.verdict = GrowthVerdict::RapidDecay;
    } else if (out.slope <= cfg.b_max) {
        out.verdict = GrowthVerdict::ModerateGrowth;
    } else {
        out.verdict = GrowthVerdict::Indeterminate;
    }
    return out;
}

}  // namespace wfs::fourier
