#include "wfs/localize.hpp"

#include "wfs/errors.hpp"
#include "wfs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wfs {

std::string to_string(Route r) {
    switch (r) {
        case Route::ClosedForm: return "closed_form";
        case Route::Quadrature1D: return "quadrature_1d";
        case Route::OversampledDFT: return "direct_dft";
    }
    return "?";
}

namespace {

double cosine_taper(int j, int n, double fraction) {
    const double ramp = fraction * (n - 1);
    if (ramp < 1.0) return 1.0;
    const double from_edge = std::min<double>(j, n - 1 - j);
    if (from_edge >= ramp) return 1.0;
    return 0.5 * (1.0 - std::cos(kPi * from_edge / ramp));
}

}  // namespace

LocalizedSpectrum::LocalizedSpectrum(TestDistribution f, Profile1D axis_profile, Vec x0, LocalizeOptions opts)
    : f_(std::move(f)), psi_(std::move(axis_profile)), x0_(std::move(x0)), opts_(opts) {
    if (x0_.size() != f_.dim()) throw ConfigError("localization center has the wrong dimension");
    if (f_.kind() == DistKind::PlaneJump) {
        const Vec& n = f_.normal();
        for (int i = 0; i < n.size(); ++i) {
            if (std::abs(std::abs(n[i]) - 1.0) < 1e-15) {
                jump_axis_ = i;
                jump_sign_ = n[i] > 0.0 ? 1.0 : -1.0;
            }
        }
    }
    if (f_.kind() == DistKind::GridSamples) {
        const GridData& g = f_.grid();
        const int d = g.dim();
        auto terms = std::make_shared<std::vector<GridTerm>>();
        const double cell = std::pow(g.spacing, d);
        std::vector<int> idx(static_cast<std::size_t>(d), 0);
        for (std::size_t flat = 0; flat < g.values.size(); ++flat) {
            Vec x(d);
            double taper = 1.0;
            for (int i = 0; i < d; ++i) {
                x[i] = g.origin[i] + g.spacing * idx[static_cast<std::size_t>(i)];
                taper *= cosine_taper(idx[static_cast<std::size_t>(i)], g.shape[static_cast<std::size_t>(i)],
                                      opts_.taper_fraction);
            }
            const double w = cell * g.values[flat] * taper * window_at(x);
            if (w != 0.0) terms->push_back({x, w});
            for (int i = d - 1; i >= 0; --i) {
                if (++idx[static_cast<std::size_t>(i)] < g.shape[static_cast<std::size_t>(i)]) break;
                idx[static_cast<std::size_t>(i)] = 0;
            }
        }
        grid_terms_ = std::move(terms);
    }
}

Route LocalizedSpectrum::route() const {
    switch (f_.kind()) {
        case DistKind::PlaneJump: return Route::Quadrature1D;
        case DistKind::GridSamples: return Route::OversampledDFT;
        default: return Route::ClosedForm;
    }
}

bool LocalizedSpectrum::separable() const {
    switch (f_.kind()) {
        case DistKind::Gaussian: return true;
        case DistKind::PlaneJump: return jump_axis_ >= 0;
        default: return false;
    }
}

double LocalizedSpectrum::window_at(const Vec& x) const {
    double v = 1.0;
    for (int i = 0; i < x.size() && v != 0.0; ++i) v *= psi_(x[i] - x0_[i]);
    return v;
}

double LocalizedSpectrum::window_spectrum(const Vec& eta) const {
    double v = 1.0;
    for (int i = 0; i < eta.size(); ++i) v *= psi_.spectrum(eta[i]);
    return v;
}

double LocalizedSpectrum::window_log_abs(const Vec& xi) const {
    double v = 0.0;
    for (int i = 0; i < xi.size(); ++i) v += psi_.log_abs_spectrum(xi[i]);
    return v;
}

cplx LocalizedSpectrum::axis_factor(int axis, double zeta) const {
    const double c0 = x0_[axis];
    const cplx shift = unit_phase(zeta * c0);
    if (f_.kind() == DistKind::PlaneJump) {
        if (axis != jump_axis_) return shift * psi_.spectrum(zeta);
        // H(s y - c') with y the local coordinate and c' = offset - n . x0.
        const double c_local = f_.offset() - f_.normal().dot(x0_);
        if (jump_sign_ > 0.0) return shift * psi_.half_transform(c_local, zeta);
        return shift * psi_.half_transform(c_local, -zeta);
    }
    return shift * gaussian_sum(axis, zeta, nullptr);
}

LocalizedSpectrum::GaussGrid LocalizedSpectrum::gauss_grid(int axis) const {
    // Trapezoid sum in eta: its aliasing terms carry the Gaussian tail at distance
    // 1/step - (h + |delta|) = 8 w, i.e. a factor below e^{-200}.
    const double w = f_.width();
    const double delta = f_.center()[axis] - x0_[axis];
    GaussGrid g;
    g.step = 1.0 / (psi_.support() + std::abs(delta) + 8.0 * w);
    g.reach = 8.0 / w;
    g.delta = delta;
    return g;
}

cplx LocalizedSpectrum::gaussian_sum(int axis, double zeta, const SpectrumTable* table) const {
    // int psi^(zeta - eta) w e^{-pi w^2 eta^2} e^{-2 pi i eta delta} d eta on the
    // grid eta_n = zeta - step (m - n), so psi^ is only needed at multiples of step.
    const GaussGrid g = gauss_grid(axis);
    const double w = f_.width();
    const auto m = static_cast<long>(std::floor(zeta / g.step));
    const double s = zeta - static_cast<double>(m) * g.step;
    const auto n_lo = static_cast<long>(std::ceil((-g.reach - s) / g.step));
    const auto n_hi = static_cast<long>(std::floor((g.reach - s) / g.step));
    cplx sum = 0.0;
    for (long n = n_lo; n <= n_hi; ++n) {
        const double eta = s + static_cast<double>(n) * g.step;
        const long j = m - n;
        const double ps = table ? table->at(j) : psi_.spectrum(static_cast<double>(j) * g.step);
        sum += ps * (w * std::exp(-kPi * w * w * eta * eta)) * unit_phase(eta * g.delta);
    }
    return g.step * sum;
}

cplx LocalizedSpectrum::oblique_jump(const Vec& xi) const {
    const Vec& n = f_.normal();
    const double c_local = f_.offset() - n.dot(x0_);
    const double floor_log = std::log(psi_.mass()) * dim() + std::log(1e-18);
    double z = 1.0;
    while (psi_.log_envelope(z) * dim() > floor_log && z < 1e6) z *= 1.25;
    const double reach = xi.norm() + std::sqrt(static_cast<double>(dim())) * z;
    auto integrand = [&](double tau) {
        const cplx minus = window_spectrum(xi - tau * n) * unit_phase(tau * c_local);
        const cplx plus = window_spectrum(xi + tau * n) * std::conj(unit_phase(tau * c_local));
        return (minus - plus) / tau;
    };
    cplx integral = 0.0;
    const double seg = 2.0;
    for (double lo = 0.0; lo < reach; lo += seg) {
        integral += quad::adaptive(integrand, lo, std::min(reach, lo + seg), 1e-12, opts_.abs_tol / 100.0);
    }
    const cplx value = 0.5 * window_spectrum(xi) + integral / cplx(0.0, kTwoPi);
    return unit_phase(xi.dot(x0_)) * value;
}

cplx LocalizedSpectrum::grid_sum(const Vec& xi) const {
    cplx sum = 0.0;
    for (const auto& t : *grid_terms_) sum += t.weight * unit_phase(xi.dot(t.x));
    return sum;
}

cplx LocalizedSpectrum::operator()(const Vec& xi) const {
    if (xi.size() != dim()) throw ConfigError("frequency has the wrong dimension");
    switch (f_.kind()) {
        case DistKind::Delta:
            return window_at(f_.center()) * unit_phase(xi.dot(f_.center()));
        case DistKind::SyntheticSpectrum:
            return f_.amplitude() * std::exp(-f_.rate() * std::pow(xi.norm(), f_.exponent()));
        case DistKind::GridSamples:
            return grid_sum(xi);
        case DistKind::PlaneJump:
            if (jump_axis_ < 0) return oblique_jump(xi);
            [[fallthrough]];
        case DistKind::Gaussian: {
            cplx v = 1.0;
            for (int i = 0; i < dim(); ++i) v *= axis_factor(i, xi[i]);
            return v;
        }
    }
    return 0.0;
}

LocalizedSpectrum::Factors LocalizedSpectrum::factorize(const std::vector<Vec>& xis, Exec exec) const {
    Factors out;
    const int d = dim();
    out.keys.resize(static_cast<std::size_t>(d));
    out.values.resize(static_cast<std::size_t>(d));
    out.logs.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        auto& keys = out.keys[static_cast<std::size_t>(i)];
        keys.reserve(xis.size());
        for (const auto& xi : xis) keys.push_back(xi[i]);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    }
    // One flat task list over (axis, key) so the parallel path balances across axes.
    std::vector<std::pair<int, std::size_t>> tasks;
    for (int i = 0; i < d; ++i) {
        out.values[static_cast<std::size_t>(i)].resize(out.keys[static_cast<std::size_t>(i)].size());
        out.logs[static_cast<std::size_t>(i)].resize(out.keys[static_cast<std::size_t>(i)].size());
        for (std::size_t k = 0; k < out.keys[static_cast<std::size_t>(i)].size(); ++k) tasks.emplace_back(i, k);
    }
    std::vector<SpectrumTable> tables(static_cast<std::size_t>(d));
    if (f_.kind() == DistKind::Gaussian) {
        std::vector<std::pair<int, long>> entries;
        for (int i = 0; i < d; ++i) {
            const auto& keys = out.keys[static_cast<std::size_t>(i)];
            if (keys.empty()) continue;
            const GaussGrid g = gauss_grid(i);
            const auto span = static_cast<long>(std::ceil(g.reach / g.step)) + 2;
            auto& tab = tables[static_cast<std::size_t>(i)];
            tab.first = static_cast<long>(std::floor(keys.front() / g.step)) - span;
            const long last = static_cast<long>(std::floor(keys.back() / g.step)) + span;
            tab.values.resize(static_cast<std::size_t>(last - tab.first + 1));
            for (long j = tab.first; j <= last; ++j) entries.emplace_back(i, j);
        }
        for_each_index(exec, entries.size(), [&](std::size_t t) {
            const auto [axis, j] = entries[t];
            auto& tab = tables[static_cast<std::size_t>(axis)];
            tab.values[static_cast<std::size_t>(j - tab.first)] =
                psi_.spectrum(static_cast<double>(j) * gauss_grid(axis).step);
        });
    }
    for_each_index(exec, tasks.size(), [&](std::size_t t) {
        const auto [axis, k] = tasks[t];
        const auto a = static_cast<std::size_t>(axis);
        const double zeta = out.keys[a][k];
        cplx v;
        double lg;
        if (f_.kind() == DistKind::PlaneJump && axis != jump_axis_) {
            // Keep the log exact where the plain product would underflow.
            v = unit_phase(zeta * x0_[axis]) * psi_.spectrum(zeta);
            lg = psi_.log_abs_spectrum(zeta);
        } else if (f_.kind() == DistKind::Gaussian) {
            v = unit_phase(zeta * x0_[axis]) * gaussian_sum(axis, zeta, &tables[a]);
            lg = std::log(std::abs(v));
        } else {
            v = axis_factor(axis, zeta);
            lg = std::log(std::abs(v));
        }
        out.values[a][k] = v;
        out.logs[a][k] = lg;
    });
    return out;
}

std::vector<cplx> LocalizedSpectrum::evaluate(const std::vector<Vec>& xis, Exec exec) const {
    std::vector<cplx> out(xis.size());
    if (!separable()) {
        for_each_index(exec, xis.size(), [&](std::size_t i) { out[i] = (*this)(xis[i]); });
        return out;
    }
    const Factors fac = factorize(xis, exec);
    for (std::size_t j = 0; j < xis.size(); ++j) {
        cplx v = 1.0;
        for (int i = 0; i < dim(); ++i) {
            const auto a = static_cast<std::size_t>(i);
            const auto pos = std::lower_bound(fac.keys[a].begin(), fac.keys[a].end(), xis[j][i]) - fac.keys[a].begin();
            v *= fac.values[a][static_cast<std::size_t>(pos)];
        }
        out[j] = v;
    }
    return out;
}

std::vector<double> LocalizedSpectrum::log_abs(const std::vector<Vec>& xis, Exec exec) const {
    std::vector<double> out(xis.size());
    if (f_.kind() == DistKind::SyntheticSpectrum) {
        for (std::size_t j = 0; j < xis.size(); ++j) {
            out[j] = std::log(f_.amplitude()) - f_.rate() * std::pow(xis[j].norm(), f_.exponent());
        }
        return out;
    }
    if (!separable()) {
        const auto v = evaluate(xis, exec);
        for (std::size_t j = 0; j < v.size(); ++j) out[j] = std::log(std::abs(v[j]));
        return out;
    }
    const Factors fac = factorize(xis, exec);
    for (std::size_t j = 0; j < xis.size(); ++j) {
        double s = 0.0;
        for (int i = 0; i < dim(); ++i) {
            const auto a = static_cast<std::size_t>(i);
            const auto pos = std::lower_bound(fac.keys[a].begin(), fac.keys[a].end(), xis[j][i]) - fac.keys[a].begin();
            s += fac.logs[a][static_cast<std::size_t>(pos)];
        }
        out[j] = s;
    }
    return out;
}

}  // namespace wfs
