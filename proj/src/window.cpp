#include "wfs/window.hpp"

#include "wfs/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>
#include <tuple>

namespace wfs {

Window::Window(const WindowSpec& spec, int dim) : spec_(spec), dim_(dim) {
    if (dim < 1) throw ConfigError("window dimension must be positive");
    if (!(spec.mass > 0.0)) throw ConfigError("window mass must be positive");
    const double axis_mass = std::pow(spec.mass, 1.0 / dim);
    switch (spec.kind) {
        case WindowKind::BSpline:
            profile_ = Profile1D::bspline(spec.order, spec.radius).with_mass(axis_mass);
            break;
        case WindowKind::GevreyProduct:
            profile_ = Profile1D::gevrey(spec.s0, spec.radius, spec.design_radius).with_mass(axis_mass);
            break;
    }
}

double Window::spectrum(const Vec& xi) const {
    double v = 1.0;
    for (int i = 0; i < dim_; ++i) v *= profile_.spectrum(xi[i]);
    return v;
}

double Window::log_abs_spectrum(const Vec& xi) const {
    double v = 0.0;
    for (int i = 0; i < dim_; ++i) v += profile_.log_abs_spectrum(xi[i]);
    return v;
}

double Window::operator()(const Vec& x) const {
    double v = 1.0;
    for (int i = 0; i < dim_ && v != 0.0; ++i) v *= profile_(x[i]);
    return v;
}

Window Window::with_mass(double mass) const {
    WindowSpec s = spec_;
    s.mass = mass;
    return Window(s, dim_);
}

nlohmann::json Window::to_json() const {
    nlohmann::json j;
    j["kind"] = spec_.kind == WindowKind::BSpline ? "bspline" : "gevrey_product";
    if (spec_.kind == WindowKind::BSpline) {
        j["order"] = spec_.order;
    } else {
        j["s0"] = spec_.s0;
        j["factors"] = profile_.half_widths().size();
        j["design_radius"] = spec_.design_radius;
    }
    j["radius"] = spec_.radius;
    j["support_radius"] = support_radius();
    j["mass"] = spec_.mass;
    return j;
}

namespace {

// Least squares y ~ slope * x + intercept; returns (slope, intercept, residual sum of squares).
std::tuple<double, double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
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
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    const double intercept = my - slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - slope * x[i] - intercept;
        sse += r * r;
    }
    return {slope, intercept, sse};
}

}  // namespace

DecayFloorFit fit_decay_floor(const Profile1D& profile, double r_lo, double r_hi, bool gevrey_form, int bins,
                              int samples_per_bin) {
    if (!(r_lo > 0.0 && r_hi > r_lo) || bins < 3 || samples_per_bin < 1) {
        throw ConfigError("decay-floor fit needs 0 < r_lo < r_hi and at least 3 bins");
    }
    // Bin maxima of log|psi^| on a log-spaced partition, then a line fit.
    std::vector<double> xs;
    std::vector<double> ys;
    const double step = std::log(r_hi / r_lo) / bins;
    for (int b = 0; b < bins; ++b) {
        double best = -std::numeric_limits<double>::infinity();
        double at = 0.0;
        for (int s = 0; s < samples_per_bin; ++s) {
            const double z = r_lo * std::exp(step * (b + (s + 0.5) / samples_per_bin));
            const double v = profile.log_abs_spectrum(z) - std::log(profile.mass());
            if (v > best) {
                best = v;
                at = z;
            }
        }
        if (!std::isfinite(best)) continue;
        xs.push_back(std::log(at));
        ys.push_back(best);
    }
    if (xs.size() < 3) throw InsufficientData("decay-floor fit has fewer than 3 usable bins");
    DecayFloorFit fit;
    fit.gevrey_form = gevrey_form;
    if (!gevrey_form) {
        const auto [slope, intercept, sse] = linear_fit(xs, ys);
        fit.exponent = -slope;
        fit.log_c = intercept;
        return fit;
    }
    // log|psi^| = log C_w - c_w zeta^beta: linear in (log C_w, c_w) for fixed beta,
    // beta = 1/s by a one-dimensional minimization of the residual.
    std::vector<double> zs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) zs[i] = std::exp(xs[i]);
    auto residual = [&](double beta) {
        std::vector<double> u(zs.size());
        for (std::size_t i = 0; i < zs.size(); ++i) u[i] = std::pow(zs[i], beta);
        return linear_fit(u, ys);
    };
    const auto [beta, sse] = boost::math::tools::brent_find_minima(
        [&](double b) { return std::get<2>(residual(b)); }, 0.05, 1.0, 40);
    const auto [slope, intercept, unused] = residual(beta);
    fit.exponent = 1.0 / beta;
    fit.rate = -slope;
    fit.log_c = intercept;
    return fit;
}

}  // namespace wfs
