#include "wfs/cutoff.hpp"

#include "wfs/errors.hpp"
#include "wfs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wfs {

CutoffFamily::CutoffFamily(const BallSpec& k, const BallSpec& w, int max_index, const CutoffOptions& opts)
    : center_(k.center), max_index_(max_index) {
    if (max_index < 1) throw ConfigError("cut-off family needs P >= 1");
    if (k.center.size() != w.center.size() || k.center.size() < 1) throw ConfigError("K and W dimensions differ");
    if (!(k.radius >= 0.0) || !(w.radius > 0.0)) throw ConfigError("K and W radii must be nonnegative");
    const double d = static_cast<double>(k.center.size());
    eps_ = ((w.radius - (k.center - w.center).norm()) / std::sqrt(d) - k.radius) / 4.0;
    if (!(eps_ > 0.0)) {
        throw GeometryError("W does not contain K with a positive margin (eps = " + std::to_string(eps_) + ")");
    }
    const double b = k.radius + 2.0 * eps_;
    const double m = 0.5 * eps_;
    const Profile1D smoothing = Profile1D::gevrey(opts.smoothing_s0, 0.5 * eps_, opts.design_radius);
    plateau_ = k.radius + eps_;
    support_ = k.radius + 3.0 * eps_;
    for (int p = 1; p <= max_index; ++p) {
        std::vector<double> widths{b};
        widths.insert(widths.end(), static_cast<std::size_t>(p), m / p);
        profiles_.push_back(Profile1D(std::move(widths), 2.0 * b).convolve(smoothing));
    }
}

CutoffFamily make_cutoff_family(const BallSpec& k, const BallSpec& w, int max_index, const CutoffOptions& opts) {
    return CutoffFamily(k, w, max_index, opts);
}

void CutoffFamily::check_index(int p) const {
    if (p < 1 || p > max_index_) {
        throw DepthError("cut-off index " + std::to_string(p) + " outside 1.." + std::to_string(max_index_));
    }
}

const Profile1D& CutoffFamily::axis_profile(int p) const {
    check_index(p);
    return profiles_[static_cast<std::size_t>(p - 1)];
}

double CutoffFamily::operator()(int p, const Vec& x) const {
    const Profile1D& prof = axis_profile(p);
    double v = 1.0;
    for (int i = 0; i < dim() && v != 0.0; ++i) v *= prof(x[i] - center_[i]);
    return v;
}

double CutoffFamily::spectrum(int p, const Vec& xi) const {
    const Profile1D& prof = axis_profile(p);
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= prof.spectrum(xi[i]);
    return v;
}

double CutoffFamily::log_abs_spectrum(int p, const Vec& xi) const {
    const Profile1D& prof = axis_profile(p);
    double v = 0.0;
    for (int i = 0; i < dim(); ++i) v += prof.log_abs_spectrum(xi[i]);
    return v;
}

double CutoffFamily::plateau_error(int p, int n) const {
    if (n < 1) throw ConfigError("plateau grid needs n >= 1");
    const Profile1D& prof = axis_profile(p);
    // Tensor structure: the worst point combines the worst axis values.
    double lo = 1.0;
    double hi = 1.0;
    for (int j = 0; j < n; ++j) {
        const double t = n == 1 ? 0.0 : -plateau_ + 2.0 * plateau_ * j / (n - 1);
        const double v = prof(t);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return std::max(std::abs(std::pow(lo, dim()) - 1.0), std::abs(std::pow(hi, dim()) - 1.0));
}

nlohmann::json CutoffFamily::to_json() const {
    return {{"center", std::vector<double>(center_.data(), center_.data() + center_.size())},
            {"max_index", max_index_},
            {"epsilon", eps_},
            {"plateau_half_width", plateau_},
            {"support_half_width", support_},
            {"support_radius", support_radius()}};
}

LocalizedSpectrum apply_cutoff(const CutoffFamily& family, const TestDistribution& f, int p,
                               const LocalizeOptions& opts) {
    return LocalizedSpectrum(f, family.axis_profile(p), family.center(), opts);
}

double bounded_family_norms(const CutoffFamily& family, const weights::WeightSequence& m, double h,
                            double radius, int radial_steps, int directions) {
    if (!(h > 0.0)) throw ConfigError("bounded_family_norms needs h > 0");
    if (family.dim() != 2 && directions != 2 * family.dim()) {
        // Outside the plane the rays are the coordinate half-axes.
        directions = 2 * family.dim();
    }
    const weights::AssociatedFunction assoc(m);
    double best = 0.0;
    for (int k = 0; k < directions; ++k) {
        Vec dir = Vec::Zero(family.dim());
        if (family.dim() == 2) {
            const double a = kTwoPi * k / directions;
            dir << std::cos(a), std::sin(a);
        } else {
            dir[k / 2] = (k % 2) ? -1.0 : 1.0;
        }
        for (int s = 0; s <= radial_steps; ++s) {
            const double r = radius * s / radial_steps;
            const double damp = r > 0.0 ? assoc(r / h).value : 0.0;
            for (int p = 1; p <= family.max_index(); ++p) {
                best = std::max(best, std::exp(family.log_abs_spectrum(p, r * dir) - damp));
            }
        }
    }
    return best;
}

MomentFit fit_moment_bound(const CutoffFamily& family, int p_lo, int p_hi) {
    if (p_lo < 1 || p_hi < p_lo) throw ConfigError("moment fit needs 1 <= p_lo <= p_hi");
    MomentFit fit;
    for (int p = p_lo; p <= p_hi; ++p) {
        const Profile1D& prof = family.axis_profile(p);
        // Integrate until the envelope times |zeta|^p is negligible.
        double z = 1.0;
        while (prof.log_envelope(z) + p * std::log(z) > std::log(1e-16) && z < 1e6) z *= 1.1;
        // Panels shorter than the spacing of the fastest sinc zeros.
        const double zero_gap = 0.5 / prof.half_widths().front();
        const int panels = static_cast<int>(std::ceil(z / (0.25 * zero_gap)));
        const quad::Rule rule = quad::composite(16, panels, 0.0, z);
        double log_sum = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double zeta = rule.nodes[i];
            const double term = std::log(rule.weights[i]) + p * std::log(zeta) + prof.log_abs_spectrum(zeta);
            if (std::isfinite(term)) {
                const double hi = std::max(log_sum, term);
                log_sum = hi + std::log(std::exp(log_sum - hi) + std::exp(term - hi));
            }
        }
        // Both half-lines.
        log_sum += std::log(2.0);
        const double ratio = std::exp(log_sum / p) / p;
        fit.p.push_back(p);
        fit.ratio.push_back(ratio);
        fit.c_fit = std::max(fit.c_fit, ratio);
    }
    return fit;
}

}  // namespace wfs
