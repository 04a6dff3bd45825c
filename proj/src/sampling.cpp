#include "wfs/sampling.hpp"

#include "wfs/errors.hpp"
#include "wfs/quadrature.hpp"

#include <cmath>

namespace wfs::sampling {

ShellPlan::ShellPlan(double r_min, double r_max) : r_min_(r_min), r_max_(r_max) {
    if (!(r_min > 0.0 && r_max > r_min)) throw ConfigError("shells need 0 < R_min < R");
    count_ = static_cast<int>(std::ceil(std::log2(r_max / r_min) - 1e-12));
    if (count_ < 1) count_ = 1;
}

int ShellPlan::shell_of(double r) const {
    if (r < r_min_ || r > r_max_) return -1;
    const int k = static_cast<int>(std::floor(std::log2(r / r_min_)));
    // log2 rounding at exact powers of two
    int j = std::min(std::max(k, 0), count_ - 1);
    if (j + 1 < count_ && r >= outer(j)) ++j;
    if (j > 0 && r < inner(j)) --j;
    return j;
}

double ShellPlan::inner(int k) const { return r_min_ * std::ldexp(1.0, k); }

double ShellPlan::outer(int k) const { return k + 1 >= count_ ? r_max_ : r_min_ * std::ldexp(1.0, k + 1); }

ConeSamples lattice_cone(const lattice::Lattice& lat, const lattice::Cone& cone, const ShellPlan& plan) {
    const auto pts = lattice::enumerate_in_cone(lat, cone, plan.r_min(), plan.r_max());
    ConeSamples out;
    out.points.reserve(pts.size());
    for (const auto& p : pts) {
        out.points.push_back(p.mu);
        out.norms.push_back(p.norm);
        out.shells.push_back(plan.shell_of(p.norm));
    }
    return out;
}

double axis_angle(const lattice::Cone& cone) {
    if (cone.dim() != 2) throw Unsupported("continuous cone sampling is implemented for d = 2 only");
    return std::atan2(cone.axis()[1], cone.axis()[0]);
}

ConeSamples continuous_cone(const lattice::Cone& cone, const ShellPlan& plan, double spacing) {
    if (!(spacing > 0.0)) throw ConfigError("polar grid spacing must be positive");
    const double theta0 = axis_angle(cone);
    // Stay strictly inside the open cone.
    const double alpha = cone.half_angle() - 2.0 * lattice::Cone::kBoundaryTol;
    ConeSamples out;
    const auto radial = static_cast<long>(std::ceil((plan.r_max() - plan.r_min()) / spacing));
    for (long i = 0; i <= radial; ++i) {
        const double r = std::min(plan.r_max(), plan.r_min() + static_cast<double>(i) * spacing);
        const auto half = static_cast<long>(std::ceil(alpha * r / spacing));
        const int shell = plan.shell_of(r);
        for (long j = -half; j <= half; ++j) {
            const double t = theta0 + alpha * static_cast<double>(j) / static_cast<double>(std::max(half, 1L));
            Vec xi(2);
            xi << r * std::cos(t), r * std::sin(t);
            out.points.push_back(xi);
            out.norms.push_back(r);
            out.shells.push_back(shell);
        }
    }
    return out;
}

PolarRule polar_rule(const lattice::Cone& cone, double r_max, const PolarRuleSpec& spec) {
    if (!(r_max > 0.0)) throw ConfigError("cone integral needs R > 0");
    const double theta0 = axis_angle(cone);
    const double alpha = cone.half_angle();
    const int r_panels = std::max(1, static_cast<int>(std::ceil(r_max / spec.radial_panel)));
    const int t_panels = std::max(1, static_cast<int>(std::ceil(2.0 * alpha * r_max / spec.arc_panel)));
    const quad::Rule radial = quad::composite(spec.radial_order, r_panels, 0.0, r_max);
    const quad::Rule angular = quad::composite(spec.angular_order, t_panels, theta0 - alpha, theta0 + alpha);
    PolarRule out;
    out.points.reserve(radial.nodes.size() * angular.nodes.size());
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        const double r = radial.nodes[i];
        for (std::size_t j = 0; j < angular.nodes.size(); ++j) {
            const double t = angular.nodes[j];
            Vec xi(2);
            xi << r * std::cos(t), r * std::sin(t);
            out.points.push_back(xi);
            out.norms.push_back(r);
            out.weights.push_back(radial.weights[i] * r * angular.weights[j]);
        }
    }
    return out;
}

}  // namespace wfs::sampling
