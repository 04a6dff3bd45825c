#pragma once

#include "wfs/lattice.hpp"
#include "wfs/types.hpp"

#include <vector>

namespace wfs::sampling {

/// Dyadic shells [2^k r_min, 2^{k+1} r_min) clipped to [r_min, r_max]; the last
/// shell is closed at r_max.
class ShellPlan {
public:
    ShellPlan(double r_min, double r_max);

    int count() const { return count_; }
    /// Shell index of a radius, or -1 outside [r_min, r_max].
    int shell_of(double r) const;
    double inner(int k) const;
    double outer(int k) const;
    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }

private:
    double r_min_;
    double r_max_;
    int count_;
};

/// Frequencies in a cone with their norms and shell indices.
struct ConeSamples {
    std::vector<Vec> points;
    std::vector<double> norms;
    std::vector<int> shells;
};

/// Gamma cap Lambda inside the shell plan, in enumeration order.
ConeSamples lattice_cone(const lattice::Lattice& lat, const lattice::Cone& cone, const ShellPlan& plan);

/// Polar grid in a planar cone: radial step `spacing`, angular step spacing / r,
/// so neighbouring samples are at most about `spacing` apart. Planar cones only.
ConeSamples continuous_cone(const lattice::Cone& cone, const ShellPlan& plan, double spacing = 0.25);

/// Product rule for integrals over {xi in Gamma, |xi| <= R}: composite
/// Gauss-Legendre in r (with the polar Jacobian folded in) times composite
/// Gauss-Legendre in angle. Planar cones only.
struct PolarRuleSpec {
    double radial_panel = 1.0;
    int radial_order = 8;
    double arc_panel = 2.0;  // angular panel length measured at radius R
    int angular_order = 8;
};

struct PolarRule {
    std::vector<Vec> points;
    std::vector<double> norms;
    std::vector<double> weights;
};

PolarRule polar_rule(const lattice::Cone& cone, double r_max, const PolarRuleSpec& spec = {});

/// Planar cone axis angle.
double axis_angle(const lattice::Cone& cone);

}  // namespace wfs::sampling
