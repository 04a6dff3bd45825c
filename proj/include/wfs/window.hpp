#pragma once

#include "wfs/profile.hpp"
#include "wfs/types.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace wfs {

enum class WindowKind { BSpline, GevreyProduct };

struct WindowSpec {
    WindowKind kind = WindowKind::GevreyProduct;
    double s0 = 1.5;               // GevreyProduct
    int order = 4;                 // BSpline
    double radius = 0.5;           // per-axis half-width of the support box
    double design_radius = 512.0;  // GevreyProduct: largest frequency the factor count is sized for
    double mass = 1.0;             // integral of the window
};

/// Tensor-product window phi(x) = prod_i psi(x_i) with compact support in the
/// box [-radius, radius]^d.
class Window {
public:
    Window() = default;
    Window(const WindowSpec& spec, int dim);

    double spectrum(const Vec& xi) const;
    double log_abs_spectrum(const Vec& xi) const;
    double operator()(const Vec& x) const;

    /// Euclidean radius of the support box.
    double support_radius() const { return std::sqrt(static_cast<double>(dim_)) * profile_.support(); }
    double box_half_width() const { return profile_.support(); }
    int dim() const { return dim_; }
    const Profile1D& profile() const { return profile_; }
    const WindowSpec& spec() const { return spec_; }
    Window with_mass(double mass) const;

    nlohmann::json to_json() const;

private:
    WindowSpec spec_;
    int dim_ = 0;
    Profile1D profile_;
};

/// Fit of the spectral envelope along one axis over [r_lo, r_hi]:
///   gevrey form  log|psi^(zeta)| ~ log_c - rate * zeta^{1/exponent}
///   power form   log|psi^(zeta)| ~ log_c - exponent * log zeta
struct DecayFloorFit {
    bool gevrey_form = true;
    double exponent = 0.0;
    double rate = 0.0;
    double log_c = 0.0;
};

DecayFloorFit fit_decay_floor(const Profile1D& profile, double r_lo, double r_hi, bool gevrey_form,
                              int bins = 24, int samples_per_bin = 64);

}  // namespace wfs
