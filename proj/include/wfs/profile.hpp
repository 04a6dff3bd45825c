#pragma once

#include "wfs/types.hpp"

#include <memory>
#include <vector>

namespace wfs {

/// One-dimensional density of a sum of independent uniform variables
/// U[-a_j, a_j], scaled to total mass `mass`. Spectrum: mass * prod_j sinc(2 pi a_j zeta).
/// Support is [-h, h] with h = sum_j a_j.
class Profile1D {
public:
    Profile1D() = default;
    explicit Profile1D(std::vector<double> half_widths, double mass = 1.0);

    /// `order` equal boxes filling [-half_width, half_width].
    static Profile1D bspline(int order, double half_width);
    /// a_j = c j^{-s0}, j = 1..J, with sum a_j = half_width and J large enough that
    /// every factor is still oscillating at |zeta| = design_radius.
    static Profile1D gevrey(double s0, double half_width, double design_radius);

    double spectrum(double zeta) const;
    double log_abs_spectrum(double zeta) const;
    /// log of mass * prod_j min(1, 1/(2 pi a_j |zeta|)), an upper bound of log|spectrum|.
    double log_envelope(double zeta) const;

    /// Spatial density; exactly 0 outside [-h, h].
    double operator()(double x) const;
    /// int_{-h}^{x} psi; 0 below the support, mass above it.
    double cdf(double x) const;
    /// int_{x > c} psi(x) e^{-2 pi i zeta x} dx
    cplx half_transform(double c, double zeta) const;

    double support() const { return support_; }
    double mass() const { return mass_; }
    const std::vector<double>& half_widths() const { return widths_; }

    Profile1D with_mass(double mass) const { return Profile1D(widths_, mass); }
    /// Density of the sum of both variables (spectra multiply).
    Profile1D convolve(const Profile1D& other) const;

    /// Number of retained Fourier-series terms (0 when the exact piecewise polynomial is used).
    std::size_t series_terms() const;

private:
    struct Series;
    const Series& series() const;

    std::vector<double> widths_;
    double mass_ = 1.0;
    double support_ = 0.0;
    std::shared_ptr<Series> series_;
};

}  // namespace wfs
