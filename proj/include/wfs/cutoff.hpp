#pragma once

#include "wfs/distribution.hpp"
#include "wfs/localize.hpp"
#include "wfs/profile.hpp"
#include "wfs/types.hpp"
#include "wfs/weights.hpp"

#include <nlohmann/json.hpp>

#include <vector>

namespace wfs {

struct BallSpec {
    Vec center;
    double radius = 0.0;
};

struct CutoffOptions {
    double smoothing_s0 = 1.5;      // Gevrey order of the smoothing window phi_g
    double design_radius = 512.0;
};

/// chi_p = prod_i chi_{p,1}(x_i - c), chi_{p,1} = 1_[-b,b] * u_{m/p}^{*p} * phi_g.
/// With eps = ((r_W - |c_K - c_W|)/sqrt(d) - r_K)/4, b = r_K + 2 eps and m = g = eps/2,
/// chi_p is 1 on the cube of half-width r_K + eps and vanishes outside the cube
/// of half-width r_K + 3 eps, which lies in W.
class CutoffFamily {
public:
    CutoffFamily(const BallSpec& k, const BallSpec& w, int max_index, const CutoffOptions& opts = {});

    int max_index() const { return max_index_; }
    int dim() const { return static_cast<int>(center_.size()); }
    double epsilon() const { return eps_; }
    const Vec& center() const { return center_; }
    double plateau_half_width() const { return plateau_; }
    double support_half_width() const { return support_; }
    /// Euclidean radius of the support cube.
    double support_radius() const { return std::sqrt(static_cast<double>(dim())) * support_; }

    /// chi_{p,1} as a profile (mass 2b, support [-support, support]).
    const Profile1D& axis_profile(int p) const;

    double operator()(int p, const Vec& x) const;
    double spectrum(int p, const Vec& xi) const;
    double log_abs_spectrum(int p, const Vec& xi) const;

    /// max |chi_p - 1| over an n^d grid on the plateau cube.
    double plateau_error(int p, int n) const;

    nlohmann::json to_json() const;

private:
    void check_index(int p) const;

    Vec center_;
    int max_index_ = 0;
    double eps_ = 0.0;
    double plateau_ = 0.0;
    double support_ = 0.0;
    std::vector<Profile1D> profiles_;  // index p - 1
};

CutoffFamily make_cutoff_family(const BallSpec& k, const BallSpec& w, int max_index,
                                 const CutoffOptions& opts = {});

/// (chi_p f)^ as a localized spectrum centered on the family.
LocalizedSpectrum apply_cutoff(const CutoffFamily& family, const TestDistribution& f, int p,
                               const LocalizeOptions& opts = {});

/// D' = sup over p <= P and a frequency grid of |chi_p^(xi)| e^{-M(|xi|/h)}.
/// The grid is `radial_steps` radii in [0, radius] along `directions` rays.
double bounded_family_norms(const CutoffFamily& family, const weights::WeightSequence& m, double h,
                            double radius = 64.0, int radial_steps = 256, int directions = 8);

struct MomentFit {
    std::vector<int> p;
    std::vector<double> ratio;  // (int |zeta|^p |chi_{p,1}^(zeta)| d zeta)^{1/p} / p
    double c_fit = 0.0;         // max ratio
};

/// Condition (b) check on the one-dimensional factors for p in [p_lo, p_hi].
MomentFit fit_moment_bound(const CutoffFamily& family, int p_lo, int p_hi);

}  // namespace wfs
