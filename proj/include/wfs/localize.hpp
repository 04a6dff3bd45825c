#pragma once

#include "wfs/distribution.hpp"
#include "wfs/exec.hpp"
#include "wfs/profile.hpp"
#include "wfs/types.hpp"
#include "wfs/window.hpp"

#include <memory>
#include <vector>

namespace wfs {

enum class Route { ClosedForm, Quadrature1D, OversampledDFT };
std::string to_string(Route r);

struct LocalizeOptions {
    double abs_tol = 1e-10;         // adaptive quadrature (oblique plane jumps)
    double taper_fraction = 0.1;    // grid samples: cosine taper over this outer fraction per axis
};

/// xi -> (phi(. - x0) f)^(xi) for a tensor window phi(y) = prod_i psi(y_i).
class LocalizedSpectrum {
public:
    LocalizedSpectrum(TestDistribution f, Profile1D axis_profile, Vec x0, LocalizeOptions opts = {});
    LocalizedSpectrum(TestDistribution f, const Window& window, Vec x0, LocalizeOptions opts = {})
        : LocalizedSpectrum(std::move(f), window.profile(), std::move(x0), opts) {}

    cplx operator()(const Vec& xi) const;
    /// Transform of e_{-t} phi f, i.e. the spectrum shifted by t.
    cplx modulated(const Vec& xi, const Vec& t) const { return (*this)(xi + t); }

    /// Batch evaluation. Separable sources share one-dimensional factors across
    /// points; the parallel path computes exactly the same values.
    std::vector<cplx> evaluate(const std::vector<Vec>& xis, Exec exec = Exec::Serial) const;
    /// log |value|, assembled from factor logs so tiny values do not underflow.
    std::vector<double> log_abs(const std::vector<Vec>& xis, Exec exec = Exec::Serial) const;

    /// phi(x - x0)
    double window_at(const Vec& x) const;
    /// log |phi^(xi)|, the window's own decay.
    double window_log_abs(const Vec& xi) const;

    Route route() const;
    bool separable() const;
    const TestDistribution& source() const { return f_; }
    const Profile1D& profile() const { return psi_; }
    const Vec& x0() const { return x0_; }
    int dim() const { return f_.dim(); }

private:
    struct Factors {
        std::vector<std::vector<double>> keys;   // per axis, sorted unique coordinates
        std::vector<std::vector<cplx>> values;   // per axis factor values
        std::vector<std::vector<double>> logs;   // per axis log |factor|
    };
    struct GaussGrid {
        double step;
        double reach;
        double delta;
    };
    struct SpectrumTable {
        long first = 0;
        std::vector<double> values;
        double at(long j) const { return values[static_cast<std::size_t>(j - first)]; }
    };
    cplx axis_factor(int axis, double zeta) const;
    GaussGrid gauss_grid(int axis) const;
    cplx gaussian_sum(int axis, double zeta, const SpectrumTable* table) const;
    Factors factorize(const std::vector<Vec>& xis, Exec exec) const;
    cplx oblique_jump(const Vec& xi) const;
    cplx grid_sum(const Vec& xi) const;
    double window_spectrum(const Vec& eta) const;

    TestDistribution f_;
    Profile1D psi_;
    Vec x0_;
    LocalizeOptions opts_;
    int jump_axis_ = -1;       // axis-aligned plane jump
    double jump_sign_ = 1.0;
    struct GridTerm {
        Vec x;
        double weight;
    };
    std::shared_ptr<const std::vector<GridTerm>> grid_terms_;
};

}  // namespace wfs
