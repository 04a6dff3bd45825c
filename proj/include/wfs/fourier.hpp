#pragma once

#include "wfs/exec.hpp"
#include "wfs/lattice.hpp"
#include "wfs/localize.hpp"
#include "wfs/types.hpp"
#include "wfs/weights.hpp"
#include "wfs/window.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <optional>
#include <vector>

namespace wfs::fourier {

/// Coefficients of a Lambda-periodic function, indexed by the dual lattice points
/// |mu*| <= radius in lexicographic order of their integer coordinates.
struct FourierCoefficients {
    lattice::Lattice lattice;  // the periodicity lattice
    double radius = 0.0;
    std::vector<lattice::LatticePoint> duals;
    std::vector<cplx> values;

    /// Coefficient at integer dual coordinates k, if stored.
    std::optional<cplx> at(const IVec& k) const;
};

using PeriodicSource = std::function<cplx(const Vec&)>;

struct RegionQuadrature {
    int order = 128;   // Gauss-Legendre nodes per panel and axis
    int panels = 1;
    lattice::RegionShape shape = lattice::RegionShape::Centered;
    std::optional<Vec> shift;  // extra translation of the cell, in lattice coordinates
};

/// c_{mu*} = (1/|Lambda|) int_{I_Lambda} g(x) e^{-2 pi i mu* . x} dx by tensor Gauss-Legendre.
FourierCoefficients coefficients_by_region(const PeriodicSource& g, const lattice::Lattice& lat, double radius,
                                           const RegionQuadrature& q = {}, Exec exec = Exec::Serial);

/// A compactly supported source: pointwise values (optional), its transform, and a
/// ball containing the support.
struct CompactSource {
    std::function<double(const Vec&)> value;
    std::function<cplx(const Vec&)> spectrum;
    Vec center;
    double support_radius = 0.0;
};

/// phi(. - x0) f as a compact source; pointwise values need a function-valued f.
CompactSource compact_source(const LocalizedSpectrum& ls);
CompactSource delta_source(const Vec& x_c);

/// The Lambda-periodization sum_mu g(x + mu).
PeriodicSource periodize(const CompactSource& g, const lattice::Lattice& lat);

/// c_{mu*} = g^(mu*) / |Lambda| for the periodization of g. Throws SupportError
/// unless the support ball is disjoint from its nonzero Lambda-translates.
FourierCoefficients coefficients_by_window(const CompactSource& g, const lattice::Lattice& lat, double radius,
                                           Exec exec = Exec::Serial);

/// Partial sum sum_{mu*} c_{mu*} e^{2 pi i mu* . x}.
cplx synthesize(const FourierCoefficients& c, const Vec& x);

/// eta with eta^(xi) = phi^(xi) prod_j sinc(2 pi xi . mu_j), mu_j the generator columns.
class PartitionOfUnity {
public:
    /// The seed window must have integral |Lambda| (WindowSpec::mass).
    PartitionOfUnity(lattice::Lattice lat, Window seed);

    double spectrum(const Vec& xi) const;
    /// eta(x) = 2^{-d} int_{[-1,1]^d} phi(x - T t) dt
    double operator()(const Vec& x) const;
    double support_radius() const;
    /// sum_{|mu| <= radius} eta(x + mu), compensated summation over the nonzero terms.
    double periodized_sum(const Vec& x, double radius = 20.0) const;

    const lattice::Lattice& lattice() const { return lat_; }
    const Window& seed() const { return seed_; }

private:
    lattice::Lattice lat_;
    Window seed_;
    bool diagonal_ = false;
};

PartitionOfUnity build_partition_of_unity(const lattice::Lattice& lat, const Window& seed);

struct PoissonReport {
    double max_discrepancy = 0.0;
    double lhs_last_term = 0.0;  // largest |g| among the outermost lattice points kept
    double rhs_last_term = 0.0;
};

/// max over x of |sum_{|mu|<=N} g(x + mu) - (1/|Lambda|) sum_{|mu*|<=N} g^(mu*) e_{mu*}(x)|.
PoissonReport poisson_check(const std::function<cplx(const Vec&)>& g, const std::function<cplx(const Vec&)>& g_hat,
                            const lattice::Lattice& lat, const std::vector<Vec>& x_grid, double n_trunc);

enum class GrowthVerdict { RapidDecay, ModerateGrowth, Indeterminate };
std::string to_string(GrowthVerdict v);

struct GrowthConfig {
    double r_min = 1.0;  // first dyadic shell [r_min, 2 r_min)
    double b_min = 0.05;
    double b_max = 2.0;
};

struct GrowthClass {
    GrowthVerdict verdict = GrowthVerdict::Indeterminate;
    double lambda_hat = 0.0;  // -b
    double slope = 0.0;       // b
    double intercept = 0.0;
    double residual_rms = 0.0;
    std::vector<double> shell_omega;
    std::vector<double> shell_log_max;
    nlohmann::json to_json() const;
};

/// Least-squares fit log|c| ~ a + b omega on dyadic-shell maxima.
GrowthClass classify_growth(const FourierCoefficients& c, const weights::WeightFunction& w,
                            const GrowthConfig& cfg = {});

}  // namespace wfs::fourier
