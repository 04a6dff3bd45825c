#pragma once

#include "wfs/exec.hpp"
#include "wfs/lattice.hpp"
#include "wfs/localize.hpp"
#include "wfs/sampling.hpp"
#include "wfs/types.hpp"
#include "wfs/weights.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace wfs::microlocal {

enum class Verdict { Regular, Singular, Indeterminate };
std::string to_string(Verdict v);

enum class Mode { FourierLebesgue, Roumieu, Beurling, Quasianalytic, SupFamily, InfFamily };
std::string to_string(Mode m);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct DecaySample {
    Vec point;
    double log_modulus = 0.0;  // -inf for exact zeros
    int shell = -1;
};

/// Decision thresholds shared by the analyzers.
struct Thresholds {
    double lambda_min = 0.05;
    double floor_band = 0.2;       // Indeterminate when lambda >= (1 - band) * floor
    double trend_growth = 1.15;    // Beurling: outer-shell slope / inner-shell slope must reach this
    double trend_decay = 0.8;      // Roumieu: a ratio below this means the slopes die out
    double c_cap_factor = 10.0;    // quasianalytic: C_cap = factor * median C_p, p in [4, p_max]
    double geometric = 0.5;        // quasianalytic: growth >= geometric * p * log 2 per shell
    double tail_tol = 0.05;        // seminorms: finite when the last shell carries at most this share
    double sup_tol = 0.1;          // seminorms, q = inf: allowed log growth of the last shell max

    nlohmann::json to_json() const;
};

/// log v(xi)
using LogWeight = std::function<double(const Vec&)>;
LogWeight unit_weight();
/// v = e^{lambda omega}
LogWeight exp_weight(const weights::WeightFunction& w, double lambda);

struct SeminormValue {
    double log_value = -kInfinity;
    double value = 0.0;       // exp(log_value); may overflow to inf
    double tail_ratio = 0.0;  // share of |xi| >= R/2 (q < inf), or exp(max tail - max total) (q = inf)
    double tail_growth = 0.0; // q = inf: log(max over |xi| >= R/2) - log(max over |xi| < R/2)
    bool finite = false;      // convergence diagnostic from the thresholds
    std::size_t count = 0;

    nlohmann::json to_json() const;
};

/// || (v(mu) |ls(mu)|)_{mu in Gamma cap Lambda, |mu| <= R} ||_{l^q}
SeminormValue fl_seminorm_lattice(const LocalizedSpectrum& ls, const lattice::Cone& cone, const lattice::Lattice& lat,
                                  const LogWeight& log_v, double q, double radius, const Thresholds& th = {},
                                  Exec exec = Exec::Serial);

/// || v ls ||_{L^q(Gamma cap B_R)} by polar product quadrature (d = 2).
SeminormValue fl_seminorm_continuous(const LocalizedSpectrum& ls, const lattice::Cone& cone, const LogWeight& log_v,
                                     double q, double radius, const Thresholds& th = {},
                                     const sampling::PolarRuleSpec& rule = {}, Exec exec = Exec::Serial);

struct ShellStat {
    int index = 0;
    double inner = 0.0;
    double outer = 0.0;
    std::size_t count = 0;
    double log_max = -kInfinity;
    double omega = 0.0;       // omega at the maximizing point
    Vec argmax;
    double floor_log_max = -kInfinity;
    double floor_omega = 0.0;
};

struct LambdaFitOptions {
    double r_min = 4.0;
    double r_max = 128.0;
    bool continuous = false;      // polar grid instead of the lattice
    double spacing = 0.25;        // polar grid spacing
    bool keep_samples = false;
    Thresholds thresholds;
};

struct LambdaFit {
    double lambda = 0.0;
    double band = 0.0;            // two standard errors of the slope
    std::vector<double> residuals;
    std::vector<ShellStat> shells;
    std::vector<double> local_slopes;  // between consecutive shells
    double lambda_low = 0.0;      // fit over the three innermost shells
    double lambda_high = 0.0;     // fit over the three outermost shells
    double floor_lambda = 0.0;    // same fit on the window's own spectrum
    double tail_ratio = 0.0;      // exp(last shell max - overall max)
    bool vanishing = false;       // every sample exactly zero
    Verdict roumieu = Verdict::Indeterminate;
    Verdict beurling = Verdict::Indeterminate;
    std::vector<DecaySample> samples;

    nlohmann::json to_json() const;
};

/// Least-squares fit of shell-maximum log|ls| against omega. `lat` is ignored when
/// opts.continuous is set.
LambdaFit lambda_fit(const LocalizedSpectrum& ls, const lattice::Cone& cone, const lattice::Lattice* lat,
                     const weights::WeightFunction& w, const LambdaFitOptions& opts = {}, Exec exec = Exec::Serial);

struct FamilyMember {
    LogWeight log_v;
    double q = kInfinity;
    std::string label;
};

enum class FamilyMode { Inf, Sup };

struct FamilyVerdict {
    std::vector<SeminormValue> members;
    Verdict verdict = Verdict::Indeterminate;
};

/// Per cone: inf mode is Regular when some member's seminorm is finite, sup mode
/// when all of them are.
std::vector<FamilyVerdict> wf_family(const LocalizedSpectrum& ls, FamilyMode mode,
                                     const std::vector<FamilyMember>& family, const std::vector<lattice::Cone>& cones,
                                     const lattice::Lattice& lat, double radius, const Thresholds& th = {},
                                     Exec exec = Exec::Serial);

/// Log-sum-exp in a fixed order.
double log_sum_exp(const std::vector<double>& logs);

}  // namespace wfs::microlocal
