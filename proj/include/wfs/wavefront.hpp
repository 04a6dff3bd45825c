#pragma once

#include "wfs/cutoff.hpp"
#include "wfs/distribution.hpp"
#include "wfs/exec.hpp"
#include "wfs/lattice.hpp"
#include "wfs/microlocal.hpp"
#include "wfs/quasianalytic.hpp"
#include "wfs/weights.hpp"
#include "wfs/window.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace wfs::microlocal {

struct AnalyzerConfig {
    Mode mode = Mode::Beurling;
    weights::WeightFunction omega = weights::WeightFunction::log();
    double half_angle = 15.0 * kPi / 180.0;
    double r_min = 4.0;
    double r_max = 128.0;
    bool continuous = false;
    double spacing = 0.25;
    Thresholds thresholds;
    // FourierLebesgue: v = e^{fl_lambda omega}
    double q = kInfinity;
    double fl_lambda = 0.0;
    // Sup/InfFamily: v_j = e^{lambda_j omega}, all with exponent q
    std::vector<double> family_lambdas{0.5, 1.0, 2.0};
    // Quasianalytic: N_p = (p!)^{sequence_s}, cut-off between the point and the window support ball
    double sequence_s = 1.0;
    int p_max = 12;
    CutoffOptions cutoff;
    bool keep_samples = false;

    nlohmann::json to_json() const;
};

struct PairResult {
    Vec x0;
    double theta = 0.0;
    Verdict verdict = Verdict::Indeterminate;
    double estimate = 0.0;    // lambda (fits), C sup (quasianalytic), log seminorm (FL)
    double band = 0.0;
    double floor = 0.0;
    double tail_ratio = 0.0;
    nlohmann::json detail;
    std::vector<DecaySample> samples;

    nlohmann::json to_json() const;
};

struct WaveFrontEstimate {
    std::vector<Vec> seeds;
    int direction_count = 0;
    double max_gap = 0.0;  // angular spacing of the direction grid
    std::vector<PairResult> pairs;  // seed-major, direction-minor
    nlohmann::json metadata;
    std::string config_hash;

    const PairResult& at(std::size_t seed, std::size_t direction) const {
        return pairs[seed * static_cast<std::size_t>(direction_count) + direction];
    }
    nlohmann::json to_json() const;
};

/// theta_k = 2 pi k / count in the plane.
std::vector<double> direction_angles(int count);

/// Throws SeparationError naming the dual vector when the ball of radius rho meets Lambda*.
void require_separation(const lattice::Lattice& lat, double rho, const std::string& what);

/// One (x0, direction) analysis with the configured analyzer.
PairResult analyze_pair(const TestDistribution& f, const Vec& x0, double theta, const AnalyzerConfig& cfg,
                        const lattice::Lattice& lat, const Window& window, Exec exec = Exec::Serial);

WaveFrontEstimate estimate_wavefront(const TestDistribution& f, const std::vector<Vec>& seeds, int direction_count,
                                     const AnalyzerConfig& cfg, const lattice::Lattice& lat, const Window& window,
                                     Exec exec = Exec::Serial);

}  // namespace wfs::microlocal
