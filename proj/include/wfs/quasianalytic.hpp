#pragma once

#include "wfs/cutoff.hpp"
#include "wfs/exec.hpp"
#include "wfs/lattice.hpp"
#include "wfs/microlocal.hpp"
#include "wfs/weights.hpp"

#include <nlohmann/json.hpp>

#include <vector>

namespace wfs::microlocal {

struct QuasianalyticOptions {
    int p_max = 12;
    double r_min = 4.0;
    double r_max = 128.0;
    Thresholds thresholds;
};

struct QuasianalyticResult {
    Verdict verdict = Verdict::Indeterminate;
    /// shell_max[p - 1][k] = max over shell k of log|f_p^(mu)| + p log|mu|
    std::vector<std::vector<double>> shell_max;
    std::vector<double> c_hat;       // index p - 1
    std::vector<double> growth;      // top-transition increase of shell_max, index p - 1
    std::vector<bool> geometric;     // growth >= geometric * p * log 2
    double c_cap = 0.0;
    double c_sup = 0.0;              // max C_p over p in [4, p_max]
    bool vanishing = false;

    nlohmann::json to_json() const;
};

/// Bounded-sequence test with f_p = chi_p f: sup over Gamma cap Lambda of
/// |f_p^(mu)| |mu|^p against A C^p N_p, decided per dyadic shell.
QuasianalyticResult quasianalytic_test(const TestDistribution& f, const Vec& x0, const lattice::Cone& cone,
                                       const lattice::Lattice& lat, const weights::WeightSequence& n,
                                       const CutoffFamily& family, const QuasianalyticOptions& opts = {},
                                       Exec exec = Exec::Serial);

}  // namespace wfs::microlocal
