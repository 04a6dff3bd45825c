#pragma once

#include "wfs/distribution.hpp"
#include "wfs/lattice.hpp"
#include "wfs/wavefront.hpp"
#include "wfs/weights.hpp"
#include "wfs/window.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wfs::config {

struct WeightsCheckSpec {
    double sample_radius = 256.0;
    int samples = 2000;
    long depth = 10000;
    double moderate_lambda = -1.0;  // v = e^{lambda omega} moderateness probe; negative skips it
};

enum class FourierSourceKind { PeriodizedGaussian, Harmonic, Windowed };

struct FourierSpec {
    FourierSourceKind source = FourierSourceKind::PeriodizedGaussian;
    double width = 1.0;            // periodized Gaussian exp(-pi |x|^2 / width^2)
    int n_trunc = 20;              // periodization sum truncation
    std::vector<long> harmonic;    // integer dual coordinates
    Vec x0;                        // windowed source: window center
    double radius = 10.0;
    int order = 128;
    int panels = 1;
    bool cross_check = false;      // compare region and window routes
};

struct EquivalenceSpec {
    std::vector<weights::WeightFunction> omegas;
    double tolerance = 0.1;
};

struct OutputSpec {
    std::string dir = ".";
    std::string json = "report.json";
    std::string csv;               // decay samples or coefficient rows
    std::string svg_prefix;        // one polar plot per seed
};

struct RunConfig {
    nlohmann::json echo;           // the parsed input, canonical form
    std::string hash;              // SHA-256 of the canonical dump
    std::uint64_t seed = 20240531;
    int threads = 1;

    std::optional<TestDistribution> distribution;
    lattice::Lattice lattice;
    WindowSpec window;
    weights::WeightFunction omega = weights::WeightFunction::log();
    std::optional<double> sequence_s;   // (p!)^s for weights-check
    WeightsCheckSpec weights_check;
    microlocal::AnalyzerConfig analyzer;
    int directions = 16;
    double theta = 0.0;                 // analyze: direction angle
    std::vector<Vec> seeds;
    FourierSpec fourier;
    EquivalenceSpec equivalence;
    OutputSpec output;

    int dim() const { return lattice.dim(); }
};

/// Reads YAML (JSON is accepted as a YAML subset).
nlohmann::json read_document(const std::string& path);
/// Validates and builds a run config; ConfigError messages carry the field path.
RunConfig parse(const nlohmann::json& doc, const std::string& base_dir = ".");
RunConfig load(const std::string& path);

/// Sorted-key compact dump.
std::string canonical_dump(const nlohmann::json& j);
std::string sha256_hex(const std::string& data);

}  // namespace wfs::config
