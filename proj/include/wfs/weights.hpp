#pragma once

#include "wfs/types.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wfs::weights {

enum class WeightKind { Log, Gevrey, Tabulated };

/// Radial weight function omega(xi) = omega0(|xi|).
class WeightFunction {
public:
    static WeightFunction log();
    /// omega(xi) = |xi|^(1/s); s = 1 is accepted (analytic scale) even though it
    /// violates the integrability condition.
    static WeightFunction gevrey(double s);
    /// Piecewise-linear radial profile. Radii strictly increasing, starting at 0
    /// with value 0, values nondecreasing.
    static WeightFunction tabulated(std::vector<double> radii, std::vector<double> values);
    /// Two-column text table "radius value".
    static WeightFunction from_table_file(const std::string& path);

    double radial(double r) const;
    double operator()(const Vec& xi) const { return radial(xi.norm()); }

    WeightKind kind() const { return kind_; }
    double gevrey_s() const { return s_; }
    std::string name() const;
    nlohmann::json to_json() const;

private:
    WeightKind kind_ = WeightKind::Log;
    double s_ = 0.0;
    std::shared_ptr<const std::vector<double>> radii_;
    std::shared_ptr<const std::vector<double>> values_;
};

enum class Diagnostic { HoldsToDepth, FailsAtP, ConvergentDiagnostic, DivergentDiagnostic };
std::string to_string(Diagnostic d);

struct ConditionEntry {
    std::string name;
    Diagnostic verdict = Diagnostic::HoldsToDepth;
    std::optional<long> failing_index;
    std::map<std::string, double> values;
    std::vector<double> series;  // per-shell or per-p diagnostic values
    std::string note;
};

struct ConditionReport {
    std::string subject;
    double extent = 0.0;  // sampling radius or depth
    std::vector<ConditionEntry> entries;

    const ConditionEntry& at(const std::string& name) const;
    nlohmann::json to_json() const;
};

struct CheckConfig {
    int dim = 2;
    std::uint64_t seed = 20240531;
    double identity_tol = 1e-9;     // exact identities in log domain
    double ratio_threshold = 0.9;   // dyadic-shell ratio test
};

/// Finite-sample diagnostics for subadditivity, integrability of omega/|xi|^(d+1),
/// the logarithmic lower bound and its strict version.
ConditionReport check_weight_conditions(const WeightFunction& w, double sample_radius, int n_samples,
                                        const CheckConfig& cfg = {});

/// Positive sequence M_0 = 1, M_1, ... stored as log values up to a cached depth.
class WeightSequence {
public:
    /// (p!)^s
    static WeightSequence factorial_power(double s, long depth);
    /// Arbitrary generator of log M_p, evaluated eagerly to `depth`.
    static WeightSequence generated(const std::function<double(long)>& log_m, long depth, std::string name);
    static WeightSequence from_log_values(std::vector<double> log_m, std::string name);

    double log_m(long p) const;
    long depth() const { return static_cast<long>(log_->size()) - 1; }
    std::span<const double> log_values() const { return *log_; }
    const std::string& name() const { return name_; }

private:
    std::shared_ptr<const std::vector<double>> log_;
    std::string name_;
};

struct AssociatedValue {
    double value = 0.0;  // M(t) = max_p (p log t - log M_p)
    long argmax = 0;
};

/// M(t) by the upper envelope of the lines p*log t - log M_p (lower convex hull
/// of (p, log M_p)); O(log depth) per query after construction.
class AssociatedFunction {
public:
    explicit AssociatedFunction(const WeightSequence& m);
    /// Throws TruncationError when the maximizer is the last cached index.
    AssociatedValue operator()(double t) const;
    /// Same, without the truncation check.
    AssociatedValue unchecked(double t) const;
    long depth() const { return depth_; }

private:
    std::vector<long> vertices_;
    std::vector<double> vertex_log_;
    std::vector<double> slopes_;  // slope of the hull edge leaving each vertex
    long depth_ = 0;
};

/// Direct scan over 0..depth; the reference for AssociatedFunction.
AssociatedValue associated_function_scan(const WeightSequence& m, double t);
/// Convenience wrapper building the hull on the fly.
AssociatedValue associated_function(const WeightSequence& m, double t);

struct Regularized {
    double value = 0.0;
    double log_value = 0.0;
    std::size_t grid_index = 0;
};

/// M_p^c = sup_t t^p / e^{M(t)} over a grid of t values.
Regularized log_convex_regularization(const WeightSequence& m, long p, std::span<const double> t_grid);
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

ConditionReport check_sequence_conditions(const WeightSequence& m, long depth, const CheckConfig& cfg = {});

struct AuxiliaryValue {
    double log_value = 0.0;
    long argmin = 0;
};

/// Q_p = min_{0<=q<=p} M_q N_{p-q}, in log domain.
AuxiliaryValue auxiliary_sequence(const WeightSequence& m, const WeightSequence& n, long p);
/// The whole auxiliary sequence up to min(depth M, depth N).
WeightSequence auxiliary_sequence(const WeightSequence& m, const WeightSequence& n);

struct ModerateFit {
    double c_mod = 1.0;
    double lambda_mod = 0.0;
    double lambda_half_radius = 0.0;  // same fit on the inner half of the samples
};

struct ModerateConfig {
    int dim = 2;
    double radius = 64.0;
    std::uint64_t seed = 20240531;
    double growth_factor = 1.5;  // lambda(R) > factor * lambda(R/2) + slack means not moderate
    double slack = 0.05;
};

/// Fits v(x + y) <= C v(x) e^{lambda omega(y)} on random and colinear pairs.
/// `log_v` returns log v. Throws NotModerate when lambda keeps growing with the
/// sampling radius.
ModerateFit is_moderate(const std::function<double(const Vec&)>& log_v, const WeightFunction& w,
                        int pair_samples, const ModerateConfig& cfg = {});

}  // namespace wfs::weights
