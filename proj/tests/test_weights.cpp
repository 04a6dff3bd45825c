#include "wfs/errors.hpp"
#include "wfs/microlocal.hpp"
#include "wfs/weights.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace wfs;
using namespace wfs::weights;

namespace {

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

// max over p <= depth of p log t - log M_p by direct scan
double scan_associated(double s, double t, int depth) {
    double best = 0.0;
    for (int p = 0; p <= depth; ++p) best = std::max(best, p * std::log(t) - s * std::lgamma(p + 1.0));
    return best;
}

}  // namespace

TEST_CASE("weight evaluation") {
    CHECK(WeightFunction::gevrey(2)(v2(0, 0)) == 0.0);
    CHECK(WeightFunction::log()(v2(3, 4)) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
    CHECK(WeightFunction::gevrey(2)(v2(16, 0)) == doctest::Approx(4.0).epsilon(1e-14));

    const auto tab = WeightFunction::tabulated({0.0, 1.0, 3.0}, {0.0, 1.0, 2.0});
    CHECK(tab.radial(2.0) == doctest::Approx(1.5));
    CHECK_THROWS_AS(tab.radial(4.0), ExtrapolationError);
    CHECK_THROWS_AS(WeightFunction::tabulated({0.0, 1.0}, {0.0, -1.0}), ConfigError);
}

TEST_CASE("weight conditions") {
    const auto log_report = check_weight_conditions(WeightFunction::log(), 256.0, 500);
    CHECK(log_report.at("alpha").verdict == Diagnostic::HoldsToDepth);
    CHECK(log_report.at("beta").verdict == Diagnostic::ConvergentDiagnostic);
    CHECK(log_report.at("gamma0").verdict == Diagnostic::FailsAtP);

    // Shell integrals of log(1 + r) / r^2 over [2^k, 2^{k+1}), times 2 pi for d = 2.
    const auto& shells = log_report.at("beta").series;
    REQUIRE(shells.size() >= 3);
    for (std::size_t k = 0; k < 3; ++k) {
        const double a = std::ldexp(1.0, static_cast<int>(k)), b = 2.0 * a;
        auto anti = [](double r) { return std::log(r) - std::log(1.0 + r) - std::log(1.0 + r) / r; };
        CHECK(shells[k] == doctest::Approx(2.0 * std::numbers::pi * (anti(b) - anti(a))).epsilon(1e-3));
    }

    CheckConfig one_d;
    one_d.dim = 1;
    const auto gev = check_weight_conditions(WeightFunction::gevrey(2), 256.0, 500, one_d);
    CHECK(gev.at("beta").verdict == Diagnostic::ConvergentDiagnostic);
    const auto& g = gev.at("beta").series;
    REQUIRE(g.size() >= 3);
    // 2 * int_a^{2a} r^{-3/2} dr = 4 a^{-1/2} (1 - 2^{-1/2}); consecutive shells shrink by 2^{-1/2}.
    for (std::size_t k = 0; k + 1 < g.size(); ++k) CHECK(g[k + 1] / g[k] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-3));

    CHECK(check_weight_conditions(WeightFunction::gevrey(1), 256.0, 500).at("beta").verdict ==
          Diagnostic::DivergentDiagnostic);
}

TEST_CASE("associated function") {
    const auto fact = WeightSequence::factorial_power(1.0, 400);
    const auto at1 = associated_function(fact, 1.0);
    CHECK(at1.value == 0.0);
    CHECK(at1.argmax == 0);

    // Frozen from the direct scan: p - log p! peaks at p = 2 with 2 - log 2.
    const double frozen_e = 2.0 - std::log(2.0);
    CHECK(scan_associated(1.0, std::numbers::e, 100) == doctest::Approx(frozen_e).epsilon(1e-15));
    const auto at_e = associated_function(fact, std::numbers::e);
    CHECK(at_e.value == doctest::Approx(frozen_e).epsilon(1e-13));

    const auto sq = WeightSequence::factorial_power(2.0, 400);
    const double oracle = scan_associated(2.0, 10.0, 200);
    const auto at10 = associated_function(sq, 10.0);
    CHECK(at10.value == doctest::Approx(oracle).epsilon(1e-13));
    CHECK(std::abs(at10.value - (2.0 * std::sqrt(10.0) - std::log(2.0 * std::numbers::pi * std::sqrt(10.0)))) < 0.1);

    const AssociatedFunction hull(WeightSequence::factorial_power(2.0, 4000));
    for (double t : geometric_grid(1e-3, 1e6, 97)) {
        CHECK(hull(t).value == doctest::Approx(scan_associated(2.0, t, 4000)).epsilon(1e-12));
    }
    const auto shallow = WeightSequence::factorial_power(1.0, 10);
    const AssociatedFunction short_hull{shallow};
    CHECK_THROWS_AS(short_hull(1e6), TruncationError);
}

TEST_CASE("log-convex regularization") {
    const auto grid = geometric_grid(1e-3, 1e6, 512);
    const auto fact = WeightSequence::factorial_power(1.0, 2'000'000);
    CHECK(log_convex_regularization(fact, 0, grid).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(log_convex_regularization(fact, 5, grid).value == doctest::Approx(120.0).epsilon(0.01));

    std::vector<double> logs;
    for (int p = 0; p <= 2'000'000; ++p) logs.push_back(std::lgamma(p + 1.0));
    logs[1] = std::log(5.0);
    const auto bumped = WeightSequence::from_log_values(logs, "bumped");
    CHECK(log_convex_regularization(bumped, 1, grid).value < 5.0);
}

TEST_CASE("sequence conditions") {
    const auto fact = check_sequence_conditions(WeightSequence::factorial_power(1.0, 60), 50);
    CHECK(fact.at("M.1").verdict == Diagnostic::HoldsToDepth);
    CHECK(fact.at("M.3'").verdict == Diagnostic::DivergentDiagnostic);
    CHECK(fact.at("M.5").verdict == Diagnostic::HoldsToDepth);
    CHECK(fact.at("M.5").values.at("ratio_constant") == doctest::Approx(1.0));

    double harmonic = 0.0;
    for (int p = 1; p <= 50; ++p) harmonic += 1.0 / p;
    CHECK(fact.at("M.3'").values.at("partial_sum") == doctest::Approx(harmonic).epsilon(1e-12));

    const auto sq = check_sequence_conditions(WeightSequence::factorial_power(2.0, 60), 50);
    CHECK(sq.at("M.3'").verdict == Diagnostic::ConvergentDiagnostic);
    const double partial = sq.at("M.3'").values.at("partial_sum");
    CHECK(std::abs(partial - std::numbers::pi * std::numbers::pi / 6.0) <= sq.at("M.3'").values.at("tail_estimate") + 1e-12);

    std::vector<double> logs{0.0, 0.0, 3.0, 3.5, 4.0};
    const auto bad = check_sequence_conditions(WeightSequence::from_log_values(logs, "bad"), 4);
    CHECK(bad.at("M.1").verdict == Diagnostic::FailsAtP);
}

TEST_CASE("auxiliary sequence") {
    const auto fact = WeightSequence::factorial_power(1.0, 5000);
    CHECK(auxiliary_sequence(fact, fact, 0).log_value == 0.0);
    const auto q4 = auxiliary_sequence(fact, fact, 4);
    CHECK(std::exp(q4.log_value) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(q4.argmin == 2);

    const auto sq = WeightSequence::factorial_power(2.0, 5000);
    const auto q = auxiliary_sequence(fact, sq);
    for (double t : geometric_grid(1.0, 1e3, 40)) {
        const double lhs = associated_function(q, t).value;
        const double rhs = associated_function(fact, t).value + associated_function(sq, t).value;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("moderate weights") {
    const auto omega = WeightFunction::log();
    const auto unit = is_moderate(microlocal::unit_weight(), omega, 200);
    CHECK(unit.c_mod == doctest::Approx(1.0));
    CHECK(unit.lambda_mod == doctest::Approx(0.0));

    const auto expw = is_moderate(microlocal::exp_weight(omega, 1.0), omega, 400);
    CHECK(expw.lambda_mod <= 1.0 + 0.05);

    auto quadratic = [](const Vec& x) { return x.squaredNorm(); };
    CHECK_THROWS_AS(is_moderate(quadratic, WeightFunction::gevrey(2), 400), NotModerate);
}
