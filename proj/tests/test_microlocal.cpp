#include "wfs/errors.hpp"
#include "wfs/microlocal.hpp"
#include "wfs/quasianalytic.hpp"
#include "wfs/wavefront.hpp"
#include "wfs/window.hpp"

#include <doctest.h>

#include <cmath>

using namespace wfs;
using namespace wfs::microlocal;

namespace {

Vec v1(double a) {
    Vec v(1);
    v << a;
    return v;
}

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

lattice::Lattice z(int d) { return lattice::Lattice(Mat::Identity(d, d)); }

Window gevrey_window(int d) { return Window(WindowSpec{}, d); }

lattice::Cone cone2(double theta, double half) { return lattice::Cone(v2(std::cos(theta), std::sin(theta)), half); }

const double kDeg = kPi / 180.0;

}  // namespace

TEST_CASE("log_sum_exp") {
    CHECK(log_sum_exp({}) == -kInfinity);
    CHECK(log_sum_exp({-kInfinity, -kInfinity}) == -kInfinity);
    CHECK(log_sum_exp({0.0, 0.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(log_sum_exp({1000.0, 1000.0 + std::log(3.0)}) == doctest::Approx(1000.0 + std::log(4.0)).epsilon(1e-15));
    CHECK(log_sum_exp({-1000.0, -kInfinity}) == doctest::Approx(-1000.0));
}

TEST_CASE("seminorm argument checks") {
    const LocalizedSpectrum ls(TestDistribution::synthetic(2, 1.0, 1.0, 1.0), gevrey_window(2), v2(0, 0));
    const auto cone = cone2(0.0, 0.3);
    CHECK_THROWS_AS(fl_seminorm_lattice(ls, cone, z(2), unit_weight(), 0.5, 10.0), ConfigError);
    CHECK_THROWS_AS(fl_seminorm_lattice(ls, cone, z(2), unit_weight(), 1.0, 0.0), ConfigError);
    // A thin cone between the lattice directions sees nothing within R = 3.
    CHECK_THROWS_AS(fl_seminorm_lattice(ls, cone2(0.4, 0.01), z(2), unit_weight(), 1.0, 3.0), EmptyCone);
}

TEST_CASE("lattice seminorm of a delta at q = inf") {
    const Window win = gevrey_window(2);
    const Vec c = v2(0.05, 0.02);
    const LocalizedSpectrum ls(TestDistribution::delta(c), win, v2(0, 0));
    const auto s = fl_seminorm_lattice(ls, cone2(0.0, 0.3), z(2), unit_weight(), kInfinity, 32.0);
    CHECK(s.value == doctest::Approx(win(c)).epsilon(1e-12));
    CHECK(s.tail_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.finite);  // a flat sup does not grow
}

TEST_CASE("lattice seminorm of a synthetic spectrum against direct summation") {
    const LocalizedSpectrum ls(TestDistribution::synthetic(2, 1.0, 1.0, 1.0), gevrey_window(2), v2(0, 0));
    const auto cone = cone2(0.0, 0.4);
    const double r = 30.0;
    double direct = 0.0;
    for (int a = -31; a <= 31; ++a) {
        for (int b = -31; b <= 31; ++b) {
            const Vec mu = v2(a, b);
            if (mu.norm() > r || !cone.contains(mu)) continue;
            direct += std::exp(-mu.norm());
        }
    }
    const auto s = fl_seminorm_lattice(ls, cone, z(2), unit_weight(), 1.0, r);
    CHECK(std::abs(s.value / direct - 1.0) < 0.02);
    CHECK(s.finite);

    const auto s2 = fl_seminorm_lattice(ls, cone, z(2), unit_weight(), 1.0, 2.0 * r);
    CHECK(std::abs(s2.value / s.value - 1.0) < 1e-3);
}

TEST_CASE("lattice seminorm of a delta diverges linearly on a ray") {
    const Window win = gevrey_window(1);
    const LocalizedSpectrum ls(TestDistribution::delta(v1(0.1)), win, v1(0.0));
    const lattice::Cone ray(v1(1.0), 0.5);
    const auto s = fl_seminorm_lattice(ls, ray, z(1), unit_weight(), 1.0, 40.0);
    const auto s2 = fl_seminorm_lattice(ls, ray, z(1), unit_weight(), 1.0, 80.0);
    CHECK(s.value == doctest::Approx(40.0 * win(v1(0.1))).epsilon(1e-12));
    CHECK(s2.value / s.value == doctest::Approx(2.0).epsilon(0.01));
    CHECK_FALSE(s.finite);
}

TEST_CASE("continuous seminorm over a half-plane matches the polar integral") {
    const LocalizedSpectrum ls(TestDistribution::synthetic(2, 1.0, 1.0, 1.0), gevrey_window(2), v2(0, 0));
    const lattice::Cone half(v2(1, 0), kPi / 2.0 - 1e-9);
    for (double r : {5.0, 20.0}) {
        const auto s = fl_seminorm_continuous(ls, half, unit_weight(), 1.0, r);
        const double exact = kPi * (1.0 - (1.0 + r) * std::exp(-r));
        CHECK(std::abs(s.value / exact - 1.0) < 0.01);
    }
}

TEST_CASE("continuous sup agrees with the lattice sup on a dense lattice") {
    const LocalizedSpectrum ls(TestDistribution::gaussian(v2(0.02, 0.0), 0.4), gevrey_window(2), v2(0, 0));
    const auto cone = cone2(0.3, 0.4);
    const auto c = fl_seminorm_continuous(ls, cone, unit_weight(), kInfinity, 8.0);
    const auto dense = lattice::Lattice(0.05 * Mat::Identity(2, 2));
    const auto l = fl_seminorm_lattice(ls, cone, dense, unit_weight(), kInfinity, 8.0);
    // The maximum sits near the origin, where the sample sets differ by at most one step.
    CHECK(std::abs(c.log_value - l.log_value) < 0.05);
}

TEST_CASE("weighted continuous seminorm is finite exactly when the source slope exceeds one") {
    const auto omega = weights::WeightFunction::gevrey(1.0);
    const auto cone = cone2(0.0, 0.5);
    const auto log_v = exp_weight(omega, 1.0);
    const LocalizedSpectrum slow(TestDistribution::synthetic(2, 1.0, 0.5, 1.0), gevrey_window(2), v2(0, 0));
    const LocalizedSpectrum fast(TestDistribution::synthetic(2, 1.0, 1.5, 1.0), gevrey_window(2), v2(0, 0));
    CHECK_FALSE(fl_seminorm_continuous(slow, cone, log_v, 1.0, 64.0).finite);
    CHECK(fl_seminorm_continuous(fast, cone, log_v, 1.0, 64.0).finite);
    CHECK_FALSE(fl_seminorm_continuous(slow, cone, log_v, kInfinity, 64.0).finite);
    CHECK(fl_seminorm_continuous(fast, cone, log_v, kInfinity, 64.0).finite);
}

TEST_CASE("seminorms decrease in q") {
    const LocalizedSpectrum ls(TestDistribution::gaussian(v2(0.05, -0.03), 0.3), gevrey_window(2), v2(0, 0));
    const LocalizedSpectrum lj(TestDistribution::plane_jump(v2(1, 0), 0.1), gevrey_window(2), v2(0, 0.05));
    const auto log_v = exp_weight(weights::WeightFunction::log(), 0.5);
    for (const auto* src : {&ls, &lj}) {
        for (double theta : {0.0, 1.0, 2.5}) {
            const auto cone = cone2(theta, 0.35);
            double prev = kInfinity;
            for (double q : {1.0, 1.5, 2.0, 4.0, 8.0, kInfinity}) {
                const double v = fl_seminorm_lattice(*src, cone, z(2), log_v, q, 24.0).log_value;
                CHECK(v <= prev);
                prev = v;
            }
        }
    }
}

TEST_CASE("lambda fit: delta has no decay") {
    const LocalizedSpectrum ls(TestDistribution::delta(v2(0.05, 0.02)), gevrey_window(2), v2(0, 0));
    const auto lat = z(2);
    for (const auto& w : {weights::WeightFunction::log(), weights::WeightFunction::gevrey(2.0)}) {
        for (double theta : {0.0, 2.0}) {
            const auto fit = lambda_fit(ls, cone2(theta, 15 * kDeg), &lat, w);
            CHECK(std::abs(fit.lambda) <= 0.02);
            CHECK(fit.roumieu == Verdict::Singular);
            CHECK(fit.beurling == Verdict::Singular);
        }
    }
}

TEST_CASE("lambda fit recovers a constructed Gevrey slope") {
    // |ls(xi)| = exp(-|xi|^{1/2}) is exactly exp(-omega) for omega = Gevrey(2).
    const LocalizedSpectrum ls(TestDistribution::synthetic(2, 1.0, 1.0, 0.5), gevrey_window(2), v2(0, 0));
    const auto lat = z(2);
    const auto fit = lambda_fit(ls, cone2(0.7, 15 * kDeg), &lat, weights::WeightFunction::gevrey(2.0));
    CHECK(fit.lambda == doctest::Approx(1.0).epsilon(0.05));
    LambdaFitOptions cont;
    cont.continuous = true;
    const auto cfit = lambda_fit(ls, cone2(0.7, 15 * kDeg), nullptr, weights::WeightFunction::gevrey(2.0), cont);
    CHECK(cfit.lambda == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("lambda fit of a jump across its normal in the log scale") {
    const LocalizedSpectrum ls(TestDistribution::plane_jump(v2(1, 0), 0.0), gevrey_window(2), v2(0, 0.1));
    const auto lat = z(2);
    const auto fit = lambda_fit(ls, cone2(0.0, 15 * kDeg), &lat, weights::WeightFunction::log());
    CHECK(fit.lambda == doctest::Approx(1.0).epsilon(0.1));
    CHECK(fit.roumieu == Verdict::Regular);
    CHECK(fit.beurling == Verdict::Singular);
}

TEST_CASE("lambda fit checks its inputs") {
    const LocalizedSpectrum ls(TestDistribution::synthetic(2, 1.0, 1.0, 1.0), gevrey_window(2), v2(0, 0));
    const auto lat = z(2);
    LambdaFitOptions shallow;
    shallow.r_min = 4.0;
    shallow.r_max = 12.0;
    CHECK_THROWS_AS(lambda_fit(ls, cone2(0.0, 0.3), &lat, weights::WeightFunction::log(), shallow), InsufficientData);
    CHECK_THROWS_AS(lambda_fit(ls, cone2(0.0, 0.3), nullptr, weights::WeightFunction::log()), ConfigError);
}

TEST_CASE("family of one member reduces to the single seminorm") {
    const auto lat = z(2);
    const auto omega = weights::WeightFunction::log();
    const std::vector<lattice::Cone> cones{cone2(0.0, 0.3), cone2(kPi / 2, 0.3), cone2(2.0, 0.3)};
    for (const auto& f : {TestDistribution::delta(v2(0.05, 0.02)), TestDistribution::plane_jump(v2(1, 0), 0.0)}) {
        const LocalizedSpectrum ls(f, gevrey_window(2), v2(0, 0.1));
        const std::vector<FamilyMember> one{{exp_weight(omega, 0.5), kInfinity, "0.5"}};
        for (auto mode : {FamilyMode::Inf, FamilyMode::Sup}) {
            const auto res = wf_family(ls, mode, one, cones, lat, 64.0);
            for (std::size_t c = 0; c < cones.size(); ++c) {
                const auto s = fl_seminorm_lattice(ls, cones[c], lat, one[0].log_v, kInfinity, 64.0);
                CHECK(res[c].verdict == (s.finite ? Verdict::Regular : Verdict::Singular));
                CHECK(res[c].members[0].log_value == s.log_value);
            }
        }
    }
}

TEST_CASE("inf and sup families split on a slope-one source") {
    const auto lat = z(2);
    const auto omega = weights::WeightFunction::gevrey(1.0);
    const LocalizedSpectrum ls(TestDistribution::synthetic(2, 1.0, 1.0, 1.0), gevrey_window(2), v2(0, 0));
    std::vector<FamilyMember> fam;
    for (double l : {0.5, 1.0, 2.0}) fam.push_back({exp_weight(omega, l), kInfinity, std::to_string(l)});
    const std::vector<lattice::Cone> cones{cone2(0.0, 0.3), cone2(1.3, 0.3)};
    for (const auto& r : wf_family(ls, FamilyMode::Inf, fam, cones, lat, 64.0)) {
        CHECK(r.verdict == Verdict::Regular);
        CHECK(r.members[0].finite);
        CHECK_FALSE(r.members[2].finite);
    }
    for (const auto& r : wf_family(ls, FamilyMode::Sup, fam, cones, lat, 64.0)) CHECK(r.verdict == Verdict::Singular);
    CHECK_THROWS_AS(wf_family(ls, FamilyMode::Sup, {}, cones, lat, 64.0), ConfigError);
}

namespace {

struct CatalogCase {
    TestDistribution f;
    Vec x0;
    double theta;
};

std::vector<CatalogCase> catalog() {
    const auto delta = TestDistribution::delta(v2(0.05, 0.02));
    const auto gauss = TestDistribution::gaussian(v2(0.0, 0.0), 0.5);
    const auto jump = TestDistribution::plane_jump(v2(1, 0), 0.0);
    return {{delta, v2(0, 0), 0.0},        {delta, v2(0, 0), 2.0},        {delta, v2(1.5, 0.5), 0.0},
            {gauss, v2(0, 0), 0.0},        {gauss, v2(0.2, 0.1), 1.0},    {jump, v2(0, 0.1), 0.0},
            {jump, v2(0, 0.1), kPi},       {jump, v2(0, 0.1), kPi / 2},   {jump, v2(1.0, 0.2), 0.0}};
}

}  // namespace

TEST_CASE("sup family over a lambda grid agrees with the Beurling fit where the fit decides") {
    const auto lat = z(2);
    const Window win = gevrey_window(2);
    AnalyzerConfig beurling;
    beurling.mode = Mode::Beurling;
    beurling.r_max = 64.0;
    AnalyzerConfig sup = beurling;
    sup.mode = Mode::SupFamily;
    int decided = 0;
    for (const auto& c : catalog()) {
        const auto b = analyze_pair(c.f, c.x0, c.theta, beurling, lat, win);
        const auto s = analyze_pair(c.f, c.x0, c.theta, sup, lat, win);
        if (b.verdict == Verdict::Indeterminate) continue;
        ++decided;
        CHECK(s.verdict == b.verdict);
    }
    CHECK(decided >= 4);
}

TEST_CASE("shrinking the cone never turns a regular pair singular") {
    const auto lat = z(2);
    const Window win = gevrey_window(2);
    for (auto mode : {Mode::Beurling, Mode::Roumieu, Mode::SupFamily}) {
        AnalyzerConfig wide;
        wide.mode = mode;
        wide.r_max = 64.0;
        AnalyzerConfig narrow = wide;
        narrow.half_angle = 0.5 * wide.half_angle;
        for (const auto& c : catalog()) {
            const auto w = analyze_pair(c.f, c.x0, c.theta, wide, lat, win);
            if (w.verdict != Verdict::Regular) continue;
            CHECK(analyze_pair(c.f, c.x0, c.theta, narrow, lat, win).verdict != Verdict::Singular);
        }
    }
}

TEST_CASE("dilation by two moves singular pairs to x0 / 2") {
    const auto lat = z(2);
    const Window win = gevrey_window(2);
    AnalyzerConfig cfg;
    cfg.r_max = 64.0;
    const auto delta = TestDistribution::delta(v2(0.2, 0.1));
    const auto jump = TestDistribution::plane_jump(v2(1, 0), 0.4);
    const std::vector<std::pair<TestDistribution, Vec>> cases{{delta, v2(0.2, 0.1)}, {jump, v2(0.4, 0.0)}};
    for (const auto& [f, x0] : cases) {
        const auto g = f.dilated(2.0);
        for (double theta : {0.0, kPi, 1.0}) {
            const auto a = analyze_pair(f, x0, theta, cfg, lat, win);
            const auto b = analyze_pair(g, 0.5 * x0, theta, cfg, lat, win);
            if (a.verdict == Verdict::Singular) CHECK(b.verdict == Verdict::Singular);
            if (b.verdict == Verdict::Singular) CHECK(a.verdict == Verdict::Singular);
        }
        CHECK(analyze_pair(f, x0, 0.0, cfg, lat, win).verdict == Verdict::Singular);
    }
}

TEST_CASE("quasianalytic test on the catalog") {
    const auto lat = z(2);
    const Window win = gevrey_window(2);
    const auto n = weights::WeightSequence::factorial_power(1.0, 13);
    const auto cone_at = [](double theta) { return cone2(theta, 15 * kDeg); };
    const auto family_at = [&](const Vec& x0) {
        return CutoffFamily({x0, 0.0}, {x0, win.support_radius()}, 12);
    };
    SUBCASE("delta at the point") {
        const Vec x0 = v2(0.05, 0.02);
        const auto fam = family_at(x0);
        for (double theta : {0.0, 1.0, 3.0}) {
            const auto r = quasianalytic_test(TestDistribution::delta(x0), x0, cone_at(theta), lat, n, fam);
            CHECK(r.verdict == Verdict::Singular);
            // |f_p^| is constant, so the top shell step is p log 2 up to the shell geometry.
            CHECK(r.growth.back() == doctest::Approx(12 * std::log(2.0)).epsilon(0.1));
        }
    }
    SUBCASE("gaussian") {
        const Vec x0 = v2(0.0, 0.0);
        const auto fam = family_at(x0);
        for (double theta : {0.0, 2.0}) {
            const auto r = quasianalytic_test(TestDistribution::gaussian(v2(0.1, 0.0), 0.5), x0, cone_at(theta), lat,
                                              n, fam);
            CHECK(r.verdict == Verdict::Regular);
            CHECK(r.c_sup <= r.c_cap);
        }
    }
    SUBCASE("jump normal and tangent") {
        const Vec x0 = v2(0.0, 0.1);
        const auto fam = family_at(x0);
        const auto jump = TestDistribution::plane_jump(v2(1, 0), 0.0);
        CHECK(quasianalytic_test(jump, x0, cone_at(0.0), lat, n, fam).verdict == Verdict::Singular);
        CHECK(quasianalytic_test(jump, x0, cone_at(kPi), lat, n, fam).verdict == Verdict::Singular);
        CHECK(quasianalytic_test(jump, x0, cone_at(kPi / 2), lat, n, fam).verdict == Verdict::Regular);
    }
    SUBCASE("family too shallow") {
        const auto fam = CutoffFamily({v2(0, 0), 0.0}, {v2(0, 0), win.support_radius()}, 6);
        CHECK_THROWS_AS(quasianalytic_test(TestDistribution::delta(v2(0, 0)), v2(0, 0), cone_at(0.0), lat, n, fam),
                        DepthError);
    }
}

TEST_CASE("a Gevrey-singular fit implies a quasianalytic singular verdict") {
    const auto lat = z(2);
    const Window win = gevrey_window(2);
    for (double s : {1.0, 2.0}) {
        AnalyzerConfig fit;
        fit.mode = Mode::Roumieu;
        fit.omega = weights::WeightFunction::gevrey(s);
        AnalyzerConfig qa;
        qa.mode = Mode::Quasianalytic;
        qa.sequence_s = s;
        for (const auto& c : catalog()) {
            const auto a = analyze_pair(c.f, c.x0, c.theta, fit, lat, win);
            if (a.verdict != Verdict::Singular) continue;
            CHECK(analyze_pair(c.f, c.x0, c.theta, qa, lat, win).verdict == Verdict::Singular);
        }
    }
}

TEST_CASE("wave front of a gaussian is empty and of a delta is the fibre over its center") {
    const auto lat = z(2);
    const Window win = gevrey_window(2);
    AnalyzerConfig cfg;
    cfg.r_max = 64.0;
    const auto g = estimate_wavefront(TestDistribution::gaussian(v2(0, 0), 0.5),
                                      {v2(0, 0), v2(0.2, 0.1), v2(-0.3, 0.4), v2(0.5, -0.5), v2(1.0, 1.0)}, 16, cfg,
                                      lat, win);
    for (const auto& p : g.pairs) CHECK(p.verdict != Verdict::Singular);
    const Vec c = v2(0.05, 0.02);
    const auto d = estimate_wavefront(TestDistribution::delta(c), {c, v2(1.5, 1.5)}, 16, cfg, lat, win);
    CHECK(d.max_gap == doctest::Approx(2 * kPi / 16));
    for (int k = 0; k < 16; ++k) {
        CHECK(d.at(0, k).verdict == Verdict::Singular);
        CHECK(d.at(1, k).verdict != Verdict::Singular);
    }
}

TEST_CASE("wave front of a jump is its conormal") {
    const auto lat = z(2);
    const Window win = gevrey_window(2);
    AnalyzerConfig cfg;
    cfg.r_max = 64.0;
    const auto est = estimate_wavefront(TestDistribution::plane_jump(v2(1, 0), 0.0), {v2(0, 0.1), v2(0, -0.3)}, 16,
                                        cfg, lat, win);
    const double step = est.max_gap;
    for (std::size_t s = 0; s < 2; ++s) {
        for (int k = 0; k < 16; ++k) {
            const double theta = 2 * kPi * k / 16;
            const double to_normal = std::min(std::abs(std::sin(theta)), 1.0);
            const bool near = std::asin(to_normal) <= step + 1e-12;
            if (est.at(s, k).verdict == Verdict::Singular) CHECK(near);
            if (k == 0 || k == 8) CHECK(est.at(s, k).verdict == Verdict::Singular);
        }
    }
}

TEST_CASE("separation failure names the dual vector") {
    const Window big(WindowSpec{WindowKind::GevreyProduct, 1.5, 4, 2.0}, 2);
    AnalyzerConfig cfg;
    try {
        estimate_wavefront(TestDistribution::delta(v2(0, 0)), {v2(0, 0)}, 4, cfg, z(2), big);
        FAIL("expected a separation error");
    } catch (const SeparationError& e) {
        CHECK(std::string(e.what()).find("dual lattice vector") != std::string::npos);
    }
}

TEST_CASE("lattice and continuous fits agree in the Gevrey(4) scale and for a delta") {
    const Window win = gevrey_window(2);
    const auto omega4 = weights::WeightFunction::gevrey(4.0);
    const std::vector<std::pair<TestDistribution, Vec>> sources{
        {TestDistribution::gaussian(v2(0.1, -0.05), 0.3), v2(0, 0)},
        {TestDistribution::plane_jump(v2(1, 0), 0.0), v2(0, 0.1)},
        {TestDistribution::synthetic(2, 1.0, 1.0, 0.5), v2(0, 0)}};
    for (const auto& lat : {z(2), lattice::hexagonal()}) {
        for (const auto& [f, x0] : sources) {
            const LocalizedSpectrum ls(f, win, x0);
            const auto cone = cone2(2 * kPi / 3, 15 * kDeg);
            LambdaFitOptions lo;
            const auto a = lambda_fit(ls, cone, &lat, omega4, lo);
            lo.continuous = true;
            const auto b = lambda_fit(ls, cone, nullptr, omega4, lo);
            CHECK(std::abs(a.lambda - b.lambda) <= 0.1 * std::max(b.lambda, 0.2));
        }
        const LocalizedSpectrum d(TestDistribution::delta(v2(0.05, 0.02)), win, v2(0.05, 0.02));
        for (const auto& w : {weights::WeightFunction::log(), omega4}) {
            LambdaFitOptions lo;
            const auto a = lambda_fit(d, cone2(0.5, 15 * kDeg), &lat, w, lo);
            lo.continuous = true;
            const auto b = lambda_fit(d, cone2(0.5, 15 * kDeg), nullptr, w, lo);
            CHECK(std::abs(a.lambda - b.lambda) <= 0.02);
        }
    }
}
