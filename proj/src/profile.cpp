#include "wfs/profile.hpp"

#include "wfs/errors.hpp"
#include "wfs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

namespace wfs {

namespace {

constexpr double kSeriesTol = 1e-20;
constexpr std::size_t kMaxSeriesTerms = 200000;

// Density of a sum of k uniforms on [0,1] (Irwin-Hall), y in [0, k].
double irwin_hall(int k, double y) {
    if (y <= 0.0 || y >= k) return 0.0;
    double sum = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= k && i < y; ++i) {
        sum += ((i % 2) ? -1.0 : 1.0) * binom * std::pow(y - i, k - 1);
        binom = binom * (k - i) / (i + 1);
    }
    return sum / std::tgamma(static_cast<double>(k));
}

// Distribution function of the same sum.
double irwin_hall_cdf(int k, double y) {
    if (y <= 0.0) return 0.0;
    if (y >= k) return 1.0;
    double sum = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= k && i < y; ++i) {
        sum += ((i % 2) ? -1.0 : 1.0) * binom * std::pow(y - i, k);
        binom = binom * (k - i) / (i + 1);
    }
    return sum / std::tgamma(static_cast<double>(k) + 1.0);
}

}  // namespace

// Psi on [-L/2, L/2] as its Fourier series with period L > 2h; the window is
// exactly band-dual so the coefficients are spectrum samples at n / L.
struct Profile1D::Series {
    std::once_flag once;
    bool exact = false;  // equal widths: Irwin-Hall
    double period = 0.0;
    std::vector<double> coeffs;  // spectrum(n / L), n = 0..N
};

Profile1D::Profile1D(std::vector<double> half_widths, double mass)
    : widths_(std::move(half_widths)), mass_(mass), series_(std::make_shared<Series>()) {
    if (widths_.empty()) throw ConfigError("profile needs at least one box");
    for (double a : widths_) {
        if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("profile box half-widths must be positive");
    }
    if (!(mass > 0.0)) throw ConfigError("profile mass must be positive");
    std::sort(widths_.begin(), widths_.end(), std::greater<>());
    support_ = std::accumulate(widths_.begin(), widths_.end(), 0.0);
}

Profile1D Profile1D::bspline(int order, double half_width) {
    if (order < 1) throw ConfigError("B-spline order must be at least 1");
    if (!(half_width > 0.0)) throw ConfigError("B-spline radius must be positive");
    return Profile1D(std::vector<double>(static_cast<std::size_t>(order), half_width / order));
}

Profile1D Profile1D::gevrey(double s0, double half_width, double design_radius) {
    if (!(s0 > 1.0)) throw ConfigError("Gevrey window needs s0 > 1");
    if (!(half_width > 0.0) || !(design_radius > 0.0)) throw ConfigError("Gevrey window needs positive radii");
    long j_count = 8;
    for (int iter = 0; iter < 100; ++iter) {
        double h = 0.0;
        for (long j = 1; j <= j_count; ++j) h += std::pow(static_cast<double>(j), -s0);
        const double c = half_width / h;
        const auto next = static_cast<long>(std::ceil(std::pow(kTwoPi * c * design_radius, 1.0 / s0)));
        if (next <= j_count) break;
        j_count = next;
    }
    if (j_count > 100000) throw ConfigError("Gevrey window design radius too large");
    double h = 0.0;
    for (long j = 1; j <= j_count; ++j) h += std::pow(static_cast<double>(j), -s0);
    std::vector<double> a;
    for (long j = 1; j <= j_count; ++j) a.push_back(half_width / h * std::pow(static_cast<double>(j), -s0));
    return Profile1D(std::move(a));
}

double Profile1D::spectrum(double zeta) const {
    double v = mass_;
    for (double a : widths_) v *= sinc_2pi(a * zeta);
    return v;
}

double Profile1D::log_abs_spectrum(double zeta) const {
    double v = std::log(mass_);
    for (double a : widths_) v += std::log(std::abs(sinc_2pi(a * zeta)));
    return v;
}

double Profile1D::log_envelope(double zeta) const {
    double v = std::log(mass_);
    const double z = std::abs(zeta);
    for (double a : widths_) {
        const double x = kTwoPi * a * z;
        if (x > 1.0) v -= std::log(x);
    }
    return v;
}

Profile1D Profile1D::convolve(const Profile1D& other) const {
    std::vector<double> w = widths_;
    w.insert(w.end(), other.widths_.begin(), other.widths_.end());
    return Profile1D(std::move(w), mass_ * other.mass_);
}

const Profile1D::Series& Profile1D::series() const {
    std::call_once(series_->once, [this] {
        Series& s = *series_;
        s.period = 2.5 * support_;
        const double floor = std::log(mass_) + std::log(kSeriesTol);
        std::size_t n = 0;
        while (n <= kMaxSeriesTerms && log_envelope(static_cast<double>(n) / s.period) >= floor) ++n;
        if (n <= kMaxSeriesTerms) {
            s.coeffs.resize(n + 1);
            for (std::size_t i = 0; i <= n; ++i) s.coeffs[i] = spectrum(static_cast<double>(i) / s.period);
            return;
        }
        const bool equal = std::all_of(widths_.begin(), widths_.end(),
                                       [&](double a) { return std::abs(a - widths_.front()) <= 1e-15 * a; });
        if (!equal || widths_.size() > 40) {
            throw Unsupported("profile spectrum decays too slowly for a spatial representation");
        }
        s.exact = true;
    });
    return *series_;
}

std::size_t Profile1D::series_terms() const {
    const Series& s = series();
    return s.exact ? 0 : s.coeffs.size();
}

double Profile1D::operator()(double x) const {
    if (!(std::abs(x) < support_)) return 0.0;
    const Series& s = series();
    if (s.exact) {
        const double a = widths_.front();
        const int k = static_cast<int>(widths_.size());
        return mass_ * irwin_hall(k, (x + support_) / (2.0 * a)) / (2.0 * a);
    }
    // Clenshaw for sum_n c_n cos(n theta).
    const double theta = kTwoPi * x / s.period;
    const double two_cos = 2.0 * std::cos(theta);
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t n = s.coeffs.size() - 1; n >= 1; --n) {
        const double b0 = s.coeffs[n] + two_cos * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    // sum_{n>=1} c_n cos(n theta) = b1 cos(theta) - b2
    const double tail = b1 * std::cos(theta) - b2;
    return (s.coeffs[0] + 2.0 * tail) / s.period;
}

double Profile1D::cdf(double x) const {
    if (!(x > -support_)) return 0.0;
    if (x >= support_) return mass_;
    const Series& s = series();
    if (s.exact) {
        const double a = widths_.front();
        const int k = static_cast<int>(widths_.size());
        return mass_ * irwin_hall_cdf(k, (x + support_) / (2.0 * a));
    }
    // Term-by-term antiderivative of the cosine series from -h.
    double sum = s.coeffs[0] * (x + support_);
    for (std::size_t n = 1; n < s.coeffs.size(); ++n) {
        const double k = kTwoPi * static_cast<double>(n) / s.period;
        sum += 2.0 * s.coeffs[n] * (std::sin(k * x) + std::sin(k * support_)) / k;
    }
    return sum / s.period;
}

cplx Profile1D::half_transform(double c, double zeta) const {
    const double lo = std::clamp(c, -support_, support_);
    const double hi = support_;
    if (lo >= hi) return {0.0, 0.0};
    if (c <= -support_) return spectrum(zeta) * cplx(1.0, 0.0);
    const Series& s = series();
    if (s.exact) {
        // Piecewise polynomial: Gauss-Legendre per piece between breakpoints.
        const double a = widths_.front();
        const int k = static_cast<int>(widths_.size());
        const int order = std::max(16, static_cast<int>(4.0 * std::abs(zeta) * 2.0 * a) + k + 8);
        cplx sum = 0.0;
        for (int i = 0; i < k; ++i) {
            const double p0 = std::max(lo, -support_ + 2.0 * a * i);
            const double p1 = std::min(hi, -support_ + 2.0 * a * (i + 1));
            if (p1 <= p0) continue;
            const quad::Rule rule = quad::gauss_legendre(order, p0, p1);
            for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
                sum += rule.weights[j] * (*this)(rule.nodes[j]) * unit_phase(zeta * rule.nodes[j]);
            }
        }
        return sum;
    }
    // Term-by-term integral of the series over [lo, hi].
    const auto n_max = static_cast<long>(s.coeffs.size()) - 1;
    cplx sum = 0.0;
    const double width = hi - lo;
    for (long n = -n_max; n <= n_max; ++n) {
        const double cn = s.coeffs[static_cast<std::size_t>(std::abs(n))];
        const double kappa = static_cast<double>(n) / s.period - zeta;
        cplx term;
        if (std::abs(kappa) * width < 1e-8) {
            term = width * std::conj(unit_phase(0.5 * kappa * (hi + lo)));
        } else {
            term = (std::conj(unit_phase(kappa * hi)) - std::conj(unit_phase(kappa * lo))) / cplx(0.0, kTwoPi * kappa);
        }
        sum += cn * term;
    }
    return sum / s.period;
}

}  // namespace wfs
