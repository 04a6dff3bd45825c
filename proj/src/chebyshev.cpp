#include "wfs/chebyshev.hpp"

#include "wfs/types.hpp"

#include <cmath>
#include <stdexcept>

namespace wfs {

std::vector<double> PiecewiseChebyshev::nodes(double lo, double hi, int panels, int degree) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(panels) * (degree + 1));
    const double width = (hi - lo) / panels;
    for (int k = 0; k < panels; ++k) {
        const double mid = lo + (k + 0.5) * width;
        for (int j = 0; j <= degree; ++j) {
            // Chebyshev points of the first kind.
            const double t = std::cos(kPi * (j + 0.5) / (degree + 1));
            out.push_back(mid + 0.5 * width * t);
        }
    }
    return out;
}

PiecewiseChebyshev::PiecewiseChebyshev(const std::function<double(double)>& f, double lo, double hi,
                                       int panels, int degree)
    : lo_(lo), hi_(hi), panels_(panels), degree_(degree) {
    std::vector<double> values;
    for (double x : nodes(lo, hi, panels, degree)) values.push_back(f(x));
    fit(values);
}

PiecewiseChebyshev::PiecewiseChebyshev(const std::vector<double>& node_values, double lo, double hi,
                                       int panels, int degree)
    : lo_(lo), hi_(hi), panels_(panels), degree_(degree) {
    fit(node_values);
}

void PiecewiseChebyshev::fit(const std::vector<double>& values) {
    if (panels_ < 1 || degree_ < 1 || !(hi_ > lo_)) {
        throw std::invalid_argument("PiecewiseChebyshev: bad layout");
    }
    const int n = degree_ + 1;
    if (values.size() != static_cast<std::size_t>(panels_) * n) {
        throw std::invalid_argument("PiecewiseChebyshev: value count mismatch");
    }
    coeffs_.assign(values.size(), 0.0);
    for (int k = 0; k < panels_; ++k) {
        const double* v = values.data() + static_cast<std::size_t>(k) * n;
        double* c = coeffs_.data() + static_cast<std::size_t>(k) * n;
        for (int m = 0; m < n; ++m) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += v[j] * std::cos(kPi * m * (j + 0.5) / n);
            c[m] = (m == 0 ? 1.0 : 2.0) * s / n;
        }
    }
}

double PiecewiseChebyshev::operator()(double x) const {
    if (x < lo_ || coeffs_.empty()) return left_;
    if (x >= hi_) return right_;
    const double width = (hi_ - lo_) / panels_;
    int k = static_cast<int>((x - lo_) / width);
    if (k >= panels_) k = panels_ - 1;
    const double mid = lo_ + (k + 0.5) * width;
    const double t = (x - mid) / (0.5 * width);
    const double* c = coeffs_.data() + static_cast<std::size_t>(k) * (degree_ + 1);
    // Clenshaw recurrence.
    double b1 = 0.0;
    double b2 = 0.0;
    for (int m = degree_; m >= 1; --m) {
        const double b0 = 2.0 * t * b1 - b2 + c[m];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

PiecewiseChebyshev PiecewiseChebyshev::antiderivative() const {
    PiecewiseChebyshev out;
    out.lo_ = lo_;
    out.hi_ = hi_;
    out.panels_ = panels_;
    out.degree_ = degree_ + 1;
    const int n_in = degree_ + 1;
    const int n_out = degree_ + 2;
    out.coeffs_.assign(static_cast<std::size_t>(panels_) * n_out, 0.0);
    const double half = 0.5 * (hi_ - lo_) / panels_;
    double running = 0.0;
    for (int k = 0; k < panels_; ++k) {
        const double* c = coeffs_.data() + static_cast<std::size_t>(k) * n_in;
        double* C = out.coeffs_.data() + static_cast<std::size_t>(k) * n_out;
        for (int m = 0; m < n_in; ++m) {
            if (m == 0) {
                C[1] += c[0];
            } else if (m == 1) {
                C[2] += c[1] / 4.0;
                C[0] += c[1] / 4.0;  // t^2/2 = (T2 + T0)/4
            } else {
                C[m + 1] += c[m] / (2.0 * (m + 1));
                C[m - 1] -= c[m] / (2.0 * (m - 1));
            }
        }
        for (int m = 0; m < n_out; ++m) C[m] *= half;
        // Fix the constant so the panel starts at the running total: value at t=-1.
        double at_left = 0.0;
        for (int m = 0; m < n_out; ++m) at_left += C[m] * ((m % 2 == 0) ? 1.0 : -1.0);
        C[0] += running - at_left;
        double at_right = 0.0;
        for (int m = 0; m < n_out; ++m) at_right += C[m];
        running = at_right;
    }
    out.left_ = 0.0;
    out.right_ = running;
    return out;
}

}  // namespace wfs
