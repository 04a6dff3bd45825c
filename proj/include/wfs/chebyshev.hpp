#pragma once

#include <functional>
#include <vector>

namespace wfs {

/// Piecewise Chebyshev interpolant on [lo, hi] with equal panels. Outside
/// [lo, hi] it evaluates to the configured constant tails (zero for densities,
/// 0 and 1 for distribution functions).
class PiecewiseChebyshev {
public:
    PiecewiseChebyshev() = default;
    PiecewiseChebyshev(const std::function<double(double)>& f, double lo, double hi, int panels,
                       int degree);
    /// Same, from the values already sampled at nodes() (panel-major).
    PiecewiseChebyshev(const std::vector<double>& node_values, double lo, double hi, int panels,
                       int degree);

    static std::vector<double> nodes(double lo, double hi, int panels, int degree);

    double operator()(double x) const;

    /// Antiderivative that vanishes at lo; evaluates to its final value beyond hi.
    PiecewiseChebyshev antiderivative() const;

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double left_tail() const { return left_; }
    double right_tail() const { return right_; }

private:
    void fit(const std::vector<double>& values);

    double lo_ = 0.0;
    double hi_ = 0.0;
    int panels_ = 0;
    int degree_ = 0;
    double left_ = 0.0;
    double right_ = 0.0;
    std::vector<double> coeffs_;  // panels_ x (degree_ + 1)
};

}  // namespace wfs
