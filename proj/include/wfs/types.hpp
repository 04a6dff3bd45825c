#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace wfs {

// Dimensions stay small (d <= 4), so vectors and matrices live on the stack.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;
using IVec = Eigen::Matrix<long, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;
using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sin(2*pi*x) with argument reduction, so integer x gives (near) exact zeros.
inline double sin_2pi(double x) {
    const double r = x - std::nearbyint(x);
    return std::sin(kTwoPi * r);
}

// sin(x)/x with the removable singularity filled in.
inline double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// sin(2*pi*y)/(2*pi*y), reduced so that the zeros at y in Z\{0} are accurate.
inline double sinc_2pi(double y) {
    if (std::abs(y) < 1e-4) return sinc(kTwoPi * y);
    return sin_2pi(y) / (kTwoPi * y);
}

// exp(-2*pi*i*phase)
inline cplx unit_phase(double phase) {
    const double r = phase - std::nearbyint(phase);
    return {std::cos(kTwoPi * r), -std::sin(kTwoPi * r)};
}

}  // namespace wfs
