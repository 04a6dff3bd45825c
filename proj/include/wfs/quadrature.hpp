#pragma once

#include "wfs/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace wfs::quad {

/// Gauss-Legendre nodes and weights.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]; cached per n, thread-safe.
const Rule& gauss_legendre(int n);

/// n-point rule mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);

/// Composite rule: [a, b] split into `panels` equal panels of `order` nodes each.
Rule composite(int order, int panels, double a, double b);

/// Adaptive Gauss-Kronrod (15 point) integration of a real or complex
/// integrand. Throws QuadratureError when the estimated error exceeds
/// max(abs_tol, rel_tol * L1) after max_depth bisections.
template <class F>
auto adaptive(F&& f, double a, double b, double rel_tol, double abs_tol, unsigned max_depth = 18) {
    double error = 0.0;
    double l1 = 0.0;
    auto result = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, max_depth, rel_tol, &error, &l1);
    const double allowed = std::max(abs_tol, rel_tol * l1);
    if (!(error <= 10.0 * allowed)) {
        throw QuadratureError("adaptive quadrature did not converge: achieved error " +
                              std::to_string(error) + " vs allowed " + std::to_string(allowed));
    }
    return result;
}

}  // namespace wfs::quad
