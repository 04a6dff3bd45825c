#include "wfs/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <map>
#include <memory>
#include <mutex>

namespace wfs::quad {

namespace {

Rule build_rule(int n) {
    Rule rule;
    // legendre_p_zeros returns the nonnegative zeros in increasing order.
    const std::vector<double> positive = boost::math::legendre_p_zeros<double>(n);
    std::vector<double> nodes;
    nodes.reserve(n);
    for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
        if (*it != 0.0) nodes.push_back(-*it);
    }
    for (double x : positive) nodes.push_back(x);
    rule.nodes = nodes;
    rule.weights.reserve(nodes.size());
    for (double x : nodes) {
        const double dp = boost::math::legendre_p_prime(n, x);
        rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
    }
    return rule;
}

}  // namespace

const Rule& gauss_legendre(int n) {
    static std::mutex guard;
    static std::map<int, std::unique_ptr<Rule>> cache;
    if (n < 1) throw QuadratureError("Gauss-Legendre order must be positive");
    std::lock_guard lock(guard);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Rule>(build_rule(n));
    return *slot;
}

Rule gauss_legendre(int n, double a, double b) {
    const Rule& ref = gauss_legendre(n);
    Rule out;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    out.nodes.reserve(ref.nodes.size());
    out.weights.reserve(ref.nodes.size());
    for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
        out.nodes.push_back(mid + half * ref.nodes[i]);
        out.weights.push_back(half * ref.weights[i]);
    }
    return out;
}

Rule composite(int order, int panels, double a, double b) {
    Rule out;
    const double width = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        Rule piece = gauss_legendre(order, a + k * width, a + (k + 1) * width);
        out.nodes.insert(out.nodes.end(), piece.nodes.begin(), piece.nodes.end());
        out.weights.insert(out.weights.end(), piece.weights.begin(), piece.weights.end());
    }
    return out;
}

}  // namespace wfs::quad
