#include "wfs/lattice.hpp"

#include "wfs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wfs::lattice {

Lattice::Lattice(const Mat& generator, double singular_tol) : t_(generator) {
    if (t_.rows() != t_.cols() || t_.rows() < 1) throw ConfigError("lattice generator must be square");
    if (t_.rows() > kMaxDim) throw Unsupported("lattice dimension above " + std::to_string(kMaxDim));
    const double det = t_.determinant();
    if (!(std::abs(det) > singular_tol)) {
        throw SingularGenerator("lattice generator is singular (|det T| = " + std::to_string(std::abs(det)) + ")");
    }
    covolume_ = std::abs(det);
    t_inv_ = t_.inverse();
    dual_ = t_inv_.transpose();
}

Vec Lattice::point(const IVec& k) const { return t_ * k.cast<double>(); }

nlohmann::json Lattice::to_json() const {
    auto rows = [](const Mat& m) {
        nlohmann::json j = nlohmann::json::array();
        for (int i = 0; i < m.rows(); ++i) {
            nlohmann::json r = nlohmann::json::array();
            for (int c = 0; c < m.cols(); ++c) r.push_back(m(i, c));
            j.push_back(r);
        }
        return j;
    };
    return {{"dim", dim()}, {"generator", rows(t_)}, {"dual_generator", rows(dual_)}, {"covolume", covolume_}};
}

Lattice make_lattice(const Mat& generator) { return Lattice(generator); }

Lattice make_lattice(const std::vector<std::vector<double>>& rows) {
    const auto d = static_cast<int>(rows.size());
    if (d < 1 || d > kMaxDim) throw ConfigError("lattice generator must have 1 to 4 rows");
    Mat t(d, d);
    for (int i = 0; i < d; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != d) {
            throw ConfigError("lattice generator must be square");
        }
        for (int j = 0; j < d; ++j) t(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return Lattice(t);
}

Lattice hexagonal() {
    Mat t(2, 2);
    t << 1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0;
    return Lattice(t);
}

namespace {

// Integer box |k_i| <= |row_i(T^{-1})| R containing every lattice point of norm <= R.
std::vector<long> box_bounds(const Lattice& lat, double radius, const EnumerationLimits& limits) {
    const int d = lat.dim();
    std::vector<long> bound(static_cast<std::size_t>(d));
    double count = 1.0;
    for (int i = 0; i < d; ++i) {
        const double b = lat.inverse().row(i).norm() * radius;
        if (!std::isfinite(b) || b > 1e9) throw TooManyPoints("enumeration radius too large");
        bound[static_cast<std::size_t>(i)] = static_cast<long>(std::floor(b * (1.0 + 1e-12)));
        count *= 2.0 * static_cast<double>(bound[static_cast<std::size_t>(i)]) + 1.0;
    }
    if (count > static_cast<double>(limits.max_points)) {
        std::ostringstream os;
        os << "enumeration box holds " << count << " candidates, above the cap " << limits.max_points;
        throw TooManyPoints(os.str());
    }
    return bound;
}

template <class Keep>
std::vector<LatticePoint> enumerate_box(const Lattice& lat, double radius, const EnumerationLimits& limits,
                                        Keep&& keep) {
    const int d = lat.dim();
    const auto bound = box_bounds(lat, radius, limits);
    std::vector<LatticePoint> out;
    IVec k(d);
    for (int i = 0; i < d; ++i) k[i] = -bound[static_cast<std::size_t>(i)];
    const double r2 = radius * radius;
    while (true) {
        Vec mu = lat.point(k);
        const double n2 = mu.squaredNorm();
        if (n2 <= r2) {
            const double n = std::sqrt(n2);
            if (keep(mu, n)) out.push_back({k, std::move(mu), n});
        }
        // Odometer with the first coordinate most significant.
        int i = d - 1;
        while (i >= 0 && k[i] == bound[static_cast<std::size_t>(i)]) {
            k[i] = -bound[static_cast<std::size_t>(i)];
            --i;
        }
        if (i < 0) break;
        ++k[i];
    }
    return out;
}

}  // namespace

std::vector<LatticePoint> enumerate_points(const Lattice& lat, double radius, double annulus_min,
                                           const EnumerationLimits& limits) {
    if (!(radius > 0.0)) throw ConfigError("enumeration radius must be positive");
    return enumerate_box(lat, radius, limits, [&](const Vec&, double n) { return n >= annulus_min; });
}

Cone::Cone(const Vec& axis, double half_angle) : half_angle_(half_angle) {
    const double n = axis.norm();
    if (!(n > 0.0)) throw ConfigError("cone axis must be nonzero");
    if (!(half_angle > 0.0 && half_angle < kPi / 2.0)) throw ConfigError("cone half-angle must lie in (0, pi/2)");
    axis_ = axis / n;
}

double Cone::angle_to(const Vec& xi) const {
    const double along = xi.dot(axis_);
    const double across = (xi - along * axis_).norm();
    return std::atan2(across, along);
}

bool Cone::contains(const Vec& xi) const {
    if (xi.squaredNorm() == 0.0) return false;
    return angle_to(xi) < half_angle_ - kBoundaryTol;
}

std::vector<LatticePoint> enumerate_in_cone(const Lattice& lat, const Cone& cone, double r_min, double r_max,
                                            const EnumerationLimits& limits) {
    if (!(r_min >= 0.0 && r_min < r_max)) throw ConfigError("cone enumeration needs 0 <= R_min < R_max");
    if (cone.dim() != lat.dim()) throw ConfigError("cone and lattice dimensions differ");
    return enumerate_box(lat, r_max, limits,
                         [&](const Vec& mu, double n) { return n >= r_min && cone.contains(mu); });
}

FundamentalRegion::FundamentalRegion(Lattice lat, RegionShape shape) : lat_(std::move(lat)), shape_(shape) {
    const int d = lat_.dim();
    for (int mask = 0; mask < (1 << d); ++mask) {
        Vec u(d);
        for (int i = 0; i < d; ++i) u[i] = offset() + (((mask >> i) & 1) ? 1.0 : 0.0);
        diameter_ = std::max(diameter_, (lat_.generator() * u).norm());
    }
}

Reduced FundamentalRegion::reduce(const Vec& x) const {
    const Vec u = lat_.coordinates(x);
    IVec k(u.size());
    for (int i = 0; i < u.size(); ++i) k[i] = static_cast<long>(std::floor(u[i] - offset()));
    Reduced r;
    r.k = k;
    r.mu = lat_.point(k);
    r.t = x - r.mu;
    return r;
}

bool FundamentalRegion::contains(const Vec& x) const {
    const Vec u = lat_.coordinates(x);
    for (int i = 0; i < u.size(); ++i) {
        if (u[i] < offset() || u[i] >= offset() + 1.0) return false;
    }
    return true;
}

LatticePoint shortest_vector(const Lattice& lat) {
    double bound = std::numeric_limits<double>::infinity();
    for (int j = 0; j < lat.dim(); ++j) bound = std::min(bound, lat.generator().col(j).norm());
    const auto pts = enumerate_points(lat, bound * (1.0 + 1e-9));
    const LatticePoint* best = nullptr;
    for (const auto& p : pts) {
        if (p.norm == 0.0) continue;
        if (best == nullptr || p.norm <= best->norm * (1.0 + 1e-14)) best = &p;
    }
    return *best;
}

Separation check_separation(const Lattice& lat, double rho) {
    if (!(rho > 0.0)) throw ConfigError("separation radius must be positive");
    if (lat.dim() > kMaxDim) throw Unsupported("shortest-vector search above dimension 4");
    const LatticePoint s = shortest_vector(lat.dual());
    Separation out;
    out.witness = s.mu;
    out.shortest = s.norm;
    // The ball is open: a dual vector exactly on its boundary does not violate.
    out.separated = !(s.norm < rho);
    return out;
}

}  // namespace wfs::lattice
