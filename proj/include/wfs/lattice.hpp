#pragma once

#include "wfs/types.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <vector>

namespace wfs::lattice {

inline constexpr int kMaxDim = 4;

/// Lambda = T(Z^d); the columns of T generate the lattice.
class Lattice {
public:
    Lattice() = default;
    /// Throws SingularGenerator when |det T| <= singular_tol.
    explicit Lattice(const Mat& generator, double singular_tol = 1e-12);

    int dim() const { return static_cast<int>(t_.rows()); }
    const Mat& generator() const { return t_; }
    const Mat& inverse() const { return t_inv_; }
    /// T^{-T}, generator of the dual lattice.
    const Mat& dual_generator() const { return dual_; }
    double covolume() const { return covolume_; }
    Lattice dual() const { return Lattice(dual_); }
    Lattice scaled(double c) const { return Lattice(c * t_); }

    Vec point(const IVec& k) const;
    Vec coordinates(const Vec& x) const { return t_inv_ * x; }

    nlohmann::json to_json() const;

private:
    Mat t_;
    Mat t_inv_;
    Mat dual_;
    double covolume_ = 0.0;
};

Lattice make_lattice(const Mat& generator);
/// Generator from row-major rows, as written in configs.
Lattice make_lattice(const std::vector<std::vector<double>>& rows);
Lattice hexagonal();

struct LatticePoint {
    IVec k;
    Vec mu;
    double norm = 0.0;
};

struct EnumerationLimits {
    std::size_t max_points = 20'000'000;  // cap on the integer box size
};

/// All T k with annulus_min <= |T k| <= R, lexicographic in k.
std::vector<LatticePoint> enumerate_points(const Lattice& lat, double radius, double annulus_min = 0.0,
                                           const EnumerationLimits& limits = {});

/// Open circular cone about `axis`.
class Cone {
public:
    Cone() = default;
    Cone(const Vec& axis, double half_angle);

    /// Strict membership; points within kBoundaryTol of the boundary angle are excluded.
    bool contains(const Vec& xi) const;
    double angle_to(const Vec& xi) const;
    /// Cone with the same axis and half-angle reduced by `margin`.
    Cone shrunk(double margin) const { return Cone(axis_, half_angle_ - margin); }

    const Vec& axis() const { return axis_; }
    double half_angle() const { return half_angle_; }
    int dim() const { return static_cast<int>(axis_.size()); }

    static constexpr double kBoundaryTol = 1e-12;

private:
    Vec axis_;
    double half_angle_ = 0.0;
};

std::vector<LatticePoint> enumerate_in_cone(const Lattice& lat, const Cone& cone, double r_min, double r_max,
                                            const EnumerationLimits& limits = {});

enum class RegionShape { Centered, Corner };

struct Reduced {
    Vec t;
    Vec mu;
    IVec k;
};

/// Half-open parallelepiped T [-1/2, 1/2)^d (centered) or T [0, 1)^d (corner).
class FundamentalRegion {
public:
    FundamentalRegion(Lattice lat, RegionShape shape = RegionShape::Centered);

    Reduced reduce(const Vec& x) const;
    bool contains(const Vec& x) const;
    /// D = sup |t| over the closure of the region.
    double diameter_bound() const { return diameter_; }
    const Lattice& lattice() const { return lat_; }
    RegionShape shape() const { return shape_; }
    /// Lower corner offset in coordinates: -1/2 (centered) or 0 (corner).
    double offset() const { return shape_ == RegionShape::Centered ? -0.5 : 0.0; }

private:
    Lattice lat_;
    RegionShape shape_;
    double diameter_ = 0.0;
};

struct Separation {
    bool separated = false;
    Vec witness;       // shortest nonzero dual vector
    double shortest = 0.0;
};

/// Decides (open ball of radius rho) cap Lambda* = {0} by exhaustive search of the
/// dual lattice. Throws Unsupported above kMaxDim.
Separation check_separation(const Lattice& lat, double rho);

/// Shortest nonzero vector of `lat` (last in lexicographic order among ties, so
/// Z^2 gives (1, 0)).
LatticePoint shortest_vector(const Lattice& lat);

}  // namespace wfs::lattice
