#pragma once

#include "wfs/types.hpp"

#include <nlohmann/json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace wfs {

enum class DistKind { Delta, PlaneJump, Gaussian, SyntheticSpectrum, GridSamples };

/// Values on a uniform grid: point (i_0, ..., i_{d-1}) sits at origin + spacing * i,
/// stored row-major (last index fastest).
struct GridData {
    std::vector<int> shape;
    double spacing = 1.0;
    Vec origin;
    std::vector<double> values;

    int dim() const { return static_cast<int>(shape.size()); }
};

/// Text: "d", then shape, spacing, origin, then the values, whitespace separated,
/// '#' comments allowed. Binary: magic "WFSGRID1", int32 d, int32 shape[d],
/// float64 spacing, float64 origin[d], float64 values.
GridData load_grid(const std::string& path);
void save_grid_binary(const GridData& grid, const std::string& path);
void save_grid_text(const GridData& grid, const std::string& path);

class TestDistribution {
public:
    static TestDistribution delta(const Vec& center);
    /// Heaviside H(n . x - offset). n and offset are divided by |n|, so the set is unchanged.
    static TestDistribution plane_jump(const Vec& normal, double offset);
    /// exp(-pi |x - center|^2 / width^2)
    static TestDistribution gaussian(const Vec& center, double width);
    /// Localized spectrum amplitude * exp(-rate |xi|^exponent), given directly.
    static TestDistribution synthetic(int dim, double amplitude, double rate, double exponent,
                                      std::string nominal_wavefront = "");
    static TestDistribution grid_samples(std::shared_ptr<const GridData> grid);

    DistKind kind() const { return kind_; }
    int dim() const { return dim_; }
    const Vec& center() const { return center_; }
    const Vec& normal() const { return normal_; }
    double offset() const { return offset_; }
    double width() const { return width_; }
    double amplitude() const { return amplitude_; }
    double rate() const { return rate_; }
    double exponent() const { return exponent_; }
    const GridData& grid() const { return *grid_; }
    const std::string& nominal_wavefront() const { return nominal_; }
    void set_nominal_wavefront(std::string s) { nominal_ = std::move(s); }

    /// Pointwise value for function-valued kinds (PlaneJump, Gaussian). Throws Unsupported otherwise.
    double operator()(const Vec& x) const;
    /// Unlocalized transform where it exists in closed form (Gaussian, Delta).
    cplx fourier(const Vec& xi) const;
    /// The distribution x -> f(c x), c > 0.
    TestDistribution dilated(double c) const;
    /// The distribution x -> f(x - shift).
    TestDistribution translated(const Vec& shift) const;

    std::string name() const;
    nlohmann::json to_json() const;

private:
    DistKind kind_ = DistKind::Delta;
    int dim_ = 0;
    Vec center_;
    Vec normal_;
    double offset_ = 0.0;
    double width_ = 1.0;
    double amplitude_ = 1.0;
    double rate_ = 1.0;
    double exponent_ = 1.0;
    std::shared_ptr<const GridData> grid_;
    std::string nominal_;
};

}  // namespace wfs
