#include "wfs/distribution.hpp"

#include "wfs/errors.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace wfs {

namespace {

constexpr char kGridMagic[8] = {'W', 'F', 'S', 'G', 'R', 'I', 'D', '1'};

std::size_t grid_size(const std::vector<int>& shape) {
    std::size_t n = 1;
    for (int s : shape) {
        if (s < 1) throw ConfigError("grid shape entries must be positive");
        n *= static_cast<std::size_t>(s);
    }
    return n;
}

void validate_grid(const GridData& g) {
    if (g.shape.empty() || g.shape.size() > 4) throw ConfigError("grid dimension must be 1 to 4");
    if (!(g.spacing > 0.0)) throw ConfigError("grid spacing must be positive");
    if (g.origin.size() != static_cast<Eigen::Index>(g.shape.size())) throw ConfigError("grid origin has wrong length");
    if (g.values.size() != grid_size(g.shape)) throw ConfigError("grid value count does not match its shape");
    for (double v : g.values) {
        if (!std::isfinite(v)) throw ConfigError("grid values must be finite");
    }
}

template <class T>
T read_raw(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw ConfigError("truncated binary grid file");
    return v;
}

}  // namespace

GridData load_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open grid file '" + path + "'");
    char magic[8] = {};
    in.read(magic, 8);
    GridData g;
    if (in && std::memcmp(magic, kGridMagic, 8) == 0) {
        const auto d = read_raw<std::int32_t>(in);
        if (d < 1 || d > 4) throw ConfigError("grid dimension must be 1 to 4");
        for (int i = 0; i < d; ++i) g.shape.push_back(read_raw<std::int32_t>(in));
        g.spacing = read_raw<double>(in);
        g.origin.resize(d);
        for (int i = 0; i < d; ++i) g.origin[i] = read_raw<double>(in);
        g.values.resize(grid_size(g.shape));
        in.read(reinterpret_cast<char*>(g.values.data()), static_cast<std::streamsize>(g.values.size() * sizeof(double)));
        if (!in) throw ConfigError("truncated binary grid file");
    } else {
        in.clear();
        in.seekg(0);
        std::stringstream cleaned;
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            cleaned << (hash == std::string::npos ? line : line.substr(0, hash)) << '\n';
        }
        int d = 0;
        if (!(cleaned >> d) || d < 1 || d > 4) throw ConfigError("grid text header: bad dimension");
        g.shape.resize(static_cast<std::size_t>(d));
        for (auto& s : g.shape) {
            if (!(cleaned >> s)) throw ConfigError("grid text header: bad shape");
        }
        if (!(cleaned >> g.spacing)) throw ConfigError("grid text header: bad spacing");
        g.origin.resize(d);
        for (int i = 0; i < d; ++i) {
            if (!(cleaned >> g.origin[i])) throw ConfigError("grid text header: bad origin");
        }
        g.values.resize(grid_size(g.shape));
        for (auto& v : g.values) {
            if (!(cleaned >> v)) throw ConfigError("grid text file has too few values");
        }
    }
    validate_grid(g);
    return g;
}

void save_grid_binary(const GridData& grid, const std::string& path) {
    validate_grid(grid);
    std::ofstream out(path, std::ios::binary);
    out.write(kGridMagic, 8);
    const auto d = static_cast<std::int32_t>(grid.dim());
    out.write(reinterpret_cast<const char*>(&d), sizeof d);
    for (int s : grid.shape) {
        const auto s32 = static_cast<std::int32_t>(s);
        out.write(reinterpret_cast<const char*>(&s32), sizeof s32);
    }
    out.write(reinterpret_cast<const char*>(&grid.spacing), sizeof(double));
    for (int i = 0; i < d; ++i) {
        const double o = grid.origin[i];
        out.write(reinterpret_cast<const char*>(&o), sizeof o);
    }
    out.write(reinterpret_cast<const char*>(grid.values.data()),
              static_cast<std::streamsize>(grid.values.size() * sizeof(double)));
    if (!out) throw ConfigError("cannot write grid file '" + path + "'");
}

void save_grid_text(const GridData& grid, const std::string& path) {
    validate_grid(grid);
    std::ofstream out(path);
    out.precision(17);
    out << grid.dim() << '\n';
    for (int s : grid.shape) out << s << ' ';
    out << '\n' << grid.spacing << '\n';
    for (int i = 0; i < grid.dim(); ++i) out << grid.origin[i] << ' ';
    out << '\n';
    for (double v : grid.values) out << v << '\n';
    if (!out) throw ConfigError("cannot write grid file '" + path + "'");
}

TestDistribution TestDistribution::delta(const Vec& center) {
    TestDistribution f;
    f.kind_ = DistKind::Delta;
    f.dim_ = static_cast<int>(center.size());
    f.center_ = center;
    f.nominal_ = "{center} x all directions";
    return f;
}

TestDistribution TestDistribution::plane_jump(const Vec& normal, double offset) {
    const double n = normal.norm();
    if (!(n > 0.0)) throw ConfigError("plane jump normal must be nonzero");
    TestDistribution f;
    f.kind_ = DistKind::PlaneJump;
    f.dim_ = static_cast<int>(normal.size());
    f.normal_ = normal / n;
    f.offset_ = offset / n;
    f.nominal_ = "jump plane x {+normal, -normal}";
    return f;
}

TestDistribution TestDistribution::gaussian(const Vec& center, double width) {
    if (!(width > 0.0)) throw ConfigError("gaussian width must be positive");
    TestDistribution f;
    f.kind_ = DistKind::Gaussian;
    f.dim_ = static_cast<int>(center.size());
    f.center_ = center;
    f.width_ = width;
    f.nominal_ = "empty";
    return f;
}

TestDistribution TestDistribution::synthetic(int dim, double amplitude, double rate, double exponent,
                                             std::string nominal_wavefront) {
    if (dim < 1) throw ConfigError("synthetic spectrum dimension must be positive");
    if (!(amplitude > 0.0) || !(rate >= 0.0) || !(exponent > 0.0)) {
        throw ConfigError("synthetic spectrum needs amplitude > 0, rate >= 0, exponent > 0");
    }
    TestDistribution f;
    f.kind_ = DistKind::SyntheticSpectrum;
    f.dim_ = dim;
    f.amplitude_ = amplitude;
    f.rate_ = rate;
    f.exponent_ = exponent;
    f.nominal_ = std::move(nominal_wavefront);
    return f;
}

TestDistribution TestDistribution::grid_samples(std::shared_ptr<const GridData> grid) {
    if (!grid) throw ConfigError("grid samples need a grid");
    validate_grid(*grid);
    TestDistribution f;
    f.kind_ = DistKind::GridSamples;
    f.dim_ = grid->dim();
    f.grid_ = std::move(grid);
    return f;
}

double TestDistribution::operator()(const Vec& x) const {
    switch (kind_) {
        case DistKind::PlaneJump:
            return normal_.dot(x) - offset_ > 0.0 ? 1.0 : 0.0;
        case DistKind::Gaussian:
            return std::exp(-kPi * (x - center_).squaredNorm() / (width_ * width_));
        default:
            throw Unsupported("pointwise evaluation is not defined for " + name());
    }
}

cplx TestDistribution::fourier(const Vec& xi) const {
    switch (kind_) {
        case DistKind::Delta:
            return unit_phase(xi.dot(center_));
        case DistKind::Gaussian:
            return std::pow(width_, dim_) * std::exp(-kPi * width_ * width_ * xi.squaredNorm()) *
                   unit_phase(xi.dot(center_));
        default:
            throw Unsupported("closed-form transform is not defined for " + name());
    }
}

TestDistribution TestDistribution::dilated(double c) const {
    if (!(c > 0.0)) throw ConfigError("dilation factor must be positive");
    TestDistribution f = *this;
    switch (kind_) {
        case DistKind::Delta:
            // delta(c x - x_c) = c^{-d} delta(x - x_c / c); the mass factor does not
            // change wave front sets and is dropped.
            f.center_ = center_ / c;
            break;
        case DistKind::PlaneJump:
            f.offset_ = offset_ / c;
            break;
        case DistKind::Gaussian:
            f.center_ = center_ / c;
            f.width_ = width_ / c;
            break;
        default:
            throw Unsupported("dilation is not defined for " + name());
    }
    return f;
}

TestDistribution TestDistribution::translated(const Vec& shift) const {
    TestDistribution f = *this;
    switch (kind_) {
        case DistKind::Delta:
        case DistKind::Gaussian:
            f.center_ = center_ + shift;
            break;
        case DistKind::PlaneJump:
            f.offset_ = offset_ + normal_.dot(shift);
            break;
        default:
            throw Unsupported("translation is not defined for " + name());
    }
    return f;
}

std::string TestDistribution::name() const {
    switch (kind_) {
        case DistKind::Delta: return "delta";
        case DistKind::PlaneJump: return "plane_jump";
        case DistKind::Gaussian: return "gaussian";
        case DistKind::SyntheticSpectrum: return "synthetic_spectrum";
        case DistKind::GridSamples: return "grid_samples";
    }
    return "?";
}

nlohmann::json TestDistribution::to_json() const {
    auto vec = [](const Vec& v) {
        std::vector<double> out(v.data(), v.data() + v.size());
        return nlohmann::json(out);
    };
    nlohmann::json j;
    j["kind"] = name();
    switch (kind_) {
        case DistKind::Delta: j["center"] = vec(center_); break;
        case DistKind::PlaneJump: j["normal"] = vec(normal_); j["offset"] = offset_; break;
        case DistKind::Gaussian: j["center"] = vec(center_); j["width"] = width_; break;
        case DistKind::SyntheticSpectrum:
            j["dim"] = dim_;
            j["amplitude"] = amplitude_;
            j["rate"] = rate_;
            j["exponent"] = exponent_;
            break;
        case DistKind::GridSamples:
            j["shape"] = grid_->shape;
            j["spacing"] = grid_->spacing;
            j["origin"] = vec(grid_->origin);
            break;
    }
    if (!nominal_.empty()) j["nominal_wavefront"] = nominal_;
    return j;
}

}  // namespace wfs
