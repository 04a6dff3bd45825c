#include "wfs/config.hpp"

#include "wfs/errors.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <set>
#include <sstream>

namespace wfs::config {

namespace {

nlohmann::json yaml_to_json(const YAML::Node& node) {
    switch (node.Type()) {
        case YAML::NodeType::Null:
        case YAML::NodeType::Undefined: return nullptr;
        case YAML::NodeType::Sequence: {
            nlohmann::json a = nlohmann::json::array();
            for (const auto& item : node) a.push_back(yaml_to_json(item));
            return a;
        }
        case YAML::NodeType::Map: {
            nlohmann::json o = nlohmann::json::object();
            for (const auto& kv : node) o[kv.first.as<std::string>()] = yaml_to_json(kv.second);
            return o;
        }
        case YAML::NodeType::Scalar: break;
    }
    const std::string s = node.Scalar();
    if (node.Tag() == "!") return s;  // quoted
    if (s == "true" || s == "True") return true;
    if (s == "false" || s == "False") return false;
    if (s == "null" || s == "~") return nullptr;
    {
        std::istringstream in(s);
        long long v;
        if (in >> v && in.eof()) return v;
    }
    {
        std::istringstream in(s);
        double v;
        if (in >> v && in.eof()) return v;
    }
    return s;
}

// Typed access to one JSON object with unknown-key detection.
class Reader {
public:
    Reader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_, "expected a table");
    }

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    const nlohmann::json& raw(const std::string& key) {
        used_.insert(key);
        return j_.at(key);
    }

    Reader child(const std::string& key) { return Reader(raw(key), at(key)); }

    double num(const std::string& key, double def) { return has(key) ? to_num(raw(key), at(key)) : (mark(key), def); }
    double num(const std::string& key) { return to_num(required(key), at(key)); }

    long integer(const std::string& key, long def) {
        if (!has(key)) return mark(key), def;
        const auto& v = raw(key);
        if (!v.is_number_integer()) fail(at(key), "expected an integer");
        return v.get<long>();
    }

    bool boolean(const std::string& key, bool def) {
        if (!has(key)) return mark(key), def;
        const auto& v = raw(key);
        if (!v.is_boolean()) fail(at(key), "expected true or false");
        return v.get<bool>();
    }

    std::string str(const std::string& key, const std::string& def) {
        if (!has(key)) return mark(key), def;
        const auto& v = raw(key);
        if (!v.is_string()) fail(at(key), "expected a string");
        return v.get<std::string>();
    }
    std::string str(const std::string& key) {
        const auto& v = required(key);
        if (!v.is_string()) fail(at(key), "expected a string");
        return v.get<std::string>();
    }

    Vec vec(const std::string& key) { return to_vec(required(key), at(key)); }

    std::vector<double> numbers(const std::string& key) {
        const auto& v = required(key);
        if (!v.is_array()) fail(at(key), "expected a list of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(to_num(v[i], at(key) + "[" + std::to_string(i) + "]"));
        return out;
    }

    const nlohmann::json& required(const std::string& key) {
        if (!has(key)) fail(at(key), "is required");
        return raw(key);
    }

    void finish() const {
        for (const auto& [k, v] : j_.items()) {
            if (!used_.count(k)) fail(at(k), "is not a recognized key");
        }
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    [[noreturn]] static void fail(const std::string& path, const std::string& what) {
        throw ConfigError(path + ": " + what);
    }

    static double to_num(const nlohmann::json& v, const std::string& path) {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s == "inf" || s == ".inf") return std::numeric_limits<double>::infinity();
        }
        fail(path, "expected a number");
    }

    static Vec to_vec(const nlohmann::json& v, const std::string& path) {
        if (!v.is_array() || v.empty() || v.size() > 4) fail(path, "expected a list of 1 to 4 numbers");
        Vec out(static_cast<int>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = to_num(v[i], path + "[" + std::to_string(i) + "]");
        return out;
    }

private:
    void mark(const std::string& key) { used_.insert(key); }

    const nlohmann::json& j_;
    std::string path_;
    std::set<std::string> used_;
};

std::string resolve(const std::string& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_absolute()) return p;
    return (std::filesystem::path(base) / path).string();
}

weights::WeightFunction parse_omega(Reader r, const std::string& base) {
    const std::string kind = r.str("kind");
    weights::WeightFunction w;
    if (kind == "log") {
        w = weights::WeightFunction::log();
    } else if (kind == "gevrey") {
        const double s = r.num("s");
        if (!(s >= 1.0)) Reader::fail(r.at("s"), "Gevrey order must be >= 1");
        w = weights::WeightFunction::gevrey(s);
    } else if (kind == "tabulated") {
        w = weights::WeightFunction::from_table_file(resolve(base, r.str("table")));
    } else {
        Reader::fail(r.at("kind"), "unknown weight kind '" + kind + "' (log, gevrey, tabulated)");
    }
    r.finish();
    return w;
}

TestDistribution parse_distribution(Reader r, const std::string& base) {
    const std::string kind = r.str("kind");
    std::optional<TestDistribution> f;
    if (kind == "delta") {
        f = TestDistribution::delta(r.vec("center"));
    } else if (kind == "plane_jump") {
        const Vec n = r.vec("normal");
        if (!(n.norm() > 0.0)) Reader::fail(r.at("normal"), "must be nonzero");
        f = TestDistribution::plane_jump(n, r.num("offset", 0.0));
    } else if (kind == "gaussian") {
        const double w = r.num("width");
        if (!(w > 0.0)) Reader::fail(r.at("width"), "must be positive");
        f = TestDistribution::gaussian(r.vec("center"), w);
    } else if (kind == "synthetic") {
        const long d = r.integer("dim", 2);
        if (d < 1 || d > 4) Reader::fail(r.at("dim"), "must be between 1 and 4");
        const double rate = r.num("rate", 1.0), exponent = r.num("exponent", 1.0), amp = r.num("amplitude", 1.0);
        if (!(amp > 0.0)) Reader::fail(r.at("amplitude"), "must be positive");
        f = TestDistribution::synthetic(static_cast<int>(d), amp, rate, exponent);
    } else if (kind == "grid") {
        f = TestDistribution::grid_samples(std::make_shared<GridData>(load_grid(resolve(base, r.str("path")))));
    } else {
        Reader::fail(r.at("kind"), "unknown distribution kind '" + kind +
                                       "' (delta, plane_jump, gaussian, synthetic, grid)");
    }
    if (r.has("nominal_wavefront")) f->set_nominal_wavefront(r.str("nominal_wavefront"));
    r.finish();
    return *f;
}

lattice::Lattice parse_lattice(Reader r, int dim_hint) {
    lattice::Lattice lat;
    if (r.has("generator")) {
        const auto& g = r.raw("generator");
        if (!g.is_array() || g.empty()) Reader::fail(r.at("generator"), "expected a list of rows");
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const std::string p = r.at("generator") + "[" + std::to_string(i) + "]";
            const Vec row = Reader::to_vec(g[i], p);
            if (row.size() != static_cast<int>(g.size())) Reader::fail(p, "generator must be square");
            rows.emplace_back(row.data(), row.data() + row.size());
        }
        try {
            lat = lattice::make_lattice(rows);
        } catch (const SingularGenerator& e) {
            Reader::fail(r.at("generator"), e.what());
        }
    } else {
        const std::string preset = r.str("preset", "square");
        if (preset == "square") {
            lat = lattice::make_lattice(Mat::Identity(dim_hint, dim_hint));
        } else if (preset == "hexagonal") {
            lat = lattice::hexagonal();
        } else {
            Reader::fail(r.at("preset"), "unknown preset '" + preset + "' (square, hexagonal)");
        }
    }
    const double scale = r.num("scale", 1.0);
    if (!(scale > 0.0)) Reader::fail(r.at("scale"), "must be positive");
    if (scale != 1.0) lat = lat.scaled(scale);
    r.finish();
    return lat;
}

microlocal::Mode parse_mode(const std::string& s, const std::string& path) {
    using microlocal::Mode;
    if (s == "beurling") return Mode::Beurling;
    if (s == "roumieu") return Mode::Roumieu;
    if (s == "fourier_lebesgue") return Mode::FourierLebesgue;
    if (s == "quasianalytic") return Mode::Quasianalytic;
    if (s == "sup_family") return Mode::SupFamily;
    if (s == "inf_family") return Mode::InfFamily;
    Reader::fail(path, "unknown analyzer mode '" + s +
                           "' (beurling, roumieu, fourier_lebesgue, quasianalytic, sup_family, inf_family)");
}

void parse_thresholds(Reader r, microlocal::Thresholds& t) {
    t.lambda_min = r.num("lambda_min", t.lambda_min);
    t.floor_band = r.num("floor_band", t.floor_band);
    t.trend_growth = r.num("trend_growth", t.trend_growth);
    t.trend_decay = r.num("trend_decay", t.trend_decay);
    t.c_cap_factor = r.num("c_cap_factor", t.c_cap_factor);
    t.geometric = r.num("geometric", t.geometric);
    t.tail_tol = r.num("tail_tol", t.tail_tol);
    t.sup_tol = r.num("sup_tol", t.sup_tol);
    r.finish();
}

void parse_analyzer(Reader r, RunConfig& c) {
    auto& a = c.analyzer;
    a.mode = parse_mode(r.str("mode", "beurling"), r.at("mode"));
    const double half = r.num("half_angle_deg", 15.0);
    if (!(half > 0.0 && half < 90.0)) Reader::fail(r.at("half_angle_deg"), "must lie in (0, 90)");
    a.half_angle = half * kPi / 180.0;
    const long dirs = r.integer("directions", 16);
    if (dirs < 1) Reader::fail(r.at("directions"), "must be positive");
    c.directions = static_cast<int>(dirs);
    c.theta = r.num("theta_deg", 0.0) * kPi / 180.0;
    a.r_min = r.num("r_min", a.r_min);
    a.r_max = r.num("r_max", a.r_max);
    if (!(a.r_min > 0.0 && a.r_max > a.r_min)) Reader::fail(r.at("r_max"), "radii need 0 < r_min < r_max");
    a.continuous = r.boolean("continuous", false);
    a.spacing = r.num("spacing", a.spacing);
    if (!(a.spacing > 0.0)) Reader::fail(r.at("spacing"), "must be positive");
    a.q = r.num("q", a.q);
    if (!(a.q >= 1.0)) Reader::fail(r.at("q"), "must be >= 1 or inf");
    a.fl_lambda = r.num("fl_lambda", a.fl_lambda);
    if (r.has("family_lambdas")) {
        a.family_lambdas = r.numbers("family_lambdas");
        if (a.family_lambdas.empty()) Reader::fail(r.at("family_lambdas"), "must not be empty");
    }
    a.sequence_s = r.num("sequence_s", a.sequence_s);
    const long p_max = r.integer("p_max", a.p_max);
    if (p_max < 4) Reader::fail(r.at("p_max"), "must be at least 4");
    a.p_max = static_cast<int>(p_max);
    a.keep_samples = r.boolean("keep_samples", false);
    if (r.has("thresholds")) parse_thresholds(r.child("thresholds"), a.thresholds);
    if (r.has("cutoff")) {
        Reader k = r.child("cutoff");
        a.cutoff.smoothing_s0 = k.num("smoothing_s0", a.cutoff.smoothing_s0);
        a.cutoff.design_radius = k.num("design_radius", a.cutoff.design_radius);
        k.finish();
    }
    a.omega = c.omega;
    r.finish();
}

void parse_window(Reader r, WindowSpec& w) {
    const std::string kind = r.str("kind", "gevrey");
    if (kind == "gevrey") {
        w.kind = WindowKind::GevreyProduct;
    } else if (kind == "bspline") {
        w.kind = WindowKind::BSpline;
    } else {
        Reader::fail(r.at("kind"), "unknown window kind '" + kind + "' (gevrey, bspline)");
    }
    w.s0 = r.num("s0", w.s0);
    if (!(w.s0 > 1.0)) Reader::fail(r.at("s0"), "must exceed 1");
    const long order = r.integer("order", w.order);
    if (order < 1) Reader::fail(r.at("order"), "must be positive");
    w.order = static_cast<int>(order);
    w.radius = r.num("radius", w.radius);
    if (!(w.radius > 0.0)) Reader::fail(r.at("radius"), "must be positive");
    w.design_radius = r.num("design_radius", w.design_radius);
    r.finish();
}

void parse_fourier(Reader r, FourierSpec& f) {
    if (r.has("source")) {
        Reader s = r.child("source");
        const std::string kind = s.str("kind");
        if (kind == "periodized_gaussian") {
            f.source = FourierSourceKind::PeriodizedGaussian;
            f.width = s.num("width", 1.0);
            if (!(f.width > 0.0)) Reader::fail(s.at("width"), "must be positive");
            f.n_trunc = static_cast<int>(s.integer("n_trunc", 20));
        } else if (kind == "harmonic") {
            f.source = FourierSourceKind::Harmonic;
            for (double k : s.numbers("k")) {
                if (k != std::floor(k)) Reader::fail(s.at("k"), "harmonic index must be integer");
                f.harmonic.push_back(static_cast<long>(k));
            }
        } else if (kind == "windowed") {
            f.source = FourierSourceKind::Windowed;
            f.x0 = s.vec("x0");
        } else {
            Reader::fail(s.at("kind"), "unknown source kind '" + kind + "' (periodized_gaussian, harmonic, windowed)");
        }
        s.finish();
    }
    f.radius = r.num("radius", f.radius);
    if (!(f.radius > 0.0)) Reader::fail(r.at("radius"), "must be positive");
    const long order = r.integer("order", f.order);
    const long panels = r.integer("panels", f.panels);
    if (order < 1 || panels < 1) Reader::fail(r.at("order"), "order and panels must be positive");
    f.order = static_cast<int>(order);
    f.panels = static_cast<int>(panels);
    f.cross_check = r.boolean("cross_check", false);
    r.finish();
}

}  // namespace

nlohmann::json read_document(const std::string& path) {
    try {
        return yaml_to_json(YAML::LoadFile(path));
    } catch (const YAML::BadFile&) {
        throw ConfigError(path + ": cannot open config file");
    } catch (const YAML::Exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string canonical_dump(const nlohmann::json& j) { return j.dump(); }

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr)) {
        throw Error("SHA-256 digest failed");
    }
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return out.str();
}

RunConfig parse(const nlohmann::json& doc, const std::string& base_dir) {
    RunConfig c;
    Reader r(doc, "");
    c.echo = doc;
    c.hash = sha256_hex(canonical_dump(doc));
    c.seed = static_cast<std::uint64_t>(r.integer("seed", static_cast<long>(c.seed)));
    const long threads = r.integer("threads", 1);
    if (threads < 1) Reader::fail("threads", "must be positive");
    c.threads = static_cast<int>(threads);

    if (r.has("distribution")) c.distribution = parse_distribution(r.child("distribution"), base_dir);
    const int dim_hint = c.distribution ? c.distribution->dim() : 2;
    if (r.has("lattice")) {
        c.lattice = parse_lattice(r.child("lattice"), dim_hint);
    } else {
        c.lattice = lattice::make_lattice(Mat::Identity(dim_hint, dim_hint));
    }
    if (c.distribution && c.distribution->dim() != c.lattice.dim()) {
        Reader::fail("lattice", "dimension differs from the distribution");
    }
    if (r.has("window")) parse_window(r.child("window"), c.window);

    if (r.has("weights")) {
        Reader w = r.child("weights");
        if (w.has("omega")) c.omega = parse_omega(w.child("omega"), base_dir);
        if (w.has("sequence")) {
            Reader s = w.child("sequence");
            const std::string kind = s.str("kind", "factorial_power");
            if (kind != "factorial_power") Reader::fail(s.at("kind"), "unknown sequence kind '" + kind + "' (factorial_power)");
            c.sequence_s = s.num("s");
            if (!(*c.sequence_s > 0.0)) Reader::fail(s.at("s"), "must be positive");
            s.finish();
        }
        if (w.has("check")) {
            Reader k = w.child("check");
            c.weights_check.sample_radius = k.num("sample_radius", c.weights_check.sample_radius);
            c.weights_check.samples = static_cast<int>(k.integer("samples", c.weights_check.samples));
            c.weights_check.depth = k.integer("depth", c.weights_check.depth);
            c.weights_check.moderate_lambda = k.num("moderate_lambda", c.weights_check.moderate_lambda);
            if (c.weights_check.depth < 8) Reader::fail(k.at("depth"), "must be at least 8");
            k.finish();
        }
        w.finish();
    }
    if (r.has("analyzer")) {
        parse_analyzer(r.child("analyzer"), c);
    } else {
        c.analyzer.omega = c.omega;
    }
    if (r.has("seeds")) {
        const auto& s = r.raw("seeds");
        if (!s.is_array()) Reader::fail("seeds", "expected a list of points");
        for (std::size_t i = 0; i < s.size(); ++i) {
            const std::string p = "seeds[" + std::to_string(i) + "]";
            c.seeds.push_back(Reader::to_vec(s[i], p));
            if (c.seeds.back().size() != c.lattice.dim()) Reader::fail(p, "dimension differs from the lattice");
        }
    }
    if (r.has("fourier")) parse_fourier(r.child("fourier"), c.fourier);
    if (r.has("equivalence")) {
        Reader e = r.child("equivalence");
        if (e.has("omegas")) {
            const auto& list = e.raw("omegas");
            if (!list.is_array()) Reader::fail(e.at("omegas"), "expected a list of weight tables");
            for (std::size_t i = 0; i < list.size(); ++i) {
                c.equivalence.omegas.push_back(
                    parse_omega(Reader(list[i], e.at("omegas") + "[" + std::to_string(i) + "]"), base_dir));
            }
        }
        c.equivalence.tolerance = e.num("tolerance", c.equivalence.tolerance);
        e.finish();
    }
    if (r.has("output")) {
        Reader o = r.child("output");
        c.output.dir = resolve(base_dir, o.str("dir", "."));
        c.output.json = o.str("json", c.output.json);
        c.output.csv = o.str("csv", "");
        c.output.svg_prefix = o.str("svg_prefix", "");
        o.finish();
    }
    r.finish();
    return c;
}

RunConfig load(const std::string& path) {
    const auto doc = read_document(path);
    const auto base = std::filesystem::path(path).parent_path().string();
    return parse(doc, base.empty() ? "." : base);
}

}  // namespace wfs::config
