#include "wfs/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace wfs::svg {

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

const char* colour(microlocal::Verdict v) {
    switch (v) {
        case microlocal::Verdict::Singular: return "#c0392b";
        case microlocal::Verdict::Regular: return "#27ae60";
        case microlocal::Verdict::Indeterminate: return "#e67e22";
    }
    return "#000000";
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

}  // namespace

std::string polar_plot(const microlocal::WaveFrontEstimate& est, std::size_t seed, const std::string& title) {
    const double size = 420.0, cx = size / 2.0, cy = size / 2.0 + 10.0, rmax = 160.0;
    const auto n = static_cast<std::size_t>(est.direction_count);
    double scale = 0.0, floor = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& p = est.at(seed, k);
        double e = std::isfinite(p.estimate) ? std::max(p.estimate, 0.0) : 0.0;
        if (std::isfinite(p.floor) && p.floor > 0.0) {
            e = std::min(e, p.floor);
            floor = std::max(floor, p.floor);
        }
        scale = std::max(scale, e);
    }
    if (floor > 0.0) scale = std::max(scale, floor);
    if (!(scale > 0.0)) scale = 1.0;

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size + 20.0
      << "\" viewBox=\"0 0 " << size << ' ' << size + 20.0 << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"10\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">" << escape(title) << "</text>\n";
    s << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << rmax
      << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
    if (floor > 0.0) {
        s << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << fmt(rmax * floor / scale)
          << "\" fill=\"none\" stroke=\"#7f8c8d\" stroke-dasharray=\"4 3\"/>\n";
        s << "<text x=\"" << fmt(cx + 4.0) << "\" y=\"" << fmt(cy - rmax * floor / scale - 4.0)
          << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#7f8c8d\">window floor " << fmt(floor)
          << "</text>\n";
    }
    for (std::size_t k = 0; k < n; ++k) {
        const auto& p = est.at(seed, k);
        double e = std::isfinite(p.estimate) ? std::max(p.estimate, 0.0) : 0.0;
        if (std::isfinite(p.floor) && p.floor > 0.0) e = std::min(e, p.floor);
        const bool singular = p.verdict == microlocal::Verdict::Singular;
        const double len = singular ? rmax : rmax * e / scale;
        const double x = cx + len * std::cos(p.theta), y = cy - len * std::sin(p.theta);
        s << "<line x1=\"" << cx << "\" y1=\"" << cy << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(y)
          << "\" stroke=\"" << colour(p.verdict) << "\" stroke-width=\"" << (singular ? 3 : 1.5) << "\">"
          << "<title>theta=" << fmt(p.theta) << " " << microlocal::to_string(p.verdict) << " estimate="
          << fmt(p.estimate) << "</title></line>\n";
        s << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"2.5\" fill=\"" << colour(p.verdict)
          << "\" class=\"" << microlocal::to_string(p.verdict) << "\"/>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace wfs::svg
