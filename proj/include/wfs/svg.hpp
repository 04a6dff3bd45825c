#pragma once

#include "wfs/wavefront.hpp"

#include <string>

namespace wfs::svg {

/// Polar plot for one seed: one spoke per direction, length proportional to the
/// estimate capped at the window floor, singular spokes drawn full length in red.
std::string polar_plot(const microlocal::WaveFrontEstimate& est, std::size_t seed, const std::string& title);

}  // namespace wfs::svg
