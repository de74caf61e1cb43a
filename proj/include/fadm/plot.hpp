#pragma once

#include <filesystem>

#include "fadm/image.hpp"
#include "fadm/transfer.hpp"

namespace fadm {

/// Renders the transfer profile (blue), the plateau/sqrt(2) threshold
/// (gray) and the detected cutoff (red) as an RGB raster.
Image render_profile_plot(const TransferEstimate& est, int width = 640, int height = 400);

void write_profile_plot(const TransferEstimate& est, const std::filesystem::path& path);

}  // namespace fadm
