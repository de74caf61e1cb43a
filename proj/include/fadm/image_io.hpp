#pragma once

#include <filesystem>

#include "fadm/image.hpp"

namespace fadm {

/// Decodes PNG (8-bit gray/RGB; alpha dropped) or binary PGM/PPM (P5/P6).
/// Samples are normalized to [0, 1] and the file bit depth is recorded.
Image read_image(const std::filesystem::path& path);

/// Encodes by extension: .png, .pgm/.ppm (binary, 8-bit). Samples are
/// clamped and rounded to 8 bits.
void write_image(const Image& img, const std::filesystem::path& path);

void write_png(const Image& img, const std::filesystem::path& path);
void write_pnm(const Image& img, const std::filesystem::path& path);

/// 8-bit quantization used by every writer.
unsigned char quantize8(double v);

}  // namespace fadm
