#include "fadm/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "fadm/error.hpp"

namespace fadm {
namespace {

std::string lower_ext(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

Image read_png(const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw IoError(path.string() + ": " + png.message);
  }
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const int bits = (png.format & PNG_FORMAT_FLAG_LINEAR) != 0 ? 16 : 8;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&png);
    throw IoError(path.string() + ": " + png.message);
  }
  const int w = static_cast<int>(png.width);
  const int h = static_cast<int>(png.height);
  const int nc = color ? 3 : 1;
  Image img(w, h, nc);
  img.set_source_bit_depth(bits);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < nc; ++c) {
        img.at(x, y, c) = buffer[(static_cast<std::size_t>(y) * w + x) * nc + c] / 255.0;
      }
    }
  }
  return img;
}

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

Image read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = pnm_token(in);
  if (magic != "P5" && magic != "P6") {
    throw IoError(path.string() + ": only binary PGM (P5) and PPM (P6) are supported");
  }
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(pnm_token(in));
    h = std::stoi(pnm_token(in));
    maxval = std::stoi(pnm_token(in));
  } catch (const std::exception&) {
    throw IoError(path.string() + ": malformed PNM header");
  }
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) {
    throw IoError(path.string() + ": malformed PNM header");
  }
  const int nc = magic == "P6" ? 3 : 1;
  const int bytes = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(static_cast<std::size_t>(w) * h * nc * bytes);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw IoError(path.string() + ": truncated PNM data");
  }
  Image img(w, h, nc);
  img.set_source_bit_depth(bytes == 2 ? 16 : 8);
  std::size_t k = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < nc; ++c) {
        unsigned v = raw[k++];
        if (bytes == 2) v = (v << 8) | raw[k++];
        img.at(x, y, c) = std::min(1.0, static_cast<double>(v) / maxval);
      }
    }
  }
  return img;
}

}  // namespace

unsigned char quantize8(double v) {
  return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

Image read_image(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return read_pnm(path);
  throw IoError("unsupported image format: " + path.string());
}

void write_png(const Image& img, const std::filesystem::path& path) {
  const int nc = img.channels();
  std::vector<png_byte> buffer(img.plane_size() * nc);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < nc; ++c) {
        buffer[(static_cast<std::size_t>(y) * img.width() + x) * nc + c] = quantize8(img.at(x, y, c));
      }
    }
  }
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width());
  png.height = static_cast<png_uint_32>(img.height());
  png.format = nc == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&png, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    throw IoError(path.string() + ": " + png.message);
  }
}

void write_pnm(const Image& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << (img.channels() == 3 ? "P6" : "P5") << '\n'
      << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<unsigned char> raw;
  raw.reserve(img.plane_size() * img.channels());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) raw.push_back(quantize8(img.at(x, y, c)));
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void write_image(const Image& img, const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".png") return write_png(img, path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return write_pnm(img, path);
  throw IoError("unsupported output format: " + path.string());
}

}  // namespace fadm
