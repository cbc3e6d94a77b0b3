#include "ld/problems/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>

#include "ld/errors.hpp"

namespace ld {

Image::Image(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw InputError("negative image size");
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

RgbImage::RgbImage(const Image& gray) : width_(gray.width()), height_(gray.height()) {
  pixels_.reserve(gray.pixels().size());
  for (std::uint8_t v : gray.pixels()) pixels_.push_back({v, v, v});
}

namespace {

// Reads the next header integer, skipping whitespace and '#' comments.
int read_header_int(std::istream& is, const char* what) {
  for (;;) {
    const int c = is.peek();
    if (c == '#') {
      std::string ignored;
      std::getline(is, ignored);
    } else if (c != EOF && std::isspace(c)) {
      is.get();
    } else {
      break;
    }
  }
  int v = 0;
  if (!(is >> v)) throw InputError(std::string("PGM: cannot read ") + what);
  return v;
}

}  // namespace

Image read_pgm(std::istream& is) {
  std::string magic;
  if (!(is >> magic) || magic != "P5") throw InputError("PGM: expected magic P5");
  const int width = read_header_int(is, "width");
  const int height = read_header_int(is, "height");
  const int maxval = read_header_int(is, "maxval");
  if (width <= 0 || height <= 0) throw InputError("PGM: non-positive dimensions");
  if (maxval != 255) throw InputError("PGM: only maxval 255 is supported");
  if (!std::isspace(is.get())) throw InputError("PGM: missing separator after header");
  Image img(width, height);
  std::vector<char> buf(static_cast<std::size_t>(width) * height);
  if (!is.read(buf.data(), static_cast<std::streamsize>(buf.size())))
    throw InputError("PGM: pixel data shorter than header dimensions");
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      img.set(x, y, static_cast<std::uint8_t>(buf[static_cast<std::size_t>(y) * width + x]));
  return img;
}

void write_pgm(std::ostream& os, const Image& img) {
  os << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.pixels().data()), static_cast<std::streamsize>(img.pixels().size()));
}

void write_ppm(std::ostream& os, const RgbImage& img) {
  os << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const Rgb p = img.at(x, y);
      const char bytes[3] = {static_cast<char>(p.r), static_cast<char>(p.g), static_cast<char>(p.b)};
      os.write(bytes, 3);
    }
}

std::vector<Pixel> rasterize(Pixel a, Pixel b) {
  if (b < a) std::swap(a, b);
  std::vector<Pixel> out;
  const int dx = std::abs(b.x - a.x), sx = a.x < b.x ? 1 : -1;
  const int dy = -std::abs(b.y - a.y), sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  Pixel p = a;
  for (;;) {
    out.push_back(p);
    if (p == b) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      p.x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      p.y += sy;
    }
  }
  return out;
}

void draw_segment(RgbImage& img, Pixel a, Pixel b, Rgb color) {
  for (Pixel p : rasterize(a, b))
    if (p.x >= 0 && p.y >= 0 && p.x < img.width() && p.y < img.height()) img.set(p.x, p.y, color);
}

GradientField::GradientField(const Image& img) : width_(img.width()) {
  const std::size_t n = img.pixels().size();
  gx_.resize(n);
  gy_.resize(n);
  mag_.resize(n);
  const int w = img.width(), h = img.height();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double dx = (img.at(std::min(x + 1, w - 1), y) - img.at(std::max(x - 1, 0), y)) / 2.0;
      const double dy = (img.at(x, std::min(y + 1, h - 1)) - img.at(x, std::max(y - 1, 0))) / 2.0;
      gx_[index(x, y)] = dx;
      gy_[index(x, y)] = dy;
      mag_[index(x, y)] = std::hypot(dx, dy);
    }
}

}  // namespace ld
