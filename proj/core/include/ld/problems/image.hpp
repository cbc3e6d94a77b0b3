#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace ld {

struct Pixel {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(Pixel, Pixel) = default;
  friend constexpr auto operator<=>(Pixel, Pixel) = default;
};

/// 8-bit grayscale image, row-major.
class Image {
 public:
  Image() = default;
  Image(int width, int height, std::uint8_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  bool contains(Pixel p) const { return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_; }
  std::uint8_t at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  void set(int x, int y, std::uint8_t v) { pixels_[static_cast<std::size_t>(y) * width_ + x] = v; }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend constexpr bool operator==(Rgb, Rgb) = default;
};

class RgbImage {
 public:
  RgbImage() = default;
  explicit RgbImage(const Image& gray);

  int width() const { return width_; }
  int height() const { return height_; }
  Rgb at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  void set(int x, int y, Rgb v) { pixels_[static_cast<std::size_t>(y) * width_ + x] = v; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

/// Binary PGM (P5, maxval 255). Throws InputError on malformed data.
Image read_pgm(std::istream& is);
void write_pgm(std::ostream& os, const Image& img);
/// Binary PPM (P6, maxval 255).
void write_ppm(std::ostream& os, const RgbImage& img);

/// Pixels of the segment from `a` to `b` by the integer Bresenham walk. The
/// walk always runs from the lexicographically smaller endpoint, so both
/// orientations give the same sequence.
std::vector<Pixel> rasterize(Pixel a, Pixel b);

/// Draws the segment in `color`, clipped to the image.
void draw_segment(RgbImage& img, Pixel a, Pixel b, Rgb color);

/// Central-difference image gradient with clamped borders.
class GradientField {
 public:
  explicit GradientField(const Image& img);

  double gx(int x, int y) const { return gx_[index(x, y)]; }
  double gy(int x, int y) const { return gy_[index(x, y)]; }
  double magnitude(int x, int y) const { return mag_[index(x, y)]; }

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  std::vector<double> gx_, gy_, mag_;
};

}  // namespace ld
