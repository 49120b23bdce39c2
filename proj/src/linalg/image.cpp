#include "nfb/linalg/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "nfb/errors.hpp"

namespace nfb {
namespace {

// Half-sample symmetric extension: ... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
  const auto period = static_cast<std::ptrdiff_t>(2 * n);
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<std::ptrdiff_t>(n)) m = period - 1 - m;
  return static_cast<std::size_t>(m);
}

void check_kernel(const DenseMatrix& k) {
  if (k.rows() != k.cols() || k.rows() % 2 == 0) {
    throw std::invalid_argument("blur kernel must be square with odd side");
  }
}

void check_haar_shape(const GrayImage& img, int level) {
  if (level < 1) throw std::invalid_argument("haar level must be positive");
  const std::size_t block = std::size_t{1} << level;
  if (img.width() == 0 || img.height() == 0 || img.width() % block != 0 ||
      img.height() % block != 0) {
    throw DimensionError("haar: image " + std::to_string(img.width()) + "x" +
                         std::to_string(img.height()) + " not divisible by " +
                         std::to_string(block));
  }
}

// One analysis step on the top-left w x h block, rows then columns.
void haar_step(GrayImage& img, std::size_t w, std::size_t h) {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<double> buf(std::max(w, h));
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w / 2; ++c) {
      const double a = img(r, 2 * c);
      const double b = img(r, 2 * c + 1);
      buf[c] = (a + b) * s;
      buf[w / 2 + c] = (a - b) * s;
    }
    for (std::size_t c = 0; c < w; ++c) img(r, c) = buf[c];
  }
  for (std::size_t c = 0; c < w; ++c) {
    for (std::size_t r = 0; r < h / 2; ++r) {
      const double a = img(2 * r, c);
      const double b = img(2 * r + 1, c);
      buf[r] = (a + b) * s;
      buf[h / 2 + r] = (a - b) * s;
    }
    for (std::size_t r = 0; r < h; ++r) img(r, c) = buf[r];
  }
}

void haar_step_inverse(GrayImage& img, std::size_t w, std::size_t h) {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<double> buf(std::max(w, h));
  for (std::size_t c = 0; c < w; ++c) {
    for (std::size_t r = 0; r < h / 2; ++r) {
      const double a = img(r, c);
      const double d = img(h / 2 + r, c);
      buf[2 * r] = (a + d) * s;
      buf[2 * r + 1] = (a - d) * s;
    }
    for (std::size_t r = 0; r < h; ++r) img(r, c) = buf[r];
  }
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w / 2; ++c) {
      const double a = img(r, c);
      const double d = img(r, w / 2 + c);
      buf[2 * c] = (a + d) * s;
      buf[2 * c + 1] = (a - d) * s;
    }
    for (std::size_t c = 0; c < w; ++c) img(r, c) = buf[c];
  }
}

std::string next_token(std::istream& in) {
  std::string tok;
  while (in >> tok) {
    if (tok[0] != '#') return tok;
    std::string rest;
    std::getline(in, rest);
  }
  throw IoError("pgm: truncated header");
}

}  // namespace

GrayImage::GrayImage(std::size_t width, std::size_t height, double value)
    : width_(width), height_(height), pixels_(width * height, value) {
  if (width == 0 || height == 0) throw DimensionError("GrayImage: dimensions must be positive");
}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width == 0 || height == 0) throw DimensionError("GrayImage: dimensions must be positive");
  require_same_size(width * height, pixels_.size(), "GrayImage");
}

GrayImage GrayImage::from_vector(std::size_t width, std::size_t height, const DenseVector& v) {
  return GrayImage(width, height, v.values());
}

GradientField discrete_gradient(const GrayImage& img) {
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  GradientField g{GrayImage(w, h), GrayImage(w, h)};
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (c + 1 < w) g.horizontal(r, c) = img(r, c + 1) - img(r, c);
      if (r + 1 < h) g.vertical(r, c) = img(r + 1, c) - img(r, c);
    }
  }
  return g;
}

GrayImage discrete_divergence(const GradientField& field) {
  if (!field.horizontal.same_shape(field.vertical)) {
    throw DimensionError("discrete_divergence: field shapes differ");
  }
  const std::size_t w = field.horizontal.width();
  const std::size_t h = field.horizontal.height();
  GrayImage out(w, h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      double v = 0.0;
      if (c + 1 < w) v += field.horizontal(r, c);
      if (c > 0) v -= field.horizontal(r, c - 1);
      if (r + 1 < h) v += field.vertical(r, c);
      if (r > 0) v -= field.vertical(r - 1, c);
      out(r, c) = v;
    }
  }
  return out;
}

GrayImage haar_transform(const GrayImage& img, int level) {
  check_haar_shape(img, level);
  GrayImage out = img;
  std::size_t w = img.width();
  std::size_t h = img.height();
  for (int l = 0; l < level; ++l, w /= 2, h /= 2) haar_step(out, w, h);
  return out;
}

GrayImage haar_inverse(const GrayImage& coeffs, int level) {
  check_haar_shape(coeffs, level);
  GrayImage out = coeffs;
  for (int l = level - 1; l >= 0; --l) {
    haar_step_inverse(out, coeffs.width() >> l, coeffs.height() >> l);
  }
  return out;
}

GrayImage blur_apply(const GrayImage& img, const DenseMatrix& kernel) {
  check_kernel(kernel);
  const auto half = static_cast<std::ptrdiff_t>(kernel.rows() / 2);
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  GrayImage out(w, h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t i = -half; i <= half; ++i) {
        const std::size_t rr = reflect(static_cast<std::ptrdiff_t>(r) + i, h);
        for (std::ptrdiff_t j = -half; j <= half; ++j) {
          const std::size_t cc = reflect(static_cast<std::ptrdiff_t>(c) + j, w);
          acc += kernel(static_cast<std::size_t>(i + half), static_cast<std::size_t>(j + half)) *
                 img(rr, cc);
        }
      }
      out(r, c) = acc;
    }
  }
  return out;
}

GrayImage blur_adjoint(const GrayImage& img, const DenseMatrix& kernel) {
  check_kernel(kernel);
  const auto half = static_cast<std::ptrdiff_t>(kernel.rows() / 2);
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  GrayImage out(w, h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double v = img(r, c);
      for (std::ptrdiff_t i = -half; i <= half; ++i) {
        const std::size_t rr = reflect(static_cast<std::ptrdiff_t>(r) + i, h);
        for (std::ptrdiff_t j = -half; j <= half; ++j) {
          const std::size_t cc = reflect(static_cast<std::ptrdiff_t>(c) + j, w);
          out(rr, cc) +=
              kernel(static_cast<std::size_t>(i + half), static_cast<std::size_t>(j + half)) * v;
        }
      }
    }
  }
  return out;
}

DenseMatrix averaging_kernel(std::size_t side) {
  if (side == 0 || side % 2 == 0) throw std::invalid_argument("averaging_kernel: odd side required");
  return DenseMatrix(side, side, 1.0 / static_cast<double>(side * side));
}

DenseMatrix gaussian_kernel(std::size_t side, double sigma) {
  if (side == 0 || side % 2 == 0) throw std::invalid_argument("gaussian_kernel: odd side required");
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_kernel: sigma must be positive");
  DenseMatrix k(side, side);
  const double half = static_cast<double>(side / 2);
  double total = 0.0;
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) {
      const double x = static_cast<double>(j) - half;
      const double y = static_cast<double>(i) - half;
      k(i, j) = std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
      total += k(i, j);
    }
  }
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) k(i, j) /= total;
  }
  return k;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("pgm: cannot open " + path.string());
  const std::string magic = next_token(in);
  if (magic != "P2" && magic != "P5") throw IoError("pgm: unsupported magic " + magic);
  std::size_t width = 0, height = 0;
  unsigned long maxval = 0;
  try {
    width = std::stoul(next_token(in));
    height = std::stoul(next_token(in));
    maxval = std::stoul(next_token(in));
  } catch (const std::logic_error&) {
    throw IoError("pgm: malformed header in " + path.string());
  }
  if (width == 0 || height == 0 || maxval == 0 || maxval > 65535) {
    throw IoError("pgm: invalid header values in " + path.string());
  }
  std::vector<double> px(width * height);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (magic == "P2") {
    for (double& v : px) {
      unsigned long raw = 0;
      if (!(in >> raw)) throw IoError("pgm: truncated data in " + path.string());
      v = static_cast<double>(raw) * scale;
    }
  } else {
    in.get();  // single whitespace byte after maxval
    const bool wide = maxval > 255;
    for (double& v : px) {
      unsigned raw = static_cast<unsigned char>(in.get());
      if (wide) raw = (raw << 8) | static_cast<unsigned char>(in.get());
      if (!in) throw IoError("pgm: truncated data in " + path.string());
      v = static_cast<double>(raw) * scale;
    }
  }
  return GrayImage(width, height, std::move(px));
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("pgm: cannot write " + path.string());
  constexpr unsigned kMax = 65535;
  out << (binary ? "P5" : "P2") << '\n' << img.width() << ' ' << img.height() << '\n'
      << kMax << '\n';
  std::size_t col = 0;
  for (double v : img.pixels()) {
    const double clamped = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
    const auto q = static_cast<unsigned>(std::lround(clamped * kMax));
    if (binary) {
      out.put(static_cast<char>(q >> 8));
      out.put(static_cast<char>(q & 0xff));
    } else {
      out << q << (++col % img.width() == 0 ? '\n' : ' ');
    }
  }
  if (!out) throw IoError("pgm: write failed for " + path.string());
}

}  // namespace nfb
