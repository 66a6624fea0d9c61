#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "spacobi/errors.hpp"
#include "spacobi/matrix.hpp"

namespace spacobi {

// Binary PGM (P5) rendering of a matrix, one pixel per entry, linear
// min-max grayscale. A constant matrix renders mid-gray (128).
inline std::string render_heatmap_bytes(const DenseMatrix& a) {
  if (!a.all_finite()) throw NonFiniteError("render_heatmap: non-finite entry");
  double lo = a.size() ? a.data()[0] : 0.0;
  double hi = lo;
  for (double v : a.data()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  std::string out = "P5\n" + std::to_string(a.cols()) + " " +
                    std::to_string(a.rows()) + "\n255\n";
  out.reserve(out.size() + a.size());
  const double span = hi - lo;
  for (double v : a.data()) {
    long pix = 128;
    if (span > 0.0) pix = std::lround((v - lo) / span * 255.0);
    pix = std::max(0L, std::min(255L, pix));
    out.push_back(char(static_cast<unsigned char>(pix)));
  }
  return out;
}

inline void render_heatmap(const DenseMatrix& a,
                           const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  const std::string bytes = render_heatmap_bytes(a);
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace spacobi
