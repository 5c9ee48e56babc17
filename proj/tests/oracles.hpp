#pragma once

// Slow reference implementations used as test oracles.

#include <cmath>
#include <numbers>
#include <vector>

#include "supcast/transform.hpp"
#include "supcast/video_io.hpp"

namespace oracle {

inline double dct_basis(std::size_t k, std::size_t n, std::size_t len) {
  const double alpha = k == 0 ? std::sqrt(1.0 / len) : std::sqrt(2.0 / len);
  return alpha * std::cos(std::numbers::pi * (2.0 * n + 1.0) * k / (2.0 * len));
}

// Direct triple sum of the orthonormal DCT-II definition.
inline std::vector<double> naive_dct3(const supcast::Gop& gop) {
  const std::size_t w = gop.width(), h = gop.height(), t = gop.size();
  std::vector<double> out(w * h * t, 0.0);
  for (std::size_t kt = 0; kt < t; ++kt)
    for (std::size_t kr = 0; kr < h; ++kr)
      for (std::size_t kc = 0; kc < w; ++kc) {
        double acc = 0.0;
        for (std::size_t f = 0; f < t; ++f)
          for (std::size_t r = 0; r < h; ++r)
            for (std::size_t c = 0; c < w; ++c)
              acc += gop.frames[f].at(r, c) * dct_basis(kt, f, t) * dct_basis(kr, r, h) *
                     dct_basis(kc, c, w);
        out[(kt * h + kr) * w + kc] = acc;
      }
  return out;
}

}  // namespace oracle
