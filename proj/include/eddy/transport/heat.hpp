#pragma once

#include <cmath>
#include <stdexcept>

#include "eddy/fourier/spectral_field.hpp"

namespace eddy {

// Solution of d_t xi = kappa Delta xi: e_l decays like exp(-kappa 4 pi^2 |l|^2 t).
inline SpectralField heat_reference(const SpectralField& xi0, double kappa, double t) {
  if (!(kappa >= 0.0)) throw std::invalid_argument("heat_reference: kappa must be >= 0");
  if (!(t >= 0.0)) throw std::invalid_argument("heat_reference: t must be >= 0");
  SpectralField out = xi0;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] *= std::exp(-kappa * kTwoPi * kTwoPi * xi0.basis()[i].norm_sq() * t);
  return out;
}

}  // namespace eddy
