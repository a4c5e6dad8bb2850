#include "polymer/random.hpp"

#include <string>

#include "polymer/errors.hpp"

namespace polymer {

LogGammaSampler::LogGammaSampler(double shape) : shape_(shape) {
  if (!(shape > 0) || !std::isfinite(shape)) {
    throw DomainError("gamma shape must be positive, got " + std::to_string(shape));
  }
  boosted_ = shape < 1.0;
  const double effective = boosted_ ? shape + 1.0 : shape;
  d_ = effective - 1.0 / 3.0;
  c_ = 1.0 / std::sqrt(9.0 * d_);
  log_d_ = std::log(d_);
  inv_shape_ = 1.0 / shape;
}

}  // namespace polymer
