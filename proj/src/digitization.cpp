#include "cvqkd/digitization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvqkd/error.hpp"
#include "cvqkd/special_functions.hpp"

namespace cvqkd {

void DigitizationSpec::validate() const {
  if (bits < 2 || bits > 16) {
    throw ConfigError("digitization.bits must lie in [2, 16], got " + std::to_string(bits));
  }
  if (!(range_sigmas > 0.0) || !std::isfinite(range_sigmas)) {
    throw ConfigError("digitization.range_sigmas must be positive");
  }
}

Quantizer::Quantizer(const DigitizationSpec& spec, double sigma)
    : levels_(spec.levels()),
      step_(spec.range_sigmas * sigma / spec.levels()),
      half_levels_(0.5 * spec.levels()) {
  spec.validate();
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("quantizer scale must be positive");
  }
}

std::uint32_t Quantizer::bin(double value) const {
  const double k = std::floor(value / step_ + half_levels_);
  if (!(k >= 0.0)) return 0;
  if (k >= levels_ - 1.0) return levels_ - 1;
  return static_cast<std::uint32_t>(k);
}

double Quantizer::center(std::uint32_t bin) const {
  return (static_cast<double>(bin) - half_levels_ + 0.5) * step_;
}

double quantized_unit_variance(const DigitizationSpec& spec) {
  const Quantizer q(spec, 1.0);
  double var = 0.0;
  for (std::uint32_t k = 0; k < q.levels(); ++k) {
    const double lo = (static_cast<double>(k) - 0.5 * q.levels()) * q.step();
    const double hi = lo + q.step();
    const double mass_lo = k == 0 ? 0.0 : normal_cdf(lo);
    const double mass_hi = k + 1 == q.levels() ? 1.0 : normal_cdf(hi);
    const double c = q.center(k);
    var += (mass_hi - mass_lo) * c * c;
  }
  return var;
}

}  // namespace cvqkd
