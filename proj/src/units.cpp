#include "cvnet/units.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cvnet {

double db_to_ratio(double db) { return std::pow(10.0, db / 10.0); }

double ratio_to_db(double ratio) {
  if (!(ratio > 0.0)) {
    throw std::invalid_argument("ratio_to_db: ratio must be positive, got " + std::to_string(ratio));
  }
  return 10.0 * std::log10(ratio);
}

double gain_to_squeeze(double gain_linear) {
  if (!(gain_linear >= 1.0)) {
    throw std::invalid_argument("power gain must be >= 1, got " + std::to_string(gain_linear));
  }
  return std::acosh(std::sqrt(gain_linear));
}

double gain_db_to_squeeze(double gain_db) {
  if (!(gain_db >= 0.0)) {
    throw std::invalid_argument("gain in dB must be >= 0, got " + std::to_string(gain_db));
  }
  return gain_to_squeeze(db_to_ratio(gain_db));
}

double squeeze_to_gain_db(double r) {
  const double c = std::cosh(r);
  return ratio_to_db(c * c);
}

double attenuation_db_to_transmission(double loss_db) {
  if (!(loss_db >= 0.0)) {
    throw std::invalid_argument("attenuation in dB must be >= 0, got " + std::to_string(loss_db));
  }
  return db_to_ratio(-loss_db);
}

double deg_to_rad(double deg) { return deg * kPi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace cvnet
