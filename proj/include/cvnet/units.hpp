#pragma once

namespace cvnet {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J / K

// Power decibels throughout: ratio = 10^(dB/10), also for squeezing levels.
double db_to_ratio(double db);
double ratio_to_db(double ratio);

// Amplifier power gain G = cosh^2(r).
double gain_db_to_squeeze(double gain_db);
double squeeze_to_gain_db(double r);
double gain_to_squeeze(double gain_linear);

// Attenuation given as a positive number of dB, e.g. 2.1 dB -> 0.616.
double attenuation_db_to_transmission(double loss_db);

double deg_to_rad(double deg);
double rad_to_deg(double rad);

enum class DbKind { kPowerGain, kSqueezingLevel, kLoss };

struct DbValue {
  double value_db = 0.0;
  DbKind kind = DbKind::kPowerGain;

  double ratio() const { return db_to_ratio(value_db); }
  static DbValue from_ratio(double ratio, DbKind kind) { return {ratio_to_db(ratio), kind}; }
};

}  // namespace cvnet
