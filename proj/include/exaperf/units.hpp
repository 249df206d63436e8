#pragma once

#include <string>

namespace exaperf {

// Dimension of a parsed quantity, reduced to the handful of unit
// families the config files use.
enum class UnitDim {
  Scalar,      // bare number
  Seconds,     // s
  Bytes,       // B
  FlopRate,    // F/s (also accepts FLOP/s, FLOPS)
  ByteRate,    // B/s
  Watts,       // W
  Joules,      // J
  Bits,        // bit
};

struct Quantity {
  double value = 0.0;  // in base SI units of the dimension
  UnitDim dim = UnitDim::Scalar;
};

// Parses "240 GB/s", "64 B", "2.717e-11", "212 pJ", ... into base SI.
// Decimal prefixes f p n u/µ m k M G T P E are understood. Throws
// ConfigError{Unit} on an unrecognized suffix; `where` names the config
// key for the message.
Quantity parse_quantity(const std::string& text, const std::string& where);

// Rounds to n significant decimal digits (used when comparing against
// published tables that print rounded values).
double round_sig(double x, int digits);

// "18.8 TF/s"-style human formatting with a decimal prefix and the given
// number of significant digits.
std::string format_si(double value, const std::string& unit, int digits);

// printf("%.9g") — the fixed CSV number format.
std::string format_g9(double value);
// Shortest exact round-trip formatting for machine-spec serialization.
std::string format_exact(double value);

}  // namespace exaperf
