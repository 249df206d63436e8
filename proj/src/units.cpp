#include "exaperf/units.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "exaperf/errors.hpp"

namespace exaperf {

namespace {

bool prefix_factor(char c, double& factor) {
  switch (c) {
    case 'f': factor = 1e-15; return true;
    case 'p': factor = 1e-12; return true;
    case 'n': factor = 1e-9; return true;
    case 'u': factor = 1e-6; return true;
    case 'm': factor = 1e-3; return true;
    case 'k': factor = 1e3; return true;
    case 'M': factor = 1e6; return true;
    case 'G': factor = 1e9; return true;
    case 'T': factor = 1e12; return true;
    case 'P': factor = 1e15; return true;
    case 'E': factor = 1e18; return true;
    default: return false;
  }
}

// Base unit spellings, longest first so "FLOP/s" wins over "F".
struct BaseUnit {
  const char* spelling;
  UnitDim dim;
};
constexpr BaseUnit kBaseUnits[] = {
    {"FLOPS", UnitDim::FlopRate}, {"FLOP/s", UnitDim::FlopRate},
    {"Flops", UnitDim::FlopRate}, {"F/s", UnitDim::FlopRate},
    {"B/s", UnitDim::ByteRate},   {"bit", UnitDim::Bits},
    {"B", UnitDim::Bytes},        {"s", UnitDim::Seconds},
    {"W", UnitDim::Watts},        {"J", UnitDim::Joules},
};

}  // namespace

Quantity parse_quantity(const std::string& text, const std::string& where) {
  const char* p = text.c_str();
  char* end = nullptr;
  double v = std::strtod(p, &end);
  if (end == p) throw unit_error(where, "expected a number in '" + text + "'");
  while (*end && std::isspace(static_cast<unsigned char>(*end))) ++end;
  std::string unit(end);
  if (unit.empty()) return {v, UnitDim::Scalar};

  // Handle "µ" (multi-byte) by mapping it to 'u'.
  if (unit.size() >= 2 && static_cast<unsigned char>(unit[0]) == 0xC2 &&
      static_cast<unsigned char>(unit[1]) == 0xB5) {
    unit = "u" + unit.substr(2);
  }

  for (const auto& bu : kBaseUnits) {
    const std::string base = bu.spelling;
    if (unit == base) return {v, bu.dim};
    if (unit.size() == base.size() + 1 && unit.compare(1, base.size(), base) == 0) {
      double f;
      if (prefix_factor(unit[0], f)) return {v * f, bu.dim};
    }
  }
  throw unit_error(where, "unrecognized unit '" + unit + "' in '" + text + "'");
}

double round_sig(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*e", digits - 1, x);
  return std::strtod(buf, nullptr);
}

std::string format_si(double value, const std::string& unit, int digits) {
  struct Step { double factor; const char* prefix; };
  static constexpr Step steps[] = {
      {1e18, "E"}, {1e15, "P"}, {1e12, "T"}, {1e9, "G"}, {1e6, "M"}, {1e3, "k"},
      {1.0, ""},   {1e-3, "m"}, {1e-6, "u"}, {1e-9, "n"}, {1e-12, "p"}, {1e-15, "f"},
  };
  double mag = std::fabs(value);
  const Step* chosen = &steps[6];
  if (mag > 0 && std::isfinite(mag)) {
    for (const auto& s : steps) {
      if (mag >= s.factor) { chosen = &s; break; }
    }
    if (mag < 1e-15) chosen = &steps[11];
  }
  double scaled = round_sig(value / chosen->factor, digits);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, scaled);
  std::string out(buf);
  if (!unit.empty()) out += std::string(" ") + chosen->prefix + unit;
  else if (chosen->prefix[0]) out += std::string(" ") + chosen->prefix;
  return out;
}

std::string format_g9(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::string format_exact(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  // Prefer the shorter form when it round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char probe[64];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, value);
    if (std::strtod(probe, nullptr) == value) return probe;
  }
  return buf;
}

}  // namespace exaperf
