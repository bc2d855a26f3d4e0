#pragma once

#include "json.hpp"

#include "zmw/shifts.hpp"

namespace zmw {

inline nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline nlohmann::json shifts_json(const ShiftSet& s) {
  auto out = nlohmann::json::array();
  for (const Complex z : s) out.push_back(complex_json(z));
  return out;
}

}  // namespace zmw
