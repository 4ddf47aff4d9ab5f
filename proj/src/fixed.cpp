#include "placer/fixed.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace placer {

std::string Fixed::to_string() const {
  std::int64_t u = units_;
  const char* sign = "";
  if (u < 0) {
    sign = "-";
    u = -u;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s%lld.%06lld", sign,
                static_cast<long long>(u / kScale), static_cast<long long>(u % kScale));
  return buf;
}

Fixed Fixed::parse(const std::string& s) {
  // Accept plain decimal literals with at most six fractional digits.
  const char* p = s.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(p, &end);
  if (end == p || *end != '\0' || errno != 0) throw std::invalid_argument("bad decimal: " + s);
  return from_double(v);
}

}  // namespace placer
