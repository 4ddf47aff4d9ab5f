#pragma once

#include <cmath>
#include <cstdint>
#include <compare>
#include <string>

namespace placer {

// Fixed-point decimal with six fractional digits, stored as a count of
// 1e-6 units. Used for costs, latencies (ms) and bandwidths (Mbps) so
// that sums are exact and order-independent.
class Fixed {
public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr Fixed() = default;
  static constexpr Fixed from_units(std::int64_t units) {
    Fixed f;
    f.units_ = units;
    return f;
  }
  static Fixed from_double(double v) { return from_units(std::llround(v * kScale)); }
  static constexpr Fixed from_int(std::int64_t v) { return from_units(v * kScale); }

  constexpr std::int64_t units() const { return units_; }
  double to_double() const { return static_cast<double>(units_) / kScale; }

  // Always six fractional digits, e.g. "7.000000", "-0.000540".
  std::string to_string() const;
  // Parses a plain decimal literal; throws std::invalid_argument on junk.
  static Fixed parse(const std::string& s);

  constexpr Fixed operator+(Fixed o) const { return from_units(units_ + o.units_); }
  constexpr Fixed operator-(Fixed o) const { return from_units(units_ - o.units_); }
  constexpr Fixed operator-() const { return from_units(-units_); }
  Fixed& operator+=(Fixed o) {
    units_ += o.units_;
    return *this;
  }
  Fixed& operator-=(Fixed o) {
    units_ -= o.units_;
    return *this;
  }
  constexpr Fixed times(std::int64_t k) const { return from_units(units_ * k); }

  // Exact product in 1e-12 space, rounded half away from zero back to 1e-6.
  Fixed operator*(Fixed o) const {
    __int128 p = static_cast<__int128>(units_) * o.units_;
    return from_units(div_round(p, kScale));
  }

  auto operator<=>(const Fixed&) const = default;

  // Rounds n/d half away from zero in 128-bit space.
  static std::int64_t div_round(__int128 n, std::int64_t d) {
    __int128 half = d / 2;
    __int128 q = n >= 0 ? (n + half) / d : (n - half) / d;
    return static_cast<std::int64_t>(q);
  }

private:
  std::int64_t units_ = 0;
};

using Cost = Fixed;

}  // namespace placer
