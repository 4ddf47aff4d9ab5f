#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "placer/fixed.hpp"

using placer::Fixed;

TEST_CASE("construction and conversion") {
  CHECK(Fixed::from_int(7).units() == 7'000'000);
  CHECK(Fixed::from_double(0.4).units() == 400'000);
  CHECK(Fixed::from_double(-0.0062).units() == -6'200);
  CHECK(Fixed::from_double(2.5).to_double() == doctest::Approx(2.5));
  CHECK(Fixed{}.units() == 0);
}

TEST_CASE("formatting keeps six fractional digits") {
  CHECK(Fixed::from_int(7).to_string() == "7.000000");
  CHECK(Fixed::from_double(0.0062).to_string() == "0.006200");
  CHECK(Fixed::from_units(-540).to_string() == "-0.000540");
  CHECK(Fixed::from_units(1).to_string() == "0.000001");
}

TEST_CASE("parse accepts plain decimals and rejects junk") {
  CHECK(Fixed::parse("12.5") == Fixed::from_double(12.5));
  CHECK(Fixed::parse("-0.25") == Fixed::from_double(-0.25));
  CHECK(Fixed::parse("60000") == Fixed::from_int(60000));
  CHECK_THROWS_AS(Fixed::parse("12x"), std::invalid_argument);
  CHECK_THROWS_AS(Fixed::parse(""), std::invalid_argument);
}

TEST_CASE("sums are exact and order-independent") {
  // 0.1 + 0.2 style traps must not appear.
  Fixed a = Fixed::from_double(0.1);
  Fixed b = Fixed::from_double(0.2);
  CHECK((a + b) == Fixed::from_double(0.3));

  std::vector<Fixed> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(Fixed::from_units(123456 + i));
  Fixed fwd, rev;
  for (const auto& x : xs) fwd += x;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) rev += *it;
  CHECK(fwd == rev);
}

TEST_CASE("multiplication rounds half away from zero") {
  // 0.5 Mbps * 3.5 = 1.75 exactly representable; check exactness first.
  CHECK((Fixed::from_double(0.5) * Fixed::from_double(3.5)) == Fixed::from_double(1.75));
  // 0.0000015 * 0.5 = 7.5e-7 -> rounds to 1e-6 (away from zero).
  CHECK((Fixed::from_units(15) * Fixed::from_units(500'000)).units() == 8);
  CHECK((Fixed::from_units(-15) * Fixed::from_units(500'000)).units() == -8);
}

TEST_CASE("scalar scaling and comparison") {
  CHECK(Fixed::from_double(0.4).times(8) == Fixed::from_double(3.2));
  CHECK(Fixed::from_int(2) < Fixed::from_int(3));
  CHECK(Fixed::from_units(-1) < Fixed{});
}

TEST_CASE("div_round behaves on negatives and halves") {
  CHECK(Fixed::div_round(5, 2) == 3);
  CHECK(Fixed::div_round(-5, 2) == -3);
  CHECK(Fixed::div_round(4, 2) == 2);
  CHECK(Fixed::div_round(7, 3) == 2);
}
