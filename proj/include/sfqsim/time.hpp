#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace sfqsim {

/// Simulation time as a signed 64-bit count of femtoseconds.
///
/// Every externally supplied time (stimulus, SDF, cell library) is converted
/// into this representation exactly; a conversion that would need a fraction
/// of a femtosecond is rejected rather than rounded.
class SimTime {
public:
  constexpr SimTime() = default;

  static constexpr SimTime fs(std::int64_t v) {
    SimTime t;
    t.fs_ = v;
    return t;
  }
  static constexpr SimTime ps(std::int64_t v) { return fs(v * 1000); }
  static constexpr SimTime ns(std::int64_t v) { return fs(v * 1000000); }
  static constexpr SimTime max() {
    return fs(std::numeric_limits<std::int64_t>::max());
  }

  constexpr std::int64_t count() const { return fs_; }

  constexpr SimTime operator+(SimTime o) const { return fs(fs_ + o.fs_); }
  constexpr SimTime operator-(SimTime o) const { return fs(fs_ - o.fs_); }
  constexpr SimTime operator-() const { return fs(-fs_); }
  constexpr SimTime &operator+=(SimTime o) {
    fs_ += o.fs_;
    return *this;
  }
  constexpr SimTime &operator-=(SimTime o) {
    fs_ -= o.fs_;
    return *this;
  }
  constexpr SimTime operator*(std::int64_t k) const { return fs(fs_ * k); }

  constexpr auto operator<=>(const SimTime &) const = default;

private:
  std::int64_t fs_ = 0;
};

/// Femtoseconds per unit for "fs", "ps", "ns" and "us". Returns nullopt for
/// anything else.
std::optional<std::int64_t> unit_scale_fs(std::string_view unit);

/// Converts a non-negative-or-negative decimal literal ("12", "0.5", "-3.25")
/// scaled by `scale_fs` into femtoseconds. Returns nullopt when the text is
/// not a decimal number, when the result is not an integral number of
/// femtoseconds, or on overflow.
std::optional<std::int64_t> decimal_to_fs(std::string_view number,
                                          std::int64_t scale_fs);

/// Parses a time with an optional unit suffix: "100ps", "2.5 ns", "40fs".
/// A bare number is interpreted in `default_unit`. Throws sfqsim::Error on
/// malformed or inexact input.
SimTime parse_time(std::string_view text, std::string_view default_unit = "fs");

/// Renders `fs / scale_fs` as a minimal exact decimal ("8", "0.5", "12.25").
std::string format_decimal(std::int64_t fs, std::int64_t scale_fs);

/// Human-readable rendering in the largest unit that keeps the value exact
/// up to three decimals, e.g. "8ps", "2.5ps", "17fs".
std::string format_time(SimTime t);

} // namespace sfqsim
