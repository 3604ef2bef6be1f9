#include "sfqsim/time.hpp"

#include "sfqsim/diagnostics.hpp"

#include <cctype>

namespace sfqsim {

namespace {
__extension__ typedef __int128 Wide;
} // namespace

std::optional<std::int64_t> unit_scale_fs(std::string_view unit) {
  if (unit == "fs")
    return 1;
  if (unit == "ps")
    return 1000;
  if (unit == "ns")
    return 1000000;
  if (unit == "us")
    return 1000000000;
  return std::nullopt;
}

std::optional<std::int64_t> decimal_to_fs(std::string_view number,
                                          std::int64_t scale_fs) {
  if (number.empty() || scale_fs <= 0)
    return std::nullopt;

  bool negative = false;
  std::size_t i = 0;
  if (number[0] == '-' || number[0] == '+') {
    negative = number[0] == '-';
    ++i;
  }

  Wide mantissa = 0;
  int frac_digits = 0;
  bool seen_dot = false;
  bool seen_digit = false;
  constexpr Wide kLimit = static_cast<Wide>(1) << 100;

  for (; i < number.size(); ++i) {
    char c = number[i];
    if (c == '.') {
      if (seen_dot)
        return std::nullopt;
      seen_dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return std::nullopt;
    seen_digit = true;
    mantissa = mantissa * 10 + (c - '0');
    if (mantissa > kLimit)
      return std::nullopt;
    if (seen_dot && ++frac_digits > 30)
      return std::nullopt;
  }
  if (!seen_digit)
    return std::nullopt;

  Wide divisor = 1;
  for (int k = 0; k < frac_digits; ++k)
    divisor *= 10;

  Wide scaled = mantissa * scale_fs;
  if (scaled % divisor != 0)
    return std::nullopt;
  scaled /= divisor;
  if (scaled > std::numeric_limits<std::int64_t>::max())
    return std::nullopt;

  auto value = static_cast<std::int64_t>(scaled);
  return negative ? -value : value;
}

SimTime parse_time(std::string_view text, std::string_view default_unit) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);

  std::size_t split = text.size();
  while (split > 0 && std::isalpha(static_cast<unsigned char>(text[split - 1])))
    --split;

  std::string_view number = text.substr(0, split);
  std::string_view unit = text.substr(split);
  while (!number.empty() &&
         std::isspace(static_cast<unsigned char>(number.back())))
    number.remove_suffix(1);
  if (unit.empty())
    unit = default_unit;

  auto scale = unit_scale_fs(unit);
  if (!scale)
    throw Error("unknown time unit '" + std::string(unit) + "' in '" +
                std::string(text) + "'");
  auto fs = decimal_to_fs(number, *scale);
  if (!fs)
    throw Error("malformed or inexact time '" + std::string(text) +
                "' (must be a whole number of femtoseconds)");
  return SimTime::fs(*fs);
}

std::string format_decimal(std::int64_t fs, std::int64_t scale_fs) {
  std::string out;
  if (fs < 0) {
    out.push_back('-');
    fs = -fs;
  }
  out += std::to_string(fs / scale_fs);
  std::int64_t rem = fs % scale_fs;
  if (rem == 0)
    return out;

  std::string frac;
  for (std::int64_t s = scale_fs / 10; s > 0; s /= 10) {
    frac.push_back(static_cast<char>('0' + rem / s));
    rem %= s;
  }
  while (!frac.empty() && frac.back() == '0')
    frac.pop_back();
  return out + "." + frac;
}

std::string format_time(SimTime t) {
  std::int64_t v = t.count();
  if (v == 0)
    return "0fs";
  std::int64_t mag = v < 0 ? -v : v;
  if (mag % 1000 != 0 && mag < 1000)
    return std::to_string(v) + "fs";
  if (mag >= 1000000 && mag % 1000 == 0)
    return format_decimal(v, 1000000) + "ns";
  return format_decimal(v, 1000) + "ps";
}

} // namespace sfqsim
