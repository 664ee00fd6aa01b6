#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace opmax {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt pow2(unsigned e) {
  BigInt r = 1;
  return r << e;
}

// 2^-e as an exact rational.
inline Rat pow2_inv(unsigned e) { return Rat(1, pow2(e)); }

inline BigInt rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool rat_is_int(const Rat& r) { return rat_den(r) == 1; }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline Rat rat_floor(const Rat& r) {
  BigInt q = rat_num(r) / rat_den(r);
  if (r < 0 && q * rat_den(r) != rat_num(r)) q -= 1;
  return Rat(q);
}

inline Rat rat_ceil(const Rat& r) { return -rat_floor(-r); }

inline long long rat_to_ll(const Rat& r) {
  if (!rat_is_int(r)) throw std::runtime_error("expected integer value");
  return rat_num(r).convert_to<long long>();
}

// Parses a decimal literal ("12", "0.5", "3.") into an exact rational.
inline Rat rat_from_decimal(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rat(BigInt(s));
  std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
  BigInt num = ip.empty() ? BigInt(0) : BigInt(ip);
  BigInt den = 1;
  for (char c : fp) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  return Rat(num, den);
}

// Fixed-point style rendering without precision loss: integers as "v",
// other rationals as "p/q".
inline std::string rat_to_string(const Rat& r) {
  if (rat_is_int(r)) return rat_num(r).str();
  return rat_num(r).str() + "/" + rat_den(r).str();
}

// Decimal rendering for reports; exact when the denominator is a power of
// 2 or 10, otherwise falls back to p/q.
std::string rat_to_decimal(const Rat& r);

inline std::string rat_to_decimal_impl(const Rat& r) {
  BigInt den = rat_den(r);
  BigInt num = rat_num(r);
  int twos = 0, fives = 0;
  BigInt d = den;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return rat_to_string(r);
  int digits = twos > fives ? twos : fives;
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  BigInt scaled = num * scale / den;
  bool neg = scaled < 0;
  std::string body = (neg ? BigInt(-scaled) : scaled).str();
  if ((int)body.size() <= digits) body.insert(0, digits + 1 - body.size(), '0');
  if (digits > 0) body.insert(body.size() - digits, ".");
  return (neg ? "-" : "") + body;
}

inline std::string rat_to_decimal(const Rat& r) { return rat_to_decimal_impl(r); }

}  // namespace opmax
