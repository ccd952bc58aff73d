/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "leaksim/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace leaksim {

std::string format_double(double v) {
  if (v == 0.0)
    v = 0.0; // fold -0
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{})
    return "nan";
  return std::string(buf.data(), end);
}

bool parse_double(std::string_view text, double &out) {
  if (!text.empty() && text.front() == '+')
    text.remove_prefix(1);
  if (text.empty())
    return false;
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(v))
    return false;
  out = v;
  return true;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf.data(), 16);
}

} // namespace leaksim
