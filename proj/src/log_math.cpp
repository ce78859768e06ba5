#include "mdw/log_math.hpp"

#include <algorithm>
#include <string>

namespace mdw {

std::uint64_t isqrt(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
  // the double estimate may be off by one in either direction
  while (r > 0 && r > x / r) --r;
  while (r + 1 <= x / (r + 1)) ++r;
  return r;
}

int128 isqrt(int128 x) {
  if (x <= 0) return 0;
  auto r = static_cast<int128>(std::sqrt(static_cast<long double>(x)));
  while (r > 0 && r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

std::string to_string(int128 x) {
  if (x == 0) return "0";
  const bool neg = x < 0;
  std::string s;
  while (x != 0) {
    int digit = static_cast<int>(x % 10);
    s.push_back(static_cast<char>('0' + (neg ? -digit : digit)));
    x /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

}  // namespace mdw
