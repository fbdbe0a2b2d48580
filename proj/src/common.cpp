#include "tsd/common.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace tsd {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = begin + s.size();
  // from_chars rejects a leading '+', which shows up in hand-edited files.
  if (*begin == '+') ++begin;
  auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    // Fall back for "inf"/"nan" spellings from_chars already handles; any
    // residue means garbage.
    return false;
  }
  return true;
}

}  // namespace tsd
