#include "textanon/textutil.hpp"

namespace textanon {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

// Length in bytes of the UTF-8 sequence starting at s[i]; malformed lead or
// truncated continuation bytes fall back to 1.
std::size_t unit_bytes(std::string_view s, std::size_t i) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  std::size_t n = 1;
  if ((c & 0x80u) == 0x00u)
    n = 1;
  else if ((c & 0xE0u) == 0xC0u)
    n = 2;
  else if ((c & 0xF0u) == 0xE0u)
    n = 3;
  else if ((c & 0xF8u) == 0xF0u)
    n = 4;
  else
    return 1;
  if (i + n > s.size()) return 1;
  for (std::size_t k = 1; k < n; ++k) {
    if ((static_cast<unsigned char>(s[i + k]) & 0xC0u) != 0x80u) return 1;
  }
  return n;
}

}  // namespace

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  while (b < s.size() && is_space(s[b])) ++b;
  std::size_t e = s.size();
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string upper_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

bool is_ascii_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
         (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
}

std::size_t utf8_length(std::string_view s) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.size(); i += unit_bytes(s, i)) ++count;
  return count;
}

std::vector<std::string_view> utf8_units(std::string_view s) {
  std::vector<std::string_view> units;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t n = unit_bytes(s, i);
    units.push_back(s.substr(i, n));
    i += n;
  }
  return units;
}

std::string utf8_prefix(std::string_view s, std::size_t n) {
  std::size_t i = 0;
  for (std::size_t count = 0; i < s.size() && count < n; ++count)
    i += unit_bytes(s, i);
  return std::string(s.substr(0, i));
}

std::string utf8_suffix(std::string_view s, std::size_t n) {
  std::size_t total = utf8_length(s);
  if (n >= total) return std::string(s);
  std::size_t skip = total - n;
  std::size_t i = 0;
  for (std::size_t count = 0; count < skip; ++count) i += unit_bytes(s, i);
  return std::string(s.substr(i));
}

std::string repeat_unit(std::string_view unit, std::size_t n) {
  std::string out;
  out.reserve(unit.size() * n);
  for (std::size_t i = 0; i < n; ++i) out.append(unit);
  return out;
}

}  // namespace textanon
