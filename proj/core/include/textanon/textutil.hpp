#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace textanon {

std::string_view trim(std::string_view s);
std::string lower_ascii(std::string_view s);
std::string upper_ascii(std::string_view s);
bool is_ascii_punct(char c);

// UTF-8 helpers operate on codepoint units. A malformed byte is treated as a
// one-byte unit instead of raising, so arbitrary input stays processable.
std::size_t utf8_length(std::string_view s);
std::vector<std::string_view> utf8_units(std::string_view s);
std::string utf8_prefix(std::string_view s, std::size_t n);
std::string utf8_suffix(std::string_view s, std::size_t n);

std::string repeat_unit(std::string_view unit, std::size_t n);

}  // namespace textanon
