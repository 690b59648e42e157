#include "tvvecm/calendar.hpp"

#include <cctype>
#include <charconv>

#include "tvvecm/errors.hpp"

namespace tvvecm {

namespace {

bool all_digits(const std::string& s, std::size_t begin, std::size_t end) {
  if (begin >= end || end > s.size()) return false;
  for (std::size_t i = begin; i < end; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

YearMonth parse_year_month(const std::string& text) {
  // expected shape: YYYY-MM
  const auto dash = text.find('-');
  if (dash != 4 || text.size() != 7 || !all_digits(text, 0, 4) || !all_digits(text, 5, 7)) {
    throw ParseError("not a YYYY-MM month: \"" + text + "\"");
  }
  int year = 0;
  int month = 0;
  std::from_chars(text.data(), text.data() + dash, year);
  std::from_chars(text.data() + dash + 1, text.data() + text.size(), month);
  if (month < 1 || month > 12) {
    throw ParseError("month out of range in \"" + text + "\"");
  }
  return YearMonth{year, month};
}

std::string format_year_month(const YearMonth& ym) {
  std::string out = std::to_string(ym.year);
  out += '-';
  if (ym.month < 10) out += '0';
  out += std::to_string(ym.month);
  return out;
}

}  // namespace tvvecm
