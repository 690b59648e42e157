#pragma once

#include <compare>
#include <string>

namespace tvvecm {

/// A calendar month, the sampling unit of every monthly panel.
///
/// Stored as {year, month} with month in 1..12.  Arithmetic works on a flat
/// month index so adding 14 months to 1890-11 lands on 1892-01.
struct YearMonth {
  int year = 1900;
  int month = 1;  // 1..12

  /// Flat index used for arithmetic and comparisons (year*12 + month-1).
  [[nodiscard]] long long index() const noexcept {
    return static_cast<long long>(year) * 12 + (month - 1);
  }

  [[nodiscard]] YearMonth plus_months(long long m) const noexcept {
    long long idx = index() + m;
    // floor division so negative indices still map to valid months
    long long y = idx >= 0 ? idx / 12 : -((-idx + 11) / 12);
    int mo = static_cast<int>(idx - y * 12);
    return YearMonth{static_cast<int>(y), mo + 1};
  }

  friend auto operator<=>(const YearMonth& a, const YearMonth& b) noexcept {
    return a.index() <=> b.index();
  }
  friend bool operator==(const YearMonth& a, const YearMonth& b) noexcept {
    return a.index() == b.index();
  }
};

/// Parses "YYYY-MM".  Throws ParseError on any other shape or month not in
/// 1..12; the message includes the offending text.
YearMonth parse_year_month(const std::string& text);

/// Formats as "YYYY-MM" (zero-padded month).
std::string format_year_month(const YearMonth& ym);

/// Months from a to b (b - a on the flat index).
inline long long months_between(const YearMonth& a, const YearMonth& b) noexcept {
  return b.index() - a.index();
}

}  // namespace tvvecm
