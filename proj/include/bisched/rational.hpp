#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bisched {

/// Exact rational number over 64-bit integers, always in lowest terms with a
/// positive denominator. Intermediate products are computed in 128 bits and
/// an overflow_error is thrown if a normalized result does not fit.
class Rational {
 public:
   using int_t = std::int64_t;

   constexpr Rational() = default;
   constexpr Rational(int_t value) : num_(value) {}  // NOLINT(implicit)
   Rational(int_t num, int_t den) { assign(num, den); }

   [[nodiscard]] constexpr int_t num() const { return num_; }
   [[nodiscard]] constexpr int_t den() const { return den_; }

   [[nodiscard]] int_t floor() const {
      int_t q = num_ / den_;
      if (num_ % den_ != 0 && num_ < 0) {
         --q;
      }
      return q;
   }

   [[nodiscard]] int_t ceil() const {
      int_t q = num_ / den_;
      if (num_ % den_ != 0 && num_ > 0) {
         ++q;
      }
      return q;
   }

   [[nodiscard]] bool is_integer() const { return den_ == 1; }

   /// "num/den", denominator always written.
   [[nodiscard]] std::string str() const {
      return std::to_string(num_) + "/" + std::to_string(den_);
   }

   /// Decimal approximation; reporting only.
   [[nodiscard]] double to_double() const {
      return static_cast<double>(num_) / static_cast<double>(den_);
   }

   /// Parses "num/den" or a bare integer. With `canonical` set, the input
   /// must already be in lowest terms with an explicit denominator.
   static Rational parse(std::string_view text, bool canonical = false) {
      const auto slash = text.find('/');
      if (canonical && slash == std::string_view::npos) {
         throw std::invalid_argument("rational '" + std::string(text) +
                                     "' must be written as num/den");
      }
      const int_t num = parse_int(text.substr(0, slash), text);
      const int_t den = slash == std::string_view::npos
                             ? 1
                             : parse_int(text.substr(slash + 1), text);
      if (den <= 0) {
         throw std::invalid_argument("rational '" + std::string(text) +
                                     "' needs a positive denominator");
      }
      Rational r(num, den);
      if (canonical && (r.num_ != num || r.den_ != den)) {
         throw std::invalid_argument("rational '" + std::string(text) +
                                     "' is not in lowest terms");
      }
      return r;
   }

   friend Rational operator+(const Rational& a, const Rational& b) {
      return from_wide(wide(a.num_) * b.den_ + wide(b.num_) * a.den_,
                       wide(a.den_) * b.den_);
   }
   friend Rational operator-(const Rational& a, const Rational& b) {
      return from_wide(wide(a.num_) * b.den_ - wide(b.num_) * a.den_,
                       wide(a.den_) * b.den_);
   }
   friend Rational operator*(const Rational& a, const Rational& b) {
      return from_wide(wide(a.num_) * b.num_, wide(a.den_) * b.den_);
   }
   friend Rational operator/(const Rational& a, const Rational& b) {
      if (b.num_ == 0) {
         throw std::domain_error("rational division by zero");
      }
      return from_wide(wide(a.num_) * b.den_, wide(a.den_) * b.num_);
   }
   Rational operator-() const { return from_wide(-wide(num_), den_); }

   Rational& operator+=(const Rational& o) { return *this = *this + o; }
   Rational& operator-=(const Rational& o) { return *this = *this - o; }
   Rational& operator*=(const Rational& o) { return *this = *this * o; }
   Rational& operator/=(const Rational& o) { return *this = *this / o; }

   friend bool operator==(const Rational&, const Rational&) = default;
   friend std::strong_ordering operator<=>(const Rational& a,
                                           const Rational& b) {
      return wide(a.num_) * b.den_ <=> wide(b.num_) * a.den_;
   }

   friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
      return os << r.str();
   }

 private:
   using wide_t = __int128;

   static constexpr wide_t wide(int_t v) { return static_cast<wide_t>(v); }

   static int_t parse_int(std::string_view digits, std::string_view whole) {
      if (digits.empty()) {
         throw std::invalid_argument("malformed rational '" +
                                     std::string(whole) + "'");
      }
      std::size_t pos = 0;
      const bool neg = digits.front() == '-';
      if (neg) {
         pos = 1;
      }
      if (pos == digits.size()) {
         throw std::invalid_argument("malformed rational '" +
                                     std::string(whole) + "'");
      }
      wide_t v = 0;
      for (; pos < digits.size(); ++pos) {
         const char c = digits[pos];
         if (c < '0' || c > '9') {
            throw std::invalid_argument("malformed rational '" +
                                        std::string(whole) + "'");
         }
         v = v * 10 + (c - '0');
         if (v > INT64_MAX) {
            throw std::overflow_error("rational component out of range");
         }
      }
      return static_cast<int_t>(neg ? -v : v);
   }

   static wide_t gcd_wide(wide_t a, wide_t b) {
      if (a < 0) a = -a;
      if (b < 0) b = -b;
      while (b != 0) {
         const wide_t t = a % b;
         a = b;
         b = t;
      }
      return a;
   }

   static Rational from_wide(wide_t num, wide_t den) {
      if (den == 0) {
         throw std::domain_error("rational with zero denominator");
      }
      if (den < 0) {
         num = -num;
         den = -den;
      }
      const wide_t g = gcd_wide(num, den);
      if (g > 1) {
         num /= g;
         den /= g;
      }
      if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX) {
         throw std::overflow_error("rational overflow");
      }
      Rational r;
      r.num_ = static_cast<int_t>(num);
      r.den_ = static_cast<int_t>(den);
      return r;
   }

   void assign(int_t num, int_t den) { *this = from_wide(num, den); }

   int_t num_ = 0;
   int_t den_ = 1;
};

inline Rational max(const Rational& a, const Rational& b) {
   return a < b ? b : a;
}

inline Rational min(const Rational& a, const Rational& b) {
   return b < a ? b : a;
}

}  // namespace bisched
