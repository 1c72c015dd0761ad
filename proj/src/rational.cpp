#include "pcause/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace pcause {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad_rat(std::string_view text) {
  throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
}

}  // namespace

Rat parse_rat(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rat result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_rat(text);
    mpz_class d{std::string(den), 10};
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    result = Rat(mpz_class(std::string(num), 10), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      bad_rat(text);
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class digits(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    result = Rat(digits, scale);
  } else {
    if (!all_digits(body)) bad_rat(text);
    result = Rat(mpz_class(std::string(body), 10));
  }
  result.canonicalize();
  return negative ? Rat(-result) : result;
}

std::string to_string(const Rat& r) { return r.get_str(); }

mpz_class denominator_lcm(const std::vector<Rat>& values) {
  mpz_class acc = 1;
  for (const auto& v : values) {
    mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), v.get_den_mpz_t());
  }
  return acc;
}

std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  if (a.kind_ != ExtRat::Kind::finite) return std::strong_ordering::equal;
  int c = cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

ExtRat operator+(const ExtRat& a, const ExtRat& b) {
  if (a.is_finite() && b.is_finite()) return ExtRat(Rat(a.value_ + b.value_));
  if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf())) {
    throw std::domain_error("inf + -inf is undefined");
  }
  return a.is_finite() ? b : a;
}

std::string to_string(const ExtRat& r) {
  switch (r.kind()) {
    case ExtRat::Kind::pos_inf:
      return "inf";
    case ExtRat::Kind::neg_inf:
      return "-inf";
    case ExtRat::Kind::finite:
      break;
  }
  return to_string(r.value());
}

ExtRat parse_ext_rat(std::string_view text) {
  if (text == "inf" || text == "+inf" || text == "infinity") return ExtRat::pos_inf();
  if (text == "-inf" || text == "-infinity") return ExtRat::neg_inf();
  return ExtRat(parse_rat(text));
}

}  // namespace pcause
