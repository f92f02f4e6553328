#include "dpl/rational.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

namespace dpl {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

bool parse_rational(std::string_view text, Rational& out) {
  if (text.empty()) return false;
  bool negative = false;
  std::string_view body = text;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  mpz_class num;
  mpz_class den = 1;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto p = body.substr(0, slash);
    auto q = body.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) return false;
    num.set_str(std::string(p), 10);
    den.set_str(std::string(q), 10);
    if (den == 0) return false;
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto ip = body.substr(0, dot);
    auto fp = body.substr(dot + 1);
    if (ip.empty() && fp.empty()) return false;
    if (!ip.empty() && !all_digits(ip)) return false;
    if (!fp.empty() && !all_digits(fp)) return false;
    std::string digits = std::string(ip) + std::string(fp);
    num.set_str(digits.empty() ? "0" : digits, 10);
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
  } else {
    if (!all_digits(body)) return false;
    num.set_str(std::string(body), 10);
  }
  if (negative) num = -num;
  out = Rational(num, den);
  out.canonicalize();
  return true;
}

namespace {

double log_of_integer(const mpz_class& z) {
  long exponent = 0;
  double mantissa = mpz_get_d_2exp(&exponent, z.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
}

}  // namespace

double log_of(const Rational& q) {
  return log_of_integer(q.get_num()) - log_of_integer(q.get_den());
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace dpl
