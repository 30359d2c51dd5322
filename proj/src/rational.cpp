#include "hyparr/rational.hpp"

#include <cctype>
#include <ostream>

namespace hyparr {

Rational::Rational(long num, long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("rational division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::from_string(const std::string& s) {
  if (s.empty()) throw FormatError("empty rational literal");
  std::size_t slashes = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '/') {
      ++slashes;
      continue;
    }
    if (c == '-' || c == '+') {
      // sign allowed at the start of numerator or denominator
      bool at_num_start = i == 0;
      bool at_den_start = i > 0 && s[i - 1] == '/';
      if (!at_num_start && !at_den_start) throw FormatError("bad rational literal: " + s);
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) throw FormatError("bad rational literal: " + s);
  }
  if (slashes > 1 || s.front() == '/' || s.back() == '/') throw FormatError("bad rational literal: " + s);
  mpq_class v;
  if (v.set_str(s, 10) != 0) throw FormatError("bad rational literal: " + s);
  if (sgn(v.get_den()) == 0) throw FormatError("zero denominator in rational literal: " + s);
  return Rational(v);
}

std::string Rational::str() const {
  return v_.get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace hyparr
