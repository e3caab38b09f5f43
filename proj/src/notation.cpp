#include "voaforge/notation.hpp"

#include <cctype>

namespace voaforge {

namespace {

char ket_symbol(const Module& m) {
  switch (m.kind()) {
    case ModuleKind::Vacuum:
      return '0';
    case ModuleKind::Fock:
      return 'l';
    case ModuleKind::Verma:
      return 'h';
  }
  return '?';
}

char generator_symbol(const Module& m) { return m.algebra() == Algebra::Heisenberg ? 'a' : 'L'; }

class Parser {
 public:
  Parser(std::string_view text, const Module& m) : s_(text), m_(m) {}

  State parse() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '0') {
      std::size_t save = pos_;
      ++pos_;
      skip();
      if (pos_ == s_.size()) return m_.zero();
      pos_ = save;
    }
    State total = m_.zero();
    Scalar sign(1);
    if (peek('-') || peek('+')) {
      sign = s_[pos_] == '-' ? Scalar(-1) : Scalar(1);
      ++pos_;
    }
    total += sign * term();
    while (true) {
      skip();
      if (pos_ == s_.size()) break;
      if (!peek('+') && !peek('-')) fail("expected '+' or '-'");
      sign = s_[pos_] == '-' ? Scalar(-1) : Scalar(1);
      ++pos_;
      total += sign * term();
    }
    return total;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string digits() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(s_.substr(start, pos_ - start));
  }
  long integer() {
    skip();
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      neg = s_[pos_] == '-';
      ++pos_;
    }
    std::string d = digits();
    if (d.size() > 12) fail("integer too large");
    long v = std::stol(d);
    return neg ? -v : v;
  }

  State term() {
    skip();
    Scalar coeff(1);
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      mpz_class num(digits(), 10);
      mpz_class den(1);
      if (peek('/')) {
        ++pos_;
        den = mpz_class(digits(), 10);
        if (den == 0) {
          pos_ = start;
          fail("zero denominator");
        }
      }
      coeff = Scalar(num, den);
      coeff.canonicalize();
    }
    std::vector<std::pair<long, long>> factors;  // (mode, exponent), left to right
    while (true) {
      skip();
      if (pos_ >= s_.size()) fail("expected a mode or a ket");
      char c = s_[pos_];
      if (c == '|') break;
      if (c != 'a' && c != 'L') fail(std::string("unknown generator '") + c + "'");
      if (c != generator_symbol(m_))
        fail(std::string("generator '") + c + "' does not act on " + m_.name());
      ++pos_;
      expect('(');
      long mode = integer();
      expect(')');
      long exponent = 1;
      if (peek('^')) {
        ++pos_;
        std::string e = digits();
        if (e.size() > 6) fail("exponent too large");
        exponent = std::stol(e);
      }
      factors.emplace_back(mode, exponent);
    }
    expect('|');
    skip();
    if (pos_ >= s_.size()) fail("unterminated ket");
    char k = s_[pos_];
    if (k != '0' && k != 'h' && k != 'l') fail("ket must be |0>, |h> or |l>");
    if (k != ket_symbol(m_)) fail(std::string("ket |") + k + "> does not belong to " + m_.name());
    ++pos_;
    expect('>');
    State v = m_.basis(0, coeff);
    for (auto it = factors.rbegin(); it != factors.rend(); ++it)
      for (long e = 0; e < it->second; ++e) v = m_.generator(it->first, v);
    return v;
  }

  std::string_view s_;
  const Module& m_;
  std::size_t pos_ = 0;
};

}  // namespace

State parse_state(std::string_view text, const Module& module) { return Parser(text, module).parse(); }

std::string format_basis(const Module& module, Index id) {
  const Partition& p = module.partition(id);
  std::string out;
  char g = generator_symbol(module);
  for (std::size_t i = 0; i < p.size();) {
    std::size_t j = i;
    while (j < p.size() && p[j] == p[i]) ++j;
    out += g;
    out += "(" + std::to_string(-p[i]) + ")";
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  out += "|";
  out += ket_symbol(module);
  out += ">";
  return out;
}

std::string format_state(const State& s) {
  if (s.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [id, c] : s.coeffs) {
    Scalar mag = abs(c);
    bool negative = c < 0;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    if (mag != 1) out += to_string(mag) + " ";
    out += format_basis(*s.module, id);
    first = false;
  }
  return out;
}

}  // namespace voaforge
