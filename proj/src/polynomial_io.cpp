#include "gpbound/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace gpbound {

ParseError::ParseError(const std::string& what, std::size_t position)
    : PolynomialError(what + " at position " + std::to_string(position)), position_(position) {}

namespace {

struct RawTerm {
  double coeff = 1.0;
  std::vector<int> exps;  // indexed by variable - 1, grown on demand
};

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  std::vector<RawTerm> run() {
    skip_ws();
    if (at_end()) throw ParseError("empty polynomial", pos_);
    std::vector<RawTerm> terms;
    bool first = true;
    while (true) {
      skip_ws();
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = get() == '-' ? -1.0 : 1.0;
        skip_ws();
      } else if (!first) {
        throw ParseError("expected '+' or '-'", pos_);
      }
      RawTerm t = term();
      t.coeff *= sign;
      terms.push_back(std::move(t));
      first = false;
      skip_ws();
      if (at_end()) break;
    }
    return terms;
  }

 private:
  RawTerm term() {
    RawTerm t;
    bool have = false;
    while (true) {
      skip_ws();
      bool star = false;
      if (have && peek() == '*') {
        ++pos_;
        skip_ws();
        star = true;
      }
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.coeff *= number();
      } else if (c == 'x') {
        factor(t);
      } else {
        if (star) throw ParseError("expected factor after '*'", pos_);
        break;
      }
      have = true;
    }
    if (!have) throw ParseError("expected a term", pos_);
    return t;
  }

  void factor(RawTerm& t) {
    ++pos_;  // 'x'
    std::size_t start = pos_;
    int idx = integer();
    if (idx < 1) throw ParseError("variable index must be at least 1", start);
    int k = 1;
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      k = integer();
    }
    if (t.exps.size() < static_cast<std::size_t>(idx)) t.exps.resize(static_cast<std::size_t>(idx), 0);
    t.exps[static_cast<std::size_t>(idx - 1)] += k;
  }

  int integer() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) throw ParseError("expected integer", start);
    int v = 0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc()) throw ParseError("integer out of range", start);
    return v;
  }

  double number() {
    double v = 0.0;
    auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (res.ec != std::errc()) throw ParseError("expected number", pos_);
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    return v;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  char get() { return s_[pos_++]; }

  const std::string& s_;
  std::size_t pos_ = 0;
};

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Polynomial parse_polynomial(const std::string& text, std::size_t n) {
  auto raw = Parser(text).run();
  std::size_t used = 0;
  for (const auto& t : raw) used = std::max(used, t.exps.size());
  if (n == 0) n = used;
  if (used > n) throw PolynomialError("variable index exceeds declared variable count");
  std::vector<std::pair<ExponentVector, double>> terms;
  for (auto& t : raw) {
    t.exps.resize(n, 0);
    terms.emplace_back(ExponentVector(t.exps), t.coeff);
  }
  return Polynomial(n, terms);
}

std::string format_polynomial(const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::vector<std::pair<ExponentVector, double>> terms(f.terms().begin(), f.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    if (a.first.order() != b.first.order()) return a.first.order() > b.first.order();
    return a.first > b.first;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [alpha, c] : terms) {
    double mag = c < 0 ? -c : c;
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    first = false;
    bool wrote = false;
    if (mag != 1.0 || alpha.is_zero()) {
      os << shortest(mag);
      wrote = true;
    }
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] == 0) continue;
      if (wrote) os << '*';
      os << 'x' << (i + 1);
      if (alpha[i] != 1) os << '^' << alpha[i];
      wrote = true;
    }
  }
  return os.str();
}

}  // namespace gpbound
