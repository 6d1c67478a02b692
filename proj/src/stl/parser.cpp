// Copyright 2026 The stlcomm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stlcomm/stl/parser.hpp"

#include <cctype>
#include <charconv>
#include <string>
#include <vector>

#include "stlcomm/error.hpp"

namespace stlcomm::stl {

namespace {

struct Linear {
  std::vector<double> coefficients;
  double constant = 0.0;
};

class Parser {
 public:
  Parser(std::string_view text, std::size_t state_dim)
      : text_(text), dim_(state_dim) {}

  Formula parse() {
    Formula f = parse_or();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool starts_keyword(std::string_view kw) {
    skip_ws();
    if (text_.substr(pos_, kw.size()) != kw) return false;
    const std::size_t end = pos_ + kw.size();
    return end >= text_.size() ||
           !(std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_');
  }

  int parse_int() {
    skip_ws();
    const std::size_t start = pos_;
    int value = 0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (res.ec != std::errc() || res.ptr == text_.data() + start) fail("expected integer");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return value;
  }

  double parse_number() {
    skip_ws();
    double value = 0.0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (res.ec != std::errc() || res.ptr == text_.data() + pos_) fail("expected number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return value;
  }

  Interval parse_interval() {
    expect('[');
    Interval iv;
    iv.lo = parse_int();
    expect(',');
    iv.hi = parse_int();
    const std::size_t at = pos_;
    expect(']');
    if (iv.lo < 0) throw ParseError(at, "negative interval bound");
    if (iv.lo > iv.hi) throw ParseError(at, "empty interval");
    return iv;
  }

  Formula parse_or() {
    std::vector<Formula> parts{parse_and()};
    while (accept('|')) parts.push_back(parse_and());
    return parts.size() == 1 ? parts.front() : Formula::disjunction(std::move(parts));
  }

  Formula parse_and() {
    std::vector<Formula> parts{parse_until()};
    while (accept('&')) parts.push_back(parse_until());
    return parts.size() == 1 ? parts.front() : Formula::conjunction(std::move(parts));
  }

  Formula parse_until() {
    Formula lhs = parse_unary();
    if (starts_keyword_prefix('U')) {
      ++pos_;
      const Interval iv = parse_interval();
      Formula rhs = parse_unary();
      return Formula::until(iv, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  // Temporal operators are single letters directly followed by '['.
  bool starts_keyword_prefix(char op) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != op) return false;
    std::size_t next = pos_ + 1;
    while (next < text_.size() && std::isspace(static_cast<unsigned char>(text_[next]))) ++next;
    return next < text_.size() && text_[next] == '[';
  }

  Formula parse_unary() {
    const char c = peek();
    if (c == 'G' && starts_keyword_prefix('G')) {
      ++pos_;
      const Interval iv = parse_interval();
      return Formula::always(iv, parse_unary());
    }
    if (c == 'F' && starts_keyword_prefix('F')) {
      ++pos_;
      const Interval iv = parse_interval();
      return Formula::eventually(iv, parse_unary());
    }
    if (c == '!') {
      const std::size_t at = pos_;
      ++pos_;
      Formula inner = parse_unary();
      if (inner.kind() == NodeKind::kPredicate) return Formula::negated(inner.atom());
      if (inner.kind() == NodeKind::kNegPredicate) return Formula::predicate(inner.atom());
      throw ParseError(at, "negation applied to a non-predicate");
    }
    if (c == '(') {
      ++pos_;
      Formula inner = parse_or();
      expect(')');
      return inner;
    }
    if (starts_keyword("true")) {
      pos_ += 4;
      return Formula::truth();
    }
    return parse_predicate();
  }

  Formula parse_predicate() {
    const std::size_t start = pos_;
    Linear lhs = parse_linear();
    skip_ws();
    bool greater = false;
    bool strict = false;
    if (accept('>')) {
      greater = true;
      strict = !accept_raw('=');
    } else if (accept('<')) {
      strict = !accept_raw('=');
    } else {
      fail("expected comparison operator");
    }
    Linear rhs = parse_linear();

    std::vector<double> coeffs(dim_, 0.0);
    const double sign = greater ? 1.0 : -1.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      coeffs[i] = sign * (lhs.coefficients[i] - rhs.coefficients[i]);
    }
    const double offset = sign * (lhs.constant - rhs.constant);
    try {
      return Formula::predicate(AffinePredicate(
          std::move(coeffs), offset, strict ? Strictness::kStrict : Strictness::kNonStrict));
    } catch (const ValidationError& e) {
      throw ParseError(start, e.what());
    }
  }

  bool accept_raw(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Linear parse_linear() {
    Linear out;
    out.coefficients.assign(dim_, 0.0);
    double sign = accept('-') ? -1.0 : 1.0;
    while (true) {
      parse_term(out, sign);
      if (accept('+')) {
        sign = 1.0;
      } else if (accept('-')) {
        sign = -1.0;
      } else {
        break;
      }
    }
    return out;
  }

  void parse_term(Linear& out, double sign) {
    const char c = peek();
    if (c == 'x') {
      add_variable(out, sign);
      return;
    }
    if (c == '-') {
      ++pos_;
      sign = -sign;
    }
    const double value = sign * parse_number();
    if (accept('*')) {
      if (peek() != 'x') fail("expected variable after '*'");
      add_variable(out, value);
    } else {
      out.constant += value;
    }
  }

  void add_variable(Linear& out, double coefficient) {
    ++pos_;  // 'x'
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail("expected variable index");
    }
    const std::size_t at = pos_;
    const int index = parse_int();
    if (index < 0 || static_cast<std::size_t>(index) >= dim_) {
      throw ParseError(at, "variable index x" + std::to_string(index) +
                               " out of range for state dimension " + std::to_string(dim_));
    }
    out.coefficients[static_cast<std::size_t>(index)] += coefficient;
  }

  std::string_view text_;
  std::size_t dim_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text, std::size_t state_dim) {
  if (state_dim == 0) throw ValidationError("state dimension must be positive");
  return Parser(text, state_dim).parse();
}

}  // namespace stlcomm::stl
