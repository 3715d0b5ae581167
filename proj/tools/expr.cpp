#include "expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace cli {

namespace {

std::string position_message(std::string_view text, std::size_t pos,
                             const std::string& what) {
  return "expression error at position " + std::to_string(pos) + " in \"" +
         std::string(text) + "\": " + what;
}

}  // namespace

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string_view> variables)
      : text_(text), vars_(variables) {}

  Expression run() {
    Expression e;
    e.variable_count_ = vars_.size();
    out_ = &e.nodes_;
    const std::size_t root = expr();
    skip_space();
    if (pos_ != text_.size())
      fail("unexpected trailing input '" + std::string(text_.substr(pos_)) +
           "'");
    (void)root;  // the last node is always the root
    if (out_->empty()) fail("empty expression");
    return e;
  }

 private:
  using Node = Expression::Node;
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error(position_message(text_, pos_, what));
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  std::size_t push(Node n) {
    out_->push_back(n);
    return out_->size() - 1;
  }

  std::size_t expr() {
    std::size_t left = term();
    for (;;) {
      if (eat('+'))
        left = push({Op::add, 0.0, 0, left, term()});
      else if (eat('-'))
        left = push({Op::sub, 0.0, 0, left, term()});
      else
        return left;
    }
  }

  std::size_t term() {
    std::size_t left = factor();
    for (;;) {
      if (eat('*'))
        left = push({Op::mul, 0.0, 0, left, factor()});
      else if (eat('/'))
        left = push({Op::div, 0.0, 0, left, factor()});
      else
        return left;
    }
  }

  std::size_t factor() {
    if (eat('-')) return push({Op::neg, 0.0, 0, factor(), 0});
    return primary();
  }

  std::size_t primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      const std::size_t inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return identifier();
    if (c == '\0') fail("unexpected end of expression");
    fail(std::string("unexpected character '") + c + "'");
  }

  std::size_t number() {
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) fail("malformed number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return push({Op::number, value, 0, 0, 0});
  }

  std::size_t identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "exp" || name == "sin") {
      if (!eat('(')) fail("expected '(' after '" + std::string(name) + "'");
      const std::size_t arg = expr();
      if (!eat(')')) fail("expected ')'");
      return push({name == "exp" ? Op::exp_fn : Op::sin_fn, 0.0, 0, arg, 0});
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return push({Op::variable, 0.0, i, 0, 0});
    std::string allowed;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (i) allowed += ", ";
      allowed += vars_[i];
    }
    pos_ = start;
    fail("unknown variable '" + std::string(name) + "' (allowed: " +
         (allowed.empty() ? std::string("none") : allowed) + ")");
  }

  std::string_view text_;
  std::span<const std::string_view> vars_;
  std::size_t pos_ = 0;
  std::vector<Node>* out_ = nullptr;
};

Expression Expression::parse(std::string_view text,
                             std::span<const std::string_view> variables) {
  return Parser(text, variables).run();
}

double Expression::eval(std::span<const double> variable_values) const {
  if (variable_values.size() != variable_count_)
    throw std::runtime_error("expression expects " +
                             std::to_string(variable_count_) +
                             " variable values, got " +
                             std::to_string(variable_values.size()));
  std::vector<double> v(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::number: v[i] = n.value; break;
      case Op::variable: v[i] = variable_values[n.var]; break;
      case Op::add: v[i] = v[n.a] + v[n.b]; break;
      case Op::sub: v[i] = v[n.a] - v[n.b]; break;
      case Op::mul: v[i] = v[n.a] * v[n.b]; break;
      case Op::div: v[i] = v[n.a] / v[n.b]; break;
      case Op::neg: v[i] = -v[n.a]; break;
      case Op::exp_fn: v[i] = std::exp(v[n.a]); break;
      case Op::sin_fn: v[i] = std::sin(v[n.a]); break;
    }
  }
  return v.back();
}

bool Expression::uses(std::size_t index) const {
  for (const Node& n : nodes_)
    if (n.op == Op::variable && n.var == index) return true;
  return false;
}

}  // namespace cli
