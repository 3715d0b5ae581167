#ifndef PLAB_CLI_EXPR_HPP
#define PLAB_CLI_EXPR_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cli {

/// A parsed arithmetic expression over named scalar variables.
///
/// Grammar:
///   expr   := term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor)*
///   factor := '-' factor | primary
///   primary:= number | variable | ('exp' | 'sin') '(' expr ')' | '(' expr ')'
///
/// Variables must come from the allow-list given at parse time; evaluation
/// takes the variable values in the same order. Parse errors throw
/// std::runtime_error with a position-annotated message.
class Expression {
 public:
  static Expression parse(std::string_view text,
                          std::span<const std::string_view> variables);

  double eval(std::span<const double> variable_values) const;

  /// True when the variable at `index` in the allow-list actually occurs.
  bool uses(std::size_t index) const;

 private:
  enum class Op { number, variable, add, sub, mul, div, neg, exp_fn, sin_fn };
  struct Node {
    Op op;
    double value = 0.0;     // number
    std::size_t var = 0;    // variable: index into the allow-list
    std::size_t a = 0;      // left / only child
    std::size_t b = 0;      // right child
  };

  std::vector<Node> nodes_;  // children always precede parents
  std::size_t variable_count_ = 0;

  friend class Parser;
};

}  // namespace cli

#endif
