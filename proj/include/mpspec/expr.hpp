// Small arithmetic expression trees used for coefficient bodies.
// Grammar: + - * / ^ (right associative), parentheses, the functions
// sin cos exp abs sqrt, the constants pi and e, and the variables x and u.
// Trees can be differentiated symbolically with respect to x or u; the
// derivative of abs uses sign, which is left undefined (0) at the kink.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpspec {

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (offset " + std::to_string(pos) + ")"),
        position(pos) {}
};

class Expr {
 public:
  Expr() = default;

  static Expr parse(const std::string& text);  // throws ParseError
  static Expr constant(double v);

  bool empty() const { return root_ < 0; }
  double eval(double x, double u = 0.0) const;
  Expr diff(char var) const;  // var is 'x' or 'u'
  bool uses(char var) const;
  const std::string& text() const { return text_; }

 private:
  enum class Op : unsigned char {
    num, var_x, var_u, add, sub, mul, div, pow, neg,
    f_sin, f_cos, f_exp, f_abs, f_sqrt, f_log, f_sign
  };
  struct Node {
    Op op;
    double num;  // for Op::num
    int a, b;    // child indices, -1 if unused
  };

  std::vector<Node> nodes_;  // children always precede parents
  int root_ = -1;
  std::string text_;

  int add_node(Op op, double num, int a, int b);
  int import_subtree(const Expr& src, int id);
  // simplifying builders used by diff
  int mk_num(double v);
  int mk1(Op op, int a);
  int mk2(Op op, int a, int b);
  int diff_node(const Expr& src, int id, char var);

  friend class ExprParser;
};

}  // namespace mpspec
