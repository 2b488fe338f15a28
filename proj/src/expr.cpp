#include "mpspec/expr.hpp"

#include <cctype>
#include <cmath>

namespace mpspec {

int Expr::add_node(Op op, double num, int a, int b) {
  nodes_.push_back(Node{op, num, a, b});
  return static_cast<int>(nodes_.size()) - 1;
}

Expr Expr::constant(double v) {
  Expr e;
  e.root_ = e.add_node(Op::num, v, -1, -1);
  return e;
}

// ---------------------------------------------------------------- parser

class ExprParser {
 public:
  explicit ExprParser(const std::string& text) : s_(text) {}

  Expr run() {
    Expr e;
    e.text_ = s_;
    e.root_ = sum(e);
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  int sum(Expr& e) {
    int lhs = term(e);
    for (;;) {
      if (eat('+')) lhs = e.add_node(Expr::Op::add, 0, lhs, term(e));
      else if (eat('-')) lhs = e.add_node(Expr::Op::sub, 0, lhs, term(e));
      else return lhs;
    }
  }

  int term(Expr& e) {
    int lhs = unary(e);
    for (;;) {
      if (eat('*')) lhs = e.add_node(Expr::Op::mul, 0, lhs, unary(e));
      else if (eat('/')) lhs = e.add_node(Expr::Op::div, 0, lhs, unary(e));
      else return lhs;
    }
  }

  // unary minus binds looser than ^, so -x^2 is -(x^2); exponents may carry
  // their own sign, as in 2^-3
  int unary(Expr& e) {
    if (eat('-')) return e.add_node(Expr::Op::neg, 0, unary(e), -1);
    if (eat('+')) return unary(e);
    return power(e);
  }

  int power(Expr& e) {
    int base = primary(e);
    if (eat('^')) return e.add_node(Expr::Op::pow, 0, base, unary(e));
    return base;
  }

  int primary(Expr& e) {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      int inner = sum(e);
      if (!eat(')')) throw ParseError("missing ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(e);
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier(e);
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  int number(Expr& e) {
    std::size_t start = pos_;
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(s_.substr(start), &used);
    } catch (const std::exception&) {
      throw ParseError("bad numeric literal", start);
    }
    pos_ = start + used;
    return e.add_node(Expr::Op::num, v, -1, -1);
  }

  int identifier(Expr& e) {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string name = s_.substr(start, pos_ - start);
    if (name == "x") return e.add_node(Expr::Op::var_x, 0, -1, -1);
    if (name == "u") return e.add_node(Expr::Op::var_u, 0, -1, -1);
    if (name == "pi") return e.add_node(Expr::Op::num, 3.14159265358979323846, -1, -1);
    if (name == "e") return e.add_node(Expr::Op::num, 2.71828182845904523536, -1, -1);

    Expr::Op op;
    if (name == "sin") op = Expr::Op::f_sin;
    else if (name == "cos") op = Expr::Op::f_cos;
    else if (name == "exp") op = Expr::Op::f_exp;
    else if (name == "abs") op = Expr::Op::f_abs;
    else if (name == "sqrt") op = Expr::Op::f_sqrt;
    else throw ParseError("unknown identifier '" + name + "'", start);

    if (!eat('(')) throw ParseError("expected '(' after '" + name + "'", pos_);
    int arg = sum(e);
    if (!eat(')')) throw ParseError("missing ')'", pos_);
    return e.add_node(op, 0, arg, -1);
  }
};

Expr Expr::parse(const std::string& text) { return ExprParser(text).run(); }

// ---------------------------------------------------------------- eval

double Expr::eval(double x, double u) const {
  if (root_ < 0) throw std::logic_error("empty expression");
  // children precede parents, so one forward sweep suffices
  static thread_local std::vector<double> vals;
  vals.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    double a = n.a >= 0 ? vals[n.a] : 0.0;
    double b = n.b >= 0 ? vals[n.b] : 0.0;
    switch (n.op) {
      case Op::num: vals[i] = n.num; break;
      case Op::var_x: vals[i] = x; break;
      case Op::var_u: vals[i] = u; break;
      case Op::add: vals[i] = a + b; break;
      case Op::sub: vals[i] = a - b; break;
      case Op::mul: vals[i] = a * b; break;
      case Op::div: vals[i] = a / b; break;
      case Op::pow: vals[i] = std::pow(a, b); break;
      case Op::neg: vals[i] = -a; break;
      case Op::f_sin: vals[i] = std::sin(a); break;
      case Op::f_cos: vals[i] = std::cos(a); break;
      case Op::f_exp: vals[i] = std::exp(a); break;
      case Op::f_abs: vals[i] = std::fabs(a); break;
      case Op::f_sqrt: vals[i] = std::sqrt(a); break;
      case Op::f_log: vals[i] = std::log(a); break;
      case Op::f_sign: vals[i] = (a > 0) - (a < 0); break;
    }
  }
  return vals[root_];
}

bool Expr::uses(char var) const {
  Op target = var == 'u' ? Op::var_u : Op::var_x;
  for (const Node& n : nodes_)
    if (n.op == target) return true;
  return false;
}

// ---------------------------------------------------------------- diff

int Expr::mk_num(double v) { return add_node(Op::num, v, -1, -1); }

int Expr::mk1(Op op, int a) {
  if (nodes_[a].op == Op::num) {
    double v = nodes_[a].num;
    switch (op) {
      case Op::neg: return mk_num(-v);
      case Op::f_sin: return mk_num(std::sin(v));
      case Op::f_cos: return mk_num(std::cos(v));
      case Op::f_exp: return mk_num(std::exp(v));
      case Op::f_abs: return mk_num(std::fabs(v));
      case Op::f_sqrt: return mk_num(std::sqrt(v));
      case Op::f_log: return mk_num(std::log(v));
      case Op::f_sign: return mk_num((v > 0) - (v < 0));
      default: break;
    }
  }
  return add_node(op, 0, a, -1);
}

int Expr::mk2(Op op, int a, int b) {
  bool na = nodes_[a].op == Op::num;
  bool nb = nodes_[b].op == Op::num;
  double va = na ? nodes_[a].num : 0.0;
  double vb = nb ? nodes_[b].num : 0.0;
  switch (op) {
    case Op::add:
      if (na && va == 0) return b;
      if (nb && vb == 0) return a;
      if (na && nb) return mk_num(va + vb);
      break;
    case Op::sub:
      if (nb && vb == 0) return a;
      if (na && nb) return mk_num(va - vb);
      if (na && va == 0) return mk1(Op::neg, b);
      break;
    case Op::mul:
      if ((na && va == 0) || (nb && vb == 0)) return mk_num(0);
      if (na && va == 1) return b;
      if (nb && vb == 1) return a;
      if (na && nb) return mk_num(va * vb);
      break;
    case Op::div:
      if (na && va == 0) return mk_num(0);
      if (nb && vb == 1) return a;
      if (na && nb) return mk_num(va / vb);
      break;
    case Op::pow:
      if (nb && vb == 1) return a;
      if (nb && vb == 0) return mk_num(1);
      break;
    default: break;
  }
  return add_node(op, 0, a, b);
}

int Expr::import_subtree(const Expr& src, int id) {
  const Node& n = src.nodes_[id];
  int a = n.a >= 0 ? import_subtree(src, n.a) : -1;
  int b = n.b >= 0 ? import_subtree(src, n.b) : -1;
  return add_node(n.op, n.num, a, b);
}

int Expr::diff_node(const Expr& src, int id, char var) {
  const Node& n = src.nodes_[id];
  switch (n.op) {
    case Op::num: return mk_num(0);
    case Op::var_x: return mk_num(var == 'x' ? 1 : 0);
    case Op::var_u: return mk_num(var == 'u' ? 1 : 0);
    case Op::add: return mk2(Op::add, diff_node(src, n.a, var), diff_node(src, n.b, var));
    case Op::sub: return mk2(Op::sub, diff_node(src, n.a, var), diff_node(src, n.b, var));
    case Op::mul: {
      int a = import_subtree(src, n.a), b = import_subtree(src, n.b);
      int da = diff_node(src, n.a, var), db = diff_node(src, n.b, var);
      return mk2(Op::add, mk2(Op::mul, da, b), mk2(Op::mul, a, db));
    }
    case Op::div: {
      int a = import_subtree(src, n.a), b = import_subtree(src, n.b);
      int da = diff_node(src, n.a, var), db = diff_node(src, n.b, var);
      int num = mk2(Op::sub, mk2(Op::mul, da, b), mk2(Op::mul, a, db));
      return mk2(Op::div, num, mk2(Op::mul, import_subtree(src, n.b), b));
    }
    case Op::pow: {
      int a = import_subtree(src, n.a);
      int da = diff_node(src, n.a, var);
      if (src.nodes_[n.b].op == Op::num) {
        double p = src.nodes_[n.b].num;
        int fac = mk2(Op::mul, mk_num(p), mk2(Op::pow, a, mk_num(p - 1)));
        return mk2(Op::mul, fac, da);
      }
      // general case: (a^b)' = a^b * (b' log a + b a'/a)
      int b = import_subtree(src, n.b);
      int db = diff_node(src, n.b, var);
      int t1 = mk2(Op::mul, db, mk1(Op::f_log, import_subtree(src, n.a)));
      int t2 = mk2(Op::div, mk2(Op::mul, import_subtree(src, n.b), da), import_subtree(src, n.a));
      return mk2(Op::mul, mk2(Op::pow, a, b), mk2(Op::add, t1, t2));
    }
    case Op::neg: return mk1(Op::neg, diff_node(src, n.a, var));
    case Op::f_sin:
      return mk2(Op::mul, mk1(Op::f_cos, import_subtree(src, n.a)), diff_node(src, n.a, var));
    case Op::f_cos: {
      int inner = mk1(Op::f_sin, import_subtree(src, n.a));
      return mk2(Op::mul, mk1(Op::neg, inner), diff_node(src, n.a, var));
    }
    case Op::f_exp:
      return mk2(Op::mul, mk1(Op::f_exp, import_subtree(src, n.a)), diff_node(src, n.a, var));
    case Op::f_abs:
      return mk2(Op::mul, mk1(Op::f_sign, import_subtree(src, n.a)), diff_node(src, n.a, var));
    case Op::f_sqrt: {
      int denom = mk2(Op::mul, mk_num(2), mk1(Op::f_sqrt, import_subtree(src, n.a)));
      return mk2(Op::div, diff_node(src, n.a, var), denom);
    }
    case Op::f_log:
      return mk2(Op::div, diff_node(src, n.a, var), import_subtree(src, n.a));
    case Op::f_sign: return mk_num(0);
  }
  throw std::logic_error("unreachable");
}

Expr Expr::diff(char var) const {
  if (root_ < 0) throw std::logic_error("empty expression");
  Expr d;
  d.root_ = d.diff_node(*this, root_, var);
  d.text_ = "d/d" + std::string(1, var) + "(" + text_ + ")";
  return d;
}

}  // namespace mpspec
