#include "ocb/expression.hpp"

#include <cctype>
#include <memory>
#include <optional>
#include <vector>

#include "ocb/error.hpp"

namespace ocb {
namespace {

struct Node;
using NodePtr = std::unique_ptr<Node>;

struct Node {
  enum class Op { kNumber, kName, kAdd, kSub, kMul, kDiv, kMod, kPow, kNeg, kSum } op;
  std::int64_t number = 0;
  std::string name;
  std::vector<NodePtr> args;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    auto root = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression \"" + std::string(text_) + "\": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  static NodePtr binary(Node::Op op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->args.push_back(std::move(lhs));
    n->args.push_back(std::move(rhs));
    return n;
  }

  NodePtr expression() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Node::Op::kAdd, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = binary(Node::Op::kSub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    auto lhs = power();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Node::Op::kMul, std::move(lhs), power());
      } else if (accept('/')) {
        lhs = binary(Node::Op::kDiv, std::move(lhs), power());
      } else if (accept('%')) {
        lhs = binary(Node::Op::kMod, std::move(lhs), power());
      } else {
        return lhs;
      }
    }
  }

  NodePtr power() {
    auto base = unary();
    if (accept('^')) return binary(Node::Op::kPow, std::move(base), power());
    return base;
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_unique<Node>();
      n->op = Node::Op::kNeg;
      n->args.push_back(unary());
      return n;
    }
    return primary();
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept('(')) {
      auto inner = expression();
      expect(')');
      return inner;
    }
    const char c = text_[pos_];
    auto n = std::make_unique<Node>();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      n->op = Node::Op::kNumber;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        n->number = n->number * 10 + (text_[pos_++] - '0');
      }
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const auto start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      n->name = std::string(text_.substr(start, pos_ - start));
      if (n->name == "sum" && accept('(')) {
        n->op = Node::Op::kSum;
        skip_space();
        auto var = primary();
        if (var->op != Node::Op::kName) fail("sum() needs a variable name first");
        n->args.push_back(std::move(var));
        for (int i = 0; i < 3; ++i) {
          expect(',');
          n->args.push_back(expression());
        }
        expect(')');
        return n;
      }
      n->op = Node::Op::kName;
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class Evaluator {
 public:
  Evaluator(std::string_view text, const ExpressionScope& scope) : text_(text), scope_(scope) {}

  std::int64_t eval(const Node& n) {
    switch (n.op) {
      case Node::Op::kNumber:
        return n.number;
      case Node::Op::kName: {
        auto it = scope_.find(n.name);
        if (it == scope_.end()) fail("unknown name '" + n.name + "'");
        return it->second;
      }
      case Node::Op::kAdd:
        return eval(*n.args[0]) + eval(*n.args[1]);
      case Node::Op::kSub:
        return eval(*n.args[0]) - eval(*n.args[1]);
      case Node::Op::kMul:
        return eval(*n.args[0]) * eval(*n.args[1]);
      case Node::Op::kDiv:
      case Node::Op::kMod: {
        const auto lhs = eval(*n.args[0]);
        const auto rhs = eval(*n.args[1]);
        if (rhs == 0) fail("division by zero");
        return n.op == Node::Op::kDiv ? lhs / rhs : lhs % rhs;
      }
      case Node::Op::kPow: {
        const auto base = eval(*n.args[0]);
        const auto exponent = eval(*n.args[1]);
        if (exponent < 0) fail("negative exponent");
        std::int64_t out = 1;
        for (std::int64_t i = 0; i < exponent; ++i) out *= base;
        return out;
      }
      case Node::Op::kNeg:
        return -eval(*n.args[0]);
      case Node::Op::kSum: {
        const auto& var = n.args[0]->name;
        const auto low = eval(*n.args[1]);
        const auto high = eval(*n.args[2]);
        auto saved = scope_.find(var) == scope_.end() ? std::optional<std::int64_t>{}
                                                      : std::optional(scope_.at(var));
        std::int64_t total = 0;
        for (std::int64_t i = low; i <= high; ++i) {
          scope_[var] = i;
          total += eval(*n.args[3]);
        }
        if (saved) {
          scope_[var] = *saved;
        } else {
          scope_.erase(var);
        }
        return total;
      }
    }
    return 0;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression \"" + std::string(text_) + "\": " + what);
  }

  std::string_view text_;
  ExpressionScope scope_;
};

}  // namespace

std::int64_t evaluate_expression(std::string_view text, const ExpressionScope& scope) {
  const auto root = Parser(text).parse();
  return Evaluator(text, scope).eval(*root);
}

}  // namespace ocb
