#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <random>

#include "qsetk/core.hpp"

namespace qsetk::dsl {

// ----------------------------------------------------------------- ast

struct ExprNode;
using ExprPtr = std::shared_ptr<ExprNode>;

// `e` and `e*1` are distinct parse results and round-trip as written.
struct LitElem {
  std::string ident;
  std::optional<Nat> mult;
  bool operator==(const LitElem&) const = default;
};

struct Literal {
  std::vector<LitElem> elems;
};
struct Ident {
  std::string name;
};
struct Union {
  ExprPtr lhs, rhs;
};
struct Intersect {
  ExprPtr lhs, rhs;
};
struct Diff {
  ExprPtr lhs, rhs;
};
struct Pow {
  ExprPtr arg;
};
struct SingletonOf {
  ExprPtr arg;
  std::string kind;
};

struct ExprNode {
  std::variant<Literal, Ident, Union, Intersect, Diff, Pow, SingletonOf> node;
};

struct KindDecl {
  std::string name;
  Nat pool = 0;
};
struct MAtomDecl {
  std::string name;
};
struct Let {
  std::string name;
  ExprPtr expr;
};
struct Query {
  enum class Op { Qcard, Chains, Fin, Print } op;
  ExprPtr expr;
};
struct CheckFlag {
  std::string name;
  std::optional<Nat> value;
  bool operator==(const CheckFlag&) const = default;
};
struct Check {
  std::string target;
  std::vector<CheckFlag> flags;
};

using Stmt = std::variant<KindDecl, MAtomDecl, Let, Query, Check>;

struct Program {
  std::vector<Stmt> stmts;
};

Program parse(const std::string& text);
ExprPtr parse_expr_only(const std::string& text);

std::string pretty_print(const Program& p);
std::string pretty_print(const Stmt& s);
std::string pretty_print(const ExprPtr& e);

bool equals(const ExprPtr& a, const ExprPtr& b);
bool equals(const Stmt& a, const Stmt& b);
bool equals(const Program& a, const Program& b);

// ----------------------------------------------------------------- eval

struct Env {
  std::vector<KindSpec> kinds;
  std::vector<std::string> matoms;
  UniversePtr universe;
  std::map<std::string, Qset> bindings;
  std::mt19937_64 rng{0};
  Nat seed = 0;

  Env();
  void set_seed(Nat n);
  void declare_kind(const std::string& name, Nat pool);
  void declare_matom(const std::string& name);
  bool is_kind(const std::string& name) const;
  bool is_matom(const std::string& name) const;
};

struct Sink {
  std::ostream* out = nullptr;
  bool json = false;
  bool echo = false;  // REPL mode: declarations and lets respond too
};

Qset eval_expr(const ExprPtr& e, Env& env);
void exec_stmt(const Stmt& s, Env& env, const Sink& sink);

// Exit code 0, or 1 after an evaluation error, or 2 after a syntax error.
int run_program(const std::string& text, Env& env, std::ostream& out,
                std::ostream& err, bool json);

void repl(std::istream& in, std::ostream& out);

}  // namespace qsetk::dsl
