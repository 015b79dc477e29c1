#include "qsetk/dsl.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "qsetk/checker.hpp"
#include "qsetk/counting.hpp"

namespace qsetk::dsl {

using nlohmann::json;

// -------------------------------------------------------------------- lexer

namespace {

enum class Tok {
  KwKind, KwMatom, KwLet, KwQcard, KwChains, KwFin, KwPrint, KwCheck, KwPow, KwOne,
  Ident, Number, Flag,
  LBrace, RBrace, LParen, RParen, Comma, Semi, Eq, Pipe, Amp, Backslash, Star,
  End,
};

struct Lexeme {
  Tok type;
  std::string text;
  Nat value = 0;
  int line = 1;
  int col = 1;
};

std::string describe(const Lexeme& l) {
  switch (l.type) {
    case Tok::Ident: return "identifier '" + l.text + "'";
    case Tok::Number: return "number " + l.text;
    case Tok::Flag: return "flag '--" + l.text + "'";
    case Tok::End: return "end of input";
    default: return "'" + l.text + "'";
  }
}

[[noreturn]] void syntax_error(int line, int col, const std::string& message) {
  throw Error(ErrorCode::SyntaxError,
              std::to_string(line) + ":" + std::to_string(col) + ": " + message);
}

const std::map<std::string, Tok>& keyword_map() {
  static const std::map<std::string, Tok> kw = {
      {"kind", Tok::KwKind},   {"matom", Tok::KwMatom}, {"let", Tok::KwLet},
      {"qcard", Tok::KwQcard}, {"chains", Tok::KwChains}, {"fin", Tok::KwFin},
      {"print", Tok::KwPrint}, {"check", Tok::KwCheck}, {"pow", Tok::KwPow},
      {"one", Tok::KwOne},
  };
  return kw;
}

std::vector<Lexeme> lex(const std::string& src) {
  std::vector<Lexeme> out;
  std::size_t pos = 0;
  int line = 1, col = 1;
  auto push = [&](Tok t, std::string text, int l, int c, Nat value = 0) {
    out.push_back(Lexeme{t, std::move(text), value, l, c});
  };
  while (pos < src.size()) {
    const char ch = src[pos];
    if (ch == '\n') {
      ++pos; ++line; col = 1;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++pos; ++col;
      continue;
    }
    const int l = line, c = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string word;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
        word += src[pos++]; ++col;
      }
      auto kw = keyword_map().find(word);
      if (kw != keyword_map().end()) push(kw->second, word, l, c);
      else push(Tok::Ident, word, l, c);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string digits;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
        digits += src[pos++]; ++col;
      }
      try {
        push(Tok::Number, digits, l, c, std::stoull(digits));
      } catch (const std::out_of_range&) {
        syntax_error(l, c, "number " + digits + " is too large");
      }
      continue;
    }
    if (ch == '-' && pos + 1 < src.size() && src[pos + 1] == '-') {
      pos += 2; col += 2;
      std::string name;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '-')) {
        name += src[pos++]; ++col;
      }
      if (name.empty()) syntax_error(l, c, "empty flag name");
      push(Tok::Flag, name, l, c);
      continue;
    }
    Tok t;
    switch (ch) {
      case '{': t = Tok::LBrace; break;
      case '}': t = Tok::RBrace; break;
      case '(': t = Tok::LParen; break;
      case ')': t = Tok::RParen; break;
      case ',': t = Tok::Comma; break;
      case ';': t = Tok::Semi; break;
      case '=': t = Tok::Eq; break;
      case '|': t = Tok::Pipe; break;
      case '&': t = Tok::Amp; break;
      case '\\': t = Tok::Backslash; break;
      case '*': t = Tok::Star; break;
      default:
        syntax_error(l, c, std::string("unexpected character '") + ch + "'");
    }
    push(t, std::string(1, ch), l, c);
    ++pos; ++col;
  }
  out.push_back(Lexeme{Tok::End, "", 0, line, col});
  return out;
}

// ------------------------------------------------------------------- parser

struct Parser {
  std::vector<Lexeme> toks;
  std::size_t i = 0;

  const Lexeme& peek() const { return toks[i]; }
  const Lexeme& advance() { return toks[i++]; }
  bool at(Tok t) const { return peek().type == t; }

  [[noreturn]] void fail(const std::string& expected) {
    const Lexeme& l = peek();
    syntax_error(l.line, l.col, "expected " + expected + ", got " + describe(l));
  }

  Lexeme expect(Tok t, const std::string& what) {
    if (!at(t)) fail(what);
    return advance();
  }

  Program parse_program() {
    Program p;
    while (!at(Tok::End)) p.stmts.push_back(parse_stmt());
    return p;
  }

  Stmt parse_stmt() {
    switch (peek().type) {
      case Tok::KwKind: {
        advance();
        auto name = expect(Tok::Ident, "a kind name");
        auto pool = expect(Tok::Number, "a pool size");
        expect(Tok::Semi, "';'");
        return KindDecl{name.text, pool.value};
      }
      case Tok::KwMatom: {
        advance();
        auto name = expect(Tok::Ident, "an element name");
        expect(Tok::Semi, "';'");
        return MAtomDecl{name.text};
      }
      case Tok::KwLet: {
        advance();
        auto name = expect(Tok::Ident, "a binding name");
        expect(Tok::Eq, "'='");
        auto e = parse_expr();
        expect(Tok::Semi, "';'");
        return Let{name.text, e};
      }
      case Tok::KwQcard: return parse_query(Query::Op::Qcard);
      case Tok::KwChains: return parse_query(Query::Op::Chains);
      case Tok::KwFin: return parse_query(Query::Op::Fin);
      case Tok::KwPrint: return parse_query(Query::Op::Print);
      case Tok::KwCheck: {
        advance();
        auto target = expect(Tok::Ident, "a check target");
        Check chk{target.text, {}};
        while (at(Tok::Flag)) {
          auto flag = advance();
          std::optional<Nat> value;
          if (at(Tok::Number)) value = advance().value;
          chk.flags.push_back(CheckFlag{flag.text, value});
        }
        expect(Tok::Semi, "';'");
        return chk;
      }
      default:
        fail("a statement");
    }
  }

  Stmt parse_query(Query::Op op) {
    advance();
    auto e = parse_expr();
    expect(Tok::Semi, "';'");
    return Query{op, e};
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_tight();
    while (at(Tok::Pipe)) {
      advance();
      ExprPtr rhs = parse_tight();
      lhs = std::make_shared<ExprNode>(ExprNode{Union{lhs, rhs}});
    }
    return lhs;
  }

  ExprPtr parse_tight() {
    ExprPtr lhs = parse_atom();
    while (at(Tok::Amp) || at(Tok::Backslash)) {
      bool inter = at(Tok::Amp);
      advance();
      ExprPtr rhs = parse_atom();
      if (inter) lhs = std::make_shared<ExprNode>(ExprNode{Intersect{lhs, rhs}});
      else lhs = std::make_shared<ExprNode>(ExprNode{Diff{lhs, rhs}});
    }
    return lhs;
  }

  ExprPtr parse_atom() {
    switch (peek().type) {
      case Tok::LBrace: {
        advance();
        Literal lit;
        if (at(Tok::RBrace)) {
          advance();
          return std::make_shared<ExprNode>(ExprNode{std::move(lit)});
        }
        while (true) {
          auto name = expect(Tok::Ident, "an element name");
          LitElem elem{name.text, std::nullopt};
          if (at(Tok::Star)) {
            advance();
            elem.mult = expect(Tok::Number, "a multiplicity").value;
          }
          lit.elems.push_back(std::move(elem));
          if (at(Tok::Comma)) {
            advance();
            continue;
          }
          expect(Tok::RBrace, "',' or '}'");
          break;
        }
        return std::make_shared<ExprNode>(ExprNode{std::move(lit)});
      }
      case Tok::Ident: {
        auto name = advance();
        return std::make_shared<ExprNode>(ExprNode{Ident{name.text}});
      }
      case Tok::KwPow: {
        advance();
        expect(Tok::LParen, "'('");
        auto arg = parse_expr();
        expect(Tok::RParen, "')'");
        return std::make_shared<ExprNode>(ExprNode{Pow{arg}});
      }
      case Tok::KwOne: {
        advance();
        expect(Tok::LParen, "'('");
        auto arg = parse_expr();
        expect(Tok::Comma, "','");
        auto kind = expect(Tok::Ident, "a kind name");
        expect(Tok::RParen, "')'");
        return std::make_shared<ExprNode>(ExprNode{SingletonOf{arg, kind.text}});
      }
      case Tok::LParen: {
        advance();
        auto e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      default:
        fail("an expression");
    }
  }
};

}  // namespace

Program parse(const std::string& text) {
  Parser p{lex(text)};
  return p.parse_program();
}

ExprPtr parse_expr_only(const std::string& text) {
  Parser p{lex(text)};
  ExprPtr e = p.parse_expr();
  if (!p.at(Tok::End)) p.fail("end of input");
  return e;
}

// ------------------------------------------------------------ pretty print

namespace {

void print_expr(std::string& out, const ExprPtr& e, int min_prec) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Literal>) {
          out += "{";
          for (std::size_t i = 0; i < node.elems.size(); ++i) {
            if (i) out += ", ";
            out += node.elems[i].ident;
            if (node.elems[i].mult) out += "*" + std::to_string(*node.elems[i].mult);
          }
          out += "}";
        } else if constexpr (std::is_same_v<T, Ident>) {
          out += node.name;
        } else if constexpr (std::is_same_v<T, Union>) {
          if (min_prec > 0) out += "(";
          print_expr(out, node.lhs, 0);
          out += " | ";
          print_expr(out, node.rhs, 1);
          if (min_prec > 0) out += ")";
        } else if constexpr (std::is_same_v<T, Intersect> || std::is_same_v<T, Diff>) {
          if (min_prec > 1) out += "(";
          print_expr(out, node.lhs, 1);
          out += std::is_same_v<T, Intersect> ? " & " : " \\ ";
          print_expr(out, node.rhs, 2);
          if (min_prec > 1) out += ")";
        } else if constexpr (std::is_same_v<T, Pow>) {
          out += "pow(";
          print_expr(out, node.arg, 0);
          out += ")";
        } else if constexpr (std::is_same_v<T, SingletonOf>) {
          out += "one(";
          print_expr(out, node.arg, 0);
          out += ", " + node.kind + ")";
        }
      },
      e->node);
}

}  // namespace

std::string pretty_print(const ExprPtr& e) {
  std::string out;
  print_expr(out, e, 0);
  return out;
}

std::string pretty_print(const Stmt& s) {
  return std::visit(
      [](const auto& stmt) -> std::string {
        using T = std::decay_t<decltype(stmt)>;
        if constexpr (std::is_same_v<T, KindDecl>) {
          return "kind " + stmt.name + " " + std::to_string(stmt.pool) + ";";
        } else if constexpr (std::is_same_v<T, MAtomDecl>) {
          return "matom " + stmt.name + ";";
        } else if constexpr (std::is_same_v<T, Let>) {
          return "let " + stmt.name + " = " + pretty_print(stmt.expr) + ";";
        } else if constexpr (std::is_same_v<T, Query>) {
          std::string op;
          switch (stmt.op) {
            case Query::Op::Qcard: op = "qcard"; break;
            case Query::Op::Chains: op = "chains"; break;
            case Query::Op::Fin: op = "fin"; break;
            case Query::Op::Print: op = "print"; break;
          }
          return op + " " + pretty_print(stmt.expr) + ";";
        } else {
          std::string out = "check " + stmt.target;
          for (const auto& f : stmt.flags) {
            out += " --" + f.name;
            if (f.value) out += " " + std::to_string(*f.value);
          }
          return out + ";";
        }
      },
      s);
}

std::string pretty_print(const Program& p) {
  std::string out;
  for (const auto& s : p.stmts) {
    if (!out.empty()) out += "\n";
    out += pretty_print(s);
  }
  return out;
}

// ---------------------------------------------------------------- equality

bool equals(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, Literal>) {
          return x.elems == y.elems;
        } else if constexpr (std::is_same_v<T, Ident>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Union> || std::is_same_v<T, Intersect> ||
                             std::is_same_v<T, Diff>) {
          return equals(x.lhs, y.lhs) && equals(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, Pow>) {
          return equals(x.arg, y.arg);
        } else {
          return x.kind == y.kind && equals(x.arg, y.arg);
        }
      },
      a->node);
}

bool equals(const Stmt& a, const Stmt& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, KindDecl>) {
          return x.name == y.name && x.pool == y.pool;
        } else if constexpr (std::is_same_v<T, MAtomDecl>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Let>) {
          return x.name == y.name && equals(x.expr, y.expr);
        } else if constexpr (std::is_same_v<T, Query>) {
          return x.op == y.op && equals(x.expr, y.expr);
        } else {
          return x.target == y.target && x.flags == y.flags;
        }
      },
      a);
}

bool equals(const Program& a, const Program& b) {
  if (a.stmts.size() != b.stmts.size()) return false;
  for (std::size_t i = 0; i < a.stmts.size(); ++i)
    if (!equals(a.stmts[i], b.stmts[i])) return false;
  return true;
}

// -------------------------------------------------------------- environment

namespace {

void rebuild_universe(Env& env) {
  std::vector<ClassicalElem> atoms;
  for (const auto& m : env.matoms) atoms.push_back(ClassicalElem::atom(m));
  UniversePtr next = make_universe(env.kinds, std::move(atoms));
  for (auto& [name, qset] : env.bindings) qset = rebind(qset, next);
  env.universe = next;
}

}  // namespace

Env::Env() { universe = make_universe({}, {}); }

void Env::set_seed(Nat n) {
  seed = n;
  rng.seed(n);
}

bool Env::is_kind(const std::string& name) const {
  return std::any_of(kinds.begin(), kinds.end(),
                     [&](const KindSpec& k) { return k.label == name; });
}

bool Env::is_matom(const std::string& name) const {
  return std::find(matoms.begin(), matoms.end(), name) != matoms.end();
}

void Env::declare_kind(const std::string& name, Nat pool) {
  if (is_kind(name) || is_matom(name))
    throw Error(ErrorCode::DuplicateKind, "name already declared: " + name);
  kinds.push_back(KindSpec{name, pool, ""});
  rebuild_universe(*this);
}

void Env::declare_matom(const std::string& name) {
  if (is_kind(name) || is_matom(name))
    throw Error(ErrorCode::DuplicateKind, "name already declared: " + name);
  matoms.push_back(name);
  rebuild_universe(*this);
}

// -------------------------------------------------------------- evaluation

Qset eval_expr(const ExprPtr& e, Env& env) {
  return std::visit(
      [&](const auto& node) -> Qset {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Literal>) {
          QsetSpec spec;
          for (const auto& elem : node.elems) {
            const Nat mult = elem.mult.value_or(1);
            if (env.is_kind(elem.ident)) {
              spec.matoms.emplace_back(elem.ident, mult);
            } else if (env.is_matom(elem.ident)) {
              if (mult > 1)
                throw Error(ErrorCode::EvalError,
                            "classical element " + elem.ident +
                                " cannot carry multiplicity " + std::to_string(mult));
              if (mult == 1) spec.classical.push_back(ClassicalElem::atom(elem.ident));
            } else {
              throw Error(ErrorCode::EvalError,
                          "undeclared element name " + elem.ident);
            }
          }
          return make_qset(env.universe, spec);
        } else if constexpr (std::is_same_v<T, Ident>) {
          auto it = env.bindings.find(node.name);
          if (it == env.bindings.end())
            throw Error(ErrorCode::UnboundIdent, "no binding named " + node.name);
          return it->second;
        } else if constexpr (std::is_same_v<T, Union>) {
          return qset_union(eval_expr(node.lhs, env), eval_expr(node.rhs, env));
        } else if constexpr (std::is_same_v<T, Intersect>) {
          return qset_intersection(eval_expr(node.lhs, env), eval_expr(node.rhs, env));
        } else if constexpr (std::is_same_v<T, Diff>) {
          return qset_difference(eval_expr(node.lhs, env), eval_expr(node.rhs, env));
        } else if constexpr (std::is_same_v<T, Pow>) {
          return powerset(eval_expr(node.arg, env));
        } else {
          Qset x = eval_expr(node.arg, env);
          if (env.is_matom(node.kind))
            return singleton(x, ClassicalElem::atom(node.kind));
          if (!env.is_kind(node.kind))
            throw Error(ErrorCode::EvalError, "undeclared name " + node.kind);
          const std::size_t k = env.universe->find_kind(node.kind);
          std::vector<qsetk::Token> candidates;
          for (const auto& t : x.tokens())
            if (t.kind == k) candidates.push_back(t);
          if (candidates.empty())
            throw Error(ErrorCode::NotMember, "no m-atom of kind " + node.kind);
          const auto& chosen = candidates[env.rng() % candidates.size()];
          return Qset::from_parts(x.universe(), {chosen}, {}, {});
        }
      },
      e->node);
}

namespace {

Bounds bounds_from_flags(const std::vector<CheckFlag>& flags, bool& symmetry) {
  Bounds b;
  for (const auto& f : flags) {
    if (f.name == "no-symmetry") {
      symmetry = false;
      continue;
    }
    if (!f.value)
      throw Error(ErrorCode::EvalError, "flag --" + f.name + " needs a value");
    if (f.name == "max-kinds") b.max_kinds = *f.value;
    else if (f.name == "max-atoms") b.max_total_matoms = *f.value;
    else if (f.name == "max-classical") b.max_classical = *f.value;
    else if (f.name == "max-nesting") b.max_nesting = *f.value;
    else if (f.name == "pow-cap") b.powerset_card_cap = *f.value;
    else throw Error(ErrorCode::EvalError, "unknown flag --" + f.name);
  }
  return b;
}

void exec_check(const Check& chk, const Sink& sink) {
  bool symmetry = true;
  Bounds b = bounds_from_flags(chk.flags, symmetry);
  std::vector<std::string> known = {"H1", "H2"};
  for (const auto& id : theorem_ids()) known.push_back(id);
  if (chk.target != "all" &&
      std::find(known.begin(), known.end(), chk.target) == known.end())
    throw Error(ErrorCode::UnknownTheorem, "no theorem named " + chk.target);
  CheckOptions opts;
  opts.kind_symmetry = symmetry;
  Report report = run_suite(b, opts);
  json payload;
  if (chk.target == "all") {
    payload = report_json(report);
  } else {
    for (const auto& v : report.verdicts)
      if (v.id == chk.target) payload = verdict_json(v);
  }
  if (sink.json)
    *sink.out << json{{"stmt", "check"}, {"target", chk.target}, {"result", payload}}
                     .dump()
              << "\n";
  else
    *sink.out << payload.dump() << "\n";
}

}  // namespace

void exec_stmt(const Stmt& s, Env& env, const Sink& sink) {
  std::ostream& out = *sink.out;
  std::visit(
      [&](const auto& stmt) {
        using T = std::decay_t<decltype(stmt)>;
        if constexpr (std::is_same_v<T, KindDecl>) {
          env.declare_kind(stmt.name, stmt.pool);
          if (sink.json)
            out << json{{"stmt", "kind"}, {"name", stmt.name}, {"pool", stmt.pool}}.dump()
                << "\n";
          else if (sink.echo)
            out << "kind " << stmt.name << " with pool " << stmt.pool << "\n";
        } else if constexpr (std::is_same_v<T, MAtomDecl>) {
          env.declare_matom(stmt.name);
          if (sink.json)
            out << json{{"stmt", "matom"}, {"name", stmt.name}}.dump() << "\n";
          else if (sink.echo)
            out << "matom " << stmt.name << "\n";
        } else if constexpr (std::is_same_v<T, Let>) {
          Qset value = eval_expr(stmt.expr, env);
          env.bindings.insert_or_assign(stmt.name, value);
          if (sink.json)
            out << json{{"stmt", "let"},
                        {"name", stmt.name},
                        {"value", value.canonical_form()}}
                       .dump()
                << "\n";
          else if (sink.echo)
            out << stmt.name << " = " << value.canonical_form() << "\n";
        } else if constexpr (std::is_same_v<T, Query>) {
          Qset x = eval_expr(stmt.expr, env);
          switch (stmt.op) {
            case Query::Op::Qcard: {
              QcardResult r = qcard(x);
              if (sink.json) {
                json j{{"stmt", "qcard"}};
                if (r.defined) j["value"] = r.value;
                else { j["value"] = nullptr; j["reason"] = r.reason; }
                out << j.dump() << "\n";
              } else if (r.defined) {
                out << r.value << "\n";
              } else {
                out << "undefined (" << r.reason << ")\n";
              }
              break;
            }
            case Query::Op::Fin: {
              bool fin = is_finite(x);
              if (sink.json) out << json{{"stmt", "fin"}, {"value", fin}}.dump() << "\n";
              else out << (fin ? "true" : "false") << "\n";
              break;
            }
            case Query::Op::Print: {
              if (sink.json)
                out << json{{"stmt", "print"}, {"value", x.canonical_form()}}.dump()
                    << "\n";
              else
                out << x.canonical_form() << "\n";
              break;
            }
            case Query::Op::Chains: {
              auto family = descendant_chains(x);
              struct Cls {
                std::string display;
                Nat count;
                std::vector<std::string> forms;
              };
              std::vector<Cls> classes;
              for (const auto& ch : family) {
                std::string d = chain_display(ch);
                if (!classes.empty() && classes.back().display == d)
                  ++classes.back().count;
                else
                  classes.push_back(Cls{std::move(d), 1, chain_forms(ch)});
              }
              if (sink.json) {
                json arr = json::array();
                for (const auto& cls : classes)
                  arr.push_back(json{{"members", cls.forms}, {"count", cls.count}});
                out << json{{"stmt", "chains"},
                            {"total", family.size()},
                            {"classes", arr}}
                           .dump()
                    << "\n";
              } else {
                for (const auto& cls : classes)
                  out << cls.display << "  [" << cls.count
                      << (cls.count == 1 ? " chain]" : " chains]") << "\n";
              }
              break;
            }
          }
        } else {
          exec_check(stmt, sink);
        }
      },
      s);
}

int run_program(const std::string& text, Env& env, std::ostream& out,
                std::ostream& err, bool json_mode) {
  Program program;
  try {
    program = parse(text);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }
  Sink sink{&out, json_mode, false};
  for (const auto& s : program.stmts) {
    try {
      exec_stmt(s, env, sink);
    } catch (const Error& e) {
      err << e.what() << "\n";
      return 1;
    }
  }
  return 0;
}

// --------------------------------------------------------------------- repl

namespace {

std::string trimmed(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void repl(std::istream& in, std::ostream& out) {
  Env env;
  Sink sink{&out, false, true};
  std::string raw;
  while (true) {
    out << "qsetk> " << std::flush;
    if (!std::getline(in, raw)) {
      out << "\n";
      return;
    }
    const std::string line = trimmed(raw);
    if (line.empty()) continue;
    if (line[0] == ':') {
      if (line == ":quit" || line == ":q") return;
      if (line == ":env") {
        out << universe_display(*env.universe) << "\n";
        for (const auto& [name, value] : env.bindings)
          out << name << " = " << value.canonical_form() << "\n";
        continue;
      }
      if (line.rfind(":seed", 0) == 0) {
        std::istringstream rest(line.substr(5));
        Nat n = 0;
        if (rest >> n) {
          env.set_seed(n);
          out << "seed " << n << "\n";
        } else {
          out << "usage: :seed N\n";
        }
        continue;
      }
      out << "unknown meta-command " << line << " (try :quit, :env, :seed N)\n";
      continue;
    }
    try {
      Program program = parse(line);
      for (const auto& s : program.stmts) exec_stmt(s, env, sink);
    } catch (const Error& outer) {
      if (outer.code() == ErrorCode::SyntaxError) {
        try {
          ExprPtr e = parse_expr_only(line);
          out << eval_expr(e, env).canonical_form() << "\n";
          continue;
        } catch (const Error&) {
        }
      }
      out << outer.what() << "\n";
    }
  }
}

}  // namespace qsetk::dsl
