#include "cerl/text.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>
#include <vector>

namespace cerl {

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column),
      detail_(message) {}

// ---------------------------------------------------------------- printing

std::string print_atom(const std::string& name) {
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

std::string print_fun_id(const FunId& id) {
  return print_atom(id.name) + "/" + std::to_string(id.arity);
}

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string params_text(const std::vector<std::string>& params) { return join(params); }

std::string print_fun(const Fun& f) {
  return "fun " + print_fun_id(f.id) + "(" + params_text(f.params) + ") -> " + print(f.body) + " end";
}

// Lists are printed the same way whether they are built from values or from
// cons expressions; the parser produces cons expressions.
struct ListView {
  std::vector<std::string> items;
  std::optional<std::string> tail;
};

void collect_value_list(const Value& v, ListView& out) {
  const Value* cur = &v;
  while (const auto* c = cur->get_if<Cons>()) {
    out.items.push_back(print(c->head));
    cur = &c->tail;
  }
  if (!cur->is<Nil>()) out.tail = print(*cur);
}

void collect_expr_list(const Expr& e, ListView& out) {
  const Expr* cur = &e;
  while (const auto* c = cur->get_if<ConsE>()) {
    out.items.push_back(print(c->head));
    cur = &c->tail;
  }
  if (const Value* v = cur->as_value()) {
    collect_value_list(*v, out);
  } else {
    out.tail = print(*cur);
  }
}

std::string list_text(const ListView& l) {
  std::string out = "[" + join(l.items);
  if (l.tail) out += "|" + *l.tail;
  return out + "]";
}

std::string args_text(const std::vector<Expr>& args) {
  std::vector<std::string> parts;
  for (const auto& a : args) parts.push_back(print(a));
  return join(parts);
}

bool is_primary(const Expr& e) {
  return e.is<Val>() || e.is<Var>() || e.is<FunRef>() || e.is<ConsE>();
}

std::string callee_text(const Expr& e) {
  return is_primary(e) ? print(e) : "(" + print(e) + ")";
}

std::string callee_text(const Value& v) { return print(v); }

std::string clause_text(const Clause& c) { return print(c.pattern) + " -> " + print(c.body); }

}  // namespace

std::string print(const Value& v) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Integer>) {
          return x.str();
        } else if constexpr (std::is_same_v<T, Atom>) {
          return print_atom(x.name);
        } else if constexpr (std::is_same_v<T, Pid>) {
          return "#" + std::to_string(x.id);
        } else if constexpr (std::is_same_v<T, Nil>) {
          return "[]";
        } else if constexpr (std::is_same_v<T, Cons>) {
          ListView l;
          collect_value_list(v, l);
          return list_text(l);
        } else {
          return print_fun(x);
        }
      },
      v.variant());
}

std::string print(const Pattern& p) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Integer>) {
          return x.str();
        } else if constexpr (std::is_same_v<T, Atom>) {
          return print_atom(x.name);
        } else if constexpr (std::is_same_v<T, Pid>) {
          return "#" + std::to_string(x.id);
        } else if constexpr (std::is_same_v<T, Nil>) {
          return "[]";
        } else if constexpr (std::is_same_v<T, PVar>) {
          return x.name;
        } else {
          ListView l;
          const Pattern* cur = &p;
          while (const auto* c = cur->get_if<PCons>()) {
            l.items.push_back(print(c->head));
            cur = &c->tail;
          }
          if (!cur->get_if<Nil>()) l.tail = print(*cur);
          return list_text(l);
        }
      },
      p.variant());
}

std::string print(const Expr& e) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Val>) {
          return print(x.value);
        } else if constexpr (std::is_same_v<T, Var>) {
          return x.name;
        } else if constexpr (std::is_same_v<T, FunRef>) {
          return print_fun_id(x.id);
        } else if constexpr (std::is_same_v<T, Apply>) {
          return "apply " + callee_text(x.fn) + "(" + args_text(x.args) + ")";
        } else if constexpr (std::is_same_v<T, Call>) {
          return "call " + callee_text(x.fn) + "(" + args_text(x.args) + ")";
        } else if constexpr (std::is_same_v<T, Case>) {
          return "case " + print(x.scrutinee) + " of " + print(x.pattern) + " then " +
                 print(x.then_branch) + " else " + print(x.else_branch) + " end";
        } else if constexpr (std::is_same_v<T, Let>) {
          return "let " + x.var + " = " + print(x.bound) + " in " + print(x.body);
        } else if constexpr (std::is_same_v<T, ConsE>) {
          ListView l;
          collect_expr_list(e, l);
          return list_text(l);
        } else if constexpr (std::is_same_v<T, Letrec>) {
          return "letrec " + print_fun_id(x.id) + " = fun(" + params_text(x.params) + ") -> " +
                 print(x.fun_body) + " in " + print(x.body);
        } else {
          std::vector<std::string> parts;
          for (const auto& c : x.clauses) parts.push_back(clause_text(c));
          return "receive " + join(parts, "; ") + " end";
        }
      },
      e.variant());
}

namespace {

std::string holed_args(const std::vector<Value>& done, const std::vector<Expr>& todo) {
  std::vector<std::string> parts;
  for (const auto& v : done) parts.push_back(print(v));
  parts.push_back("□");
  for (const auto& e : todo) parts.push_back(print(e));
  return join(parts);
}

}  // namespace

std::string print_frame(const Frame& f) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CallFun>) {
          return "call □(" + args_text(x.args) + ")";
        } else if constexpr (std::is_same_v<T, CallArgs>) {
          return "call " + callee_text(x.fn) + "(" + holed_args(x.done, x.todo) + ")";
        } else if constexpr (std::is_same_v<T, ApplyFun>) {
          return "apply □(" + args_text(x.args) + ")";
        } else if constexpr (std::is_same_v<T, ApplyArgs>) {
          return "apply " + callee_text(x.fn) + "(" + holed_args(x.done, x.todo) + ")";
        } else if constexpr (std::is_same_v<T, LetFrame>) {
          return "let " + x.var + " = □ in " + print(x.body);
        } else if constexpr (std::is_same_v<T, CaseFrame>) {
          return "case □ of " + print(x.pattern) + " then " + print(x.then_branch) + " else " +
                 print(x.else_branch) + " end";
        } else if constexpr (std::is_same_v<T, ConsTail>) {
          return "[" + print(x.head) + "|□]";
        } else {
          return "[□|" + print(x.tail) + "]";
        }
      },
      f);
}

std::string print_signal(const Signal& s) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Message>) {
          return "msg " + print(x.value);
        } else if constexpr (std::is_same_v<T, ExitSignal>) {
          return std::string("exit(") + print(x.reason) + ", " + (x.link ? "tt" : "ff") + ")";
        } else if constexpr (std::is_same_v<T, LinkSignal>) {
          return "link";
        } else {
          return "unlink";
        }
      },
      s);
}

std::string print_action(const Action& a) {
  auto pid = [](Pid p) { return "#" + std::to_string(p.id); };
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SendAction>) {
          return "send " + pid(x.src) + " -> " + pid(x.dst) + ": " + print_signal(x.signal);
        } else if constexpr (std::is_same_v<T, ArriveAction>) {
          return "arrive " + pid(x.src) + " -> " + pid(x.dst) + ": " + print_signal(x.signal);
        } else if constexpr (std::is_same_v<T, ReceiveAction>) {
          return "receive " + print(x.value);
        } else if constexpr (std::is_same_v<T, SelfAction>) {
          return "self " + pid(x.pid);
        } else if constexpr (std::is_same_v<T, SpawnAction>) {
          return "spawn " + pid(x.pid) + " " + print(x.fn) + " " + print(x.args);
        } else if constexpr (std::is_same_v<T, TauAction>) {
          return "tau";
        } else if constexpr (std::is_same_v<T, TerminateAction>) {
          return "terminate";
        } else {
          return "flag";
        }
      },
      a);
}

std::string print_node(const Node& n) {
  auto pid = [](Pid p) { return "#" + std::to_string(p.id); };
  std::string out;
  for (const auto& [id, p] : n.pool) {
    out += pid(id);
    if (const auto* live = std::get_if<LiveProcess>(&p)) {
      out += " live\n  redex   " + print(live->redex) + "\n  stack  ";
      for (const auto& f : live->stack.frames()) out += " " + print_frame(f) + " ::";
      out += " Id\n  mailbox [";
      for (std::size_t i = 0; i < live->mailbox.size(); ++i) {
        out += (i ? ", " : "") + print(live->mailbox[i]);
      }
      out += "]\n  links   [";
      for (std::size_t i = 0; i < live->links.size(); ++i) out += (i ? ", " : "") + pid(live->links[i]);
      out += std::string("]\n  trap    ") + (live->trap_exit ? "true" : "false") + "\n";
    } else {
      out += " dead [";
      const auto& obs = std::get<DeadProcess>(p).obligations;
      for (std::size_t i = 0; i < obs.size(); ++i) {
        out += (i ? ", " : "") + pid(obs[i].first) + ": " + print(obs[i].second);
      }
      out += "]\n";
    }
  }
  for (const auto& [key, q] : n.ether.queues()) {
    out += "ether " + pid(key.first) + " -> " + pid(key.second) + ":";
    for (const auto& s : q) out += " " + print_signal(s) + ";";
    out.back() = '\n';
  }
  return out;
}

// ---------------------------------------------------------------- lexing

namespace {

enum class Tok {
  Int,
  Atom,
  Pid,
  Var,
  Keyword,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Bar,
  Semi,
  Arrow,
  Eq,
  Slash,
  End,
};

struct Token {
  Tok kind;
  std::string text;  // identifier, keyword, atom name or digits
  std::size_t line;
  std::size_t column;
};

const std::unordered_set<std::string_view> kKeywords = {
    "fun", "let", "in", "letrec", "apply", "call", "case", "of", "then", "else", "end", "receive"};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Int:
      return "integer " + t.text;
    case Tok::Atom:
      return "atom " + print_atom(t.text);
    case Tok::Pid:
      return "pid #" + t.text;
    case Tok::Var:
      return "variable " + t.text;
    case Tok::Keyword:
      return "'" + t.text + "'";
    case Tok::End:
      return "end of input";
    default:
      return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      const std::size_t line = line_;
      const std::size_t col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line, col});
        return out;
      }
      char c = src_[pos_];
      auto single = [&](Tok k) {
        advance();
        out.push_back({k, std::string(1, c), line, col});
      };
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '-' && pos_ + 1 < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        std::string digits(1, c);
        advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          digits += src_[pos_];
          advance();
        }
        out.push_back({Tok::Int, digits, line, col});
      } else if (c == '\'') {
        out.push_back({Tok::Atom, atom(line, col), line, col});
      } else if (c == '#') {
        advance();
        std::string digits;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          digits += src_[pos_];
          advance();
        }
        if (digits.empty()) throw ParseError(ParseError::Kind::Syntax, line, col, "expected digits after '#'");
        out.push_back({Tok::Pid, digits, line, col});
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          word += src_[pos_];
          advance();
        }
        if (kKeywords.contains(word)) {
          out.push_back({Tok::Keyword, word, line, col});
        } else if (std::isupper(static_cast<unsigned char>(word[0])) || word[0] == '_') {
          out.push_back({Tok::Var, word, line, col});
        } else {
          throw ParseError(ParseError::Kind::Syntax, line, col,
                           "unexpected identifier " + word + " (atoms are written 'quoted')");
        }
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        advance();
        advance();
        out.push_back({Tok::Arrow, "->", line, col});
      } else if (c == '(') {
        single(Tok::LParen);
      } else if (c == ')') {
        single(Tok::RParen);
      } else if (c == '[') {
        single(Tok::LBracket);
      } else if (c == ']') {
        single(Tok::RBracket);
      } else if (c == ',') {
        single(Tok::Comma);
      } else if (c == '|') {
        single(Tok::Bar);
      } else if (c == ';') {
        single(Tok::Semi);
      } else if (c == '=') {
        single(Tok::Eq);
      } else if (c == '/') {
        single(Tok::Slash);
      } else {
        throw ParseError(ParseError::Kind::Syntax, line, col,
                         std::string("unexpected character '") + c + "'");
      }
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string atom(std::size_t line, std::size_t col) {
    advance();  // opening quote
    std::string name;
    while (pos_ < src_.size() && src_[pos_] != '\'') {
      if (src_[pos_] == '\\') {
        advance();
        if (pos_ >= src_.size()) break;
      }
      name += src_[pos_];
      advance();
    }
    if (pos_ >= src_.size()) throw ParseError(ParseError::Kind::Syntax, line, col, "unterminated atom");
    advance();  // closing quote
    return name;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// ---------------------------------------------------------------- parsing

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  Expr whole_expr() {
    Expr e = expr();
    expect(Tok::End, "end of input");
    return e;
  }

  Pattern whole_pattern() {
    std::vector<std::string> vars;
    Pattern p = pattern(vars);
    expect(Tok::End, "end of input");
    return p;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_keyword(std::string_view kw) const {
    return peek().kind == Tok::Keyword && peek().text == kw;
  }

  [[noreturn]] void fail(const Token& t, const std::string& msg,
                         ParseError::Kind kind = ParseError::Kind::Syntax) const {
    throw ParseError(kind, t.line, t.column, msg);
  }

  const Token& expect(Tok k, const std::string& what) {
    if (!at(k)) fail(peek(), "expected " + what + ", found " + describe(peek()));
    return next();
  }
  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) {
      fail(peek(), "expected '" + std::string(kw) + "', found " + describe(peek()));
    }
    next();
  }

  // Scope: a stack of bound names, innermost last.
  bool bound(const Name& n) const { return std::find(scope_.begin(), scope_.end(), n) != scope_.end(); }
  struct Scoped {
    Parser& p;
    std::size_t mark;
    explicit Scoped(Parser& parser) : p(parser), mark(parser.scope_.size()) {}
    ~Scoped() { p.scope_.resize(mark); }
  };

  Integer integer(const Token& t) { return Integer(t.text); }

  Pid pid(const Token& t) {
    try {
      return Pid{std::stoull(t.text)};
    } catch (const std::exception&) {
      fail(t, "pid out of range");
    }
  }

  std::size_t arity(const Token& t) {
    try {
      return std::stoull(t.text);
    } catch (const std::exception&) {
      fail(t, "arity out of range");
    }
  }

  // 'f'/k
  FunId fun_id() {
    const Token& name = expect(Tok::Atom, "function name");
    expect(Tok::Slash, "'/'");
    const Token& k = expect(Tok::Int, "arity");
    if (k.text[0] == '-') fail(k, "arity must be non-negative");
    return FunId{name.text, arity(k)};
  }

  std::vector<std::string> params() {
    expect(Tok::LParen, "'('");
    std::vector<std::string> out;
    if (!at(Tok::RParen)) {
      for (;;) {
        const Token& v = expect(Tok::Var, "parameter variable");
        if (std::find(out.begin(), out.end(), v.text) != out.end()) {
          fail(v, "parameter " + v.text + " appears twice", ParseError::Kind::Linearity);
        }
        out.push_back(v.text);
        if (!at(Tok::Comma)) break;
        next();
      }
    }
    expect(Tok::RParen, "')'");
    return out;
  }

  std::vector<Expr> args() {
    expect(Tok::LParen, "'('");
    std::vector<Expr> out;
    if (!at(Tok::RParen)) {
      for (;;) {
        out.push_back(expr());
        if (!at(Tok::Comma)) break;
        next();
      }
    }
    expect(Tok::RParen, "')'");
    return out;
  }

  Expr expr() {
    const Token& t = peek();
    if (t.kind != Tok::Keyword || t.text == "fun") return primary();
    if (t.text == "let") {
      next();
      const Token& v = expect(Tok::Var, "variable");
      expect(Tok::Eq, "'='");
      Expr bound_expr = expr();
      expect_keyword("in");
      Scoped s(*this);
      scope_.emplace_back(v.text);
      return let(v.text, std::move(bound_expr), expr());
    }
    if (t.text == "letrec") {
      next();
      FunId id = fun_id();
      expect(Tok::Eq, "'='");
      expect_keyword("fun");
      const Token& at_params = peek();
      auto ps = params();
      if (ps.size() != id.arity) {
        fail(at_params, "function " + print_fun_id(id) + " takes " + std::to_string(ps.size()) +
                            " parameters");
      }
      expect(Tok::Arrow, "'->'");
      Scoped s(*this);
      scope_.emplace_back(id);
      Expr fun_body;
      {
        Scoped inner(*this);
        for (const auto& p : ps) scope_.emplace_back(p);
        fun_body = expr();
      }
      if (at_keyword("end")) next();
      expect_keyword("in");
      return letrec(id, std::move(ps), std::move(fun_body), expr());
    }
    if (t.text == "apply" || t.text == "call") {
      const bool is_apply = t.text == "apply";
      next();
      Expr fn = primary();
      auto as = args();
      return is_apply ? apply(std::move(fn), std::move(as)) : call(std::move(fn), std::move(as));
    }
    if (t.text == "case") {
      next();
      Expr scrutinee = expr();
      expect_keyword("of");
      std::vector<std::string> vars;
      Pattern p = pattern(vars);
      expect_keyword("then");
      Expr then_branch;
      {
        Scoped s(*this);
        for (const auto& v : vars) scope_.emplace_back(v);
        then_branch = expr();
      }
      expect_keyword("else");
      Expr else_branch = expr();
      expect_keyword("end");
      return case_of(std::move(scrutinee), std::move(p), std::move(then_branch),
                     std::move(else_branch));
    }
    if (t.text == "receive") {
      next();
      std::vector<Clause> clauses;
      for (;;) {
        std::vector<std::string> vars;
        Pattern p = pattern(vars);
        expect(Tok::Arrow, "'->'");
        Scoped s(*this);
        for (const auto& v : vars) scope_.emplace_back(v);
        clauses.push_back({std::move(p), expr()});
        if (!at(Tok::Semi)) break;
        next();
      }
      expect_keyword("end");
      return receive(std::move(clauses));
    }
    fail(t, "unexpected " + describe(t));
  }

  Expr primary() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Int:
        return val(Value::integer(integer(t)));
      case Tok::Pid:
        return val(Value::pid(pid(t)));
      case Tok::Atom: {
        if (!at(Tok::Slash)) return val(Value::atom(t.text));
        next();
        const Token& k = expect(Tok::Int, "arity");
        if (k.text[0] == '-') fail(k, "arity must be non-negative");
        FunId id{t.text, arity(k)};
        if (!bound(Name{id})) fail(t, "unbound function " + print_fun_id(id), ParseError::Kind::Scope);
        return fun_ref(id);
      }
      case Tok::Var:
        if (!bound(Name{t.text})) fail(t, "unbound variable " + t.text, ParseError::Kind::Scope);
        return var(t.text);
      case Tok::LBracket:
        return list_rest();
      case Tok::LParen: {
        Expr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Keyword:
        if (t.text == "fun") return fun_literal();
        [[fallthrough]];
      default:
        fail(t, "unexpected " + describe(t));
    }
  }

  Expr list_rest() {
    if (at(Tok::RBracket)) {
      next();
      return val(Value::nil());
    }
    std::vector<Expr> items{expr()};
    while (at(Tok::Comma)) {
      next();
      items.push_back(expr());
    }
    Expr tail = val(Value::nil());
    if (at(Tok::Bar)) {
      next();
      tail = expr();
    }
    expect(Tok::RBracket, "']'");
    for (auto it = items.rbegin(); it != items.rend(); ++it) tail = cons(*it, tail);
    return tail;
  }

  Expr fun_literal() {
    FunId id;
    bool named = at(Tok::Atom);
    if (named) id = fun_id();
    const Token& at_params = peek();
    auto ps = params();
    if (!named) {
      id = FunId{"-fun-" + std::to_string(anonymous_++) + "-", ps.size()};
    } else if (ps.size() != id.arity) {
      fail(at_params, "function " + print_fun_id(id) + " takes " + std::to_string(ps.size()) +
                          " parameters");
    }
    expect(Tok::Arrow, "'->'");
    Scoped s(*this);
    scope_.emplace_back(id);
    for (const auto& p : ps) scope_.emplace_back(p);
    Expr body = expr();
    expect_keyword("end");
    return val(Value::fun(id, std::move(ps), std::move(body)));
  }

  Pattern pattern(std::vector<std::string>& vars) {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Int:
        return Pattern::integer(integer(t));
      case Tok::Atom:
        return Pattern::atom(t.text);
      case Tok::Pid:
        return Pattern::pid(pid(t));
      case Tok::Var:
        if (std::find(vars.begin(), vars.end(), t.text) != vars.end()) {
          fail(t, "variable " + t.text + " appears twice in a pattern", ParseError::Kind::Linearity);
        }
        vars.push_back(t.text);
        return Pattern::var(t.text);
      case Tok::LBracket: {
        if (at(Tok::RBracket)) {
          next();
          return Pattern::nil();
        }
        std::vector<Pattern> items{pattern(vars)};
        while (at(Tok::Comma)) {
          next();
          items.push_back(pattern(vars));
        }
        Pattern tail = Pattern::nil();
        if (at(Tok::Bar)) {
          next();
          tail = pattern(vars);
        }
        expect(Tok::RBracket, "']'");
        for (auto it = items.rbegin(); it != items.rend(); ++it) tail = Pattern::cons(*it, tail);
        return tail;
      }
      default:
        fail(t, "expected a pattern, found " + describe(t));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Name> scope_;
  std::size_t anonymous_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view src) { return Parser(src).whole_expr(); }

Pattern parse_pattern(std::string_view src) { return Parser(src).whole_pattern(); }

std::optional<Value> expr_to_value(const Expr& e) {
  if (const Value* v = e.as_value()) return *v;
  if (const auto* c = e.get_if<ConsE>()) {
    auto head = expr_to_value(c->head);
    if (!head) return std::nullopt;
    auto tail = expr_to_value(c->tail);
    if (!tail) return std::nullopt;
    return Value::cons(std::move(*head), std::move(*tail));
  }
  return std::nullopt;
}

Value parse_value(std::string_view src) {
  Expr e = parse_expr(src);
  auto v = expr_to_value(e);
  if (!v) throw ParseError(ParseError::Kind::Syntax, 1, 1, "expected a value, found " + print(e));
  return *v;
}

}  // namespace cerl
