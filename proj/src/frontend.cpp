#include "ccx/frontend.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace ccx {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

// --------------------------------------------------------------------- lexer

enum class Tok { Ident, Var, LParen, RParen, Comma, Dot, Eq, Neq, Not, Or, Other, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1, column = 1;
};

class Lexer {
 public:
  Lexer(std::string_view text, std::size_t line = 1) : text_(text), line_(line) { advance(); }

  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    advance();
    return t;
  }
  Token expect(Tok kind, const char* what) {
    if (current_.kind != kind) fail(std::string("expected ") + what);
    return take();
  }
  [[noreturn]] void fail(const std::string& what) const {
    const std::string near = current_.kind == Tok::End ? "end of input" : "'" + current_.text + "'";
    throw ParseError(what + " near " + near, current_.line, current_.column);
  }

 private:
  char at(std::size_t k = 0) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }
  void bump() {
    if (at() == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    for (;;) {
      if (std::isspace(static_cast<unsigned char>(at()))) {
        bump();
      } else if (at() == '%' || at() == '#') {
        while (at() != '\n' && at() != '\0') bump();
      } else if (at() == '/' && at(1) == '*') {
        const std::size_t l = line_, c = col_;
        bump();
        bump();
        while (!(at() == '*' && at(1) == '/')) {
          if (at() == '\0') throw ParseError("unterminated comment", l, c);
          bump();
        }
        bump();
        bump();
      } else {
        return;
      }
    }
  }

  void advance() {
    skip_blank();
    current_ = Token{Tok::End, "", line_, col_};
    const char c = at();
    if (c == '\0') return;
    auto word = [&] {
      while (std::isalnum(static_cast<unsigned char>(at())) || at() == '_') {
        current_.text += at();
        bump();
      }
    };
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      current_.kind = Tok::Var;
      word();
    } else if (std::isalnum(static_cast<unsigned char>(c))) {
      current_.kind = Tok::Ident;
      word();
    } else if (c == '\'') {
      current_.kind = Tok::Ident;
      current_.text += c;
      bump();
      while (at() != '\'') {
        if (at() == '\0' || at() == '\n')
          throw ParseError("unterminated quoted name", current_.line, current_.column);
        if (at() == '\\') {
          current_.text += at();
          bump();
        }
        current_.text += at();
        bump();
      }
      current_.text += at();
      bump();
    } else if (c == '!' && at(1) == '=') {
      current_ = {Tok::Neq, "!=", line_, col_};
      bump();
      bump();
    } else {
      static const std::map<char, Tok> single = {{'(', Tok::LParen}, {')', Tok::RParen},
                                                 {',', Tok::Comma},  {'.', Tok::Dot},
                                                 {'=', Tok::Eq},     {'~', Tok::Not},
                                                 {'|', Tok::Or}};
      auto it = single.find(c);
      current_.kind = it == single.end() ? Tok::Other : it->second;
      current_.text = std::string(1, c);
      bump();
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t col_ = 1;
  Token current_;
};

// ----------------------------------------------------------------- raw terms

struct RawTerm {
  std::string name;
  bool is_var = false;
  std::vector<RawTerm> args;
  std::size_t line = 0, column = 0;
};

RawTerm parse_raw(Lexer& lx) {
  const Token& t = lx.peek();
  if (t.kind == Tok::Var) {
    Token v = lx.take();
    return RawTerm{v.text, true, {}, v.line, v.column};
  }
  if (t.kind != Tok::Ident) lx.fail("expected a term");
  Token f = lx.take();
  RawTerm out{f.text, false, {}, f.line, f.column};
  if (lx.peek().kind == Tok::LParen) {
    lx.take();
    out.args.push_back(parse_raw(lx));
    while (lx.peek().kind == Tok::Comma) {
      lx.take();
      out.args.push_back(parse_raw(lx));
    }
    lx.expect(Tok::RParen, "')'");
  }
  return out;
}

/// Adds symbols in pre-order, so a functor precedes its arguments.
void register_symbols(const RawTerm& r, Signature& sig) {
  if (r.is_var) return;
  try {
    sig.add(r.name, static_cast<unsigned>(r.args.size()));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), r.line, r.column);
  }
  for (const auto& a : r.args) register_symbols(a, sig);
}

Term build(const RawTerm& r, const Signature& sig, VarScope& scope,
           std::unordered_map<VarId, std::string>* names) {
  if (r.is_var) {
    auto it = scope.ids.find(r.name);
    if (it == scope.ids.end()) {
      it = scope.ids.emplace(r.name, scope.next_var++).first;
      if (names) names->emplace(it->second, r.name);
    }
    return Term::variable(it->second);
  }
  auto f = sig.find(r.name);
  if (!f) throw ParseError("unknown symbol '" + r.name + "'", r.line, r.column);
  std::vector<Term> args;
  for (const auto& a : r.args) args.push_back(build(a, sig, scope, names));
  return Term::apply(*f, std::move(args));
}

struct RawLiteral {
  RawTerm lhs, rhs;
  bool positive = true;
};

RawLiteral parse_literal(Lexer& lx) {
  if (lx.peek().kind == Tok::Not) {
    lx.take();
    RawLiteral inner;
    if (lx.peek().kind == Tok::LParen) {
      lx.take();
      inner = parse_literal(lx);
      lx.expect(Tok::RParen, "')'");
    } else {
      inner = parse_literal(lx);
    }
    inner.positive = !inner.positive;
    return inner;
  }
  if (lx.peek().kind == Tok::LParen) {
    lx.take();
    RawLiteral inner = parse_literal(lx);
    lx.expect(Tok::RParen, "')'");
    return inner;
  }
  RawLiteral lit;
  const Token start = lx.peek();
  lit.lhs = parse_raw(lx);
  if (lx.peek().kind == Tok::Eq) {
    lx.take();
  } else if (lx.peek().kind == Tok::Neq) {
    lx.take();
    lit.positive = false;
  } else {
    throw ParseError("non-equality predicate '" + lit.lhs.name + "'", start.line, start.column);
  }
  lit.rhs = parse_raw(lx);
  return lit;
}

/// Skips a balanced token sequence up to (not including) the closing paren.
void skip_annotations(Lexer& lx) {
  int depth = 0;
  while (true) {
    const Tok k = lx.peek().kind;
    if (k == Tok::End) lx.fail("unterminated clause");
    if (k == Tok::RParen && depth == 0) return;
    if (k == Tok::LParen) ++depth;
    if (k == Tok::RParen) --depth;
    lx.take();
  }
}

/// Commits one equation: symbols first, then variables fresh per clause.
void add_equation(Problem& p, VarId& next_var, const RawTerm& lhs, const RawTerm& rhs) {
  Signature sig = p.sig;
  register_symbols(lhs, sig);
  register_symbols(rhs, sig);
  VarScope scope;
  scope.next_var = next_var;
  Term l = build(lhs, sig, scope, &p.var_names);
  Term r = build(rhs, sig, scope, &p.var_names);
  p.sig = std::move(sig);
  next_var = scope.next_var;
  p.equations.emplace_back(std::move(l), std::move(r));
}

std::string describe(const RawTerm& r) {
  std::string out = r.name;
  if (!r.args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < r.args.size(); ++i) out += (i ? "," : "") + describe(r.args[i]);
    out += ")";
  }
  return out;
}

}  // namespace

// -------------------------------------------------------------------- parsers

Problem parse_tptp_ueq(std::string_view text, InequationPolicy policy, std::string name) {
  Problem p;
  p.name = std::move(name);
  VarId next_var = 0;
  Lexer lx(text);
  while (lx.peek().kind != Tok::End) {
    const Token head = lx.expect(Tok::Ident, "a cnf clause");
    if (head.text != "cnf")
      throw ParseError("unsupported clause kind '" + head.text + "' (only cnf is accepted)",
                       head.line, head.column);
    lx.expect(Tok::LParen, "'('");
    const Token clause_name = lx.take();
    lx.expect(Tok::Comma, "','");
    const Token role = lx.expect(Tok::Ident, "a role");
    lx.expect(Tok::Comma, "','");
    const Token formula_start = lx.peek();
    RawLiteral lit = parse_literal(lx);
    if (lx.peek().kind == Tok::Or)
      throw ParseError("non-unit clause '" + clause_name.text + "'", formula_start.line,
                       formula_start.column);
    if (lx.peek().kind == Tok::Comma) {
      lx.take();
      skip_annotations(lx);
    }
    lx.expect(Tok::RParen, "')'");
    lx.expect(Tok::Dot, "'.'");

    if (lit.positive) {
      add_equation(p, next_var, lit.lhs, lit.rhs);
      continue;
    }
    const std::string shown = describe(lit.lhs) + " != " + describe(lit.rhs);
    if (policy == InequationPolicy::Drop) {
      p.notes.push_back("dropped inequation " + clause_name.text + " (" + role.text +
                        "): " + shown);
    } else {
      add_equation(p, next_var, lit.lhs, lit.rhs);
      p.notes.push_back("inequation " + clause_name.text + " (" + role.text +
                        ") kept as equation: " + shown);
    }
  }
  return p;
}

Problem parse_equation_list(std::string_view text, std::string name) {
  Problem p;
  p.name = std::move(name);
  VarId next_var = 0;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    Lexer lx(text.substr(begin, end - begin), line_no);
    if (lx.peek().kind != Tok::End) {
      RawTerm lhs = parse_raw(lx);
      lx.expect(Tok::Eq, "'='");
      RawTerm rhs = parse_raw(lx);
      if (lx.peek().kind != Tok::End) lx.fail("expected end of line");
      add_equation(p, next_var, lhs, rhs);
    }
    begin = end + 1;
  }
  return p;
}

Problem load_problem(const std::string& path, InequationPolicy policy) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (auto dot = name.find_last_of('.'); dot != std::string::npos && dot > 0) name = name.substr(0, dot);

  bool tptp = false;
  for (const char* kw : {"cnf(", "fof(", "tff(", "include("}) tptp |= text.find(kw) != std::string::npos;
  return tptp ? parse_tptp_ueq(text, policy, name) : parse_equation_list(text, name);
}

Term parse_term(std::string_view text, Signature& sig, VarScope& scope) {
  Lexer lx(text);
  RawTerm r = parse_raw(lx);
  if (lx.peek().kind != Tok::End) lx.fail("trailing input after term");
  Signature extended = sig;
  register_symbols(r, extended);
  Term t = build(r, extended, scope, nullptr);
  sig = std::move(extended);
  return t;
}

Term parse_ground_term(std::string_view text, const Signature& sig) {
  Signature copy = sig;
  VarScope scope;
  Term t = parse_term(text, copy, scope);
  if (!t.ground()) throw std::invalid_argument("expected a ground term: " + std::string(text));
  if (copy.size() != sig.size())
    throw std::invalid_argument("unknown symbol in term: " + std::string(text));
  return t;
}

std::string to_tptp(const Problem& p) {
  std::string out;
  for (std::size_t i = 0; i < p.equations.size(); ++i) {
    const auto& [l, r] = p.equations[i];
    out += "cnf(eq_" + std::to_string(i + 1) + ", axiom, " + to_string(l, p.sig, &p.var_names) +
           " = " + to_string(r, p.sig, &p.var_names) + ").\n";
  }
  return out;
}

// ---------------------------------------------------------------------- beta

Term build_beta(const Signature& sig, unsigned depth) {
  if (depth == 0) throw std::invalid_argument("nesting depth must be positive");
  const auto constants = sig.constants();
  if (constants.empty()) throw std::invalid_argument("signature has no constant");
  const Term filler = Term::apply(constants.front());
  const auto chain = sig.non_constants();
  if (chain.empty()) return filler;
  Term beta = filler;
  for (unsigned k = 0; k < depth; ++k) {
    const SymbolId f = chain[k % chain.size()];
    std::vector<Term> args(sig[f].arity, filler);
    args[0] = beta;
    beta = Term::apply(f, std::move(args));
  }
  return beta;
}

// ----------------------------------------------------------------------- run

ReportRow run(const RunConfig& config, const Problem& problem, RunArtifacts* artifacts) {
  ReportRow row;
  row.problem = problem.name;
  const Bound bound = Bound::from_beta(build_beta(problem.sig, config.depth));

  if (config.mode != Mode::Cc) {
    EngineOptions options;
    options.time_limit = config.timeout;
    SaturationResult r = saturate(problem.sig, problem.equations, bound, options);
    row.status_ccx = r.completed ? "done" : "timeout";
    row.time_ccx_ms = r.stats.time_ms;
    row.classes_ccx = r.classes.size();
    row.derived_classes_ccx = r.derived_class_count();
    if (artifacts) artifacts->ccx = std::move(r);
  }
  if (config.mode != Mode::Ccx) {
    GroundCcOptions options;
    options.time_limit = config.timeout;
    options.cap = config.cc_cap;
    GroundCcResult r = run_ground_cc(problem.sig, problem.equations, bound, options);
    if (r.completed)
      row.status_cc = "done";
    else
      row.status_cc = config.timeout && r.time_ms >= static_cast<double>(config.timeout->count())
                          ? "timeout"
                          : "budget";
    row.time_cc_ms = r.time_ms;
    if (r.completed) {
      row.classes_cc = r.partition.blocks_total();
      row.nonsingleton_cc = r.partition.blocks_nonsingleton();
    }
    if (artifacts) artifacts->cc = std::move(r);
  }
  return row;
}

std::string csv_header() {
  return "problem,status_ccx,time_ccx_ms,classes_ccx,status_cc,time_cc_ms,classes_cc";
}

std::string to_csv(const ReportRow& row) {
  auto ms = [](double t) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(3);
    os << t;
    return os.str();
  };
  std::string name = row.problem;
  if (name.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : name) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    name = quoted + "\"";
  }
  return name + "," + row.status_ccx + "," + ms(row.time_ccx_ms) + "," +
         std::to_string(row.classes_ccx) + "," + row.status_cc + "," + ms(row.time_cc_ms) + "," +
         std::to_string(row.classes_cc);
}

CsvWriter::CsvWriter(const std::string& path) {
  file_ = std::fopen(path.c_str(), "a+");
  if (!file_) throw std::runtime_error("cannot open " + path);
  std::fseek(file_, 0, SEEK_END);
  if (std::ftell(file_) == 0) std::fprintf(file_, "%s\n", csv_header().c_str());
  std::fflush(file_);
}

CsvWriter::~CsvWriter() {
  if (file_) std::fclose(file_);
}

void CsvWriter::write(const ReportRow& row) {
  std::lock_guard lock(mutex_);
  std::fprintf(file_, "%s\n", to_csv(row).c_str());
  std::fflush(file_);
}

}  // namespace ccx
