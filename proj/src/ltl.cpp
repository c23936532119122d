#include "reactsyn/ltl.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "reactsyn/error.hpp"

namespace reactsyn {

int AlphabetSpec::atom_index(const std::string& name) const {
  for (int i = 0; i < num_inputs(); ++i)
    if (inputs[static_cast<std::size_t>(i)] == name) return i;
  for (int k = 0; k < num_outputs(); ++k)
    if (outputs[static_cast<std::size_t>(k)] == name) return num_inputs() + k;
  return -1;
}

const std::string& AlphabetSpec::atom_name(int index) const {
  if (index < num_inputs()) return inputs[static_cast<std::size_t>(index)];
  return outputs[static_cast<std::size_t>(index - num_inputs())];
}

void AlphabetSpec::validate() const {
  if (inputs.empty()) throw Error("at least one input proposition is required");
  if (outputs.empty()) throw Error("at least one output proposition is required");
  std::set<std::string> seen;
  for (const auto& n : inputs)
    if (!seen.insert(n).second) throw Error("duplicate proposition '" + n + "'");
  for (const auto& n : outputs)
    if (!seen.insert(n).second) throw Error("duplicate proposition '" + n + "'");
}

Ltl ltl_true() { return std::make_shared<LtlNode>(LtlNode{LtlOp::True, -1, nullptr, nullptr}); }
Ltl ltl_false() { return std::make_shared<LtlNode>(LtlNode{LtlOp::False, -1, nullptr, nullptr}); }
Ltl ltl_atom(int index) { return std::make_shared<LtlNode>(LtlNode{LtlOp::Atom, index, nullptr, nullptr}); }
Ltl ltl_unary(LtlOp op, Ltl arg) { return std::make_shared<LtlNode>(LtlNode{op, -1, std::move(arg), nullptr}); }
Ltl ltl_binary(LtlOp op, Ltl lhs, Ltl rhs) {
  return std::make_shared<LtlNode>(LtlNode{op, -1, std::move(lhs), std::move(rhs)});
}

int ltl_depth(const Ltl& f) {
  int d = 0;
  if (f->lhs) d = std::max(d, 1 + ltl_depth(f->lhs));
  if (f->rhs) d = std::max(d, 1 + ltl_depth(f->rhs));
  return d;
}

bool ltl_equal(const Ltl& a, const Ltl& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->atom != b->atom) return false;
  return ltl_equal(a->lhs, b->lhs) && ltl_equal(a->rhs, b->rhs);
}

namespace {

Ltl nnf(const Ltl& f, bool negate) {
  switch (f->op) {
    case LtlOp::True:
      return negate ? ltl_false() : f;
    case LtlOp::False:
      return negate ? ltl_true() : f;
    case LtlOp::Atom:
      return negate ? ltl_unary(LtlOp::Not, f) : f;
    case LtlOp::Not:
      return nnf(f->lhs, !negate);
    case LtlOp::And:
    case LtlOp::Or: {
      const bool is_and = (f->op == LtlOp::And) != negate;
      return ltl_binary(is_and ? LtlOp::And : LtlOp::Or, nnf(f->lhs, negate), nnf(f->rhs, negate));
    }
    case LtlOp::Implies:
      return nnf(ltl_binary(LtlOp::Or, ltl_unary(LtlOp::Not, f->lhs), f->rhs), negate);
    case LtlOp::Iff: {
      // a <-> b  ==  (a & b) | (!a & !b);  !(a <-> b) == (a & !b) | (!a & b)
      const Ltl pa = nnf(f->lhs, false);
      const Ltl na = nnf(f->lhs, true);
      const Ltl pb = nnf(f->rhs, false);
      const Ltl nb = nnf(f->rhs, true);
      if (!negate) {
        return ltl_binary(LtlOp::Or, ltl_binary(LtlOp::And, pa, pb), ltl_binary(LtlOp::And, na, nb));
      }
      return ltl_binary(LtlOp::Or, ltl_binary(LtlOp::And, pa, nb), ltl_binary(LtlOp::And, na, pb));
    }
    case LtlOp::Next:
      return ltl_unary(LtlOp::Next, nnf(f->lhs, negate));
    case LtlOp::Until:
      return ltl_binary(negate ? LtlOp::Release : LtlOp::Until, nnf(f->lhs, negate), nnf(f->rhs, negate));
    case LtlOp::Release:
      return ltl_binary(negate ? LtlOp::Until : LtlOp::Release, nnf(f->lhs, negate), nnf(f->rhs, negate));
    case LtlOp::Eventually:
      // F a == tt U a ; !F a == ff R !a
      if (!negate) return ltl_binary(LtlOp::Until, ltl_true(), nnf(f->lhs, false));
      return ltl_binary(LtlOp::Release, ltl_false(), nnf(f->lhs, true));
    case LtlOp::Always:
      if (!negate) return ltl_binary(LtlOp::Release, ltl_false(), nnf(f->lhs, false));
      return ltl_binary(LtlOp::Until, ltl_true(), nnf(f->lhs, true));
  }
  throw Error("unreachable LTL operator");
}

// Binding strength for printing; higher binds tighter.
int precedence(LtlOp op) {
  switch (op) {
    case LtlOp::Implies:
    case LtlOp::Iff:
      return 1;
    case LtlOp::Or:
      return 2;
    case LtlOp::And:
      return 3;
    case LtlOp::Until:
    case LtlOp::Release:
      return 4;
    default:
      return 5;
  }
}

void print(const Ltl& f, const AlphabetSpec& alphabet, std::ostream& out, int context) {
  const int prec = precedence(f->op);
  const bool paren = prec < context;
  if (paren) out << '(';
  switch (f->op) {
    case LtlOp::True:
      out << "tt";
      break;
    case LtlOp::False:
      out << "ff";
      break;
    case LtlOp::Atom:
      out << alphabet.atom_name(f->atom);
      break;
    case LtlOp::Not:
      out << '!';
      print(f->lhs, alphabet, out, 5);
      break;
    case LtlOp::Next:
      out << "X ";
      print(f->lhs, alphabet, out, 5);
      break;
    case LtlOp::Eventually:
      out << "F ";
      print(f->lhs, alphabet, out, 5);
      break;
    case LtlOp::Always:
      out << "G ";
      print(f->lhs, alphabet, out, 5);
      break;
    default: {
      const char* sym = "";
      switch (f->op) {
        case LtlOp::And: sym = " & "; break;
        case LtlOp::Or: sym = " | "; break;
        case LtlOp::Implies: sym = " -> "; break;
        case LtlOp::Iff: sym = " <-> "; break;
        case LtlOp::Until: sym = " U "; break;
        case LtlOp::Release: sym = " R "; break;
        default: break;
      }
      // Operands at the same level are parenthesized on both sides so the
      // printed text does not depend on associativity.
      print(f->lhs, alphabet, out, prec + 1);
      out << sym;
      print(f->rhs, alphabet, out, prec + 1);
      break;
    }
  }
  if (paren) out << ')';
}

struct Token {
  enum Kind { Ident, Op, LParen, RParen, End } kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  Lexer(const std::string& text, int line, int column) : text_(text), line_(line), column_(column) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        column_ = 1;
        ++pos_;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        continue;
      }
      const int l = line_;
      const int col = column_;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t end = pos_;
        while (end < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_' || text_[end] == '\'')) {
          ++end;
        }
        out.push_back({Token::Ident, text_.substr(pos_, end - pos_), l, col});
        advance(end - pos_);
        continue;
      }
      if (c == '(') {
        out.push_back({Token::LParen, "(", l, col});
        advance(1);
        continue;
      }
      if (c == ')') {
        out.push_back({Token::RParen, ")", l, col});
        advance(1);
        continue;
      }
      static const char* const ops[] = {"<->", "->", "&&", "||", "!", "&", "|", "~"};
      bool matched = false;
      for (const char* op : ops) {
        const std::string s(op);
        if (text_.compare(pos_, s.size(), s) == 0) {
          std::string norm = s;
          if (s == "&&") norm = "&";
          if (s == "||") norm = "|";
          if (s == "~") norm = "!";
          out.push_back({Token::Op, norm, l, col});
          advance(s.size());
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", l, col);
    }
    out.push_back({Token::End, "", line_, column_});
    return out;
  }

 private:
  void advance(std::size_t n) {
    pos_ += n;
    column_ += static_cast<int>(n);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_;
  int column_;
};

// Precedence climbing: unary > U > & > | > (->, <->), binary operators
// right associative.
class FormulaParser {
 public:
  FormulaParser(std::vector<Token> tokens, const AlphabetSpec& alphabet)
      : tokens_(std::move(tokens)), alphabet_(alphabet) {}

  Ltl parse_all() {
    Ltl f = parse_imp();
    if (peek().kind != Token::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().column); }

  bool at_op(const char* op) const { return peek().kind == Token::Op && peek().text == op; }
  bool at_ident(const char* id) const { return peek().kind == Token::Ident && peek().text == id; }

  Ltl parse_imp() {
    Ltl lhs = parse_or();
    if (at_op("->")) {
      take();
      return ltl_binary(LtlOp::Implies, lhs, parse_imp());
    }
    if (at_op("<->")) {
      take();
      return ltl_binary(LtlOp::Iff, lhs, parse_imp());
    }
    return lhs;
  }

  Ltl parse_or() {
    Ltl lhs = parse_and();
    if (at_op("|")) {
      take();
      return ltl_binary(LtlOp::Or, lhs, parse_or());
    }
    return lhs;
  }

  Ltl parse_and() {
    Ltl lhs = parse_until();
    if (at_op("&")) {
      take();
      return ltl_binary(LtlOp::And, lhs, parse_and());
    }
    return lhs;
  }

  Ltl parse_until() {
    Ltl lhs = parse_unary();
    if (at_ident("U")) {
      take();
      return ltl_binary(LtlOp::Until, lhs, parse_until());
    }
    if ((at_ident("R") || at_ident("W")) && alphabet_.atom_index(peek().text) < 0) {
      fail("release and weak-until operators are not supported; rewrite with U, F, G");
    }
    return lhs;
  }

  Ltl parse_unary() {
    if (at_op("!")) {
      take();
      return ltl_unary(LtlOp::Not, parse_unary());
    }
    if (peek().kind == Token::Ident) {
      const std::string& id = peek().text;
      if (id == "X" || id == "F" || id == "G") {
        const LtlOp op = id == "X" ? LtlOp::Next : id == "F" ? LtlOp::Eventually : LtlOp::Always;
        take();
        return ltl_unary(op, parse_unary());
      }
    }
    return parse_primary();
  }

  Ltl parse_primary() {
    if (peek().kind == Token::LParen) {
      take();
      Ltl f = parse_imp();
      if (peek().kind != Token::RParen) fail("expected ')'");
      take();
      return f;
    }
    if (peek().kind != Token::Ident) fail(peek().kind == Token::End ? "unexpected end of formula" : "unexpected '" + peek().text + "'");
    const Token t = take();
    if (t.text == "tt" || t.text == "true") return ltl_true();
    if (t.text == "ff" || t.text == "false") return ltl_false();
    if (t.text == "U" || t.text == "R" || t.text == "W") {
      throw ParseError("operator '" + t.text + "' without left operand", t.line, t.column);
    }
    const int idx = alphabet_.atom_index(t.text);
    if (idx < 0) throw ParseError("undeclared proposition '" + t.text + "'", t.line, t.column);
    return ltl_atom(idx);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const AlphabetSpec& alphabet_;
};

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  return true;
}

bool is_reserved(const std::string& s) {
  return s == "X" || s == "F" || s == "G" || s == "U" || s == "tt" || s == "ff" || s == "true" || s == "false";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Ltl to_nnf(const Ltl& f) { return nnf(f, false); }

std::string to_string(const Ltl& f, const AlphabetSpec& alphabet) {
  std::ostringstream out;
  print(f, alphabet, out, 0);
  return out.str();
}

Ltl parse_ltl(const std::string& text, const AlphabetSpec& alphabet) {
  FormulaParser parser(Lexer(text, 1, 1).run(), alphabet);
  return parser.parse_all();
}

SpecFile parse_spec(const std::string& text) {
  // Split into `key: value;` statements while tracking source positions.
  struct Statement {
    std::string key;
    std::string body;
    int line;
    int column;
    int body_line;
    int body_column;
  };
  std::string clean;
  clean.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '#' || (text[i] == '/' && i + 1 < text.size() && text[i + 1] == '/')) {
      while (i < text.size() && text[i] != '\n') {
        clean.push_back(' ');
        ++i;
      }
      if (i < text.size()) clean.push_back('\n');
      continue;
    }
    clean.push_back(text[i]);
  }

  std::vector<Statement> statements;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  auto step = [&]() {
    if (clean[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    ++i;
  };
  while (i < clean.size()) {
    if (std::isspace(static_cast<unsigned char>(clean[i]))) {
      step();
      continue;
    }
    Statement st;
    st.line = line;
    st.column = column;
    while (i < clean.size() && clean[i] != ':' && clean[i] != ';') {
      st.key.push_back(clean[i]);
      step();
    }
    if (i >= clean.size() || clean[i] != ':') throw ParseError("expected 'key:'", st.line, st.column);
    step();
    st.body_line = line;
    st.body_column = column;
    while (i < clean.size() && clean[i] != ';') {
      st.body.push_back(clean[i]);
      step();
    }
    if (i >= clean.size()) throw ParseError("missing ';' after '" + trim(st.key) + "'", st.line, st.column);
    step();
    st.key = trim(st.key);
    statements.push_back(st);
  }

  SpecFile spec;
  std::set<std::string> declared;
  std::vector<const Statement*> formulas;
  bool have_inputs = false;
  bool have_outputs = false;
  for (const auto& st : statements) {
    if (st.key == "inputs" || st.key == "outputs") {
      bool& have = st.key == "inputs" ? have_inputs : have_outputs;
      if (have) throw ParseError("duplicate '" + st.key + "' declaration", st.line, st.column);
      have = true;
      auto& list = st.key == "inputs" ? spec.alphabet.inputs : spec.alphabet.outputs;
      std::stringstream ss(st.body);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        if (!is_identifier(item) || is_reserved(item)) {
          throw ParseError("invalid proposition name '" + item + "'", st.body_line, st.body_column);
        }
        if (!declared.insert(item).second) {
          throw ParseError("duplicate declaration of '" + item + "'", st.body_line, st.body_column);
        }
        list.push_back(item);
      }
    } else if (st.key == "spec") {
      formulas.push_back(&st);
    } else {
      throw ParseError("unknown section '" + st.key + "'", st.line, st.column);
    }
  }
  if (spec.alphabet.inputs.empty()) throw ParseError("no inputs declared", 1, 1);
  if (spec.alphabet.outputs.empty()) throw ParseError("no outputs declared", 1, 1);
  if (formulas.empty()) throw ParseError("no 'spec:' section", line, column);
  for (const Statement* st : formulas) {
    FormulaParser parser(Lexer(st->body, st->body_line, st->body_column).run(), spec.alphabet);
    Ltl f = parser.parse_all();
    spec.formula = spec.formula ? ltl_binary(LtlOp::And, spec.formula, f) : f;
  }
  return spec;
}

SpecFile load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

}  // namespace reactsyn
