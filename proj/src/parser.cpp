#include "prenexify/parser.hpp"

#include <cctype>
#include <sstream>

namespace prenexify {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Dot, Tilde, Amp, Bar, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    std::size_t l = line, cc = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      std::string text(s.substr(i, j - i));
      advance(j - i);
      out.push_back({Tok::Ident, std::move(text), l, cc});
      continue;
    }
    Tok t;
    std::size_t len = 1;
    switch (c) {
      case '(': t = Tok::LParen; break;
      case ')': t = Tok::RParen; break;
      case ',': t = Tok::Comma; break;
      case '.': t = Tok::Dot; break;
      case '~': t = Tok::Tilde; break;
      case '&': t = Tok::Amp; break;
      case '|': t = Tok::Bar; break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          t = Tok::Arrow;
          len = 2;
          break;
        }
        [[fallthrough]];
      default:
        throw ParseError(l, cc, std::string("unexpected character '") + c + "'");
    }
    out.push_back({t, std::string(s.substr(i, len)), l, cc});
    advance(len);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_keyword(const std::string& s) { return s == "exists" || s == "forall" || s == "false"; }

class Parser {
 public:
  Parser(std::vector<Token> toks, const Arities* sig) : toks_(std::move(toks)), sig_(sig) {}

  Formula run() {
    Formula f = imp();
    if (peek().kind != Tok::End) fail(peek(), "unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(t.line, t.col, t.kind == Tok::End ? msg + " at end of input" : msg);
  }

  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(peek(), std::string("expected ") + what);
    ++pos_;
  }

  Formula imp() {
    Formula lhs = disj();
    if (peek().kind == Tok::Arrow) {
      ++pos_;
      return Formula::imp(std::move(lhs), imp());
    }
    return lhs;
  }

  Formula disj() {
    Formula f = conj();
    while (peek().kind == Tok::Bar) {
      ++pos_;
      f = Formula::disj(std::move(f), conj());
    }
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (peek().kind == Tok::Amp) {
      ++pos_;
      f = Formula::conj(std::move(f), unary());
    }
    return f;
  }

  Formula unary() {
    if (peek().kind == Tok::Tilde) {
      ++pos_;
      return Formula::neg(unary());
    }
    return primary();
  }

  Formula primary() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      ++pos_;
      Formula f = imp();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind != Tok::Ident) fail(t, "expected a formula");
    if (t.text == "false") {
      ++pos_;
      return Formula::falsum();
    }
    if (t.text == "exists" || t.text == "forall") {
      Quantifier q = t.text == "exists" ? Quantifier::Exists : Quantifier::Forall;
      ++pos_;
      const Token& v = peek();
      if (v.kind != Tok::Ident || is_keyword(v.text)) fail(v, "expected a bound variable");
      Var x = v.text;
      ++pos_;
      expect(Tok::Dot, "'.' after bound variable");
      return Formula::quantified(q, std::move(x), imp());
    }
    return atom();
  }

  Formula atom() {
    const Token& name = next();
    std::vector<Var> args;
    if (peek().kind == Tok::LParen) {
      ++pos_;
      if (peek().kind != Tok::RParen) {
        for (;;) {
          const Token& a = peek();
          if (a.kind != Tok::Ident || is_keyword(a.text)) fail(a, "expected a variable");
          args.push_back(a.text);
          ++pos_;
          if (peek().kind == Tok::Comma) {
            ++pos_;
            continue;
          }
          break;
        }
      }
      expect(Tok::RParen, "')' after arguments");
    }
    check_arity(name, args.size());
    return Formula::prime(name.text, std::move(args));
  }

  void check_arity(const Token& name, std::size_t arity) {
    if (sig_ != nullptr) {
      auto it = sig_->find(name.text);
      if (it == sig_->end()) fail(name, "undeclared predicate '" + name.text + "'");
      if (it->second != arity) {
        fail(name, "arity mismatch for '" + name.text + "': declared " +
                       std::to_string(it->second) + ", used with " + std::to_string(arity));
      }
      return;
    }
    auto [it, inserted] = seen_.emplace(name.text, arity);
    if (!inserted && it->second != arity) {
      fail(name, "arity mismatch for '" + name.text + "': first used with " +
                     std::to_string(it->second) + ", now " + std::to_string(arity));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Arities* sig_;
  Arities seen_;
};

// Precedence of binary connectives; higher binds tighter.
int prec(Connective c) {
  switch (c) {
    case Connective::Imp: return 1;
    case Connective::Or: return 2;
    case Connective::And: return 3;
    default: return 4;
  }
}

void render_rec(const Formula& f, int ctx, bool rightmost, std::string& out) {
  switch (f.kind()) {
    case Connective::Falsum:
      out += "false";
      return;
    case Connective::Prime:
      out += f.predicate();
      if (!f.args().empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.args().size(); ++i) {
          if (i > 0) out += ',';
          out += f.args()[i];
        }
        out += ')';
      }
      return;
    case Connective::Exists:
    case Connective::Forall: {
      bool paren = !rightmost;
      if (paren) out += '(';
      out += f.kind() == Connective::Exists ? "exists " : "forall ";
      out += f.bound_var();
      out += ". ";
      render_rec(f.body(), 0, true, out);
      if (paren) out += ')';
      return;
    }
    case Connective::And:
    case Connective::Or:
    case Connective::Imp: {
      int p = prec(f.kind());
      bool paren = p < ctx;
      if (paren) {
        out += '(';
        rightmost = true;
      }
      bool right_assoc = f.kind() == Connective::Imp;
      render_rec(f.lhs(), right_assoc ? p + 1 : p, false, out);
      out += f.kind() == Connective::And ? " & " : f.kind() == Connective::Or ? " | " : " -> ";
      render_rec(f.rhs(), right_assoc ? p : p + 1, rightmost, out);
      if (paren) out += ')';
      return;
    }
  }
}

}  // namespace

Formula parse(std::string_view text, const Arities* sig) {
  return Parser(lex(text), sig).run();
}

Arities parse_signature(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string word;
  in >> word;
  if (word != "sig") throw ParseError(1, 1, "signature line must start with 'sig'");
  Arities out;
  while (in >> word) {
    auto slash = word.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == word.size()) {
      throw ParseError(1, 1, "malformed signature entry '" + word + "'");
    }
    std::string name = word.substr(0, slash);
    std::size_t arity = 0;
    for (char c : word.substr(slash + 1)) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw ParseError(1, 1, "malformed arity in '" + word + "'");
      }
      arity = arity * 10 + static_cast<std::size_t>(c - '0');
    }
    if (!out.emplace(name, arity).second) {
      throw ParseError(1, 1, "predicate '" + name + "' declared twice");
    }
  }
  return out;
}

std::string render(const Formula& f) {
  std::string out;
  render_rec(f, 0, true, out);
  return out;
}

Corpus parse_corpus(std::string_view text) {
  Corpus corpus;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) {
      line.remove_prefix(1);
    }
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }

    CorpusEntry entry;
    entry.line = line_no;
    entry.text = std::string(line);
    if (line.substr(0, 4) == "sig " || line == "sig") {
      try {
        if (corpus.signature || !corpus.entries.empty()) {
          throw ParseError(1, 1, "signature must be the first non-comment line");
        }
        corpus.signature = parse_signature(line);
        continue;
      } catch (const ParseError& e) {
        entry.error = ParseError(line_no, e.column(), e.message());
      }
    } else {
      try {
        entry.formula = parse(line, corpus.signature ? &*corpus.signature : nullptr);
      } catch (const ParseError& e) {
        entry.error = ParseError(line_no, e.column(), e.message());
      }
    }
    corpus.entries.push_back(std::move(entry));
    if (end == text.size()) break;
  }
  return corpus;
}

namespace {

const char* kind_name(Connective c) {
  switch (c) {
    case Connective::Prime: return "prime";
    case Connective::Falsum: return "falsum";
    case Connective::And: return "and";
    case Connective::Or: return "or";
    case Connective::Imp: return "imp";
    case Connective::Exists: return "exists";
    case Connective::Forall: return "forall";
  }
  return "?";
}

}  // namespace

nlohmann::json to_json(const Formula& f) {
  nlohmann::json j;
  j["kind"] = kind_name(f.kind());
  switch (f.kind()) {
    case Connective::Falsum:
      break;
    case Connective::Prime:
      j["pred"] = f.predicate();
      j["args"] = f.args();
      break;
    case Connective::And:
    case Connective::Or:
    case Connective::Imp:
      j["lhs"] = to_json(f.lhs());
      j["rhs"] = to_json(f.rhs());
      break;
    case Connective::Exists:
    case Connective::Forall:
      j["var"] = f.bound_var();
      j["body"] = to_json(f.body());
      break;
  }
  return j;
}

Formula formula_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "falsum") return Formula::falsum();
  if (kind == "prime") {
    return Formula::prime(j.at("pred").get<std::string>(), j.at("args").get<std::vector<Var>>());
  }
  if (kind == "and") return Formula::conj(formula_from_json(j.at("lhs")), formula_from_json(j.at("rhs")));
  if (kind == "or") return Formula::disj(formula_from_json(j.at("lhs")), formula_from_json(j.at("rhs")));
  if (kind == "imp") return Formula::imp(formula_from_json(j.at("lhs")), formula_from_json(j.at("rhs")));
  if (kind == "exists") {
    return Formula::exists(j.at("var").get<std::string>(), formula_from_json(j.at("body")));
  }
  if (kind == "forall") {
    return Formula::forall(j.at("var").get<std::string>(), formula_from_json(j.at("body")));
  }
  throw std::invalid_argument("unknown formula kind '" + kind + "'");
}

}  // namespace prenexify
