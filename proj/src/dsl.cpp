#include "interf/dsl.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <stdexcept>

namespace interf {

namespace {

struct Token {
  enum class Kind {
    Ident, Number, String,
    LBrace, RBrace, LParen, RParen,
    Comma, Semi, Arrow, Equals, Slash, Minus, Plus,
    End, Bad
  };
  Kind kind = Kind::End;
  std::string text;
  SourceSpan span;
};

bool valid_utf8(std::string_view text, size_t& bad_offset) {
  size_t i = 0;
  const auto n = text.size();
  while (i < n) {
    const unsigned char c = text[i];
    size_t extra;
    if (c < 0x80) extra = 0;
    else if ((c & 0xE0) == 0xC0) extra = 1;
    else if ((c & 0xF0) == 0xE0) extra = 2;
    else if ((c & 0xF8) == 0xF0) extra = 3;
    else { bad_offset = i; return false; }
    if (i + extra >= n && extra > 0) { bad_offset = i; return false; }
    for (size_t k = 1; k <= extra; ++k)
      if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) {
        bad_offset = i;
        return false;
      }
    i += extra + 1;
  }
  return true;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run(std::vector<ParseDiagnostic>& diags) {
    std::vector<Token> tokens;
    while (true) {
      skip_trivia();
      Token t;
      t.span = {line_, col_, 1};
      if (pos_ >= text_.size()) {
        t.kind = Token::Kind::End;
        tokens.push_back(t);
        return tokens;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_'))
          t.text += take();
        t.kind = Token::Kind::Ident;
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < text_.size() &&
                  std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        lex_number(t);
      } else if (c == '"') {
        take();
        bool closed = false;
        while (pos_ < text_.size()) {
          const char d = take();
          if (d == '"') { closed = true; break; }
          if (d == '\n') break;
          t.text += d;
        }
        if (!closed) {
          diags.push_back({t.span, ParseDiagnostic::Severity::Error,
                           "unterminated string"});
          t.kind = Token::Kind::Bad;
        } else {
          t.kind = Token::Kind::String;
        }
      } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        take(); take();
        t.kind = Token::Kind::Arrow;
        t.span.length = 2;
      } else {
        take();
        switch (c) {
          case '{': t.kind = Token::Kind::LBrace; break;
          case '}': t.kind = Token::Kind::RBrace; break;
          case '(': t.kind = Token::Kind::LParen; break;
          case ')': t.kind = Token::Kind::RParen; break;
          case ',': t.kind = Token::Kind::Comma; break;
          case ';': t.kind = Token::Kind::Semi; break;
          case '=': t.kind = Token::Kind::Equals; break;
          case '/': t.kind = Token::Kind::Slash; break;
          case '-': t.kind = Token::Kind::Minus; break;
          case '+': t.kind = Token::Kind::Plus; break;
          default:
            t.kind = Token::Kind::Bad;
            t.text = c;
            diags.push_back({t.span, ParseDiagnostic::Severity::Error,
                             std::string("unexpected character '") + c + "'"});
            break;
        }
      }
      t.span.length = std::max<int>(t.span.length, static_cast<int>(t.text.size()));
      tokens.push_back(t);
    }
  }

 private:
  char take() {
    const char c = text_[pos_++];
    if (c == '\n') { ++line_; col_ = 1; } else { ++col_; }
    return c;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        break;
      }
    }
  }

  void lex_number(Token& t) {
    t.kind = Token::Kind::Number;
    auto digits = [&] {
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        t.text += take();
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      t.text += take();
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const size_t mark = pos_;
      std::string suffix;
      suffix += text_[pos_];
      size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-'))
        suffix += text_[look++];
      if (look < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[look]))) {
        for (size_t k = mark; k < look; ++k) t.text += take();
        digits();
      }
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Recursive-descent parser. The first error aborts and no scheme is
// produced; the diagnostic carries the span of the offending token.
class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<ParseDiagnostic>& diags)
      : tokens_(std::move(tokens)), diags_(diags) {}

  std::optional<Scheme> run() {
    if (peek().kind == Token::Kind::End) {
      error({1, 1, 0}, "missing scheme block");
      return std::nullopt;
    }
    if (!expect_keyword("scheme")) return std::nullopt;
    Scheme scheme;
    scheme.wing_minus = default_wing();
    scheme.wing_plus = default_wing();
    if (peek().kind == Token::Kind::String) {
      scheme.name = peek().text;
      advance();
    } else if (peek().kind == Token::Kind::Ident) {
      scheme.name = peek().text;
      advance();
    } else {
      error(peek().span, "expected scheme name");
      return std::nullopt;
    }
    if (!expect(Token::Kind::LBrace, "expected '{'")) return std::nullopt;

    bool saw_minus = false, saw_plus = false, saw_annihilate = false;
    while (peek().kind != Token::Kind::RBrace) {
      if (peek().kind == Token::Kind::End) {
        error(peek().span, "unexpected end of input, expected '}'");
        return std::nullopt;
      }
      const Token kw = peek();
      if (kw.kind != Token::Kind::Ident) {
        error(kw.span, "expected 'wing' or 'annihilate'");
        return std::nullopt;
      }
      if (kw.text == "wing") {
        if (!parse_wing(scheme, saw_minus, saw_plus)) return std::nullopt;
      } else if (kw.text == "annihilate") {
        if (saw_annihilate) {
          error(kw.span, "duplicate annihilate block");
          return std::nullopt;
        }
        saw_annihilate = true;
        if (!parse_annihilate(scheme)) return std::nullopt;
      } else {
        error(kw.span, "unknown keyword '" + kw.text + "'");
        return std::nullopt;
      }
    }
    advance();  // '}'
    if (peek().kind != Token::Kind::End) {
      error(peek().span, "trailing input after scheme block");
      return std::nullopt;
    }

    for (const auto& violation : validate(scheme))
      error({1, 1, 0}, violation);
    if (!diags_.empty()) return std::nullopt;
    return scheme;
  }

 private:
  static WingCircuit default_wing() {
    WingCircuit w;
    w.bs1 = w.bs2 = w.bs3 =
        splitter_from_reflectance(1.0 / std::numbers::sqrt2);
    return w;
  }

  const Token& peek() const { return tokens_[index_]; }
  void advance() {
    if (index_ + 1 < tokens_.size()) ++index_;
  }

  void error(SourceSpan span, std::string message) {
    diags_.push_back({span, ParseDiagnostic::Severity::Error,
                      std::move(message)});
  }

  bool expect(Token::Kind kind, const char* message) {
    if (peek().kind != kind) {
      error(peek().span, message);
      return false;
    }
    advance();
    return true;
  }

  bool expect_keyword(const char* word) {
    if (peek().kind != Token::Kind::Ident || peek().text != word) {
      error(peek().span, std::string("expected '") + word + "'");
      return false;
    }
    advance();
    return true;
  }

  // [-] number [/ sqrt2]
  bool parse_value(double& out) {
    double sign = 1.0;
    if (peek().kind == Token::Kind::Minus) {
      sign = -1.0;
      advance();
    }
    if (peek().kind != Token::Kind::Number) {
      error(peek().span, "expected a number");
      return false;
    }
    out = sign * std::strtod(peek().text.c_str(), nullptr);
    advance();
    if (peek().kind == Token::Kind::Slash) {
      advance();
      if (peek().kind != Token::Kind::Ident || peek().text != "sqrt2") {
        error(peek().span, "expected 'sqrt2' after '/'");
        return false;
      }
      out /= std::numbers::sqrt2;
      advance();
    }
    return true;
  }

  bool parse_wing(Scheme& scheme, bool& saw_minus, bool& saw_plus) {
    advance();  // 'wing'
    const Token side = peek();
    if (side.kind != Token::Kind::Ident ||
        (side.text != "minus" && side.text != "plus")) {
      error(side.span, "expected 'minus' or 'plus'");
      return false;
    }
    const bool is_minus = side.text == "minus";
    bool& seen = is_minus ? saw_minus : saw_plus;
    if (seen) {
      error(side.span, "duplicate wing '" + side.text + "'");
      return false;
    }
    seen = true;
    advance();

    WingCircuit& wing = is_minus ? scheme.wing_minus : scheme.wing_plus;

    if (peek().kind == Token::Kind::Equals) {
      advance();
      const Token other = peek();
      const char* expected = is_minus ? "plus" : "minus";
      if (other.kind != Token::Kind::Ident || other.text != expected) {
        error(other.span, std::string("expected '") + expected + "'");
        return false;
      }
      bool& other_seen = is_minus ? saw_plus : saw_minus;
      if (!other_seen) {
        error(other.span,
              std::string("wing '") + expected + "' is not defined yet");
        return false;
      }
      wing = is_minus ? scheme.wing_plus : scheme.wing_minus;
      advance();
      return true;
    }

    if (!expect(Token::Kind::LBrace, "expected '{' or '='")) return false;
    wing = default_wing();
    while (peek().kind != Token::Kind::RBrace) {
      const Token kw = peek();
      if (kw.kind != Token::Kind::Ident) {
        error(kw.span, "expected 'splitter' or 'phase'");
        return false;
      }
      if (kw.text == "splitter") {
        advance();
        const Token idx = peek();
        if (idx.kind != Token::Kind::Number ||
            (idx.text != "1" && idx.text != "2" && idx.text != "3")) {
          error(idx.span, "splitter index must be 1, 2, or 3");
          return false;
        }
        advance();
        const Token mode = peek();
        if (mode.kind != Token::Kind::Ident ||
            (mode.text != "ratio" && mode.text != "intensity")) {
          error(mode.span, "expected 'ratio' or 'intensity'");
          return false;
        }
        advance();
        const Token value_tok = peek();
        double value = 0.0;
        if (!parse_value(value)) return false;
        if (value < 0.0 || value > 1.0) {
          error(value_tok.span, "ratio outside [0,1]");
          return false;
        }
        const BeamSplitter bs = mode.text == "ratio"
                                    ? splitter_from_reflectance(value)
                                    : splitter_from_intensity(value);
        if (idx.text == "1") wing.bs1 = bs;
        else if (idx.text == "2") wing.bs2 = bs;
        else wing.bs3 = bs;
      } else if (kw.text == "phase") {
        advance();
        const Token which = peek();
        if (which.kind != Token::Kind::Ident ||
            (which.text != "ab" && which.text != "cd")) {
          error(which.span, "expected 'ab' or 'cd'");
          return false;
        }
        advance();
        double value = 0.0;
        if (!parse_value(value)) return false;
        if (which.text == "ab")
          wing.phases.phi_ab = canonical_angle(value);
        else
          wing.phases.phi_cd = canonical_angle(value);
      } else {
        error(kw.span, "unknown keyword '" + kw.text + "'");
        return false;
      }
    }
    advance();  // '}'
    return true;
  }

  bool parse_path(PathId& out) {
    const Token tok = peek();
    static const std::map<std::string, PathId> paths = {
        {"a", PathId::A}, {"b", PathId::B}, {"c", PathId::C},
        {"d", PathId::D}, {"e", PathId::E}, {"f", PathId::F}};
    auto it = tok.kind == Token::Kind::Ident ? paths.find(tok.text)
                                             : paths.end();
    if (it == paths.end()) {
      error(tok.span, "expected a path letter a-f");
      return false;
    }
    if (it->second != PathId::A && it->second != PathId::B) {
      error(tok.span, "annihilation rule outside stage-1 paths");
      return false;
    }
    out = it->second;
    advance();
    return true;
  }

  bool parse_annihilate(Scheme& scheme) {
    advance();  // 'annihilate'
    if (!expect(Token::Kind::LBrace, "expected '{'")) return false;
    while (peek().kind != Token::Kind::RBrace) {
      if (peek().kind == Token::Kind::End) {
        error(peek().span, "unexpected end of input, expected '}'");
        return false;
      }
      AnnihilationRule rule;
      if (!expect(Token::Kind::LParen, "expected '('")) return false;
      if (!parse_path(rule.minus_path)) return false;
      if (!expect(Token::Kind::Minus, "expected '-' wing marker")) return false;
      if (!expect(Token::Kind::Comma, "expected ','")) return false;
      if (!parse_path(rule.plus_path)) return false;
      if (!expect(Token::Kind::Plus, "expected '+' wing marker")) return false;
      if (!expect(Token::Kind::RParen, "expected ')'")) return false;
      if (!expect(Token::Kind::Arrow, "expected '->'")) return false;
      const Token label = peek();
      if (label.kind != Token::Kind::Ident) {
        error(label.span, "expected a gamma label");
        return false;
      }
      rule.gamma_label = label.text;
      advance();
      for (const auto& existing : scheme.rules) {
        if (existing.gamma_label == rule.gamma_label) {
          error(label.span, "duplicate gamma label '" + rule.gamma_label + "'");
          return false;
        }
        if (existing.minus_path == rule.minus_path &&
            existing.plus_path == rule.plus_path) {
          error(label.span, "duplicate annihilation rule pair");
          return false;
        }
      }
      scheme.rules.push_back(rule);
      if (peek().kind == Token::Kind::Semi) advance();
    }
    advance();  // '}'
    return true;
  }

  std::vector<Token> tokens_;
  size_t index_ = 0;
  std::vector<ParseDiagnostic>& diags_;
};

std::string format_number(double x) {
  if (x == 1.0 / std::numbers::sqrt2) return "1/sqrt2";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

ParseResult parse_scheme(std::string_view text) {
  ParseResult result;
  size_t bad_offset = 0;
  if (!valid_utf8(text, bad_offset)) {
    int line = 1, col = 1;
    for (size_t i = 0; i < bad_offset; ++i) {
      if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    result.diagnostics.push_back({{line, col, 1},
                                  ParseDiagnostic::Severity::Error,
                                  "invalid encoding"});
    return result;
  }
  Lexer lexer(text);
  auto tokens = lexer.run(result.diagnostics);
  if (!result.diagnostics.empty()) return result;
  Parser parser(std::move(tokens), result.diagnostics);
  result.scheme = parser.run();
  if (!result.diagnostics.empty()) result.scheme.reset();
  return result;
}

std::string render_scheme(const Scheme& s) {
  std::string out = "scheme \"" + s.name + "\" {\n";
  auto render_wing = [&](const WingCircuit& w, const char* side) {
    out += std::string("  wing ") + side + " {\n";
    const BeamSplitter* splitters[] = {&w.bs1, &w.bs2, &w.bs3};
    for (int i = 0; i < 3; ++i)
      out += "    splitter " + std::to_string(i + 1) + " ratio " +
             format_number(splitters[i]->r) + "\n";
    out += "    phase ab " + format_number(canonical_angle(w.phases.phi_ab)) +
           "\n";
    out += "    phase cd " + format_number(canonical_angle(w.phases.phi_cd)) +
           "\n";
    out += "  }\n";
  };
  render_wing(s.wing_minus, "minus");
  if (s.wing_plus == s.wing_minus)
    out += "  wing plus = minus\n";
  else
    render_wing(s.wing_plus, "plus");

  auto rules = s.rules;
  std::sort(rules.begin(), rules.end(), [](const auto& x, const auto& y) {
    return std::pair(x.minus_path, x.plus_path) <
           std::pair(y.minus_path, y.plus_path);
  });
  if (!rules.empty()) {
    out += "  annihilate {\n";
    for (const auto& rule : rules)
      out += std::string("    (") + path_name(rule.minus_path) + "-, " +
             path_name(rule.plus_path) + "+) -> " + rule.gamma_label + ";\n";
    out += "  }\n";
  }
  out += "}\n";
  return out;
}

std::string format_diagnostics(const std::vector<ParseDiagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    out += std::to_string(d.span.line) + ":" + std::to_string(d.span.column);
    out += d.severity == ParseDiagnostic::Severity::Error ? ": error: "
                                                          : ": warning: ";
    out += d.message;
    out += '\n';
  }
  return out;
}

}  // namespace interf
