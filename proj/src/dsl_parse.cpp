#include <algorithm>
#include <cstdio>
#include <set>

#include "dtheory/dsl.hpp"

namespace dtheory {

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::Lex: return "lex";
    case ParseErrorKind::Syntax: return "syntax";
    case ParseErrorKind::Semantic: return "semantic";
  }
  return "?";
}

std::string format_error(const ParseError& error, std::string_view source) {
  return std::string(source) + ":" + std::to_string(error.span.line) + ":" + std::to_string(error.span.column) + ": " +
         std::string(to_string(error.kind)) + " error: " + error.message;
}

namespace {

enum class Tok { Word, String, LBrace, RBrace, LParen, RParen, Comma, Colon, Semi, Equals, Arrow, NoObs, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
  bool line_start = false;
};

bool word_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '.' ||
         c == '/';
}

std::string hex_byte(unsigned char c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%02X", c);
  return buf;
}

// Length of the UTF-8 sequence starting at `i`, or 0 if malformed.
std::size_t utf8_length(std::string_view s, std::size_t i) {
  const auto c = static_cast<unsigned char>(s[i]);
  std::size_t n = 0;
  if (c < 0x80) return 1;
  if ((c & 0xE0) == 0xC0 && c >= 0xC2) n = 2;
  else if ((c & 0xF0) == 0xE0) n = 3;
  else if ((c & 0xF8) == 0xF0 && c <= 0xF4) n = 4;
  else return 0;
  if (i + n > s.size()) return 0;
  for (std::size_t k = 1; k < n; ++k) {
    if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return 0;
  }
  return n;
}

class Lexer {
 public:
  Lexer(std::string_view src, std::vector<ParseError>& errors) : src_(src), errors_(errors) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) {
      const auto c = static_cast<unsigned char>(src_[pos_]);
      if (c == '\n') {
        advance(1);
        line_start_ = true;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance(1);
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (c == '"') {
        string_literal();
      } else if (word_char(c) || (c == '-' && pos_ + 1 < src_.size() && word_char(src_[pos_ + 1]))) {
        const auto start = here();
        std::size_t n = 1;
        while (pos_ + n < src_.size() && word_char(src_[pos_ + n])) ++n;
        emit(Tok::Word, start, n);
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        emit(Tok::Arrow, here(), 2);
      } else if (auto p = punct(c)) {
        emit(*p, here(), 1);
      } else if (src_.substr(pos_, kNoObservation.size()) == kNoObservation) {
        emit(Tok::NoObs, here(), kNoObservation.size());
      } else {
        bad_char();
      }
    }
    Token end;
    end.kind = Tok::End;
    end.span = last_;
    end.line_start = true;
    tokens_.push_back(end);
    return std::move(tokens_);
  }

 private:
  static std::optional<Tok> punct(unsigned char c) {
    switch (c) {
      case '{': return Tok::LBrace;
      case '}': return Tok::RBrace;
      case '(': return Tok::LParen;
      case ')': return Tok::RParen;
      case ',': return Tok::Comma;
      case ':': return Tok::Colon;
      case ';': return Tok::Semi;
      case '=': return Tok::Equals;
      default: return std::nullopt;
    }
  }

  SourceSpan here() const { return {line_, column_, 1, pos_}; }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && pos_ < src_.size(); ++k) {
      const auto c = static_cast<unsigned char>(src_[pos_]);
      if ((c & 0xC0) != 0x80) last_ = {line_, column_, 1, pos_};
      ++pos_;
      if (c == '\n') {
        ++line_;
        column_ = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++column_;
      }
    }
  }

  void emit(Tok kind, SourceSpan span, std::size_t n, std::optional<std::string> text = std::nullopt) {
    span.length = n;
    Token t{kind, text ? std::move(*text) : std::string(src_.substr(pos_, n)), span, line_start_};
    line_start_ = false;
    advance(n);
    tokens_.push_back(std::move(t));
  }

  void error(SourceSpan span, std::string message) {
    errors_.push_back({span, ParseErrorKind::Lex, std::move(message)});
  }

  void string_literal() {
    const auto start = here();
    std::string value;
    std::size_t n = 1;
    while (true) {
      if (pos_ + n >= src_.size() || src_[pos_ + n] == '\n') {
        auto span = start;
        span.length = n;
        error(span, "unterminated string literal");
        line_start_ = false;
        advance(n);
        return;
      }
      const char c = src_[pos_ + n];
      if (c == '"') break;
      if (c == '\\' && pos_ + n + 1 < src_.size() && src_[pos_ + n + 1] != '\n') {
        const char e = src_[pos_ + n + 1];
        if (e == '"' || e == '\\') value += e;
        else if (e == 'n') value += '\n';
        else if (e == 't') value += '\t';
        else {
          const auto before = src_.substr(pos_, n);
          const auto columns = std::count_if(before.begin(), before.end(),
                                             [](char b) { return (static_cast<unsigned char>(b) & 0xC0) != 0x80; });
          SourceSpan span{start.line, start.column + static_cast<std::size_t>(columns), 2, pos_ + n};
          const auto u = static_cast<unsigned char>(e);
          error(span, u > 0x20 && u < 0x7F ? std::string("unknown escape '\\") + e + "'"
                                           : "unknown escape '\\' followed by " + hex_byte(u));
        }
        n += 2;
        continue;
      }
      value += c;
      ++n;
    }
    emit(Tok::String, start, n + 1, std::move(value));
  }

  void bad_char() {
    const auto span = here();
    const auto c = static_cast<unsigned char>(src_[pos_]);
    const auto n = utf8_length(src_, pos_);
    if (n == 0) {
      error(span, "invalid byte " + hex_byte(c));
      advance(1);
    } else if (n == 1 && (c < 0x20 || c == 0x7F)) {
      error(span, "unexpected control character " + hex_byte(c));
      advance(1);
    } else {
      auto s = span;
      s.length = n;
      error(s, "unexpected character '" + std::string(src_.substr(pos_, n)) + "'");
      advance(n);
    }
    line_start_ = false;
  }

  std::string_view src_;
  std::vector<ParseError>& errors_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  SourceSpan last_{1, 1, 1, 0};
  bool line_start_ = true;
};

struct Recover {};

bool is_stanza_keyword(const Token& t) {
  return t.kind == Tok::Word &&
         (t.text == "dilemma" || t.text == "var" || t.text == "det" || t.text == "utility" || t.text == "designate");
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "string \"" + t.text + "\"";
    default: return "'" + t.text + "'";
  }
}

SourceSpan cover(const SourceSpan& from, const SourceSpan& to) {
  auto s = from;
  s.length = to.offset + to.length - from.offset;
  return s;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<ParseError>& errors) : toks_(std::move(tokens)), errors_(errors) {}

  ParseResult run() {
    const bool lexed_clean = errors_.empty();
    if (peek().kind == Tok::End || !(peek().kind == Tok::Word && peek().text == "dilemma")) {
      syntax(peek(), "expected 'dilemma', found " + describe(peek()));
      if (!at(Tok::End) && !is_stanza_keyword(peek())) synchronize(pos_);
    }
    while (peek().kind != Tok::End) {
      const auto start = pos_;
      try {
        if (pos_ > 0 && !peek().line_start) fail(peek(), "expected a new line before " + describe(peek()));
        stanza();
      } catch (const Recover&) {
        synchronize(start);
      }
    }
    if (!lexed_clean || has(ParseErrorKind::Syntax)) return finish();
    semantic_checks();
    return finish();
  }

 private:
  // ---- token access ----

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() {
    const auto& t = toks_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_word(std::string_view w) const { return peek().kind == Tok::Word && peek().text == w; }

  void syntax(const Token& t, std::string message) {
    errors_.push_back({t.span, ParseErrorKind::Syntax, std::move(message)});
  }
  void semantic(const SourceSpan& span, std::string message) {
    errors_.push_back({span, ParseErrorKind::Semantic, std::move(message)});
  }
  [[noreturn]] void fail(const Token& t, std::string message) {
    syntax(t, std::move(message));
    throw Recover{};
  }
  bool has(ParseErrorKind kind) const {
    return std::any_of(errors_.begin(), errors_.end(), [&](const ParseError& e) { return e.kind == kind; });
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (!at(kind)) fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
    return next();
  }
  const Token& expect_word(std::string_view what) { return expect(Tok::Word, what); }
  void expect_keyword(std::string_view kw) {
    if (!at_word(kw)) fail(peek(), "expected '" + std::string(kw) + "', found " + describe(peek()));
    next();
  }

  void synchronize(std::size_t start) {
    if (pos_ == start) next();
    while (!at(Tok::End) && !(peek().line_start && is_stanza_keyword(peek()))) next();
  }

  // `open item (sep item)* [sep] close`, possibly empty.
  template <class F>
  void list(Tok open, Tok close, Tok sep, std::string_view open_s, std::string_view close_s, F&& item) {
    expect(open, open_s);
    if (at(close)) {
      next();
      return;
    }
    while (true) {
      item();
      if (at(sep)) {
        next();
        if (at(close)) {
          next();
          return;
        }
        continue;
      }
      if (at(close)) {
        next();
        return;
      }
      fail(peek(), "expected '" + std::string(sep == Tok::Comma ? "," : ";") + "' or " + std::string(close_s) +
                       ", found " + describe(peek()));
    }
  }

  std::vector<std::string> parents(const std::string& var) {
    std::vector<std::string> out;
    list(Tok::LParen, Tok::RParen, Tok::Comma, "'('", "')'", [&] {
      const auto& t = expect_word("a parent name");
      parent_spans_.insert_or_assign({var, t.text}, t.span);
      out.push_back(t.text);
    });
    return out;
  }

  std::pair<Row, SourceSpan> row() {
    const auto open = peek().span;
    Row r;
    list(Tok::LParen, Tok::RParen, Tok::Comma, "'(' starting a row", "')'",
         [&] { r.push_back(expect_word("a parent value").text); });
    return {r, cover(open, toks_[pos_ - 1].span)};
  }

  Rational number() {
    const auto& t = expect_word("a number");
    if (auto r = Rational::parse(t.text)) return *r;
    syntax(t, "invalid number '" + t.text + "'");
    return Rational(0);
  }

  void note_row(const std::string& var, const Row& r, const SourceSpan& span) {
    if (!row_spans_.emplace(std::make_pair(var, r), span).second) {
      semantic(span, "duplicate row " + format_row(r) + " in table of '" + var + "'");
    }
  }

  // ---- stanzas ----

  void stanza() {
    const auto& kw = peek();
    if (kw.kind != Tok::Word || !is_stanza_keyword(kw)) {
      fail(kw, "expected a stanza keyword (dilemma, var, det, utility, designate), found " + describe(kw));
    }
    if (kw.text == "dilemma") dilemma();
    else if (kw.text == "var") var();
    else if (kw.text == "det") det();
    else if (kw.text == "utility") utility();
    else designate();
  }

  void dilemma() {
    const auto& kw = next();
    const auto& name = expect(Tok::String, "a quoted dilemma name");
    if (dilemma_span_) {
      semantic(kw.span, "second 'dilemma' stanza");
      return;
    }
    dilemma_span_ = kw.span;
    name_ = name.text;
  }

  void var() {
    next();
    const auto& name = expect_word("a variable name");
    const auto var_name = name.text;
    decl_spans_.emplace(var_name, name.span);
    expect_keyword("in");
    std::vector<std::string> domain;
    list(Tok::LBrace, Tok::RBrace, Tok::Comma, "'{'", "'}'", [&] { domain.push_back(expect_word("a value").text); });

    if (at_word("prior")) {
      next();
      StochasticNode node{var_name, {}, {}};
      const auto open = peek().span;
      auto& dist = node.cpt[Row{}];
      distribution(var_name, dist);
      note_node(var_name, name.span);
      note_row(var_name, Row{}, cover(open, toks_[pos_ - 1].span));
      decls_.push_back({var_name, std::move(domain), VarKind::Stochastic});
      nodes_.emplace_back(std::move(node));
    } else if (at_word("cpt")) {
      next();
      StochasticNode node{var_name, parents(var_name), {}};
      list(Tok::LBrace, Tok::RBrace, Tok::Semi, "'{'", "'}'", [&] {
        auto [r, span] = row();
        expect(Tok::Colon, "':' after a row");
        note_row(var_name, r, span);
        distribution(var_name, node.cpt[r]);
      });
      note_node(var_name, name.span);
      decls_.push_back({var_name, std::move(domain), VarKind::Stochastic});
      nodes_.emplace_back(std::move(node));
    } else {
      decls_.push_back({var_name, std::move(domain), VarKind::Deterministic});
    }
  }

  void distribution(const std::string& var, std::map<std::string, Rational>& dist) {
    list(Tok::LBrace, Tok::RBrace, Tok::Comma, "'{'", "'}'", [&] {
      const auto& value = expect_word("a value");
      expect(Tok::Colon, "':' after a value");
      const auto p = number();
      if (!dist.emplace(value.text, p).second) {
        semantic(value.span, "value '" + value.text + "' repeated in a row of '" + var + "'");
      }
    });
  }

  void note_node(const std::string& var, const SourceSpan& span) { node_spans_.emplace(var, span); }

  void det() {
    next();
    const auto& name = expect_word("a variable name");
    DeterministicNode node{name.text, parents(name.text), {}};
    list(Tok::LBrace, Tok::RBrace, Tok::Semi, "'{'", "'}'", [&] {
      auto [r, span] = row();
      expect(Tok::Arrow, "'->' after a row");
      node.table[r] = expect_word("an output value").text;
      note_row(node.variable, r, span);
    });
    note_node(node.variable, name.span);
    nodes_.emplace_back(std::move(node));
  }

  void utility() {
    next();
    const auto& name = expect_word("a variable name");
    UtilityNode node{name.text, parents(name.text), {}};
    list(Tok::LBrace, Tok::RBrace, Tok::Semi, "'{'", "'}'", [&] {
      auto [r, span] = row();
      expect(Tok::Arrow, "'->' after a row");
      node.table[r] = number();
      note_row(node.variable, r, span);
    });
    decl_spans_.emplace(node.variable, name.span);
    note_node(node.variable, name.span);
    decls_.push_back({node.variable, {}, VarKind::Utility});
    nodes_.emplace_back(std::move(node));
  }

  void designate() {
    const auto& kw = next();
    Designations d;
    std::set<std::string> seen;
    std::map<std::string, SourceSpan> spans;
    while (!at(Tok::End) && !(peek().line_start && is_stanza_keyword(peek()))) {
      const auto& field = expect_word("a designation (act, obs, value, fdt, self)");
      if (!seen.insert(field.text).second) semantic(field.span, "designation '" + field.text + "' given twice");
      if (field.text == "fdt") {
        list(Tok::LBrace, Tok::RBrace, Tok::Comma, "'{'", "'}'", [&] {
          std::string key;
          if (at(Tok::NoObs)) key = next().text;
          else key = expect_word("an observation value or '\xE2\x88\x85'").text;
          expect(Tok::Colon, "':' after an fdt key");
          const auto& target = expect_word("an fdt node name");
          d.fdt[key] = target.text;
          spans.emplace(target.text, target.span);
        });
        continue;
      }
      if (field.text != "act" && field.text != "obs" && field.text != "value" && field.text != "self") {
        fail(field, "unknown designation '" + field.text + "'");
      }
      expect(Tok::Equals, "'=' after '" + field.text + "'");
      const auto& target = expect_word("a variable name");
      spans.emplace(target.text, target.span);
      if (field.text == "act") d.act = target.text;
      else if (field.text == "obs") d.obs = target.text;
      else if (field.text == "value") d.value = target.text;
      else d.self = target.text;
    }
    if (designate_span_) {
      semantic(kw.span, "second 'designate' stanza");
      return;
    }
    designate_span_ = kw.span;
    if (!seen.count("act")) semantic(kw.span, "designate is missing 'act'");
    if (!seen.count("value")) semantic(kw.span, "designate is missing 'value'");
    desig_ = std::move(d);
    desig_spans_ = std::move(spans);
  }

  // ---- semantics ----

  SourceSpan span_for(const Violation& v) const {
    const auto fallback = dilemma_span_.value_or(SourceSpan{});
    if (v.kind == ViolationKind::BadDesignation) {
      if (auto it = desig_spans_.find(v.variable); it != desig_spans_.end()) return it->second;
      return designate_span_.value_or(fallback);
    }
    if (!v.related.empty()) {
      if (auto it = parent_spans_.find({v.variable, v.related}); it != parent_spans_.end()) return it->second;
    }
    if (v.row) {
      if (auto it = row_spans_.find({v.variable, *v.row}); it != row_spans_.end()) return it->second;
    }
    const bool node_first = v.kind != ViolationKind::MissingNode && v.kind != ViolationKind::DuplicateVariable &&
                            v.kind != ViolationKind::EmptyDomain && v.kind != ViolationKind::DuplicateValue;
    if (node_first) {
      if (auto it = node_spans_.find(v.variable); it != node_spans_.end()) return it->second;
    }
    if (auto it = decl_spans_.find(v.variable); it != decl_spans_.end()) return it->second;
    if (auto it = node_spans_.find(v.variable); it != node_spans_.end()) return it->second;
    return fallback;
  }

  void semantic_checks() {
    if (!dilemma_span_) return;
    if (!designate_span_) {
      semantic(*dilemma_span_, "missing 'designate' stanza");
      return;
    }
    for (const auto& v : check_model(decls_, nodes_, desig_)) semantic(span_for(v), v.message);
  }

  ParseResult finish() {
    ParseResult r;
    if (errors_.empty()) {
      try {
        r.model = build_model(decls_, nodes_, desig_, name_);
      } catch (const ModelError& e) {
        for (const auto& v : e.violations()) semantic(span_for(v), v.message);
      }
    }
    std::stable_sort(errors_.begin(), errors_.end(),
                     [](const ParseError& a, const ParseError& b) { return a.span.offset < b.span.offset; });
    r.errors = std::move(errors_);
    return r;
  }

  std::vector<Token> toks_;
  std::vector<ParseError>& errors_;
  std::size_t pos_ = 0;

  std::string name_;
  std::vector<VariableDecl> decls_;
  std::vector<Node> nodes_;
  Designations desig_;
  std::optional<SourceSpan> dilemma_span_;
  std::optional<SourceSpan> designate_span_;
  std::map<std::string, SourceSpan> decl_spans_;
  std::map<std::string, SourceSpan> node_spans_;
  std::map<std::string, SourceSpan> desig_spans_;
  std::map<std::pair<std::string, Row>, SourceSpan> row_spans_;
  std::map<std::pair<std::string, std::string>, SourceSpan> parent_spans_;
};

}  // namespace

ParseResult parse(std::string_view text) {
  std::vector<ParseError> errors;
  try {
    auto tokens = Lexer(text, errors).run();
    return Parser(std::move(tokens), errors).run();
  } catch (const std::exception& e) {
    ParseResult r;
    r.errors = std::move(errors);
    r.errors.push_back({SourceSpan{}, ParseErrorKind::Semantic, std::string("internal error: ") + e.what()});
    return r;
  }
}

}  // namespace dtheory
