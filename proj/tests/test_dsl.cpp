#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include "dtheory/corpus.hpp"
#include "dtheory/dsl.hpp"
#include "support/random_models.hpp"

using namespace dtheory;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dilemma_file(const std::string& name) { return std::string(DTHEORY_DILEMMA_DIR) + "/" + name + ".dlm"; }

// Recomputes line and column (in code points) for a byte offset.
std::pair<std::size_t, std::size_t> position(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c == '\n') {
      ++line;
      column = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++column;
    }
  }
  return {line, column};
}

void check_spans(std::string_view text, const ParseResult& r) {
  CHECK(r.ok() == r.model.has_value());
  CHECK(r.ok() == r.errors.empty());
  for (const auto& e : r.errors) {
    CHECK(e.span.length >= 1);
    CHECK(e.span.line >= 1);
    CHECK(e.span.column >= 1);
    CHECK(!e.message.empty());
    if (text.empty()) {
      CHECK(e.span.offset == 0);
      CHECK(e.span.line == 1);
      CHECK(e.span.column == 1);
      continue;
    }
    CHECK(e.span.offset + e.span.length <= text.size());
    const auto [line, column] = position(text, e.span.offset);
    CHECK(e.span.line == line);
    CHECK(e.span.column == column);
  }
}

const char* kTrivial = R"(dilemma "trivial"

var A in {a, b}
  prior {a: 1/2, b: 1/2}

utility V(A) {
  (a) -> 1;
  (b) -> 0;
}

designate act=A value=V fdt {∅: A}
)";

}  // namespace

TEST_CASE("the shipped newcomb file is the corpus FDT model") {
  const auto r = parse(slurp(dilemma_file("newcomb")));
  for (const auto& e : r.errors) MESSAGE(format_error(e));
  REQUIRE(r.ok());
  CHECK(structurally_equal(*r.model, newcomb().model("fdt")));
  CHECK(r.model->name() == "newcomb/fdt");
}

TEST_CASE("shipped canonical exports match the corpus byte for byte") {
  for (const auto& name : suite_names()) {
    if (name == "newcomb") continue;
    CAPTURE(name);
    const auto text = slurp(dilemma_file(name));
    const auto r = parse(text);
    REQUIRE(r.ok());
    const auto suite = load(name);
    const auto& m = suite.model("fdt");
    CHECK(structurally_equal(*r.model, m));
    CHECK(serialize(*r.model) == text);
    CHECK(serialize(m) == text);
  }
}

TEST_CASE("trivial model serialization") {
  const auto m = ModelBuilder("trivial")
                     .prior("A", {"a", "b"}, {Rational(1, 2), Rational(1, 2)})
                     .utility("V", {"A"}, [](const Row& r) { return Rational(r[0] == "a" ? 1 : 0); })
                     .build({"A", std::nullopt, "V", {{std::string(kNoObservation), "A"}}, std::nullopt});
  const auto text = serialize(m);
  CHECK(text == kTrivial);
  CHECK(serialize(m) == text);
  const auto r = parse(text);
  REQUIRE(r.ok());
  CHECK(structurally_equal(*r.model, m));
}

TEST_CASE("literals parse exactly") {
  const auto r = parse(R"(dilemma "lit"
var A in {a, b, c}
  prior {a: 0.125, b: 5/8, c: .25}
utility V(A) { (a) -> -1.5; (b) -> 2/6; (c) -> 1000000 }
designate value=V act=A
)");
  REQUIRE(r.ok());
  const auto node = std::get<StochasticNode>(r.model->node("A"));
  CHECK(node.cpt.at(Row{}).at("a") == Rational(1, 8));
  CHECK(node.cpt.at(Row{}).at("b") == Rational(5, 8));
  const auto u = std::get<UtilityNode>(r.model->node("V"));
  CHECK(u.table.at(Row{"a"}) == Rational(-3, 2));
  CHECK(u.table.at(Row{"b"}) == Rational(1, 3));
  CHECK(serialize(*r.model).find("(b) -> 1/3;") != std::string::npos);
}

TEST_CASE("cpt children, observations and self") {
  const auto r = parse(R"(dilemma "obs"
var Obs in {yes, no}
  cpt (World) {
    (w1): {yes: 1, no: 0};
    (w2): {yes: 1/4, no: 3/4};
  }
var World in {w1, w2}
  prior {w1: 1/3, w2: 2/3}
var Act in {x, y}
  prior {x: 1/2, y: 1/2}
var Me in {x, y}
  prior {x: 1, y: 0}
utility V(Act, World) {
  (x, w1) -> 1; (x, w2) -> 0; (y, w1) -> 0; (y, w2) -> 1;
}
designate act=Act obs=Obs value=V self=Me fdt {yes: Act}
)");
  for (const auto& e : r.errors) MESSAGE(format_error(e));
  REQUIRE(r.ok());
  const auto& d = r.model->designations();
  CHECK(d.obs == "Obs");
  CHECK(d.self == "Me");
  CHECK(d.fdt.at("yes") == "Act");
  CHECK(r.model->fdt_missing_observations() == std::vector<std::string>{"no"});
  const auto again = parse(serialize(*r.model));
  REQUIRE(again.ok());
  CHECK(structurally_equal(*again.model, *r.model));
}

TEST_CASE("empty input is a syntax error at 1:1") {
  const auto r = parse("");
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].kind == ParseErrorKind::Syntax);
  CHECK(r.errors[0].span.line == 1);
  CHECK(r.errors[0].span.column == 1);
  CHECK(format_error(r.errors[0]) == "<input>:1:1: syntax error: expected 'dilemma', found end of input");
  CHECK(parse("   \n# only a comment\n").errors.size() == 1);
}

TEST_CASE("a row summing past one is a semantic error naming the row") {
  const std::string text = R"(dilemma "bad"
var W in {u, v}
  prior {u: 1/2, v: 1/2}
var A in {a, b}
  cpt (W) {
    (u): {a: 1/2, b: 1/2};
    (v): {a: 1/100, b: 1};
  }
utility V(A) { (a) -> 1; (b) -> 0; }
designate act=A value=V
)";
  const auto r = parse(text);
  REQUIRE_FALSE(r.ok());
  bool found = false;
  for (const auto& e : r.errors) {
    CHECK(e.kind == ParseErrorKind::Semantic);
    if (e.message.find("(v)") != std::string::npos && e.message.find("101/100") != std::string::npos) {
      found = true;
      CHECK(e.span.line == 7);
      CHECK(e.span.column == 5);
      CHECK(text.substr(e.span.offset, e.span.length) == "(v)");
    }
  }
  CHECK(found);
  check_spans(text, r);
}

TEST_CASE("diagnostics name the offending token or identifier") {
  struct Case {
    std::string text;
    ParseErrorKind kind;
    std::string message;
    std::size_t line;
    std::size_t column;
  };
  const std::string head = "dilemma \"x\"\nvar A in {a, b}\n  prior {a: 1/2, b: 1/2}\n";
  const std::vector<Case> cases{
      {"var A in {a}", ParseErrorKind::Syntax, "expected 'dilemma', found 'var'", 1, 1},
      {"dilemma \"x\" var", ParseErrorKind::Syntax, "expected a new line before 'var'", 1, 13},
      {"dilemma \"x\"\n@", ParseErrorKind::Lex, "unexpected character '@'", 2, 1},
      {"dilemma \"x\"\n\x01", ParseErrorKind::Lex, "unexpected control character 0x01", 2, 1},
      {"dilemma \"x\"\n\xff", ParseErrorKind::Lex, "invalid byte 0xFF", 2, 1},
      {"dilemma \"x", ParseErrorKind::Lex, "unterminated string literal", 1, 9},
      {"dilemma \"x\\\nvar", ParseErrorKind::Lex, "unterminated string literal", 1, 9},
      {"dilemma \"\xc3\xbc\\q\"", ParseErrorKind::Lex, "unknown escape '\\q'", 1, 11},
      {head + "utility V(A) { (a) -> 1; (b) -> x; }\ndesignate act=A value=V", ParseErrorKind::Syntax,
       "invalid number 'x'", 4, 33},
      {head + "utility V(A) { (a) -> 1; }\ndesignate act=A value=V", ParseErrorKind::Semantic,
       "'V' has no row for (b)", 4, 9},
      {head + "var B in {c}\ndet B(Z) { () -> c; }\nutility V(A) { (a) -> 1; (b) -> 0; }\ndesignate act=A value=V",
       ParseErrorKind::Semantic, "'B' lists unknown parent 'Z'", 5, 7},
      {head + "utility V(A) { (a) -> 1; (b) -> 0; }\ndesignate act=A value=V fdt {∅: Q}",
       ParseErrorKind::Semantic, "fdt designation names unknown variable 'Q'", 5, 33},
      {head + "utility V(A) { (a) -> 1; (b) -> 0; }\ndesignate act=A value=V act=A", ParseErrorKind::Semantic,
       "designation 'act' given twice", 5, 25},
      {head + "utility V(A) { (a) -> 1; (b) -> 0; (a) -> 2; }\ndesignate act=A value=V", ParseErrorKind::Semantic,
       "duplicate row (a) in table of 'V'", 4, 36},
      {head + "utility V(A) { (a) -> 1; (b) -> 0; }\n", ParseErrorKind::Semantic, "missing 'designate' stanza", 1,
       1},
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    const auto r = parse(c.text);
    check_spans(c.text, r);
    REQUIRE_FALSE(r.errors.empty());
    bool found = false;
    for (const auto& e : r.errors) {
      if (e.message != c.message) continue;
      found = true;
      CHECK(e.kind == c.kind);
      CHECK(e.span.line == c.line);
      CHECK(e.span.column == c.column);
    }
    if (!found) {
      for (const auto& e : r.errors) MESSAGE(format_error(e));
    }
    CHECK(found);
  }
}

TEST_CASE("errors are reported in source order and recovery continues") {
  const std::string text = "dilemma \"x\"\nvar A in {a, b\nvar B in {c}\n  prior {c: 2}\nvar C in {d} @\n";
  const auto r = parse(text);
  check_spans(text, r);
  REQUIRE(r.errors.size() >= 2);
  for (std::size_t i = 1; i < r.errors.size(); ++i) CHECK(r.errors[i - 1].span.offset <= r.errors[i].span.offset);
  CHECK(r.errors[0].span.line == 3);
  CHECK(to_string(ParseErrorKind::Lex) == "lex");
  CHECK(format_error(r.errors[0], "f.dlm").rfind("f.dlm:3:1: syntax error: ", 0) == 0);
}

TEST_CASE("property: serialize then parse is the identity") {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 300; ++i) {
    auto g = gen::random_model(rng);
    if (gen::chance(rng, 0.2)) g.desig.self = g.desig.act;
    auto m = g.build();
    if (gen::chance(rng, 0.3)) m = m.with_name("tricky \"name\" \\ with\ttab");
    const auto text = serialize(m);
    const auto r = parse(text);
    for (const auto& e : r.errors) MESSAGE(format_error(e));
    REQUIRE(r.ok());
    CHECK(structurally_equal(*r.model, m));
    CHECK(r.model->name() == m.name());
    CHECK(serialize(*r.model) == text);
  }
  for (const auto& name : suite_names()) {
    for (const auto& [key, m] : load(name).models) {
      const auto r = parse(serialize(m));
      REQUIRE(r.ok());
      CHECK(structurally_equal(*r.model, m));
    }
  }
}

TEST_CASE("property: parsing is total on random bytes") {
  std::mt19937_64 rng(99);
  const auto seed = serialize(transparent_newcomb().model("fdt"));
  const std::string alphabet = "dilemma var det utility designate prior cpt in act obs value fdt self {}():;,=->#\"\\\n ∅0123456789/.-_abAB";
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 10000; ++i) {
    std::string text;
    switch (i % 3) {
      case 0: {
        const auto n = gen::uniform(rng, 0, 200);
        for (std::size_t k = 0; k < n; ++k) text.push_back(static_cast<char>(gen::uniform(rng, 0, 255)));
        break;
      }
      case 1: {
        const auto n = gen::uniform(rng, 0, 300);
        for (std::size_t k = 0; k < n; ++k) text.push_back(alphabet[gen::uniform(rng, 0, alphabet.size() - 1)]);
        break;
      }
      default: {
        text = seed;
        const auto edits = gen::uniform(rng, 1, 8);
        for (std::size_t k = 0; k < edits && !text.empty(); ++k) {
          const auto at = gen::uniform(rng, 0, text.size() - 1);
          switch (gen::uniform(rng, 0, 2)) {
            case 0: text[at] = static_cast<char>(gen::uniform(rng, 0, 255)); break;
            case 1: text.erase(at, gen::uniform(rng, 1, 10)); break;
            default: text.insert(at, 1, alphabet[gen::uniform(rng, 0, alphabet.size() - 1)]); break;
          }
        }
      }
    }
    ParseResult r;
    CHECK_NOTHROW(r = parse(text));
    check_spans(text, r);
    if (r.ok()) {
      const auto again = parse(serialize(*r.model));
      REQUIRE(again.ok());
      CHECK(structurally_equal(*again.model, *r.model));
    }
  }
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(30));
}
