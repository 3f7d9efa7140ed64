#include <doctest.h>

#include "cerl/generate.hpp"
#include "cerl/text.hpp"

using namespace cerl;

TEST_SUITE("syntax") {
  TEST_CASE("values print in concrete syntax") {
    CHECK(print(Value::list(std::vector{Value::integer(1), Value::atom("a"), Value::pid(Pid{2})})) ==
          "[1, 'a', #2]");
    CHECK(print(Value::cons(Value::integer(1), Value::integer(2))) == "[1|2]");
    CHECK(print(Value::nil()) == "[]");
    CHECK(print(Value::atom("it's")) == "'it\\'s'");
  }

  TEST_CASE("big integers survive printing and parsing") {
    const Integer big = Integer(1) << 200;
    const Value v = Value::integer(big);
    CHECK(parse_value(print(v)) == v);
    CHECK(parse_value("-17") == Value::integer(-17));
  }

  TEST_CASE("parse then print then parse is stable on generated terms") {
    Generator gen(7);
    for (int i = 0; i < 300; ++i) {
      const Expr e = gen.seq_expr(4);
      const std::string text = print(e);
      const Expr again = parse_expr(text);
      CHECK_MESSAGE(print(again) == text, text);
    }
  }

  TEST_CASE("scope and linearity errors are reported") {
    CHECK_THROWS_AS(parse_expr("let X = 1 in Y"), ParseError);
    try {
      parse_expr("let X = 1 in Y");
    } catch (const ParseError& e) {
      CHECK(e.kind() == ParseError::Kind::Scope);
    }
    try {
      parse_expr("case [1|2] of [X|X] then X else 0 end");
      FAIL("expected a linearity error");
    } catch (const ParseError& e) {
      CHECK(e.kind() == ParseError::Kind::Linearity);
    }
    CHECK_THROWS_AS(parse_expr("let X = in X"), ParseError);
    CHECK_THROWS_AS(Pattern::cons(Pattern::var("X"), Pattern::var("X")), std::invalid_argument);
  }

  TEST_CASE("substitution respects shadowing") {
    const Expr e = parse_expr("fun(X) -> let Y = X in Y end");
    Bindings b;
    b.bind(std::string("X"), Value::integer(5));
    CHECK(subst(e, b) == e);

    const Expr open = let("Z", var("X"), var("Z"));
    const Expr closed = subst(open, b);
    CHECK(closed.closed());
    CHECK(closed == let("Z", val(Value::integer(5)), var("Z")));
  }

  TEST_CASE("matching binds exactly the pattern variables") {
    const Pattern p = parse_pattern("[H|T]");
    auto b = match_bind(p, parse_value("[1, 2]"));
    REQUIRE(b);
    CHECK(b->size() == 2);
    CHECK(*b->find(std::string("H")) == Value::integer(1));
    CHECK(*b->find(std::string("T")) == parse_value("[2]"));
    CHECK(instantiate(p, *b) == parse_value("[1, 2]"));
    CHECK_FALSE(is_match(p, Value::nil()));
    CHECK(is_match(parse_pattern("['EXIT', P, R]"), exit_message(Pid{1}, Value::atom("kill"))));
  }

  TEST_CASE("list conversion") {
    CHECK(list_to_meta(parse_value("[1, 2, 3]"))->size() == 3);
    CHECK_FALSE(list_to_meta(parse_value("[1|2]")));
    CHECK(atom_to_bool(bool_to_atom(true)) == true);
    CHECK_FALSE(atom_to_bool(Value::atom("yes")));
  }

  TEST_CASE("equal terms hash equally") {
    Generator a(3), b(3);
    for (int i = 0; i < 100; ++i) {
      const Expr x = a.seq_expr(3), y = b.seq_expr(3);
      CHECK(x == y);
      CHECK(x.hash() == y.hash());
    }
  }
}
