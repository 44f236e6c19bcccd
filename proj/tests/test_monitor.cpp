#include <doctest.h>

#include "bienforce/corpus.hpp"
#include "bienforce/errors.hpp"
#include "bienforce/monitor.hpp"

using namespace bienforce;

TEST_CASE("parse: id expands to the two-branch recursive identity") {
  TrnPtr id = parse_monitor("id");
  CHECK(id == identity_monitor());
  TrnPtr spelled = parse_monitor("rec y. ((x)?(z), x?z). y + ((x)!(z), x!z). y");
  CHECK(monitor_alpha_key(spelled) == monitor_alpha_key(identity_monitor()));
  CHECK(is_identity_term(spelled));
  CHECK(monitor_str(spelled) == "id");
}

TEST_CASE("parse: the coarse disabling monitor") {
  TrnPtr e_d = corpus_monitor("e_d");
  REQUIRE(e_d->kind == Transducer::Kind::Rec);
  REQUIRE(e_d->body->kind == Transducer::Kind::Sum);
  REQUIRE(e_d->body->branches.size() == 2);
  const auto& in_branch = e_d->body->branches[0];
  CHECK(in_branch->tact.kind == TransformAction::Kind::Replay);
  CHECK(in_branch->pat.port.kind == PatPart::Kind::Lit);
  const auto& out_branch = e_d->body->branches[1];
  CHECK(out_branch->tact.kind == TransformAction::Kind::Dot);
  CHECK(out_branch->pat.dir == Direction::Out);
  CHECK(monitor_str(e_d) == "rec y. ((b?(_)). y + ((_)!(_), .). y)");
}

TEST_CASE("parse: malformed prefixes are rejected") {
  CHECK_THROWS_AS(parse_monitor("((x)?(y), ., x?y). id"), ParseError);
  CHECK_THROWS_WITH_AS(parse_monitor("(., .). id"), doctest::Contains("BothDot"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_monitor("((x)?(y), x!y). id"),
                       doctest::Contains("DirectionMismatch"), ParseError);
  CHECK_THROWS_WITH_AS(parse_monitor("w"), doctest::Contains("OpenTerm"), ParseError);
  CHECK_THROWS_AS(parse_monitor("rec w. w + (a?(_)). w"), ParseError);
}

TEST_CASE("dynamics: adaptation fires with the transformed label") {
  TrnPtr e_a = corpus_monitor("e_a");
  auto ts = transforms_of(e_a, input("b", Value::integer(5)));
  REQUIRE(ts.size() == 1);
  REQUIRE(ts[0].result.has_value());
  CHECK(ts[0].result->str() == "a?5");
  CHECK(monitor_alpha_key(ts[0].cont) == monitor_alpha_key(e_a));
  CHECK(transforms_of(e_a, input("a", Value::integer(5))).empty());
}

TEST_CASE("dynamics: the identity monitor maps every action to itself") {
  Universe u = corpus_universe();
  TrnPtr id = identity_monitor();
  CHECK(insertions_of(id).empty());
  for (const auto& act : u.action_set()) {
    auto ts = transforms_of(id, act);
    REQUIRE(ts.size() == 1);
    REQUIRE(ts[0].result.has_value());
    CHECK(*ts[0].result == act);
    CHECK(monitor_alpha_key(ts[0].cont) == monitor_alpha_key(id));
  }
}

TEST_CASE("dynamics: insertion prefixes step independently of a source") {
  TrnPtr e = parse_monitor("(., a?0). id");
  auto ins = insertions_of(e);
  REQUIRE(ins.size() == 1);
  CHECK_FALSE(ins[0].source.has_value());
  CHECK(ins[0].result->str() == "a?0");
  CHECK(is_identity_term(ins[0].cont));
  // A false condition disables the insertion.
  CHECK(insertions_of(parse_monitor("(., false, a?0). id")).empty());
}

TEST_CASE("dynamics: substituted continuations keep enclosing bindings") {
  // The first prefix binds x; the insertion inherits it.
  TrnPtr e = parse_monitor("((x)?(y1), x != b). (., x?vdef). id");
  auto ts = transforms_of(e, input("a", Value::integer(1)));
  REQUIRE(ts.size() == 1);
  auto ins = insertions_of(ts[0].cont);
  REQUIRE(ins.size() == 1);
  CHECK(ins[0].result->str() == "a?vdef");
}

TEST_CASE("etp: the reference monitors") {
  CHECK(etp(corpus_monitor("e_e")) == std::set<Capability>{Capability::En});
  CHECK(etp(corpus_monitor("e_a")) == std::set<Capability>{Capability::Adpt});
  CHECK(etp(corpus_monitor("e_d")) == std::set<Capability>{Capability::Dis});
  CHECK(etp(corpus_monitor("e_dt")) == std::set<Capability>{Capability::Dis});
  CHECK(etp(corpus_monitor("e_det")) == std::set<Capability>{Capability::Dis});
  CHECK(etp(identity_monitor()).empty());
  TrnPtr both = parse_monitor("rec x. ((x1)?(y), .). x + ((x2)!(y), .). x");
  CHECK(etp(both) == std::set<Capability>{Capability::En, Capability::Dis});
}

TEST_CASE("etp: summation is the union of its branches") {
  TrnPtr sum = t_sum({corpus_monitor("e_d"), corpus_monitor("e_e")});
  CHECK(etp(sum) == std::set<Capability>{Capability::Dis, Capability::En});
}

TEST_CASE("labels never have both sides absent") {
  Universe u = corpus_universe();
  for (const char* name : {"e_d", "e_dt", "e_det", "e_e", "e_a", "e_1", "e_2"}) {
    for (const auto& label : monitor_labels(corpus_monitor(name), u))
      CHECK((label.source.has_value() || label.result.has_value()));
  }
}

TEST_CASE("identity prefixes really replay the action") {
  Universe u = corpus_universe();
  // e_d's input branch is classified identity by etp; firing it on any
  // matching action yields the action unchanged.
  TrnPtr e_d = corpus_monitor("e_d");
  for (const auto& act : u.action_set()) {
    for (const auto& t : transforms_of(e_d, act)) {
      if (act.dir == Direction::In) {
        REQUIRE(t.result.has_value());
        CHECK(*t.result == act);
      } else {
        CHECK_FALSE(t.result.has_value());  // suppression branch
      }
    }
  }
}

TEST_CASE("monitor printer round-trips") {
  for (const char* name : {"e_d", "e_dt", "e_det", "e_e", "e_a", "e_1", "e_2"}) {
    TrnPtr e = corpus_monitor(name);
    TrnPtr again = parse_monitor(monitor_str(e));
    CHECK(monitor_alpha_key(again) == monitor_alpha_key(e));
    CHECK(monitor_str(again) == monitor_str(e));
  }
}
