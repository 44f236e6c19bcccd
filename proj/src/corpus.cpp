#include "bienforce/corpus.hpp"

#include "bienforce/errors.hpp"

namespace bienforce {

const std::vector<NamedArtifact>& corpus_artifacts() {
  static const std::vector<NamedArtifact> artifacts = {
      {"p_g", "process",
       "rec r. ( a?(x). let y = ans(x) in a!y. b!<x, y>. r\n"
       "       + b?(z). if z = cls then nil else r )",
       "well-behaved request-response server: answers each request once, logs "
       "the served pair on port b, stops on a cls request"},
      {"p_bo", "process",
       "rec r. ( a?(x). let y = ans(x) in a!y. (a!y. b!<x, y>. r + b!<x, y>. r)\n"
       "       + b?(z). if z = cls then nil else r )",
       "server that may nondeterministically repeat an answer before logging"},
      {"p_bi", "process",
       "a?(w). rec r. ( a?(x). let y = ans(x) in a!y. b!<x, y>. r\n"
       "              + b?(z). if z = cls then nil else r )",
       "server that needs a startup input before serving, so it can accept two "
       "requests in a row"},
      {"phi1", "formula",
       "max X. [(x)?(y1), x != b] ( [(x1)?(_), x1 = x] ff\n"
       "                          & [(x2)!(y2), x2 = x] ( [(x3)!(_), x3 = x] ff\n"
       "                                                & [(x4)!(y3), x4 = b && y3 = "
       "<y1, y2>] X ) )",
       "no repeated input on the same non-b port, one answer per request, then a "
       "log of the served pair on b"},
      {"phi2", "formula", "[(x1)?(_), x1 = a] [(x2)?(_), x2 != a] ff",
       "an initial input on a must not be followed by an input on another port"},
      {"phi3", "formula",
       "max X. [(x1)?(y1), x1 = a] ( [(x2)!(y2), x2 = a && y2 != 3] X\n"
       "                           & [(x3)!(y3), y3 = 4] ff )",
       "recursive property with overlapping output branches (a!4 matches both); "
       "not in normal form"},
      {"phi3_nf", "formula",
       "max X. [(x1)?(y1), x1 = a] ( [(xd)!(yd), xd = a && yd != 4 && yd != 3] X\n"
       "                           & [(xe)!(ye), xe = a && ye = 4] ff )",
       "normal-form reformulation of phi3 with disjoint branches"},
      {"e_d", "monitor", "rec y. ( (b?(_)). y + ((_)!(_), .). y )",
       "coarse disabling monitor: forwards inputs on b, suppresses every output, "
       "blocks all other inputs"},
      {"e_dt", "monitor",
       "rec r. (\n"
       "    ((x)?(y1), x != b). (\n"
       "        ((x1)?(_), x1 != x). id\n"
       "      + (x!(y2)). (\n"
       "            ((_)?(_)). id\n"
       "          + (b!(y3), y3 = <y1, y2>). r\n"
       "          + (x!(_), .). rec q. ( (b?(_)). q + ((_)!(_), .). q ) )\n"
       "    )\n"
       "  + (b?(_)). id\n"
       ")",
       "disabling monitor that blocks a repeated request and suppresses redundant "
       "answers, but degenerates to the coarse monitor afterwards"},
      {"e_det", "monitor",
       "rec r. (\n"
       "    (b?(_)). id\n"
       "  + ((x)?(y1), x != b). rec w1. (\n"
       "        (., x?vdef). w1\n"
       "      + ((x1)?(_), x1 != x). id\n"
       "      + (x!(y2)). rec w2. (\n"
       "            (x!(_), x != b, .). w2\n"
       "          + (b!(y3), y3 = <y1, y2>). r\n"
       "          + ((_)?(_)). id )\n"
       "    )\n"
       ")",
       "disabling monitor that unblocks a stalled server by inserting a default "
       "request and suppresses redundant answers in a loop"},
      {"e_e", "monitor",
       "((x)?(y), x != b, .). (., x!ans(y)). (., b!<y, ans(y)>). id",
       "enabling monitor: absorbs one request itself, then fabricates the answer "
       "and the log entry"},
      {"e_a", "monitor", "rec r. ( (b?(y), a?y). r + (a!(y), b!y). r )",
       "adaptation monitor: reroutes environment inputs from b to a and server "
       "outputs from a to b"},
      {"e_1", "monitor", "(a?(_)). rec w. ( (., b?vdef). w + (a?(_)). id )",
       "disabling monitor for phi2 able to insert the default value on port b only"},
      {"e_2", "monitor",
       "(a?(_)). rec w. ( (., b?vdef). w + (., c?vdef). w + (a?(_)). id )",
       "disabling monitor for phi2 able to insert the default value on ports b and c"},
      {"t0", "trace", "a?1 . a?2 . tau . a!ans(2) . a!ans(2) . b!<2, ans(2)>",
       "run with a repeated request, an internal computation step, a duplicated "
       "answer, and the log of the served pair"},
      {"t1", "trace", "a?1 . tau . a!ans(1) . a!ans(1) . b!<1, ans(1)>",
       "run with a duplicated answer after a single request"},
      {"t2", "trace", "a?1 . a?2 . tau . a!ans(2) . b!<2, ans(2)>",
       "run with two consecutive requests and a single answer"},
      {"t3", "trace", "a?1 . b?2 . a!5",
       "run with an input on b between a request and its answer"},
      {"t3c", "trace", "a?1 . c?2 . a!5 . b?1 . a!2",
       "variant of t3 with the second input moved to port c, plus two more actions"},
  };
  return artifacts;
}

const NamedArtifact& corpus_artifact(const std::string& name) {
  for (const auto& a : corpus_artifacts())
    if (a.name == name) return a;
  throw Error("UnknownName", "no corpus artifact named '" + name + "'");
}

ProcPtr corpus_process(const std::string& name) {
  return parse_process(corpus_artifact(name).text);
}

FormPtr corpus_formula(const std::string& name) {
  return parse_formula(corpus_artifact(name).text);
}

TrnPtr corpus_monitor(const std::string& name) {
  return parse_monitor(corpus_artifact(name).text);
}

ExplicitTrace corpus_trace(const std::string& name) {
  return parse_trace(corpus_artifact(name).text);
}

Universe corpus_universe() {
  return Universe{{"a", "b", "c"},
                  {Value::integer(1), Value::integer(2), Value::atom("cls"),
                   Value::atom("vdef")}};
}

Value corpus_default_value() { return Value::atom("vdef"); }

}  // namespace bienforce
