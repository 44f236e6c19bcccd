#include "bienforce/instrument.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include <json.hpp>

#include "bienforce/errors.hpp"

namespace bienforce {

std::string rule_str(InstrRule r) {
  switch (r) {
    case InstrRule::BiTrnO:
      return "biTrnO";
    case InstrRule::BiTrnI:
      return "biTrnI";
    case InstrRule::BiDisO:
      return "biDisO";
    case InstrRule::BiDisI:
      return "biDisI";
    case InstrRule::BiEnO:
      return "biEnO";
    case InstrRule::BiEnI:
      return "biEnI";
    case InstrRule::BiAsy:
      return "biAsy";
    case InstrRule::BiDef:
      return "biDef";
  }
  return {};
}

std::vector<CompositeStep> composite_step(const CompositeState& s,
                                          const Universe& universe) {
  std::vector<CompositeStep> out;
  std::map<std::string, std::size_t> index;
  auto add = [&](ExplicitAction action, TrnPtr mon, ProcPtr proc, InstrRule rule) {
    std::string key =
        action.str() + "\x1f" + monitor_str(mon) + "\x1f" + process_str(proc);
    auto it = index.find(key);
    if (it != index.end()) {
      auto& rules = out[it->second].rules;
      if (std::find(rules.begin(), rules.end(), rule) == rules.end())
        rules.push_back(rule);
      return;
    }
    index.emplace(std::move(key), out.size());
    out.push_back(CompositeStep{std::move(action),
                                CompositeState{std::move(mon), std::move(proc)},
                                {rule}});
  };

  const auto psteps = step(s.process, universe);
  const auto inserts = insertions_of(s.monitor);
  bool has_output_insertion = false;
  for (const auto& ins : inserts)
    if (ins.result && ins.result->dir == Direction::Out) has_output_insertion = true;

  for (const auto& [u, p2] : psteps) {
    if (u.is_tau()) {
      add(ExplicitAction::tau(), s.monitor, p2, InstrRule::BiAsy);
      continue;
    }
    if (u.action().dir != Direction::Out) continue;
    const Action& out_act = u.action();
    auto transforms = transforms_of(s.monitor, out_act);
    for (const auto& t : transforms) {
      if (t.result) {
        add(ExplicitAction::visible(*t.result), t.cont, p2, InstrRule::BiTrnO);
      } else {
        add(ExplicitAction::tau(), t.cont, p2, InstrRule::BiDisO);
      }
    }
    if (transforms.empty() && !has_output_insertion)
      add(u, identity_monitor(), p2, InstrRule::BiDef);
  }

  for (const auto& env_in : universe.input_actions()) {
    for (const auto& t : transforms_of(s.monitor, env_in)) {
      if (t.result) {
        for (const auto& [u, p2] : psteps)
          if (!u.is_tau() && u.action() == *t.result)
            add(ExplicitAction::visible(env_in), t.cont, p2, InstrRule::BiTrnI);
      } else {
        add(ExplicitAction::visible(env_in), t.cont, s.process, InstrRule::BiEnI);
      }
    }
  }

  for (const auto& ins : inserts) {
    if (ins.result->dir == Direction::In) {
      for (const auto& [u, p2] : psteps)
        if (!u.is_tau() && u.action() == *ins.result)
          add(ExplicitAction::tau(), ins.cont, p2, InstrRule::BiDisI);
    } else {
      add(ExplicitAction::visible(*ins.result), ins.cont, s.process, InstrRule::BiEnO);
    }
  }
  return out;
}

Lts CompositeLts::to_lts() const {
  Lts l;
  l.initial = initial;
  l.labels = labels;
  l.succ.resize(succ.size());
  for (std::size_t i = 0; i < succ.size(); ++i)
    for (const auto& e : succ[i]) l.succ[i].emplace_back(e.action, e.target);
  return l;
}

CompositeLts explore_composite(const CompositeState& s, const Universe& universe,
                               int state_bound) {
  CompositeLts c;
  std::map<std::string, int> index;
  std::deque<int> work;
  auto intern = [&](const CompositeState& st) {
    std::string key = monitor_str(st.monitor) + "\x1f" + process_str(st.process);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (static_cast<int>(c.states.size()) >= state_bound)
      throw BoundError("StateBoundExceeded",
                       "more than " + std::to_string(state_bound) +
                           " distinct composite states");
    int id = static_cast<int>(c.states.size());
    index.emplace(std::move(key), id);
    c.states.push_back(st);
    c.labels.push_back(st.str());
    c.succ.emplace_back();
    work.push_back(id);
    return id;
  };
  c.initial = intern(s);
  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    CompositeState cur = c.states[id];
    for (const auto& step : composite_step(cur, universe)) {
      int target = intern(step.target);
      c.succ[id].push_back(CompositeEdge{step.action, target, step.rules});
    }
  }
  return c;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

}  // namespace

std::string composite_dot(const CompositeLts& c) {
  std::string out = "digraph composite {\n  rankdir=LR;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < c.labels.size(); ++i) {
    out += "  s" + std::to_string(i) + " [label=\"" + dot_escape(c.labels[i]) + "\"";
    if (static_cast<int>(i) == c.initial) out += ", style=bold";
    out += "];\n";
  }
  for (std::size_t i = 0; i < c.succ.size(); ++i)
    for (const auto& e : c.succ[i]) {
      std::string rules;
      for (std::size_t k = 0; k < e.rules.size(); ++k) {
        if (k) rules += ",";
        rules += rule_str(e.rules[k]);
      }
      out += "  s" + std::to_string(i) + " -> s" + std::to_string(e.target) +
             " [label=\"" + dot_escape(e.action.str()) + " [" + rules + "]\"];\n";
    }
  return out + "}\n";
}

std::string composite_json(const CompositeLts& c) {
  nlohmann::json j;
  j["initial"] = c.initial;
  j["states"] = nlohmann::json::array();
  for (std::size_t i = 0; i < c.states.size(); ++i)
    j["states"].push_back({{"id", i},
                           {"monitor", monitor_str(c.states[i].monitor)},
                           {"process", process_str(c.states[i].process)}});
  j["transitions"] = nlohmann::json::array();
  for (std::size_t i = 0; i < c.succ.size(); ++i)
    for (const auto& e : c.succ[i]) {
      nlohmann::json rules = nlohmann::json::array();
      for (auto r : e.rules) rules.push_back(rule_str(r));
      j["transitions"].push_back({{"from", i},
                                  {"action", e.action.str()},
                                  {"to", e.target},
                                  {"rules", rules}});
    }
  return j.dump(2);
}

std::string lts_dot(const Lts& l) {
  std::string out = "digraph lts {\n  rankdir=LR;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < l.labels.size(); ++i) {
    out += "  s" + std::to_string(i) + " [label=\"" + dot_escape(l.labels[i]) + "\"";
    if (static_cast<int>(i) == l.initial) out += ", style=bold";
    out += "];\n";
  }
  for (std::size_t i = 0; i < l.succ.size(); ++i)
    for (const auto& [a, t] : l.succ[i])
      out += "  s" + std::to_string(i) + " -> s" + std::to_string(t) + " [label=\"" +
             dot_escape(a.str()) + "\"];\n";
  return out + "}\n";
}

}  // namespace bienforce
