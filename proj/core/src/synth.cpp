#include "condbayes/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "condbayes/error.hpp"

namespace condbayes {
namespace {

constexpr double kRowTolerance = 1e-9;

// Hand-rolled draws: the standard distributions are implementation-defined,
// and generated traces must not change with the toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::ldexp(static_cast<double>(engine_() >> 11), -53); }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::size_t pick(const std::vector<double>& weights) {
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

Value parse_value(const std::string& token) {
  if (auto x = parse_number(token)) return *x;
  return token;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw FormatError("model line " + std::to_string(line) + ": " + what);
}

double number(const std::string& token, std::size_t line) {
  const auto x = parse_number(token);
  if (!x) fail(line, "expected a number, got '" + token + "'");
  return *x;
}

double probability(const std::string& token, std::size_t line) {
  const double p = number(token, line);
  if (!(p >= 0.0 && p <= 1.0)) fail(line, "probability outside [0, 1]: " + token);
  return p;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

void check_row(const std::vector<double>& row, std::size_t line, const std::string& what) {
  double sum = 0.0;
  for (double p : row) sum += p;
  if (std::abs(sum - 1.0) > kRowTolerance) fail(line, what + " does not sum to 1");
}

}  // namespace

GeneratorModel parse_model(std::string_view text) {
  GeneratorModel m;
  std::map<std::string, std::size_t, std::less<>> state_index;
  std::map<std::string, std::size_t, std::less<>> var_index;
  std::vector<bool> row_seen;
  bool initial_seen = false;

  struct PendingEmit {
    std::size_t line;
    std::string state;
    std::string var;
    Distribution dist;
  };
  std::vector<PendingEmit> emits;
  std::vector<std::pair<std::size_t, std::string>> plant_lines;

  auto var_slot = [&](const std::string& name) -> VariableRule& {
    auto [it, inserted] = var_index.try_emplace(name, m.variables.size());
    if (inserted) m.variables.push_back({name, {}, std::nullopt});
    return m.variables[it->second];
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    std::vector<std::string> tok;
    for (std::string w; words >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    const std::string& head = tok[0];

    if (head == "states") {
      if (!m.states.empty()) fail(line, "states declared twice");
      if (tok.size() < 2) fail(line, "states needs at least one name");
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (!state_index.emplace(tok[i], m.states.size()).second) fail(line, "duplicate state " + tok[i]);
        m.states.push_back(tok[i]);
      }
      m.transition.assign(m.states.size(), std::vector<double>(m.states.size(), 0.0));
      row_seen.assign(m.states.size(), false);
      continue;
    }
    if (m.states.empty()) fail(line, "'" + head + "' before 'states'");
    const std::size_t ns = m.states.size();

    if (head == "initial" || head == "transition") {
      const bool is_row = head == "transition";
      const std::size_t skip = is_row ? 2 : 1;
      if (tok.size() != skip + ns) fail(line, head + " needs one probability per state");
      std::vector<double> row;
      for (std::size_t i = skip; i < tok.size(); ++i) row.push_back(probability(tok[i], line));
      check_row(row, line, head);
      if (is_row) {
        auto it = state_index.find(tok[1]);
        if (it == state_index.end()) fail(line, "unknown state " + tok[1]);
        if (row_seen[it->second]) fail(line, "transition row repeated for " + tok[1]);
        row_seen[it->second] = true;
        m.transition[it->second] = std::move(row);
      } else {
        if (initial_seen) fail(line, "initial declared twice");
        initial_seen = true;
        m.initial = std::move(row);
      }
    } else if (head == "timestep") {
      if (tok.size() != 2) fail(line, "timestep takes one value");
      m.timestep = number(tok[1], line);
      if (!(m.timestep > 0.0)) fail(line, "timestep must be positive");
    } else if (head == "emit") {
      if (tok.size() < 4) fail(line, "emit <state|*> <var> <distribution> ...");
      Distribution d;
      const std::string& kind = tok[3];
      if (kind == "categorical") {
        d.kind = Distribution::Kind::kCategorical;
        double total = 0.0;
        for (std::size_t i = 4; i < tok.size(); ++i) {
          const auto colon = tok[i].rfind(':');
          if (colon == std::string::npos || colon == 0) fail(line, "expected <value>:<weight>");
          const double w = number(tok[i].substr(colon + 1), line);
          if (!(w >= 0.0)) fail(line, "negative weight");
          d.values.push_back(parse_value(tok[i].substr(0, colon)));
          d.weights.push_back(w);
          total += w;
        }
        if (d.values.empty() || !(total > 0.0)) fail(line, "categorical needs positive total weight");
        for (double& w : d.weights) w /= total;
      } else if (kind == "normal" || kind == "uniform") {
        if (tok.size() != 6) fail(line, kind + " takes two parameters");
        d.kind = kind == "normal" ? Distribution::Kind::kNormal : Distribution::Kind::kUniform;
        d.a = number(tok[4], line);
        d.b = number(tok[5], line);
        if (d.kind == Distribution::Kind::kNormal && d.b < 0.0) fail(line, "negative sd");
        if (d.kind == Distribution::Kind::kUniform && !(d.a <= d.b)) fail(line, "uniform low > high");
      } else {
        fail(line, "unknown distribution '" + kind + "'");
      }
      var_slot(tok[2]);
      emits.push_back({line, tok[1], tok[2], std::move(d)});
    } else if (head == "plant") {
      if (tok.size() < 4) fail(line, "plant <var> <on> <off> p=<p> q=<q> ...");
      VariableRule& v = var_slot(tok[1]);
      if (v.plant) fail(line, "variable planted twice: " + tok[1]);
      Plant pl;
      pl.on = parse_value(tok[2]);
      pl.off = parse_value(tok[3]);
      bool has_p = false;
      bool has_q = false;
      for (std::size_t i = 4; i < tok.size(); ++i) {
        const auto eq = tok[i].find('=');
        if (eq == std::string::npos) fail(line, "expected key=value, got '" + tok[i] + "'");
        const std::string key = tok[i].substr(0, eq);
        const std::string val = tok[i].substr(eq + 1);
        if (key == "p") {
          pl.p = probability(val, line);
          has_p = true;
        } else if (key == "q") {
          pl.q = probability(val, line);
          has_q = true;
        } else if (key == "states") {
          for (const std::string& s : split(val, ',')) {
            auto it = state_index.find(s);
            if (it == state_index.end()) fail(line, "unknown state " + s);
            pl.states.push_back(it->second);
          }
        } else if (key == "if") {
          const auto eq2 = val.find('=');
          if (eq2 == std::string::npos || eq2 == 0) fail(line, "if=<var>=<value>");
          const std::string cond_var = val.substr(0, eq2);
          auto it = var_index.find(cond_var);
          if (it == var_index.end() || it->second >= var_index.at(tok[1]))
            fail(line, "condition must name an earlier variable: " + cond_var);
          pl.condition.emplace(cond_var, parse_value(val.substr(eq2 + 1)));
        } else {
          fail(line, "unknown plant key '" + key + "'");
        }
      }
      if (!has_p || !has_q) fail(line, "plant needs p= and q=");
      if (pl.states.empty())
        for (std::size_t s = 0; s < ns; ++s) pl.states.push_back(s);
      v.plant = std::move(pl);
      plant_lines.emplace_back(line, tok[1]);
    } else {
      fail(line, "unknown directive '" + head + "'");
    }
  }

  if (m.states.empty()) throw FormatError("model declares no states");
  const std::size_t ns = m.states.size();
  if (!initial_seen) {
    m.initial.assign(ns, 0.0);
    m.initial[0] = 1.0;
  }
  for (std::size_t s = 0; s < ns; ++s) {
    if (row_seen[s]) continue;
    if (ns > 1) throw FormatError("model has no transition row for state " + m.states[s]);
    m.transition[s][s] = 1.0;
  }

  for (VariableRule& v : m.variables) v.per_state.assign(ns, std::nullopt);
  for (PendingEmit& e : emits) {
    VariableRule& v = m.variables[var_index.at(e.var)];
    if (v.plant) fail(e.line, "variable is both planted and emitted: " + e.var);
    if (e.state == "*") {
      for (auto& slot : v.per_state)
        if (!slot) slot = e.dist;
      continue;
    }
    auto it = state_index.find(e.state);
    if (it == state_index.end()) fail(e.line, "unknown state " + e.state);
    v.per_state[it->second] = e.dist;  // a state-specific emission overrides '*'
  }
  for (const VariableRule& v : m.variables) {
    if (v.plant) continue;
    for (std::size_t s = 0; s < ns; ++s)
      if (!v.per_state[s])
        throw FormatError("variable " + v.name + " has no emission in state " + m.states[s]);
  }
  return m;
}

GeneratorModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

Trace generate(const GeneratorModel& model, std::uint64_t seed, std::size_t length) {
  if (length == 0) throw EmptyTraceError("cannot generate a trace of length 0");
  if (model.states.empty()) throw InputError("model has no states");
  Rng rng(seed);
  const std::size_t nv = model.variables.size();

  std::vector<std::size_t> cond_col(nv, 0);
  std::vector<std::vector<char>> in_states(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& pl = model.variables[v].plant;
    if (!pl) continue;
    in_states[v].assign(model.states.size(), 0);
    for (std::size_t s : pl->states) in_states[v][s] = 1;
    if (pl->condition) {
      for (std::size_t u = 0; u < v; ++u)
        if (model.variables[u].name == pl->condition->first) cond_col[v] = u;
    }
  }

  std::vector<std::vector<Value>> columns(nv, std::vector<Value>(length));
  std::size_t state = rng.pick(model.initial);
  for (std::size_t t = 0; t < length; ++t) {
    if (t > 0) state = rng.pick(model.transition[state]);
    for (std::size_t v = 0; v < nv; ++v) {
      const VariableRule& rule = model.variables[v];
      Value& out = columns[v][t];
      if (rule.plant) {
        const Plant& pl = *rule.plant;
        bool matched = in_states[v][state] != 0;
        if (matched && pl.condition) matched = columns[cond_col[v]][t] == pl.condition->second;
        out = rng.uniform() < (matched ? pl.p : pl.q) ? pl.on : pl.off;
        continue;
      }
      const Distribution& d = *rule.per_state[state];
      switch (d.kind) {
        case Distribution::Kind::kCategorical:
          out = d.values[rng.pick(d.weights)];
          break;
        case Distribution::Kind::kNormal:
          out = d.a + d.b * rng.normal();
          break;
        case Distribution::Kind::kUniform:
          out = d.a + (d.b - d.a) * rng.uniform();
          break;
      }
    }
  }

  std::vector<std::string> names;
  names.reserve(nv);
  for (const VariableRule& v : model.variables) names.push_back(v.name);
  return Trace(model.timestep, std::move(names), std::move(columns));
}

std::vector<CorpusCell> scaling_corpus() {
  std::vector<CorpusCell> cells;
  for (std::size_t length : {25'000u, 50'000u, 100'000u})
    for (std::size_t vars : {5u, 10u, 20u}) cells.push_back({length, vars});
  return cells;
}

Specification scaling_spec(std::size_t vars, int max_givens) {
  Specification spec;
  spec.max_givens = max_givens;
  for (std::size_t i = 0; i < vars; ++i) {
    PredicateDef d;
    d.var_name = "v" + std::to_string(i);
    d.kind = PredicateKind::kDoubleRange;
    d.partitions = {Expr::compare(d.var_name, CompareOp::kLt, 0.5),
                    Expr::compare(d.var_name, CompareOp::kGe, 0.5)};
    spec.outcomes.push_back(d);
    spec.givens.push_back(std::move(d));
  }
  return spec;
}

GeneratorModel scaling_model(std::size_t vars) {
  std::string text = "states s\n";
  for (std::size_t i = 0; i < vars; ++i) text += "emit * v" + std::to_string(i) + " uniform 0 1\n";
  return parse_model(text);
}

}  // namespace condbayes
