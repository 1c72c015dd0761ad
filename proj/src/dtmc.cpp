#include "pcause/dtmc.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pcause/errors.hpp"

namespace pcause {

Rat Dtmc::prob(StateId from, StateId to) const {
  for (const auto& tr : rows_[from]) {
    if (tr.to == to) return tr.prob;
  }
  return 0;
}

std::optional<StateId> Dtmc::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

StateId Dtmc::at(std::string_view name) const {
  if (auto s = find(name)) return *s;
  throw ModelError("unknown state '" + std::string(name) + "'");
}

std::vector<Rat> Dtmc::weights() const {
  std::vector<Rat> out;
  out.reserve(size());
  for (const auto& st : states_) out.push_back(st.weight);
  return out;
}

Dtmc Dtmc::with_weights(const std::vector<Rat>& weights) const {
  if (weights.size() != size()) throw std::invalid_argument("weight vector size mismatch");
  Dtmc copy = *this;
  for (std::size_t i = 0; i < size(); ++i) copy.states_[i].weight = weights[i];
  return copy;
}

std::string Dtmc::to_text() const {
  std::ostringstream out;
  out << "dtmc\n";
  for (const auto& st : states_) {
    out << "state " << st.name;
    if (st.weight != 0) out << " weight=" << to_string(st.weight);
    if (st.target) out << " target";
    if (st.safe_terminal) out << " safeterm";
    out << '\n';
  }
  out << "init " << states_[init_].name << '\n';
  for (StateId s = 0; s < size(); ++s) {
    for (const auto& tr : rows_[s]) {
      out << "trans " << states_[s].name << ' ' << states_[tr.to].name << ' ' << to_string(tr.prob)
          << '\n';
    }
  }
  return out.str();
}

StateId DtmcBuilder::add_state(std::string name, Rat weight, bool target, bool safe_terminal) {
  if (name.empty()) throw ModelError("empty state name");
  if (index_.contains(name)) throw ModelError("duplicate state '" + name + "'");
  StateId id = states_.size();
  index_.emplace(name, id);
  states_.push_back(StateInfo{std::move(name), std::move(weight), target, safe_terminal});
  rows_.emplace_back();
  return id;
}

void DtmcBuilder::set_init(StateId s) {
  if (s >= states_.size()) throw ModelError("initial state out of range");
  init_ = s;
}

void DtmcBuilder::add_transition(StateId from, StateId to, Rat prob) {
  if (from >= states_.size() || to >= states_.size()) throw ModelError("transition endpoint out of range");
  if (sgn(prob) <= 0 || prob > 1) {
    throw ModelError("probability " + to_string(prob) + " of " + states_[from].name + " -> " +
                     states_[to].name + " outside (0,1]");
  }
  for (const auto& tr : rows_[from]) {
    if (tr.to == to) {
      throw ModelError("duplicate transition " + states_[from].name + " -> " + states_[to].name);
    }
  }
  rows_[from].push_back(Transition{to, std::move(prob)});
}

bool DtmcBuilder::has_state(std::string_view name) const { return index_.contains(std::string(name)); }

StateId DtmcBuilder::state_id(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw ModelError("unknown state '" + std::string(name) + "'");
  return it->second;
}

Dtmc DtmcBuilder::build() const {
  if (states_.empty()) throw ModelError("model has no states");
  if (!init_) throw ModelError("missing init declaration");
  for (StateId s = 0; s < states_.size(); ++s) {
    Rat sum = 0;
    for (const auto& tr : rows_[s]) sum += tr.prob;
    if (sum != 1) {
      throw ModelError("outgoing probabilities of '" + states_[s].name + "' sum to " + to_string(sum) +
                       ", expected 1");
    }
  }
  Dtmc m;
  m.states_ = states_;
  m.rows_ = rows_;
  for (auto& row : m.rows_) {
    std::sort(row.begin(), row.end(), [](const Transition& a, const Transition& b) { return a.to < b.to; });
  }
  m.index_ = index_;
  m.init_ = *init_;
  return m;
}

std::vector<std::string_view> tokenize_line(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

Dtmc parse_dtmc(std::string_view text) {
  DtmcBuilder builder;
  bool header = false;
  std::size_t line_no = 0;
  // Transitions may reference states declared later, so they are resolved after the scan.
  struct PendingTrans {
    std::string from, to;
    Rat prob;
    std::size_t line;
  };
  std::vector<PendingTrans> pending;
  std::optional<std::pair<std::string, std::size_t>> init_decl;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto tok = tokenize_line(line);
    if (tok.empty()) continue;

    if (!header) {
      if (tok.size() != 1 || tok[0] != "dtmc") throw ModelError("expected 'dtmc' header", line_no);
      header = true;
      continue;
    }
    try {
      if (tok[0] == "state") {
        if (tok.size() < 2) throw ModelError("state declaration without a name", line_no);
        Rat weight = 0;
        bool target = false;
        bool safeterm = false;
        for (std::size_t i = 2; i < tok.size(); ++i) {
          if (tok[i].starts_with("weight=")) {
            weight = parse_rat(tok[i].substr(7));
          } else if (tok[i] == "target") {
            target = true;
          } else if (tok[i] == "safeterm") {
            safeterm = true;
          } else {
            throw ModelError("unknown state attribute '" + std::string(tok[i]) + "'", line_no);
          }
        }
        builder.add_state(std::string(tok[1]), weight, target, safeterm);
      } else if (tok[0] == "init") {
        if (tok.size() != 2) throw ModelError("init takes exactly one state", line_no);
        if (init_decl) throw ModelError("duplicate init declaration", line_no);
        init_decl = {std::string(tok[1]), line_no};
      } else if (tok[0] == "trans") {
        if (tok.size() != 4) throw ModelError("trans takes <from> <to> <prob>", line_no);
        pending.push_back({std::string(tok[1]), std::string(tok[2]), parse_rat(tok[3]), line_no});
      } else {
        throw ModelError("unknown keyword '" + std::string(tok[0]) + "'", line_no);
      }
    } catch (const ModelError& e) {
      if (e.line() != 0) throw;
      throw ModelError(e.what(), line_no);
    } catch (const std::invalid_argument& e) {
      throw ModelError(e.what(), line_no);
    }
  }
  if (!header) throw ModelError("empty model: expected 'dtmc' header");
  if (!init_decl) throw ModelError("missing init declaration");
  if (!builder.has_state(init_decl->first)) {
    throw ModelError("unknown state '" + init_decl->first + "'", init_decl->second);
  }
  builder.set_init(builder.state_id(init_decl->first));
  for (const auto& t : pending) {
    for (const auto* name : {&t.from, &t.to}) {
      if (!builder.has_state(*name)) throw ModelError("unknown state '" + *name + "'", t.line);
    }
    try {
      builder.add_transition(builder.state_id(t.from), builder.state_id(t.to), t.prob);
    } catch (const ModelError& e) {
      throw ModelError(e.what(), t.line);
    }
  }
  return builder.build();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dtmc load_dtmc(const std::string& path) { return parse_dtmc(read_file(path)); }

}  // namespace pcause
