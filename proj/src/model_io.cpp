#include "ratiosynth/model_io.hpp"

#include "ratiosynth/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <unistd.h>

namespace ratiosynth {

namespace {

constexpr std::array<std::string_view, 9> kKeywords{"automaton", "mdp",     "system", "alphabet", "states",
                                                    "initial",   "safe",    "transitions", "labels"};

constexpr LetterId kUnsetLetter = std::numeric_limits<LetterId>::max();

bool is_keyword(std::string_view word) {
  return word == "outputs" || std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool plain_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'';
}

std::string quote_name(const std::string& name) {
  const bool plain = !name.empty() && !is_keyword(name) &&
                     std::all_of(name.begin(), name.end(), plain_char);
  return plain ? name : "\"" + name + "\"";
}

struct Line {
  std::size_t number;
  std::string text;
};

// Cursor over one line; columns are reported 1-based.
class Cursor {
 public:
  explicit Cursor(const Line& line) : line_(line) {}

  [[noreturn]] void fail(const std::string& message) const { fail_at(message, pos_); }
  [[noreturn]] void fail_at(const std::string& message, std::size_t pos) const {
    throw ParseError(message, line_.number, pos + 1);
  }

  void skip_ws() {
    while (pos_ < line_.text.size() && std::isspace(static_cast<unsigned char>(line_.text[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= line_.text.size();
  }
  bool peek(std::string_view s) {
    skip_ws();
    return line_.text.compare(pos_, s.size(), s) == 0;
  }
  void expect(std::string_view s) {
    if (!peek(s)) fail("expected '" + std::string(s) + "'");
    pos_ += s.size();
  }
  std::string name() {
    skip_ws();
    if (pos_ < line_.text.size() && line_.text[pos_] == '"') {
      const std::size_t close = line_.text.find('"', pos_ + 1);
      if (close == std::string::npos) fail("unterminated quoted name");
      std::string out = line_.text.substr(pos_ + 1, close - pos_ - 1);
      pos_ = close + 1;
      return out;
    }
    const std::size_t start = pos_;
    while (pos_ < line_.text.size() && plain_char(line_.text[pos_])) ++pos_;
    if (pos_ == start) fail("expected a name");
    return line_.text.substr(start, pos_ - start);
  }
  // Plain word without quoting; empty when the next token is not one.
  std::string word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < line_.text.size() && plain_char(line_.text[pos_])) ++pos_;
    return line_.text.substr(start, pos_ - start);
  }
  std::string rest() {
    skip_ws();
    std::string out = line_.text.substr(pos_);
    pos_ = line_.text.size();
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
    return out;
  }
  std::size_t pos() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }
  const std::string& text() const { return line_.text; }

 private:
  const Line& line_;
  std::size_t pos_ = 0;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = text.find('\n', i);
    if (j == std::string_view::npos) j = text.size();
    ++number;
    std::string line(text.substr(i, j - i));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool in_quote = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (line[k] == '"') in_quote = !in_quote;
      if (line[k] == '#' && !in_quote) {
        line.resize(k);
        break;
      }
    }
    if (line.find_first_not_of(" \t") != std::string::npos) out.push_back({number, line});
    i = j + 1;
  }
  return out;
}

enum class Kind { Automaton, Mdp, System };

struct RawModel {
  Kind kind = Kind::Automaton;
  std::string name;
  Alphabet inputs = Alphabet::bits({});
  Alphabet outputs = Alphabet::bits({});
  std::vector<std::string> states;
  std::optional<std::pair<std::string, Line>> initial;
  std::optional<std::vector<std::pair<std::string, Line>>> safe;
  std::vector<Line> transitions;
  std::vector<Line> labels;  // labels or outputs section
};

RawModel scan(std::string_view text) {
  const std::vector<Line> lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty model file", 1, 1);
  RawModel raw;
  {
    Cursor c(lines.front());
    const std::string kind = c.word();
    if (kind == "automaton") raw.kind = Kind::Automaton;
    else if (kind == "mdp") raw.kind = Kind::Mdp;
    else if (kind == "system") raw.kind = Kind::System;
    else c.fail_at("expected 'automaton', 'mdp' or 'system'", 0);
    raw.name = c.name();
    if (!c.at_end()) c.fail("unexpected text after model name");
  }
  enum class Section { None, Alphabet, Transitions, Labels };
  Section section = Section::None;
  bool seen_input = false;
  bool seen_output = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    Cursor c(line);
    const std::string first = c.word();
    if (is_keyword(first)) {
      if (first == "alphabet" || first == "transitions" || first == "labels" || first == "outputs") {
        if (!c.at_end()) c.fail("section keyword '" + first + "' must stand alone");
        if (first == "labels" && raw.kind != Kind::Mdp) c.fail_at("'labels' is only valid in mdp files", 0);
        if (first == "outputs" && raw.kind != Kind::System) c.fail_at("'outputs' is only valid in system files", 0);
        section = first == "alphabet"      ? Section::Alphabet
                  : first == "transitions" ? Section::Transitions
                                           : Section::Labels;
        continue;
      }
      section = Section::None;
      if (first == "states") {
        while (!c.at_end()) {
          const std::size_t at = c.pos();
          std::string n = c.name();
          if (std::find(raw.states.begin(), raw.states.end(), n) != raw.states.end())
            c.fail_at("duplicate state '" + n + "'", at);
          raw.states.push_back(std::move(n));
        }
      } else if (first == "initial") {
        if (raw.initial) c.fail_at("initial state given twice", 0);
        raw.initial = {{c.name(), line}};
        if (!c.at_end()) c.fail("one initial state expected");
      } else if (first == "safe") {
        if (raw.kind != Kind::Automaton) c.fail_at("'safe' is only valid in automaton files", 0);
        if (!raw.safe) raw.safe.emplace();
        while (!c.at_end()) raw.safe->push_back({c.name(), line});
      } else {
        c.fail_at("unexpected keyword '" + first + "'", 0);
      }
      continue;
    }
    switch (section) {
      case Section::None:
        c.fail_at("line outside of any section", 0);
      case Section::Alphabet: {
        c.seek(0);
        const std::string side = c.word();
        const std::string kind = c.word();
        if (side != "input" && side != "output") c.fail_at("expected 'input' or 'output'", 0);
        if (kind != "bits" && kind != "letters") c.fail("expected 'bits' or 'letters'");
        std::vector<std::string> symbols;
        while (!c.at_end()) symbols.push_back(c.name());
        Alphabet a;
        try {
          a = kind == "bits" ? Alphabet::bits(std::move(symbols)) : Alphabet::names(std::move(symbols));
        } catch (const std::invalid_argument& e) {
          c.fail_at(e.what(), 0);
        }
        bool& seen = side == "input" ? seen_input : seen_output;
        if (seen) c.fail_at(side + " alphabet declared twice", 0);
        seen = true;
        (side == "input" ? raw.inputs : raw.outputs) = std::move(a);
        break;
      }
      case Section::Transitions:
        raw.transitions.push_back(line);
        break;
      case Section::Labels:
        raw.labels.push_back(line);
        break;
    }
  }
  if (raw.states.empty()) throw ParseError("no states declared", lines.front().number, 1);
  return raw;
}

class StateTable {
 public:
  explicit StateTable(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) ids_.emplace(names[i], static_cast<StateId>(i));
  }
  StateId lookup(Cursor& c) const {
    c.skip_ws();
    const std::size_t at = c.pos();
    const std::string n = c.name();
    auto it = ids_.find(n);
    if (it == ids_.end()) c.fail_at("unknown state '" + n + "'", at);
    return it->second;
  }
  StateId lookup(const std::string& n, const Line& line) const {
    auto it = ids_.find(n);
    if (it == ids_.end()) {
      const std::size_t col = line.text.find(n);
      throw ParseError("unknown state '" + n + "'", line.number, col == std::string::npos ? 1 : col + 1);
    }
    return it->second;
  }

 private:
  std::map<std::string, StateId> ids_;
};

// Splits "SRC --LABEL--> REST" and returns the label text and its column.
struct Arrow {
  StateId source;
  std::string label;
  std::size_t label_pos;
};

Arrow read_arrow(Cursor& c, const StateTable& states) {
  Arrow a;
  a.source = states.lookup(c);
  c.expect("--");
  const std::size_t start = c.pos();
  const std::size_t end = c.text().find("-->", start);
  if (end == std::string::npos) c.fail("expected '-->'");
  a.label = c.text().substr(start, end - start);
  a.label_pos = start;
  c.seek(end + 3);
  return a;
}

template <typename F>
auto with_pattern(const Cursor& c, std::size_t pos, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    c.fail_at(std::string("bad pattern: ") + e.what(), pos);
  }
}

std::int64_t parse_cost(const Cursor& c, const std::string& text, std::size_t pos) {
  std::size_t used = 0;
  long long v = 0;
  std::string t = text;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    c.fail_at("expected an integer cost", pos);
  }
  if (used != t.size()) c.fail_at("expected an integer cost", pos);
  return v;
}

StateId initial_of(const RawModel& raw, const StateTable& states) {
  if (!raw.initial) return 0;
  return states.lookup(raw.initial->first, raw.initial->second);
}

CostAutomaton build_automaton(const RawModel& raw) {
  CostAutomaton aut;
  aut.name = raw.name;
  aut.inputs = raw.inputs;
  aut.outputs = raw.outputs;
  aut.states = raw.states;
  const StateTable states(raw.states);
  aut.initial = initial_of(raw, states);
  aut.safe.assign(raw.states.size(), !raw.safe.has_value());
  if (raw.safe)
    for (const auto& [n, line] : *raw.safe) aut.safe[states.lookup(n, line)] = true;
  const std::size_t k = aut.letter_count();
  aut.delta.assign(raw.states.size() * k, kNoState);
  aut.cost1.assign(raw.states.size() * k, 0);
  aut.cost2.assign(raw.states.size() * k, 0);
  for (const Line& line : raw.transitions) {
    Cursor c(line);
    const Arrow arrow = read_arrow(c, states);
    const StateId target = states.lookup(c);
    if (!c.at_end()) c.fail("unexpected text after target state");
    std::string pattern = arrow.label;
    std::int64_t c1 = 0;
    std::int64_t c2 = 0;
    const std::size_t slash = pattern.rfind('/');
    if (slash != std::string::npos) {
      const std::string costs = pattern.substr(slash + 1);
      const std::size_t comma = costs.find(',');
      const std::size_t cost_pos = arrow.label_pos + slash + 1;
      if (comma == std::string::npos) c.fail_at("expected costs 'c1,c2'", cost_pos);
      c1 = parse_cost(c, costs.substr(0, comma), cost_pos);
      c2 = parse_cost(c, costs.substr(comma + 1), cost_pos + comma + 1);
      pattern.resize(slash);
    }
    const auto letters = with_pattern(c, arrow.label_pos,
                                      [&] { return match_joint_pattern(pattern, aut.inputs, aut.outputs); });
    for (LetterId letter : letters) {
      const std::size_t idx = aut.index(arrow.source, letter);
      if (aut.delta[idx] != kNoState &&
          (aut.delta[idx] != target || aut.cost1[idx] != c1 || aut.cost2[idx] != c2))
        c.fail_at("pattern conflict: overlaps an earlier transition with a different target or cost",
                  arrow.label_pos);
      aut.delta[idx] = target;
      aut.cost1[idx] = c1;
      aut.cost2[idx] = c2;
    }
  }
  if (!raw.labels.empty()) Cursor(raw.labels.front()).fail_at("unexpected section", 0);
  return aut;
}

Distribution read_distribution(Cursor& c, const StateTable& states) {
  Distribution d;
  if (!c.peek("{")) {
    d.entries.emplace_back(states.lookup(c), Rational(1));
    return d;
  }
  c.expect("{");
  while (true) {
    const std::size_t at = c.pos();
    const StateId t = states.lookup(c);
    c.expect(":");
    c.skip_ws();
    const std::size_t prob_pos = c.pos();
    std::size_t end = prob_pos;
    while (end < c.text().size() && c.text()[end] != ',' && c.text()[end] != '}') ++end;
    std::string prob = c.text().substr(prob_pos, end - prob_pos);
    while (!prob.empty() && std::isspace(static_cast<unsigned char>(prob.back()))) prob.pop_back();
    Rational p;
    try {
      p = parse_rational(prob);
    } catch (const std::invalid_argument&) {
      c.fail_at("bad probability '" + prob + "'", prob_pos);
    }
    c.seek(end);
    for (const auto& [u, q] : d.entries)
      if (u == t) c.fail_at("successor listed twice", at);
    d.entries.emplace_back(t, p);
    if (c.peek(",")) {
      c.expect(",");
      continue;
    }
    c.expect("}");
    break;
  }
  std::sort(d.entries.begin(), d.entries.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return d;
}

// Labels/outputs section: "s: PATTERN" with exactly one matching letter.
std::vector<LetterId> read_state_letters(const RawModel& raw, const StateTable& states, const Alphabet& alphabet,
                                         const char* what) {
  std::vector<LetterId> out(raw.states.size(), kUnsetLetter);
  for (const Line& line : raw.labels) {
    Cursor c(line);
    const StateId s = states.lookup(c);
    c.expect(":");
    c.skip_ws();
    const std::size_t at = c.pos();
    const std::string pattern = c.rest();
    const auto letters = with_pattern(c, at, [&] { return match_pattern(pattern, alphabet); });
    if (letters.size() != 1)
      c.fail_at(std::string(what) + " pattern must denote exactly one letter", at);
    if (out[s] != kUnsetLetter && out[s] != letters.front())
      c.fail_at(std::string("conflicting ") + what + " for state '" + raw.states[s] + "'", at);
    out[s] = letters.front();
  }
  return out;
}

LabeledMDP build_mdp(const RawModel& raw) {
  LabeledMDP mdp;
  mdp.name = raw.name;
  mdp.labels = raw.inputs;
  mdp.actions = raw.outputs;
  mdp.states = raw.states;
  const StateTable states(raw.states);
  mdp.initial = initial_of(raw, states);
  const std::size_t k = mdp.action_count();
  mdp.trans.assign(raw.states.size() * k, Distribution{});
  for (const Line& line : raw.transitions) {
    Cursor c(line);
    const Arrow arrow = read_arrow(c, states);
    const Distribution d = read_distribution(c, states);
    if (!c.at_end()) c.fail("unexpected text after distribution");
    const auto actions = with_pattern(c, arrow.label_pos, [&] { return match_pattern(arrow.label, mdp.actions); });
    for (LetterId a : actions) {
      Distribution& slot = mdp.trans[arrow.source * k + a];
      if (!slot.empty() && !(slot == d))
        c.fail_at("pattern conflict: overlaps an earlier transition with a different distribution", arrow.label_pos);
      slot = d;
    }
  }
  mdp.label = read_state_letters(raw, states, mdp.labels, "label");
  return mdp;
}

FiniteStateSystem build_system(const RawModel& raw) {
  FiniteStateSystem sys;
  sys.name = raw.name;
  sys.inputs = raw.inputs;
  sys.outputs = raw.outputs;
  sys.states = raw.states;
  const StateTable states(raw.states);
  sys.initial = initial_of(raw, states);
  const std::size_t k = sys.inputs.size();
  sys.delta.assign(raw.states.size() * k, kNoState);
  for (const Line& line : raw.transitions) {
    Cursor c(line);
    const Arrow arrow = read_arrow(c, states);
    const StateId target = states.lookup(c);
    if (!c.at_end()) c.fail("unexpected text after target state");
    const auto inputs = with_pattern(c, arrow.label_pos, [&] { return match_pattern(arrow.label, sys.inputs); });
    for (LetterId l : inputs) {
      StateId& slot = sys.delta[arrow.source * k + l];
      if (slot != kNoState && slot != target)
        c.fail_at("pattern conflict: overlaps an earlier transition with a different target", arrow.label_pos);
      slot = target;
    }
  }
  sys.output = read_state_letters(raw, states, sys.outputs, "output");
  return sys;
}

void print_alphabet(std::ostringstream& os, const char* side, const Alphabet& a) {
  os << "  " << side << (a.kind() == Alphabet::Kind::Bits ? " bits" : " letters");
  for (const auto& s : a.symbols()) os << ' ' << quote_name(s);
  os << '\n';
}

void print_header(std::ostringstream& os, const char* kind, const std::string& name, const Alphabet& in,
                  const Alphabet& out, const std::vector<std::string>& states, StateId initial) {
  os << kind << ' ' << quote_name(name) << "\nalphabet\n";
  print_alphabet(os, "input", in);
  print_alphabet(os, "output", out);
  os << "states";
  for (const auto& s : states) os << ' ' << quote_name(s);
  os << "\ninitial " << quote_name(states.at(initial)) << '\n';
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

std::string node_id(std::size_t i) { return "n" + std::to_string(i); }

// Edges grouped by (source, target, suffix) in first-appearance order.
class EdgeGroups {
 public:
  void add(std::size_t from, std::size_t to, const std::string& suffix, const std::string& letter) {
    const auto key = std::make_tuple(from, to, suffix);
    auto it = index_.find(key);
    if (it == index_.end()) {
      it = index_.emplace(key, groups_.size()).first;
      groups_.push_back({from, to, suffix, {}});
    }
    groups_[it->second].letters.push_back(letter);
  }
  void write(std::ostringstream& os) const {
    for (const auto& g : groups_) {
      std::string label;
      for (std::size_t i = 0; i < g.letters.size(); ++i) label += (i ? "\\n" : "") + dot_escape(g.letters[i]);
      if (!g.suffix.empty()) label += (label.empty() ? "" : "\\n") + dot_escape(g.suffix);
      os << "  " << node_id(g.from) << " -> " << node_id(g.to) << " [label=\"" << label << "\"];\n";
    }
  }

 private:
  struct Group {
    std::size_t from;
    std::size_t to;
    std::string suffix;
    std::vector<std::string> letters;
  };
  std::map<std::tuple<std::size_t, std::size_t, std::string>, std::size_t> index_;
  std::vector<Group> groups_;
};

void dot_open(std::ostringstream& os, const std::string& name, std::size_t initial) {
  os << "digraph \"" << dot_escape(name) << "\" {\n  rankdir=LR;\n  node [shape=circle];\n"
     << "  init [shape=point];\n  init -> " << node_id(initial) << ";\n";
}

std::string joint_name(const Alphabet& in, const Alphabet& out, LetterId letter) {
  return in.letter_name(static_cast<LetterId>(letter / out.size())) + " & " +
         out.letter_name(static_cast<LetterId>(letter % out.size()));
}

}  // namespace

AnyModel parse_model(std::string_view text) {
  const RawModel raw = scan(text);
  switch (raw.kind) {
    case Kind::Automaton: return build_automaton(raw);
    case Kind::Mdp: return build_mdp(raw);
    case Kind::System: return build_system(raw);
  }
  throw ParseError("unknown model kind", 1, 1);
}

template <typename T>
T expect_kind(std::string_view text, const char* kind) {
  AnyModel m = parse_model(text);
  if (auto* p = std::get_if<T>(&m)) return std::move(*p);
  throw InputError(std::string("expected a file of kind '") + kind + "'");
}

CostAutomaton parse_automaton(std::string_view text) { return expect_kind<CostAutomaton>(text, "automaton"); }
LabeledMDP parse_mdp(std::string_view text) { return expect_kind<LabeledMDP>(text, "mdp"); }
FiniteStateSystem parse_system(std::string_view text) { return expect_kind<FiniteStateSystem>(text, "system"); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw InputError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot move output into place at '" + path + "': " + ec.message());
  }
}

std::string print_model(const CostAutomaton& aut) {
  std::ostringstream os;
  print_header(os, "automaton", aut.name, aut.inputs, aut.outputs, aut.states, aut.initial);
  os << "safe";
  for (StateId q = 0; q < aut.states.size(); ++q)
    if (aut.safe[q]) os << ' ' << quote_name(aut.states[q]);
  os << "\ntransitions\n";
  for (StateId q = 0; q < aut.states.size(); ++q)
    for (LetterId letter = 0; letter < aut.letter_count(); ++letter) {
      const std::size_t idx = aut.index(q, letter);
      if (aut.delta[idx] == kNoState) continue;
      os << "  " << quote_name(aut.states[q]) << " --" << joint_name(aut.inputs, aut.outputs, letter) << '/'
         << aut.cost1[idx] << ',' << aut.cost2[idx] << "--> " << quote_name(aut.states[aut.delta[idx]]) << '\n';
    }
  return os.str();
}

std::string print_model(const LabeledMDP& mdp) {
  std::ostringstream os;
  print_header(os, "mdp", mdp.name, mdp.labels, mdp.actions, mdp.states, mdp.initial);
  os << "labels\n";
  for (StateId s = 0; s < mdp.states.size(); ++s)
    if (mdp.label[s] < mdp.labels.size())
      os << "  " << quote_name(mdp.states[s]) << ": " << mdp.labels.letter_name(mdp.label[s]) << '\n';
  os << "transitions\n";
  for (StateId s = 0; s < mdp.states.size(); ++s)
    for (LetterId a = 0; a < mdp.action_count(); ++a) {
      const Distribution& d = mdp.at(s, a);
      if (d.empty()) continue;
      os << "  " << quote_name(mdp.states[s]) << " --" << mdp.actions.letter_name(a) << "--> {";
      for (std::size_t i = 0; i < d.entries.size(); ++i)
        os << (i ? ", " : "") << quote_name(mdp.states[d.entries[i].first]) << ": "
           << to_string(d.entries[i].second);
      os << "}\n";
    }
  return os.str();
}

std::string print_model(const FiniteStateSystem& sys) {
  std::ostringstream os;
  print_header(os, "system", sys.name, sys.inputs, sys.outputs, sys.states, sys.initial);
  os << "outputs\n";
  for (StateId s = 0; s < sys.states.size(); ++s)
    if (sys.output[s] < sys.outputs.size())
      os << "  " << quote_name(sys.states[s]) << ": " << sys.outputs.letter_name(sys.output[s]) << '\n';
  os << "transitions\n";
  for (StateId s = 0; s < sys.states.size(); ++s)
    for (LetterId l = 0; l < sys.inputs.size(); ++l) {
      const StateId t = sys.delta[s * sys.inputs.size() + l];
      if (t == kNoState) continue;
      os << "  " << quote_name(sys.states[s]) << " --" << sys.inputs.letter_name(l) << "--> "
         << quote_name(sys.states[t]) << '\n';
    }
  return os.str();
}

std::string print_model(const AnyModel& model) {
  return std::visit([](const auto& m) { return print_model(m); }, model);
}

std::string to_dot(const CostAutomaton& aut) {
  std::ostringstream os;
  dot_open(os, aut.name, aut.initial);
  for (StateId q = 0; q < aut.states.size(); ++q)
    os << "  " << node_id(q) << " [label=\"" << dot_escape(aut.states[q]) << "\""
       << (aut.safe[q] ? ", shape=doublecircle" : "") << "];\n";
  EdgeGroups edges;
  for (StateId q = 0; q < aut.states.size(); ++q)
    for (LetterId letter = 0; letter < aut.letter_count(); ++letter) {
      const std::size_t idx = aut.index(q, letter);
      if (aut.delta[idx] == kNoState) continue;
      edges.add(q, aut.delta[idx], "/" + std::to_string(aut.cost1[idx]) + "," + std::to_string(aut.cost2[idx]),
                joint_name(aut.inputs, aut.outputs, letter));
    }
  edges.write(os);
  os << "}\n";
  return os.str();
}

std::string to_dot(const LabeledMDP& mdp) {
  std::ostringstream os;
  dot_open(os, mdp.name, mdp.initial);
  for (StateId s = 0; s < mdp.states.size(); ++s)
    os << "  " << node_id(s) << " [label=\"" << dot_escape(mdp.states[s]) << "\\n"
       << dot_escape(mdp.labels.letter_name(mdp.label[s])) << "\"];\n";
  EdgeGroups edges;
  for (StateId s = 0; s < mdp.states.size(); ++s)
    for (LetterId a = 0; a < mdp.action_count(); ++a)
      for (const auto& [t, p] : mdp.at(s, a).entries) edges.add(s, t, to_string(p), mdp.actions.letter_name(a));
  edges.write(os);
  os << "}\n";
  return os.str();
}

std::string to_dot(const FiniteStateSystem& sys) {
  std::ostringstream os;
  dot_open(os, sys.name, sys.initial);
  for (StateId s = 0; s < sys.states.size(); ++s)
    os << "  " << node_id(s) << " [label=\"" << dot_escape(sys.states[s]) << "\\n"
       << dot_escape(sys.outputs.letter_name(sys.output[s])) << "\", shape=box];\n";
  EdgeGroups edges;
  for (StateId s = 0; s < sys.states.size(); ++s)
    for (LetterId l = 0; l < sys.inputs.size(); ++l) {
      const StateId t = sys.delta[s * sys.inputs.size() + l];
      if (t != kNoState) edges.add(s, t, "", sys.inputs.letter_name(l));
    }
  edges.write(os);
  os << "}\n";
  return os.str();
}

std::string to_dot(const SynthesisMDP& mdp) {
  std::ostringstream os;
  dot_open(os, "synthesis", mdp.initial);
  for (StateId s = 0; s < mdp.size(); ++s)
    os << "  " << node_id(s) << " [label=\"" << dot_escape(mdp.names[s]) << "\\n"
       << dot_escape(mdp.labels.letter_name(mdp.label[s])) << "\"" << (mdp.unsafe[s] ? ", color=red" : "")
       << "];\n";
  EdgeGroups edges;
  for (StateId s = 0; s < mdp.size(); ++s)
    for (LetterId a = 0; a < mdp.action_count(); ++a) {
      const std::size_t idx = mdp.index(s, a);
      if (mdp.trans[idx].empty()) continue;
      const std::string costs = " (" + to_string(mdp.cost1[idx]) + "," + to_string(mdp.cost2[idx]) + ")";
      for (const auto& [t, p] : mdp.trans[idx].entries)
        edges.add(s, t, "", mdp.actions.letter_name(a) + ": " + to_string(p) + costs);
    }
  edges.write(os);
  os << "}\n";
  return os.str();
}

std::string to_dot(const CostMarkovChain& chain) {
  std::ostringstream os;
  dot_open(os, "chain", chain.initial);
  for (StateId s = 0; s < chain.size(); ++s)
    os << "  " << node_id(s) << " [label=\"" << dot_escape(chain.names[s]) << "\\n("
       << to_string(chain.cost1[s]) << "," << to_string(chain.cost2[s]) << ")\"];\n";
  EdgeGroups edges;
  for (StateId s = 0; s < chain.size(); ++s)
    for (const auto& [t, p] : chain.trans[s].entries) edges.add(s, t, "", to_string(p));
  edges.write(os);
  os << "}\n";
  return os.str();
}

}  // namespace ratiosynth
