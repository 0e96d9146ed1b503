#include "ratiosynth/alphabet.hpp"

#include <algorithm>
#include <stdexcept>

namespace ratiosynth {

namespace {

std::vector<std::string_view> split_atoms(std::string_view pattern) {
  std::vector<std::string_view> atoms;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == '&'; };
  while (i < pattern.size()) {
    while (i < pattern.size() && is_sep(pattern[i])) ++i;
    std::size_t j = i;
    while (j < pattern.size() && !is_sep(pattern[j])) ++j;
    if (j > i) atoms.push_back(pattern.substr(i, j - i));
    i = j;
  }
  return atoms;
}

bool is_wildcard(std::string_view atom) { return atom == "*" || atom == "true" || atom == "1"; }

// Constraint on one alphabet accumulated from atoms.
struct Constraint {
  std::vector<int> bits;          // -1 free, 0/1 fixed (bit alphabets)
  std::optional<LetterId> named;  // fixed letter (name alphabets)
};

// Returns true if the atom belongs to `alphabet` and was applied.
bool apply_atom(std::string_view atom, const Alphabet& alphabet, Constraint& c) {
  if (alphabet.kind() == Alphabet::Kind::Bits) {
    bool negated = !atom.empty() && atom.front() == '!';
    auto var = alphabet.variable_index(negated ? atom.substr(1) : atom);
    if (!var) return false;
    int value = negated ? 0 : 1;
    if (c.bits[*var] != -1 && c.bits[*var] != value)
      throw std::invalid_argument("contradictory literals for '" + alphabet.symbols()[*var] + "'");
    c.bits[*var] = value;
    return true;
  }
  const auto& names = alphabet.symbols();
  auto it = std::find(names.begin(), names.end(), atom);
  if (it == names.end()) return false;
  auto letter = static_cast<LetterId>(it - names.begin());
  if (c.named && *c.named != letter)
    throw std::invalid_argument("pattern names two different letters");
  c.named = letter;
  return true;
}

Constraint fresh(const Alphabet& alphabet) {
  Constraint c;
  if (alphabet.kind() == Alphabet::Kind::Bits) c.bits.assign(alphabet.symbols().size(), -1);
  return c;
}

std::vector<LetterId> expand(const Alphabet& alphabet, const Constraint& c) {
  std::vector<LetterId> out;
  for (LetterId l = 0; l < alphabet.size(); ++l) {
    if (alphabet.kind() == Alphabet::Kind::Names) {
      if (!c.named || *c.named == l) out.push_back(l);
      continue;
    }
    bool ok = true;
    for (std::size_t v = 0; v < c.bits.size() && ok; ++v)
      if (c.bits[v] != -1 && static_cast<int>(alphabet.bit(l, v)) != c.bits[v]) ok = false;
    if (ok) out.push_back(l);
  }
  return out;
}

}  // namespace

Alphabet Alphabet::bits(std::vector<std::string> variables) {
  if (variables.size() > 16) throw std::invalid_argument("too many alphabet variables (max 16)");
  for (std::size_t i = 0; i < variables.size(); ++i)
    for (std::size_t j = i + 1; j < variables.size(); ++j)
      if (variables[i] == variables[j])
        throw std::invalid_argument("duplicate variable '" + variables[i] + "'");
  Alphabet a;
  a.kind_ = Kind::Bits;
  a.symbols_ = std::move(variables);
  return a;
}

Alphabet Alphabet::names(std::vector<std::string> letters) {
  if (letters.empty()) throw std::invalid_argument("a named alphabet needs at least one letter");
  for (std::size_t i = 0; i < letters.size(); ++i)
    for (std::size_t j = i + 1; j < letters.size(); ++j)
      if (letters[i] == letters[j]) throw std::invalid_argument("duplicate letter '" + letters[i] + "'");
  Alphabet a;
  a.kind_ = Kind::Names;
  a.symbols_ = std::move(letters);
  return a;
}

std::size_t Alphabet::size() const {
  return kind_ == Kind::Bits ? (std::size_t{1} << symbols_.size()) : symbols_.size();
}

bool Alphabet::bit(LetterId letter, std::size_t var) const {
  return ((letter >> (symbols_.size() - 1 - var)) & 1U) != 0;
}

std::optional<std::size_t> Alphabet::variable_index(std::string_view name) const {
  if (kind_ != Kind::Bits) return std::nullopt;
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == name) return i;
  return std::nullopt;
}

std::string Alphabet::letter_name(LetterId letter) const {
  if (kind_ == Kind::Names) return symbols_.at(letter);
  if (symbols_.empty()) return "true";
  std::string out;
  for (std::size_t v = 0; v < symbols_.size(); ++v) {
    if (v) out += ' ';
    if (!bit(letter, v)) out += '!';
    out += symbols_[v];
  }
  return out;
}

std::optional<LetterId> Alphabet::find_letter(std::string_view name) const {
  try {
    auto letters = match_pattern(name, *this);
    if (letters.size() == 1) return letters.front();
  } catch (const std::invalid_argument&) {
  }
  return std::nullopt;
}

Projection::Projection(const Alphabet& from, const Alphabet& onto) {
  if (!possible(from, onto)) throw std::invalid_argument("alphabets are not compatible");
  table_.resize(from.size());
  if (from.kind() == Alphabet::Kind::Names) {
    for (LetterId l = 0; l < from.size(); ++l) table_[l] = l;
    return;
  }
  std::vector<std::size_t> source;
  for (const auto& v : onto.symbols()) source.push_back(*from.variable_index(v));
  const std::size_t m = source.size();
  for (LetterId l = 0; l < from.size(); ++l) {
    LetterId image = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (from.bit(l, source[j])) image |= LetterId{1} << (m - 1 - j);
    table_[l] = image;
  }
}

bool Projection::possible(const Alphabet& from, const Alphabet& onto) {
  if (from.kind() != onto.kind()) return false;
  if (from.kind() == Alphabet::Kind::Names) return from == onto;
  return std::all_of(onto.symbols().begin(), onto.symbols().end(),
                     [&](const std::string& v) { return from.variable_index(v).has_value(); });
}

Alphabet merge_alphabets(const std::vector<Alphabet>& parts) {
  if (parts.empty()) return Alphabet::bits({});
  if (parts.front().kind() == Alphabet::Kind::Names) {
    for (const auto& p : parts)
      if (!(p == parts.front()))
        throw std::invalid_argument("named alphabets can only be combined when identical");
    return parts.front();
  }
  std::vector<std::string> vars;
  for (const auto& p : parts) {
    if (p.kind() != Alphabet::Kind::Bits)
      throw std::invalid_argument("cannot combine bit and named alphabets");
    for (const auto& v : p.symbols())
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  }
  return Alphabet::bits(std::move(vars));
}

std::vector<LetterId> match_pattern(std::string_view pattern, const Alphabet& alphabet) {
  auto atoms = split_atoms(pattern);
  if (atoms.empty()) throw std::invalid_argument("empty pattern");
  Constraint c = fresh(alphabet);
  for (auto atom : atoms) {
    if (is_wildcard(atom)) continue;
    if (!apply_atom(atom, alphabet, c))
      throw std::invalid_argument("unknown symbol '" + std::string(atom) + "'");
  }
  return expand(alphabet, c);
}

std::vector<LetterId> match_joint_pattern(std::string_view pattern, const Alphabet& inputs,
                                          const Alphabet& outputs) {
  auto atoms = split_atoms(pattern);
  if (atoms.empty()) throw std::invalid_argument("empty pattern");
  Constraint ci = fresh(inputs);
  Constraint co = fresh(outputs);
  for (auto atom : atoms) {
    if (is_wildcard(atom)) continue;
    Constraint probe_i = ci;
    Constraint probe_o = co;
    bool in_inputs = apply_atom(atom, inputs, probe_i);
    bool in_outputs = apply_atom(atom, outputs, probe_o);
    if (in_inputs && in_outputs)
      throw std::invalid_argument("symbol '" + std::string(atom) + "' is ambiguous");
    if (!in_inputs && !in_outputs)
      throw std::invalid_argument("unknown symbol '" + std::string(atom) + "'");
    if (in_inputs) ci = std::move(probe_i);
    if (in_outputs) co = std::move(probe_o);
  }
  std::vector<LetterId> out;
  for (LetterId l : expand(inputs, ci))
    for (LetterId a : expand(outputs, co)) out.push_back(joint_letter(l, a, outputs.size()));
  return out;
}

}  // namespace ratiosynth
