#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ratiosynth {

using LetterId = std::uint32_t;

/// A finite alphabet, either the valuations of a list of boolean variables
/// ("bits") or an explicit list of letter names.
///
/// For bit alphabets, letter i assigns variable j the bit (i >> (n-1-j)) & 1,
/// so the first variable is the most significant one and letter 0 is the
/// all-false valuation. Letter names of bit alphabets are literal lists such
/// as "r1 !r2"; the empty valuation is named "true".
class Alphabet {
 public:
  enum class Kind { Bits, Names };

  Alphabet() = default;
  static Alphabet bits(std::vector<std::string> variables);
  static Alphabet names(std::vector<std::string> letters);

  Kind kind() const { return kind_; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::size_t size() const;

  std::string letter_name(LetterId letter) const;
  std::optional<LetterId> find_letter(std::string_view name) const;

  /// Value of variable `var` in `letter`; bit alphabets only.
  bool bit(LetterId letter, std::size_t var) const;
  std::optional<std::size_t> variable_index(std::string_view name) const;

  bool operator==(const Alphabet&) const = default;

 private:
  Kind kind_ = Kind::Bits;
  std::vector<std::string> symbols_;
};

/// Index of the joint letter (l, a) in L x A; L is the outer coordinate.
inline LetterId joint_letter(LetterId input, LetterId output, std::size_t output_size) {
  return static_cast<LetterId>(input * output_size + output);
}

/// Maps letters of a larger alphabet onto a component alphabet.
///
/// A bit alphabet projects onto any bit alphabet whose variables it contains
/// (in any order); a name alphabet projects only onto an identical one.
class Projection {
 public:
  Projection(const Alphabet& from, const Alphabet& onto);
  LetterId operator()(LetterId letter) const { return table_[letter]; }
  std::size_t from_size() const { return table_.size(); }

  /// True if `onto` can be obtained from `from` by a projection.
  static bool possible(const Alphabet& from, const Alphabet& onto);

 private:
  std::vector<LetterId> table_;
};

/// Union of bit alphabets in order of first appearance. Name alphabets are
/// accepted only when all of them are identical.
Alphabet merge_alphabets(const std::vector<Alphabet>& parts);

/// Letters of L x A matched by a pattern.
///
/// A pattern is a conjunction of atoms separated by blanks or '&': `v` or
/// `!v` for a bit variable, a letter name of a name alphabet, or one of
/// `*`, `true`, `1` for "anything". Components left unconstrained are
/// don't-cares. Throws std::invalid_argument for unknown or contradictory atoms.
std::vector<LetterId> match_joint_pattern(std::string_view pattern, const Alphabet& inputs,
                                          const Alphabet& outputs);

/// Letters of a single alphabet matched by a pattern.
std::vector<LetterId> match_pattern(std::string_view pattern, const Alphabet& alphabet);

}  // namespace ratiosynth
