#pragma once

#include "ratiosynth/model.hpp"
#include "ratiosynth/product.hpp"

#include <string>
#include <string_view>
#include <variant>

namespace ratiosynth {

/// Line-oriented model files.
///
///   automaton NAME | mdp NAME | system NAME
///   alphabet
///     input bits v1 v2 ...      (or: input letters x y ...)
///     output bits w1 ...
///   states S1 S2 ...
///   initial S
///   safe S1 ...                 automata; all states when omitted
///   transitions
///     q --PATTERN/c1,c2--> q'   automata, PATTERN over inputs and outputs
///     s --PATTERN--> {t: 1/2, u: 1/2}   mdp, PATTERN over actions; a bare
///                                       target means probability 1
///     s --PATTERN--> t          system, PATTERN over inputs
///   labels                      mdp: one label letter per state
///     s: PATTERN
///   outputs                     system: one output letter per state
///     s: PATTERN
///
/// '#' starts a comment. Names made of letters, digits and _ . ' are
/// written bare; anything else is double-quoted.
using AnyModel = std::variant<CostAutomaton, LabeledMDP, FiniteStateSystem>;

/// Throws ParseError with line and column.
AnyModel parse_model(std::string_view text);
CostAutomaton parse_automaton(std::string_view text);
LabeledMDP parse_mdp(std::string_view text);
FiniteStateSystem parse_system(std::string_view text);

/// Reads a file; I/O failures become InputError.
std::string read_file(const std::string& path);
/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::string& path, std::string_view content);

/// Every transition is written explicitly, one letter per line, so that
/// parsing the output gives back an equal model.
std::string print_model(const CostAutomaton& aut);
std::string print_model(const LabeledMDP& mdp);
std::string print_model(const FiniteStateSystem& sys);
std::string print_model(const AnyModel& model);

/// Graph description (dot) renderings with stable node order.
std::string to_dot(const CostAutomaton& aut);
std::string to_dot(const LabeledMDP& mdp);
std::string to_dot(const FiniteStateSystem& sys);
std::string to_dot(const SynthesisMDP& mdp);
std::string to_dot(const CostMarkovChain& chain);

}  // namespace ratiosynth
