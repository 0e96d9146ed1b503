#include "test_support.hpp"

#include "ratiosynth/errors.hpp"

#include <doctest.h>

#include <filesystem>

using namespace ratiosynth;

namespace {

const char* kCorpusFiles[] = {
    "two_client/mutex.aut",   "two_client/cost1.aut",   "two_client/cost2.aut", "two_client/client1.mdp",
    "two_client/client2.mdp", "two_client/server.sys",  "misc/ack2.sys",        "misc/both.sys",
};

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("every corpus file survives print and parse") {
  for (const char* f : kCorpusFiles) {
    CAPTURE(f);
    const AnyModel m = parse_model(read_file(testsupport::corpus_path(f)));
    const std::string printed = print_model(m);
    const AnyModel back = parse_model(printed);
    CHECK(back == m);
    CHECK(print_model(back) == printed);
  }
}

TEST_CASE("random models survive print and parse") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const testsupport::Triple t = testsupport::random_triple(rng);
    CHECK(parse_system(print_model(t.sys)) == t.sys);
    CHECK(parse_automaton(print_model(t.qual)) == t.qual);
    CHECK(parse_mdp(print_model(t.env)) == t.env);
  }
}

TEST_CASE("names that need quoting") {
  FiniteStateSystem s;
  s.name = "odd name";
  s.inputs = Alphabet::names({"go", "stop"});
  s.outputs = Alphabet::bits({"a"});
  s.states = {"(x,y)", "states"};
  s.delta = {1, 0, 0, 1};
  s.output = {0, 1};
  const std::string text = print_model(s);
  CHECK(text.find("\"(x,y)\"") != std::string::npos);
  CHECK(parse_system(text) == s);
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_model(read_file(testsupport::data_path("syntax.sys")));
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 10);
    CHECK(e.column() == 7);
  }
  try {
    parse_model(read_file(testsupport::data_path("conflict.aut")));
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 9);
    CHECK(std::string(e.what()).find("conflict") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_model(""), ParseError);
  CHECK_THROWS_AS(parse_model("widget w\n"), ParseError);
  CHECK_THROWS_AS(parse_automaton("system s\nalphabet\n input bits r\n output bits a\nstates m\ninitial m\n"), InputError);
  CHECK_THROWS_AS(parse_model("automaton a\nalphabet\n input bits r\n output bits a\nstates q\ninitial z\n"),
                  ParseError);
}

TEST_CASE("missing transitions are reported by validation, not parsing") {
  const std::string text =
      "automaton partial\nalphabet\n  input bits r\n  output bits a\nstates q0\ninitial q0\ntransitions\n"
      "  q0 --r--> q0\n";
  const CostAutomaton a = parse_automaton(text);
  const auto vs = validate(a);
  REQUIRE_FALSE(vs.empty());
  CHECK(vs.front().invariant == "delta total");
}

TEST_CASE("mass errors survive parsing and fail validation") {
  const LabeledMDP m = parse_mdp(read_file(testsupport::data_path("bad_mass.mdp")));
  const auto vs = validate(m);
  REQUIRE(vs.size() == 2);
  CHECK(vs[0].invariant == "distribution mass ≠ 1");
}

TEST_CASE("dot output") {
  const CostAutomaton mutex = parse_automaton(read_file(testsupport::corpus_path("two_client/mutex.aut")));
  const std::string dot = to_dot(mutex);
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(count(dot, "[label=\"q") == 2);
  CHECK(dot.find("n0 [label=\"q0\", shape=doublecircle]") != std::string::npos);
  CHECK(dot.find("n1 [label=\"q1\"]") != std::string::npos);
  CHECK(to_dot(mutex) == dot);

  const LoadedSpecs sp = load_specs(testsupport::two_client_specs());
  const SynthesisMDP m = build_synthesis_mdp(sp.qual, sp.quant, sp.env);
  const std::string mdot = to_dot(m);
  CHECK(count(mdot, "color=red") > 0);
  const std::string sdot = to_dot(parse_system(read_file(testsupport::corpus_path("two_client/server.sys"))));
  CHECK(sdot.find("m1") != std::string::npos);
}

TEST_CASE("atomic writes replace the target") {
  const auto dir = std::filesystem::temp_directory_path() / "ratiosynth_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.txt").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  CHECK(read_file(path) == "second");
  for (const auto& e : std::filesystem::directory_iterator(dir)) CHECK(e.path().filename() == "out.txt");
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(read_file((dir / "missing").string()), InputError);
}
