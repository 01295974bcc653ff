#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support/helpers.hpp"

using namespace testing_support;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args, const std::string& stdin_text = {}) {
  args.insert(args.begin(), "netdisplay");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("netdisplay_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

const char* kRunning = "((a,(b)#H1),(#H1,c));";

}  // namespace

TEST_CASE("contains: displayed tree exits 0 with JSON") {
  const auto n = write_temp("net.enwk", kRunning);
  const auto t = write_temp("tree.nwk", "((a,b),c);");
  const auto r = run_cli({"contains", n, t});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["displayed"] == true);
  CHECK(j["algo"] == "fast");
  CHECK(j["reticulations_initial"] == 1);
}

TEST_CASE("contains: non-displayed tree exits 1") {
  const auto n = write_temp("net.enwk", kRunning);
  const auto t = write_temp("tree2.nwk", "((a,c),b);");
  for (const char* algo : {"auto", "fast", "oracle"}) {
    const auto r = run_cli({"contains", n, t, "--algo", algo});
    CHECK(r.code == 1);
    CHECK(json::parse(r.out)["displayed"] == false);
  }
}

TEST_CASE("contains: label mismatch exits 3") {
  const auto n = write_temp("net.enwk", kRunning);
  const auto t = write_temp("bad.nwk", "((a,x),c);");
  const auto r = run_cli({"contains", n, t});
  CHECK(r.code == 3);
  CHECK(r.err.find("leaf sets differ") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("contains: trace lines and oracle certificate") {
  const Network big = *generate({6, 5, ClassConstraint::nearly_stable, 3, 1000}).network;
  Rng rng(1);
  const PhyloTree t = tree_for(big, rng, true);
  const auto n = write_temp("big.enwk", serialize(big));
  const auto tp = write_temp("big.nwk", serialize(t));
  const auto fast = run_cli({"contains", n, tp, "--trace"});
  CHECK(fast.code == 0);
  CHECK(json::parse(fast.out)["trace"].is_array());
  const auto slow = run_cli({"contains", n, tp, "--algo", "oracle"});
  CHECK(slow.code == 0);
  CHECK(json::parse(slow.out)["certificate"].size() == 5);
}

TEST_CASE("contains --algo auto falls back to the oracle, then gives up") {
  // Not nearly stable: find one in the unconstrained corpus.
  Network outside;
  for (const auto& n : corpus(200, ClassConstraint::any, 4, 7, 6, 1300)) {
    if (!classify(n).nearly_stable) {
      outside = n;
      break;
    }
  }
  REQUIRE(outside.vertex_count() > 0);
  Rng rng(2);
  const auto np = write_temp("outside.enwk", serialize(outside));
  const auto tp = write_temp("outside.nwk", serialize(tree_for(outside, rng, true)));
  const auto r = run_cli({"contains", np, tp});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["algo"] == "oracle");
  CHECK(run_cli({"contains", np, tp, "--algo", "fast"}).code == 4);
  setenv("NETDISPLAY_ORACLE_CAP", "0", 1);
  CHECK(run_cli({"contains", np, tp}).code == 4);
  setenv("NETDISPLAY_ORACLE_CAP", "zero", 1);
  CHECK(run_cli({"contains", np, tp}).code == 3);
  unsetenv("NETDISPLAY_ORACLE_CAP");
}

TEST_CASE("classify: trees are in every class but subphylogeny-free") {
  const auto r = run_cli({"classify", "-"}, "((a,b),c);");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["tree_child"] == true);
  CHECK(j["nearly_stable"] == true);
  CHECK(j["reticulation_visible"] == true);
  CHECK(j["binary"] == true);
  CHECK(j["subphylogeny_free"] == false);
}

TEST_CASE("classify: one JSON line per network") {
  const auto r = run_cli({"classify", "-"}, std::string(kRunning) + "\n(a,b);\n");
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 2);
}

TEST_CASE("parse errors exit 3 with the offset on stderr") {
  const auto r = run_cli({"classify", "-"}, "((a,b),c;");
  CHECK(r.code == 3);
  CHECK(r.err.find("offset") != std::string::npos);
  CHECK(run_cli({"classify", "/nonexistent/file"}).code == 3);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"contains", "x"}).code == 2);
  CHECK(run_cli({"contains", "x", "y", "--algo", "quick"}).code == 2);
  CHECK(run_cli({"gen", "--leaves", "3", "--class", "galled"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("validate reports counts") {
  const auto r = run_cli({"validate", "-"}, kRunning);
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["vertices"] == 7);
  CHECK(j["binary"] == true);
  const auto nb = run_cli({"validate", "-"}, "(a,b,c);");
  CHECK(json::parse(nb.out)["binary"] == false);
}

TEST_CASE("stats prints counts and bounds") {
  const auto r = run_cli({"stats", "-"}, kRunning);
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["tree_vertices"] == 3);
  CHECK(j["bounds"].size() == 5);
  const auto table = run_cli({"stats", "--table", "-"}, kRunning);
  CHECK(table.out.find("branches <= 38(n-1)") != std::string::npos);
  CHECK(run_cli({"stats", "-"}, "(a,b,c);").code == 4);
}

TEST_CASE("transform emits a reticulation-visible network") {
  const auto r = run_cli({"transform", "--to", "rv", "-"}, "(((d,((x)#B)#A),(p,#A)),(q,#B));");
  CHECK(r.code == 0);
  const Network out = net(r.out);
  CHECK(classify(out).reticulation_visible);
  CHECK(json::parse(r.err)["rewirings"] == 1);
  CHECK(run_cli({"transform", "--to", "tc", "-"}, kRunning).code == 2);
}

TEST_CASE("gen writes metadata and networks that parse back") {
  const auto r = run_cli({"gen", "--leaves", "5", "--rets", "3", "--class", "nearly_stable",
                          "--seed", "7", "--count", "4"});
  CHECK(r.code == 0);
  auto nets = parse_networks(r.out);
  REQUIRE(nets.ok());
  CHECK(nets.value->size() == 4);
  for (const auto& n : *nets.value) CHECK(classify(n).nearly_stable);
  CHECK(r.out.find("[netdisplay-gen v1 rng=mt19937_64 seed=7 ") == 0);
  CHECK(run_cli({"gen", "--leaves", "1", "--rets", "1"}).code == 4);
}

TEST_CASE("bench writes CSV") {
  const auto r = run_cli({"bench", "--sizes", "10,20", "--instances", "2", "--repeats", "1"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "n,m,wall_seconds,iterations");
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("dot output") {
  const auto r = run_cli({"dot", "-"}, kRunning);
  CHECK(r.code == 0);
  CHECK(r.out.find("digraph") == 0);
}
