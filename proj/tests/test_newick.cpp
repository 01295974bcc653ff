#include <algorithm>

#include "doctest.h"
#include "support/helpers.hpp"

using namespace testing_support;

namespace {

std::string first_error(std::string_view text) {
  auto r = parse_network(text);
  REQUIRE_FALSE(r.ok());
  REQUIRE_FALSE(r.diagnostics.empty());
  CHECK(r.diagnostics.front().byte_offset <= text.size());
  return r.diagnostics.front().message;
}

// Same network rebuilt with vertex ids and child order permuted.
Network shuffled(const Network& n, Rng& rng) {
  auto vs = n.vertices();
  for (std::size_t i = vs.size(); i > 1; --i) std::swap(vs[i - 1], vs[rng.below(i)]);
  NetworkEditor ed;
  std::vector<VertexId> map(n.id_bound());
  for (VertexId v : vs) map[v.index()] = ed.add_vertex(n.label(v));
  std::vector<Branch> bs = n.branches();
  for (std::size_t i = bs.size(); i > 1; --i) std::swap(bs[i - 1], bs[rng.below(i)]);
  for (const auto& b : bs) ed.add_branch(map[b.tail.index()], map[b.head.index()]);
  ed.set_root(map[n.root().index()]);
  return std::move(ed).release();
}

}  // namespace

TEST_CASE("parse_network: running example") {
  const Network n = net("((a,(b)#H1),(#H1,c));");
  CHECK(n.vertex_count() == 7);
  CHECK(n.reticulation_count() == 1);
  CHECK(n.leaf_count() == 3);
  CHECK(n.branch_count() == 7);
}

TEST_CASE("parse_network: cherry tree has no reticulations") {
  const Network n = net("(a,b);");
  CHECK(n.reticulation_count() == 0);
  CHECK(n.vertex_count() == 3);
}

TEST_CASE("parse_network: error messages") {
  {
    auto r = parse_network("((a,(b)#H1),(#H2,c));");
    REQUIRE_FALSE(r.ok());
    bool found = false;
    for (const auto& d : r.diagnostics) found = found || d.message == "hybrid tag #H2 unmatched";
    CHECK(found);
  }
  CHECK(first_error("((a,b)),c);").find("unbalanced parentheses") != std::string::npos);
  CHECK(first_error("((a,b),c;").find("unbalanced parentheses") != std::string::npos);
  CHECK(first_error("((a,b),c)").find("missing ';'") != std::string::npos);
  CHECK(first_error("((a,b),c); x").find("trailing garbage") != std::string::npos);
  CHECK(first_error("((a,a),c);").find("duplicate") != std::string::npos);
  CHECK(first_error("((a:1,b),c);").find("branch lengths") != std::string::npos);
  CHECK(first_error("").find("empty input") != std::string::npos);
  CHECK(first_error("((a,(b)#H1),((c)#H1,d));").find("inconsistent") != std::string::npos);
  CHECK(first_error("((a,__r1),c);").find("__r") != std::string::npos);
  CHECK(first_error("((a,),c);").find("missing label") != std::string::npos);
}

TEST_CASE("parse_network: reserved labels allowed on request") {
  ParseOptions opts;
  opts.allow_reserved_labels = true;
  CHECK(parse_network("((a,__r1),c);", opts).ok());
}

TEST_CASE("parse_network: whitespace, inner names and comments") {
  const Network n = net(" ( ( a , ( b ) #H1 ) x , [note] ( #H1 , c ) y ) root ;\n");
  CHECK(networks_isomorphic(n, net("((a,(b)#H1),(#H1,c));")));
}

TEST_CASE("parse_tree") {
  CHECK(tree("((a,b),c);").network().leaf_count() == 3);
  auto poly = parse_tree("(a,b,c);");
  REQUIRE_FALSE(poly.ok());
  CHECK(poly.diagnostics.front().message.find("polytomy at offset") != std::string::npos);
  auto hyb = parse_tree("((a,(b)#H1),(#H1,c));");
  REQUIRE_FALSE(hyb.ok());
  CHECK(hyb.diagnostics.front().message.find("hybrid tag in tree") != std::string::npos);
  auto unary = parse_tree("((a),b);");
  REQUIRE_FALSE(unary.ok());
  CHECK(unary.diagnostics.front().message.find("unary vertex") != std::string::npos);
  CHECK_THROWS_AS(parse_tree("(a,b,c);").take(), InputError);
}

TEST_CASE("multi-statement input") {
  auto r = parse_networks("(a,b);\n[comment]\n((a,(b)#H1),(#H1,c));\n");
  REQUIRE(r.ok());
  CHECK(r.value->size() == 2);
  auto bad = parse_networks("(a,b);((a,b);");
  CHECK_FALSE(bad.ok());
  auto trees = parse_trees("(a,b);((a,b),c);");
  REQUIRE(trees.ok());
  CHECK(trees.value->size() == 2);
}

TEST_CASE("serialize: small cases") {
  CHECK(serialize(net("a;")) == "a;");
  CHECK(serialize(net("(b,a);")) == "(a,b);");
  CHECK(serialize(net("(c,(b,a));")) == "((a,b),c);");
  const Network n = net("((a,(b)#H1),(#H1,c));");
  CHECK(networks_isomorphic(net(serialize(n)), n));
  CHECK(serialize(n) == serialize(net("((#H7,c),(a,(b)#H7));")));
}

TEST_CASE("serialize distinguishes different networks") {
  CHECK_FALSE(networks_isomorphic(net("((a,b),c);"), net("(a,(b,c));")));
  CHECK_FALSE(networks_isomorphic(net("((a,(b)#H1),(#H1,c));"), net("((a,b),c);")));
  CHECK_FALSE(
      networks_isomorphic(net("((a,(b)#H1),(#H1,c));"), net("((a,(c)#H1),(#H1,b));")));
}

TEST_CASE("round trip and canonical fixpoint over generated networks") {
  for (auto cls : {ClassConstraint::any, ClassConstraint::nearly_stable}) {
    for (const auto& n : corpus(500, cls, 1, 10, 10, 40)) {
      const std::string s = serialize(n);
      const auto back = parse_network(s);
      REQUIRE_MESSAGE(back.ok(), s);
      CHECK(networks_isomorphic(*back.value, n));
      CHECK(serialize(*back.value) == s);
      CHECK(back.value->vertex_count() == n.vertex_count());
      CHECK(back.value->branch_count() == n.branch_count());
    }
  }
}

TEST_CASE("serialization ignores vertex ids and child order") {
  Rng rng(99);
  for (const auto& n : corpus(300, ClassConstraint::any, 2, 9, 8, 77)) {
    const Network m = shuffled(n, rng);
    REQUIRE(validate(m, true).ok());
    CHECK(serialize(m) == serialize(n));
    CHECK(classify(m) == classify(n));
  }
}

TEST_CASE("fuzz: arbitrary bytes yield diagnostics, never a crash") {
  Rng rng(2024);
  const std::string alphabet = "(),;#H1ab:[] \n\t_.-r";
  std::size_t parsed = 0;
  for (int i = 0; i < 5000; ++i) {
    std::string s(rng.below(40), ' ');
    for (auto& ch : s) {
      ch = rng.below(4) == 0 ? static_cast<char>(rng.below(256))
                             : alphabet[rng.below(alphabet.size())];
    }
    auto r = parse_network(s);
    if (r.ok()) {
      ++parsed;
      CHECK(validate(*r.value, false).ok());
    } else {
      CHECK_FALSE(r.diagnostics.empty());
    }
  }
  CHECK(parsed < 5000);
}

TEST_CASE("deep nesting is rejected rather than overflowing") {
  std::string s(100000, '(');
  s += "a";
  auto r = parse_network(s);
  CHECK_FALSE(r.ok());
}

TEST_CASE("to_dot marks reticulations and stability") {
  const Network n = net("(((d,((x)#B)#A),(p,#A)),(q,#B));");
  const auto rep = stability(n);
  const std::string dot = to_dot(n, &rep);
  CHECK(dot.find("digraph") == 0);
  CHECK(dot.find("filled") != std::string::npos);
  CHECK(dot.find("dashed") != std::string::npos);
}
