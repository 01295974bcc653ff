#include "doctest.h"
#include "netdisplay/reductions.hpp"
#include "netdisplay/stability.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace testing_support;

namespace {

const char* kRunning = "((a,(b)#H1),(#H1,c));";

VertexId parent_of(const Network& n, const char* label) {
  return n.parents(*n.find_label(label)).front();
}

}  // namespace

TEST_CASE("suppress: removing one in-branch of the running example") {
  const Network n = net(kRunning);
  const VertexId h = parent_of(n, "b");
  const VertexId a_side = parent_of(n, "a");
  NetworkEditor ed(n);
  ed.remove_branch(a_side, h);
  auto [out, step] = suppress_degenerate(std::move(ed).release());
  CHECK(serialize(out) == "(a,(b,c));");
  CHECK(validate(out, true).ok());
  CHECK(step.contracted.size() == 2);  // a's parent and H1
}

TEST_CASE("suppress: a valid network is a fixpoint") {
  auto [out, step] = suppress_degenerate(net(kRunning));
  CHECK(step.empty());
  CHECK(serialize(out) == serialize(net(kRunning)));
}

TEST_CASE("suppress: a vertex that lost both children disappears with its dead end") {
  const Network n = net("(((a,b),c),d);");
  NetworkEditor ed(n);
  const VertexId x = parent_of(n, "a");
  ed.remove_vertex(*n.find_label("a"));
  ed.remove_vertex(*n.find_label("b"));
  ed.set_label(*ed.network().find_label("c"), "c");
  auto [out, step] = suppress_degenerate(std::move(ed).release());
  CHECK_FALSE(out.contains(x));
  CHECK(std::find(step.pruned.begin(), step.pruned.end(), x) != step.pruned.end());
  CHECK(serialize(out) == "(c,d);");
}

TEST_CASE("suppress is idempotent on random deletions") {
  Rng rng(5);
  for (const auto& n : corpus(300, ClassConstraint::any, 2, 9, 8, 11)) {
    // Drop in-branches of random reticulations; the root stays unique.
    NetworkEditor ed(n);
    for (VertexId r : n.reticulations()) {
      if (rng.below(2) == 0) continue;
      const auto ps = ed.network().parents(r);
      ed.remove_branch(ps[rng.below(ps.size())], r);
    }
    auto [once, s1] = suppress_degenerate(std::move(ed).release());
    auto [twice, s2] = suppress_degenerate(once);
    CHECK(s2.empty());
    CHECK(twice.vertex_count() == once.vertex_count());
    for (VertexId v : once.vertices()) {
      const bool unlabeled_dead_end = once.is_leaf(v) && once.label(v).empty();
      CHECK_FALSE(unlabeled_dead_end);
      CHECK_FALSE((once.indegree(v) == 1 && once.outdegree(v) == 1));
    }
  }
}

TEST_CASE("cherry_reduce: identical trees collapse to one leaf") {
  const auto r = cherry_reduce(net("((a,b),c);"), tree("((a,b),c);"));
  CHECK(r.net.vertex_count() == 1);
  CHECK(r.tree.network().vertex_count() == 1);
  CHECK(r.trace.steps.size() == 2);
  CHECK(r.net.label(r.net.root()) == r.tree.network().label(r.tree.network().root()));
}

TEST_CASE("cherry_reduce: no common cherry leaves both unchanged") {
  const Network n = net("((a,b),(c,d));");
  const auto r = cherry_reduce(n, tree("((a,c),(b,d));"));
  CHECK(r.trace.steps.empty());
  CHECK(serialize(r.net) == serialize(n));
}

TEST_CASE("cherry_reduce: one common cherry under a reticulated network") {
  const auto r = cherry_reduce(net("(((a,b),(c)#H1),(#H1,d));"), tree("(((a,b),c),d);"));
  REQUIRE(r.trace.steps.size() == 1);
  const auto& step = r.trace.steps.front();
  REQUIRE(step.introduced_leaf);
  CHECK(step.introduced_leaf->second == "__r1");
  CHECK(step.merged_labels == std::vector<std::string>{"a", "b"});
  CHECK(same_leaf_set(r.net, r.tree.network()));
  CHECK(r.net.find_label("__r1"));
  CHECK_FALSE(r.net.find_label("a"));
  CHECK(r.net.reticulation_count() == 1);
}

TEST_CASE("cherry_reduce: leaf-set mismatch") {
  CHECK_THROWS_AS((void)cherry_reduce(net("((a,b),c);"), tree("((a,b),d);")), LeafSetMismatch);
}

TEST_CASE("cherry_reduce: fresh labels continue after existing reserved ones") {
  ParseOptions opts;
  opts.allow_reserved_labels = true;
  const Network n = parse_network("((a,b),__r4);", opts).take();
  const PhyloTree t = parse_tree("((a,b),__r4);", opts).take();
  const auto r = cherry_reduce(n, t);
  CHECK(r.trace.steps.front().introduced_leaf->second == "__r5");
}

TEST_CASE("cherry_reduce leaves a subphylogeny-free network when every cherry is common") {
  Rng rng(3);
  for (const auto& n : corpus(200, ClassConstraint::nearly_stable, 2, 8, 6, 21)) {
    const PhyloTree t = tree_for(n, rng, true);
    const auto r = cherry_reduce(n, t);
    const bool all_common = cherries(r.net).empty();
    if (all_common) CHECK(is_subphylogeny_free(r.net));
    CHECK(same_leaf_set(r.net, r.tree.network()));
  }
}

TEST_CASE("uncle-nephew: uncle and nephew not siblings removes (x, y)") {
  const Network n = net(kRunning);
  const VertexId x = parent_of(n, "c");
  const auto un = match_uncle_nephew(n, x);
  REQUIRE(un);
  CHECK(n.label(un->uncle) == "c");
  CHECK(n.label(un->nephew) == "b");
  const PhyloTree t = tree("((a,b),c);");
  auto [out, step] = uncle_nephew_reduce(n, t, x);
  REQUIRE(step.removed_branches.size() == 1);
  CHECK(step.removed_branches.front() == Branch{x, un->hybrid});
  CHECK(serialize(out) == "((a,b),c);");
  CHECK(oracle::displays_by_clusters(n, t.network()));
  CHECK(oracle::displays_by_clusters(out, t.network()));
}

TEST_CASE("uncle-nephew: siblings in the tree remove the dangling branch") {
  const Network n = net(kRunning);
  const VertexId x = parent_of(n, "c");
  const PhyloTree t = tree("(a,(b,c));");
  auto [out, step] = uncle_nephew_reduce(n, t, x);
  REQUIRE(step.removed_branches.size() == 1);
  CHECK(step.removed_branches.front().tail == parent_of(n, "a"));
  CHECK(serialize(out) == "(a,(b,c));");
}

TEST_CASE("uncle-nephew: a site without the pattern is rejected") {
  const Network n = net(kRunning);
  CHECK_FALSE(match_uncle_nephew(n, n.root()));
  CHECK_THROWS_AS((void)uncle_nephew_reduce(n, tree("((a,b),c);"), n.root()), InputError);
}

TEST_CASE("uncle-nephew and cherry reductions preserve the display verdict") {
  Rng rng(8);
  std::size_t un_checked = 0, cherry_checked = 0;
  const auto nets = corpus(600, ClassConstraint::nearly_stable, 3, 8, 8, 400);
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const Network& n = nets[i];
    const PhyloTree t = tree_for(n, rng, i % 2 == 0);
    const bool before = oracle::displays_by_clusters(n, t.network());

    const auto cr = cherry_reduce(n, t);
    CHECK(oracle::displays_by_clusters(cr.net, cr.tree.network()) == before);
    cherry_checked += !cr.trace.steps.empty();

    for (VertexId x : n.vertices()) {
      if (!match_uncle_nephew(n, x)) continue;
      auto [out, step] = uncle_nephew_reduce(n, t, x);
      CHECK_MESSAGE(oracle::displays_by_clusters(out, t.network()) == before,
                    serialize(n) << " vs " << serialize(t) << " at " << x);
      CHECK(classify(out).nearly_stable);
      ++un_checked;
    }
  }
  CHECK(un_checked > 200);
  CHECK(cherry_checked > 100);
}

TEST_CASE("trace text round-trips") {
  ReductionTrace trace;
  ReductionStep a;
  a.kind = ReductionKind::case_D;
  a.removed_branches = {{VertexId{1}, VertexId{4}}, {VertexId{2}, VertexId{4}}};
  a.contracted = {VertexId{3}};
  ReductionStep b;
  b.kind = ReductionKind::cherry;
  b.introduced_leaf = std::make_pair(VertexId{5}, std::string("__r1"));
  b.merged_labels = {"a", "b"};
  trace.steps = {a, b};
  const std::string text = trace.to_text();
  const auto back = ReductionTrace::from_text(text);
  CHECK(back.to_text() == text);
  REQUIRE(back.steps.size() == 2);
  CHECK(back.steps[0].removed_branches == a.removed_branches);
  CHECK(back.steps[1].merged_labels == b.merged_labels);
  CHECK_THROWS_AS((void)ReductionTrace::from_text("bogus removed=1>2"), InputError);
  CHECK_THROWS_AS((void)ReductionTrace::from_text("cherry removed=1-2"), InputError);
}

TEST_CASE("replaying a containment trace reproduces the reduced pair") {
  Rng rng(12);
  for (const auto& n : corpus(200, ClassConstraint::nearly_stable, 3, 9, 9, 600)) {
    const PhyloTree t = tree_for(n, rng, true);
    Network last_net;
    Network last_tree;
    DisplayOptions opts;
    opts.oracle_threshold = 0;
    opts.observer = [&](const Network&, const Network&, const ReductionStep&, const Network& na,
                        const Network& ta) {
      last_net = na;
      last_tree = ta;
    };
    const auto verdict = displays(n, t, opts);
    if (verdict.trace.steps.empty()) continue;
    const auto text_trace = ReductionTrace::from_text(verdict.trace.to_text());
    auto [rn, rt] = replay(n, t, text_trace);
    CHECK(serialize(rn) == serialize(last_net));
    CHECK(serialize(rt) == serialize(last_tree));
  }
}
