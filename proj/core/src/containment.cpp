#include "netdisplay/containment.hpp"

#include <algorithm>
#include <sstream>

#include "netdisplay/newick.hpp"
#include "netdisplay/stability.hpp"

namespace netdisplay {

Resolution resolution_from_choices(const Network& net, const std::vector<std::size_t>& choices) {
  Resolution res;
  const auto rets = net.reticulations();
  for (std::size_t i = 0; i < rets.size(); ++i) {
    auto ps = net.parents(rets[i]);
    const std::size_t pick = i < choices.size() ? choices[i] % ps.size() : 0;
    res.kept.emplace(rets[i], Branch{ps[pick], rets[i]});
  }
  return res;
}

Network spanning_subtree(const Network& net, const Resolution& res) {
  const auto rets = net.reticulations();
  if (rets.size() != res.kept.size()) {
    throw InputError("resolution does not cover every reticulation exactly once");
  }
  NetworkEditor ed(net);
  for (VertexId r : rets) {
    auto it = res.kept.find(r);
    if (it == res.kept.end() || it->second.head != r || !net.has_branch(it->second.tail, r)) {
      std::ostringstream os;
      os << "resolution has no valid kept in-branch for " << r;
      throw InputError(os.str());
    }
    std::vector<VertexId> ps(net.parents(r).begin(), net.parents(r).end());
    bool kept_one = false;
    for (VertexId p : ps) {
      if (p == it->second.tail && !kept_one) {
        kept_one = true;
        continue;
      }
      ed.remove_branch(p, r);
    }
  }
  return std::move(ed).release();
}

PhyloTree apply_resolution(const Network& net, const Resolution& res) {
  NetworkEditor ed(spanning_subtree(net, res));
  ReductionStep scratch;
  suppress_all(ed, scratch);
  return PhyloTree::from_network(std::move(ed).release());
}

bool trees_equal(const PhyloTree& a, const PhyloTree& b) { return serialize(a) == serialize(b); }

ContainmentVerdict oracle_displays(const Network& net, const PhyloTree& tree, std::size_t cap) {
  if (!same_leaf_set(net, tree.network())) throw LeafSetMismatch();
  const auto rets = net.reticulations();
  if (rets.size() > cap) {
    throw PreconditionError("network has " + std::to_string(rets.size()) +
                            " reticulations, above the oracle cap of " + std::to_string(cap));
  }
  ContainmentVerdict verdict;
  verdict.reticulations_initial = rets.size();
  verdict.decided_by = "oracle";
  const std::string target = serialize(tree);

  std::vector<std::size_t> choices(rets.size(), 0);
  while (true) {
    ++verdict.iterations;
    Resolution res = resolution_from_choices(net, choices);
    NetworkEditor ed(spanning_subtree(net, res));
    ReductionStep scratch;
    suppress_all(ed, scratch);
    if (serialize(ed.network()) == target) {
      verdict.displayed = true;
      verdict.certificate = std::move(res);
      return verdict;
    }
    std::size_t i = 0;
    for (; i < rets.size(); ++i) {
      if (++choices[i] < net.indegree(rets[i])) break;
      choices[i] = 0;
    }
    if (i == rets.size()) break;
  }
  return verdict;
}

std::vector<VertexId> find_longest_root_leaf_path(const Network& net) {
  const auto order = net.topological_order();
  std::vector<std::size_t> height(net.id_bound(), 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::size_t h = 0;
    for (VertexId c : net.children(*it)) h = std::max(h, height[c.index()] + 1);
    height[it->index()] = h;
  }
  std::vector<VertexId> path{net.root()};
  while (!net.is_leaf(path.back())) {
    VertexId best;
    for (VertexId c : net.children(path.back())) {
      if (!best.valid() || height[c.index()] > height[best.index()] ||
          (height[c.index()] == height[best.index()] && c < best)) {
        best = c;
      }
    }
    path.push_back(best);
  }
  return path;
}

char to_char(CaseId c) { return static_cast<char>('A' + static_cast<int>(c)); }

ReductionKind reduction_kind(CaseId c) {
  return static_cast<ReductionKind>(static_cast<int>(ReductionKind::case_A) + static_cast<int>(c));
}

VertexId CaseMatch::at(Role r) const {
  auto it = bindings.find(r);
  if (it == bindings.end()) {
    throw InternalConsistencyError(std::string("case ") + to_char(id) + " has no such role");
  }
  return it->second;
}

std::optional<VertexId> CaseMatch::uncle_nephew_site() const {
  switch (id) {
    case CaseId::C: return at(Role::u);
    case CaseId::B:
    case CaseId::G:
    case CaseId::I:
    case CaseId::J: return at(Role::g);
    default: return std::nullopt;
  }
}

namespace {

bool is_tree_like(const Network& net, VertexId v) {
  return net.indegree(v) <= 1 && net.outdegree(v) == 2;
}

bool is_reticulation_above_leaf(const Network& net, VertexId v) {
  return net.indegree(v) == 2 && net.outdegree(v) == 1 && net.is_leaf(net.children(v).front());
}

VertexId other_child(const Network& net, VertexId parent, VertexId child) {
  auto ch = net.children(parent);
  return ch[0] == child ? ch[1] : ch[0];
}

bool has_child(const Network& net, VertexId parent, VertexId child) {
  return net.has_branch(parent, child);
}

// The in-branch of a two-parent reticulation that does not come from `from`.
Branch dangling_into(const Network& net, VertexId ret, VertexId from) {
  auto ps = net.parents(ret);
  if (ps.size() != 2) {
    std::ostringstream os;
    os << ret << " is not a two-parent reticulation";
    throw InternalConsistencyError(os.str());
  }
  return {ps[0] == from ? ps[1] : ps[0], ret};
}

[[noreturn]] void no_case(const Network& net, const std::vector<VertexId>& path,
                          const std::string& why) {
  std::ostringstream os;
  os << "no structure matches at the end of a longest path (" << why << "); local subgraph:";
  const std::size_t from = path.size() >= 4 ? path.size() - 4 : 0;
  std::vector<VertexId> seen;
  std::vector<VertexId> todo(path.begin() + static_cast<std::ptrdiff_t>(from), path.end());
  while (!todo.empty()) {
    VertexId v = todo.back();
    todo.pop_back();
    if (std::find(seen.begin(), seen.end(), v) != seen.end()) continue;
    seen.push_back(v);
    os << ' ' << v << "[in=" << net.indegree(v) << ",out=" << net.outdegree(v);
    if (!net.label(v).empty()) os << ",label=" << net.label(v);
    os << "]->{";
    for (std::size_t i = 0; i < net.children(v).size(); ++i) {
      os << (i ? "," : "") << net.children(v)[i];
      todo.push_back(net.children(v)[i]);
    }
    os << '}';
  }
  throw InternalConsistencyError(os.str());
}

}  // namespace

CaseMatch match_case(const Network& net, const std::vector<VertexId>& path) {
  if (path.size() < 4) no_case(net, path, "path shorter than four vertices");
  const std::size_t k = path.size();
  const VertexId w = path[k - 4], u = path[k - 3], v = path[k - 2], l = path[k - 1];
  if (!net.is_leaf(l) || !is_reticulation_above_leaf(net, v)) {
    no_case(net, path, "v is not a reticulation above the leaf");
  }
  CaseMatch m;
  m.bindings = {{Role::w, w}, {Role::u, u}, {Role::v, v}, {Role::leaf, l}};

  if (net.is_reticulation(u)) {
    if (net.outdegree(u) != 1 || net.outdegree(w) != 2) no_case(net, path, "u reticulation");
    const VertexId g = other_child(net, w, u);
    if (net.is_leaf(g)) {
      m.id = CaseId::A;
      m.bindings[Role::leaf1] = g;
      return m;
    }
    if (is_tree_like(net, g) && match_uncle_nephew(net, g)) {
      m.id = CaseId::B;
      m.bindings[Role::g] = g;
      return m;
    }
    no_case(net, path, "u reticulation, w's other child unexpected");
  }

  if (!is_tree_like(net, u)) no_case(net, path, "u neither tree vertex nor reticulation");
  const VertexId e = other_child(net, u, v);
  m.bindings[Role::e] = e;
  if (net.is_leaf(e)) {
    m.id = CaseId::C;
    return m;
  }
  if (!is_reticulation_above_leaf(net, e)) no_case(net, path, "e unexpected");
  m.bindings[Role::leaf1] = net.children(e).front();
  if (net.outdegree(w) != 2) no_case(net, path, "w not binary");

  const VertexId g = other_child(net, w, u);
  m.bindings[Role::g] = g;
  if (net.is_leaf(g)) {
    m.id = CaseId::D;
    m.bindings[Role::leaf2] = g;
    return m;
  }
  if (g == e || g == v) {
    m.id = CaseId::K;
    return m;
  }
  if (!is_tree_like(net, g)) no_case(net, path, "g is a reticulation");

  const bool parents_e = has_child(net, g, e);
  const bool parents_v = has_child(net, g, v);
  if (parents_e && parents_v) {
    m.id = CaseId::E;
    return m;
  }
  if (parents_e || parents_v) {
    const VertexId h = other_child(net, g, parents_e ? e : v);
    m.bindings[Role::h] = h;
    if (is_reticulation_above_leaf(net, h)) {
      m.id = parents_e ? CaseId::F : CaseId::H;
      m.bindings[Role::leaf2] = net.children(h).front();
      return m;
    }
    if (net.is_leaf(h)) {
      m.id = parents_e ? CaseId::G : CaseId::I;
      return m;
    }
    no_case(net, path, "g's other child h unexpected");
  }
  if (match_uncle_nephew(net, g)) {
    m.id = CaseId::J;
    return m;
  }
  no_case(net, path, "g carries no uncle-nephew structure");
}

ReductionStep simplify_at_case_in_place(NetworkEditor& ed, const Network& tree,
                                        const CaseMatch& m) {
  const Network& net = ed.network();
  ReductionStep step;
  step.kind = reduction_kind(m.id);
  auto label = [&](Role r) { return net.label(m.at(r)); };
  auto sib = [&](Role a, Role b) { return tree_siblings(tree, label(a), label(b)); };

  std::vector<Branch> cut;
  if (auto site = m.uncle_nephew_site()) {
    auto un = match_uncle_nephew(net, *site);
    if (!un) throw InternalConsistencyError("uncle-nephew site lost its structure");
    const bool s = tree_siblings(tree, net.label(un->uncle), net.label(un->nephew));
    cut.push_back(s ? Branch{un->dangling, un->hybrid} : Branch{un->site, un->hybrid});
  } else {
    const VertexId w = m.at(Role::w), u = m.at(Role::u), v = m.at(Role::v);
    switch (m.id) {
      case CaseId::A:
        if (!sib(Role::leaf, Role::leaf1)) {
          cut.push_back({w, u});
        } else {
          cut.push_back(dangling_into(net, u, w));
          cut.push_back(dangling_into(net, v, u));
        }
        break;
      case CaseId::D: {
        bool keep_uv = sib(Role::leaf, Role::leaf2);
        if (!keep_uv && sib(Role::leaf, Role::leaf1)) {
          // l and l' are siblings; is their parent the sibling of l''?
          const VertexId tl = *tree.find_label(label(Role::leaf));
          const VertexId tl2 = *tree.find_label(label(Role::leaf2));
          const auto pl = tree.parents(tl);
          const auto pl2 = tree.parents(tl2);
          if (!pl.empty() && !pl2.empty()) {
            const auto ppl = tree.parents(pl.front());
            keep_uv = !ppl.empty() && ppl.front() == pl2.front();
          }
        }
        cut.push_back(keep_uv ? dangling_into(net, v, u) : Branch{u, v});
        break;
      }
      case CaseId::K:
        cut.push_back({u, m.at(Role::g)});
        break;
      case CaseId::E:
        cut.push_back({u, m.at(Role::e)});
        cut.push_back({m.at(Role::g), v});
        break;
      case CaseId::F:
      case CaseId::H: {
        // H is F with the roles of v and e exchanged; the sibling test is
        // symmetric in l and l'.
        const VertexId mine = m.id == CaseId::F ? m.at(Role::e) : v;
        const VertexId other = m.id == CaseId::F ? v : m.at(Role::e);
        if (sib(Role::leaf, Role::leaf1)) {
          cut.push_back({m.at(Role::g), mine});
          cut.push_back(dangling_into(net, other, u));
        } else {
          cut.push_back({u, mine});
        }
        break;
      }
      default:
        throw InternalConsistencyError("unhandled case");
    }
  }

  std::vector<VertexId> seeds;
  for (const auto& b : cut) {
    ed.remove_branch(b.tail, b.head);
    step.removed_branches.push_back(b);
    seeds.push_back(b.tail);
    seeds.push_back(b.head);
  }
  suppress_around(ed, seeds, step);
  return step;
}

std::pair<Network, ReductionStep> simplify_at_case(const Network& net, const PhyloTree& tree,
                                                   const CaseMatch& m) {
  NetworkEditor ed(net);
  ReductionStep step = simplify_at_case_in_place(ed, tree.network(), m);
  return {std::move(ed).release(), std::move(step)};
}

ContainmentVerdict displays(const Network& net, const PhyloTree& tree,
                            const DisplayOptions& opts) {
  if (!validate(net, true).ok()) throw PreconditionError("network is not binary");
  if (!same_leaf_set(net, tree.network())) throw LeafSetMismatch();
  if (!classify(net).nearly_stable) throw PreconditionError("network is not nearly stable");

  ContainmentVerdict verdict;
  verdict.reticulations_initial = net.reticulation_count();
  NetworkEditor ned(net);
  NetworkEditor ted(tree.network());
  std::size_t fresh = last_reserved_index(net, tree.network());
  ReductionTrace* trace = opts.record_trace ? &verdict.trace : nullptr;

  auto observe = [&](const Network& nb, const Network& tb, const ReductionStep& step) {
    opts.observer(nb, tb, step, ned.network(), ted.network());
  };

  while (true) {
    ++verdict.iterations;

    if (opts.observer) {
      while (true) {
        Network nb = ned.network();
        Network tb = ted.network();
        ReductionTrace one;
        if (cherry_reduce_in_place(ned, ted, fresh, &one, 1) == 0) break;
        observe(nb, tb, one.steps.front());
        if (trace) trace->steps.push_back(std::move(one.steps.front()));
      }
    } else {
      cherry_reduce_in_place(ned, ted, fresh, trace);
    }

    const Network& cur = ned.network();
    const std::size_t rets = cur.reticulation_count();
    if (rets == 0) {
      verdict.displayed = serialize(cur) == serialize(ted.network());
      verdict.decided_by = "tree";
      return verdict;
    }
    // A cherry of the network survives in every displayed tree.
    if (!cherries(cur).empty()) {
      verdict.displayed = false;
      verdict.decided_by = "cherry";
      return verdict;
    }

    std::vector<VertexId> path;
    if (rets >= opts.oracle_threshold) path = find_longest_root_leaf_path(cur);
    if (rets < opts.oracle_threshold || path.size() < 4) {
      if (rets > opts.oracle_cap) {
        throw InternalConsistencyError("reduced network beyond oracle reach");
      }
      auto sub = oracle_displays(cur, PhyloTree::from_network(ted.network()), opts.oracle_cap);
      verdict.displayed = sub.displayed;
      verdict.decided_by = "oracle";
      return verdict;
    }

    const CaseMatch m = match_case(cur, path);
    std::optional<Network> before;
    if (opts.observer) before = cur;
    ReductionStep step = simplify_at_case_in_place(ned, ted.network(), m);
    if (opts.observer) observe(*before, ted.network(), step);
    if (trace) trace->steps.push_back(std::move(step));
  }
}

}  // namespace netdisplay
