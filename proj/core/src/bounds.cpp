#include "netdisplay/bounds.hpp"

#include <algorithm>
#include <sstream>

#include "netdisplay/reductions.hpp"

namespace netdisplay {

ClassStats class_stats(const Network& net) { return class_stats(net, stability(net)); }

ClassStats class_stats(const Network& net, const StabilityReport& report) {
  ClassStats s;
  s.branches = net.branch_count();
  for (VertexId v : net.vertices()) {
    if (net.is_leaf(v)) {
      ++s.n_leaves;
    } else if (net.is_reticulation(v)) {
      ++s.m_reticulations;
      ++(report.stable(v) ? s.s_ret : s.u_ret);
    } else if (net.outdegree(v) >= 2) {
      ++s.tree_vertices;
    }
  }
  return s;
}

namespace {

void require_binary(const Network& net) {
  if (!validate(net, true).ok()) throw PreconditionError("network is not a valid binary network");
}

}  // namespace

Resolution select_dummy_free_removal(const Network& net) {
  require_binary(net);
  if (!is_reticulation_visible(net, stability(net))) {
    throw PreconditionError("network is not reticulation-visible");
  }
  const auto rets = net.reticulations();
  // owner[p] = index into rets of the reticulation whose removed branch
  // leaves p, or npos.
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(net.id_bound(), npos);
  std::vector<std::vector<VertexId>> cand(rets.size());
  for (std::size_t i = 0; i < rets.size(); ++i) {
    cand[i].assign(net.parents(rets[i]).begin(), net.parents(rets[i]).end());
    std::sort(cand[i].begin(), cand[i].end());
  }

  std::vector<std::size_t> seen(net.id_bound(), npos);
  auto augment = [&](auto&& self, std::size_t i, std::size_t round) -> bool {
    for (VertexId p : cand[i]) {
      if (seen[p.index()] == round) continue;
      seen[p.index()] = round;
      if (owner[p.index()] == npos || self(self, owner[p.index()], round)) {
        owner[p.index()] = i;
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < rets.size(); ++i) {
    if (!augment(augment, i, i)) {
      std::ostringstream os;
      os << "no tail-distinct removal set: " << rets[i] << " unmatched";
      throw InternalConsistencyError(os.str());
    }
  }

  Resolution res;
  for (std::size_t i = 0; i < rets.size(); ++i) {
    for (VertexId p : cand[i]) {
      if (owner[p.index()] == i) continue;
      res.kept.emplace(rets[i], Branch{p, rets[i]});
      break;
    }
  }
  for (std::size_t i = 0; i < rets.size(); ++i) {
    if (!res.kept.count(rets[i])) {
      throw InternalConsistencyError("reticulation without a kept in-branch");
    }
  }
  return res;
}

std::vector<Branch> removed_branches(const Network& net, const Resolution& res) {
  std::vector<Branch> out;
  for (const auto& [r, keep] : res.kept) {
    for (VertexId p : net.parents(r)) {
      if (p != keep.tail) out.push_back({p, r});
    }
  }
  return out;
}

TransformResult ns_to_rv_transform(const Network& net) {
  require_binary(net);
  TransformResult out;
  StabilityReport report = stability(net);
  if (!is_nearly_stable(net, report)) throw PreconditionError("network is not nearly stable");
  out.before = class_stats(net, report);

  NetworkEditor ed(net);
  while (true) {
    const Network& cur = ed.network();
    VertexId a;
    for (VertexId v : cur.topological_order()) {
      if (cur.is_reticulation(v) && !report.stable(v)) {
        a = v;
        break;
      }
    }
    if (!a.valid()) break;
    const VertexId b = cur.children(a).front();
    if (!cur.is_reticulation(b) || !report.stable(b)) {
      throw InternalConsistencyError("unstable reticulation without a stable reticulation child");
    }
    VertexId c;
    for (VertexId p : cur.parents(a)) {
      if (report.stable(p) && (!c.valid() || p < c)) c = p;
    }
    if (!c.valid()) throw InternalConsistencyError("unstable reticulation without a stable parent");

    ed.remove_branch(c, a);
    ReductionStep scratch;
    const VertexId seeds[] = {c, a};
    suppress_around(ed, seeds, scratch);
    ++out.rewirings;
    report = stability(ed.network());
  }
  out.net = std::move(ed).release();
  out.after = class_stats(out.net, report);
  return out;
}

namespace {

BoundCheck check(std::string name, std::size_t limit, std::size_t observed) {
  return {std::move(name), limit, observed, observed <= limit};
}

}  // namespace

BoundReport verify_rv_bound(const ClassStats& s) {
  const std::size_t n1 = s.n_leaves == 0 ? 0 : s.n_leaves - 1;
  return {check("reticulations <= 4(n-1)", 4 * n1, s.m_reticulations)};
}

BoundReport verify_ns_bounds(const ClassStats& s) {
  const std::size_t n1 = s.n_leaves == 0 ? 0 : s.n_leaves - 1;
  return {
      check("reticulations <= 12(n-1)", 12 * n1, s.m_reticulations),
      check("tree vertices <= 13(n-1)", 13 * n1, s.tree_vertices),
      check("branches <= 38(n-1)", 38 * n1, s.branches),
      check("unstable reticulations <= 2 * stable", 2 * s.s_ret, s.u_ret),
  };
}

BoundReport verify_bounds(const Network& net) {
  const auto outcome = validate(net, true);
  if (!outcome.ok()) throw InputError(outcome.violations.front().message);
  const StabilityReport report = stability(net);
  const ClassStats s = class_stats(net, report);
  BoundReport out;
  if (is_reticulation_visible(net, report)) out = verify_rv_bound(s);
  if (is_nearly_stable(net, report)) {
    auto ns = verify_ns_bounds(s);
    out.insert(out.end(), ns.begin(), ns.end());
  }
  return out;
}

}  // namespace netdisplay
