#include "netdisplay/reductions.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>

namespace netdisplay {

namespace {

constexpr std::array<std::pair<ReductionKind, std::string_view>, 14> kKindNames{{
    {ReductionKind::suppress, "suppress"},
    {ReductionKind::cherry, "cherry"},
    {ReductionKind::uncle_nephew, "uncle_nephew"},
    {ReductionKind::case_A, "case_A"},
    {ReductionKind::case_B, "case_B"},
    {ReductionKind::case_C, "case_C"},
    {ReductionKind::case_D, "case_D"},
    {ReductionKind::case_E, "case_E"},
    {ReductionKind::case_F, "case_F"},
    {ReductionKind::case_G, "case_G"},
    {ReductionKind::case_H, "case_H"},
    {ReductionKind::case_I, "case_I"},
    {ReductionKind::case_J, "case_J"},
    {ReductionKind::case_K, "case_K"},
}};

std::uint32_t parse_id(std::string_view s) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw InputError("bad vertex id '" + std::string(s) + "' in trace");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  if (s.empty()) return out;
  std::size_t b = 0;
  while (true) {
    auto e = s.find(sep, b);
    out.push_back(s.substr(b, e == std::string_view::npos ? s.npos : e - b));
    if (e == std::string_view::npos) break;
    b = e + 1;
  }
  return out;
}

bool has_duplicate_child(const Network& net, VertexId v, VertexId& dup) {
  auto ch = net.children(v);
  for (std::size_t i = 0; i < ch.size(); ++i) {
    for (std::size_t j = i + 1; j < ch.size(); ++j) {
      if (ch[i] == ch[j]) {
        dup = ch[i];
        return true;
      }
    }
  }
  return false;
}

std::size_t reserved_index(std::string_view label) {
  if (label.size() < 4 || label.substr(0, 3) != "__r") return 0;
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(label.data() + 3, label.data() + label.size(), v);
  return (ec == std::errc{} && p == label.data() + label.size()) ? v : 0;
}

std::optional<VertexId> single_parent(const Network& net, VertexId v) {
  auto ps = net.parents(v);
  if (ps.size() != 1) return std::nullopt;
  return ps.front();
}

// Replaces the cherry (a, b) under p by p itself, labelled `label`.
void collapse_cherry(NetworkEditor& ed, VertexId p, VertexId a, VertexId b,
                     const std::string& label) {
  ed.remove_vertex(a);
  ed.remove_vertex(b);
  ed.set_label(p, label);
}

}  // namespace

std::string_view to_string(ReductionKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "?";
}

std::optional<ReductionKind> reduction_kind_from_string(std::string_view s) {
  for (const auto& [kind, name] : kKindNames) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

std::string ReductionTrace::to_text() const {
  std::ostringstream os;
  auto ids = [&](const std::vector<VertexId>& vs) {
    for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? "," : "") << vs[i].value;
  };
  for (const auto& s : steps) {
    os << to_string(s.kind) << " removed=";
    for (std::size_t i = 0; i < s.removed_branches.size(); ++i) {
      os << (i ? "," : "") << s.removed_branches[i].tail.value << '>'
         << s.removed_branches[i].head.value;
    }
    os << " contracted=";
    ids(s.contracted);
    os << " pruned=";
    ids(s.pruned);
    os << " leaf=";
    if (s.introduced_leaf) os << s.introduced_leaf->first.value << ':' << s.introduced_leaf->second;
    os << " merged=";
    for (std::size_t i = 0; i < s.merged_labels.size(); ++i) {
      os << (i ? "," : "") << s.merged_labels[i];
    }
    os << '\n';
  }
  return os.str();
}

ReductionTrace ReductionTrace::from_text(std::string_view text) {
  ReductionTrace trace;
  for (auto line : split(text, '\n')) {
    if (line.empty()) continue;
    auto fields = split(line, ' ');
    ReductionStep step;
    auto kind = reduction_kind_from_string(fields.front());
    if (!kind) throw InputError("unknown reduction kind '" + std::string(fields.front()) + "'");
    step.kind = *kind;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto eq = fields[i].find('=');
      if (eq == std::string_view::npos) throw InputError("malformed trace field");
      auto key = fields[i].substr(0, eq);
      auto value = fields[i].substr(eq + 1);
      if (key == "removed") {
        for (auto b : split(value, ',')) {
          auto gt = b.find('>');
          if (gt == std::string_view::npos) throw InputError("malformed branch in trace");
          step.removed_branches.push_back(
              {VertexId(parse_id(b.substr(0, gt))), VertexId(parse_id(b.substr(gt + 1)))});
        }
      } else if (key == "contracted") {
        for (auto v : split(value, ',')) step.contracted.emplace_back(parse_id(v));
      } else if (key == "pruned") {
        for (auto v : split(value, ',')) step.pruned.emplace_back(parse_id(v));
      } else if (key == "leaf") {
        if (value.empty()) continue;
        auto colon = value.find(':');
        if (colon == std::string_view::npos) throw InputError("malformed leaf in trace");
        step.introduced_leaf.emplace(VertexId(parse_id(value.substr(0, colon))),
                                     std::string(value.substr(colon + 1)));
      } else if (key == "merged") {
        for (auto l : split(value, ',')) step.merged_labels.emplace_back(l);
      } else {
        throw InputError("unknown trace field '" + std::string(key) + "'");
      }
    }
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

void suppress_around(NetworkEditor& ed, std::span<const VertexId> seeds, ReductionStep& step) {
  std::vector<VertexId> work(seeds.begin(), seeds.end());
  const Network& net = ed.network();
  while (!work.empty()) {
    VertexId v = work.back();
    work.pop_back();
    if (!net.contains(v)) continue;

    if (net.outdegree(v) == 0) {
      if (!net.label(v).empty() || v == net.root()) continue;
      std::vector<VertexId> ps(net.parents(v).begin(), net.parents(v).end());
      ed.remove_vertex(v);
      step.pruned.push_back(v);
      work.insert(work.end(), ps.begin(), ps.end());
      continue;
    }

    VertexId dup;
    if (has_duplicate_child(net, v, dup)) {
      ed.remove_branch(v, dup);
      work.push_back(v);
      work.push_back(dup);
      continue;
    }

    if (net.outdegree(v) == 1 && net.indegree(v) == 1) {
      VertexId p = net.parents(v).front();
      VertexId c = net.children(v).front();
      ed.remove_vertex(v);
      ed.add_branch(p, c);
      step.contracted.push_back(v);
      work.push_back(p);
      work.push_back(c);
      continue;
    }

    if (net.outdegree(v) == 1 && net.indegree(v) == 0 && v == net.root()) {
      VertexId c = net.children(v).front();
      ed.remove_vertex(v);
      ed.set_root(c);
      step.contracted.push_back(v);
      work.push_back(c);
    }
  }
}

void suppress_all(NetworkEditor& ed, ReductionStep& step) {
  const auto all = ed.network().vertices();
  suppress_around(ed, all, step);
}

std::pair<Network, ReductionStep> suppress_degenerate(Network net) {
  NetworkEditor ed(std::move(net));
  ReductionStep step;
  step.kind = ReductionKind::suppress;
  suppress_all(ed, step);
  return {std::move(ed).release(), std::move(step)};
}

std::vector<VertexId> cherries(const Network& net) {
  std::vector<VertexId> out;
  for (VertexId v : net.vertices()) {
    if (net.outdegree(v) != 2 || net.indegree(v) > 1) continue;
    auto ch = net.children(v);
    if (net.is_leaf(ch[0]) && net.is_leaf(ch[1])) out.push_back(v);
  }
  return out;
}

bool tree_siblings(const Network& tree, std::string_view a, std::string_view b) {
  auto va = tree.find_label(a);
  auto vb = tree.find_label(b);
  if (!va || !vb || *va == *vb) return false;
  auto pa = single_parent(tree, *va);
  auto pb = single_parent(tree, *vb);
  return pa && pb && *pa == *pb;
}

std::size_t last_reserved_index(const Network& net, const Network& tree) {
  std::size_t last = 0;
  for (const Network* g : {&net, &tree}) {
    for (VertexId v : g->leaves()) last = std::max(last, reserved_index(g->label(v)));
  }
  return last;
}

std::size_t cherry_reduce_in_place(NetworkEditor& net, NetworkEditor& tree, std::size_t& next,
                                   ReductionTrace* trace, std::size_t limit) {
  const Network& n = net.network();
  const Network& t = tree.network();

  std::vector<VertexId> work = cherries(n);
  std::reverse(work.begin(), work.end());
  std::size_t replaced = 0;
  while (!work.empty() && replaced < limit) {
    VertexId p = work.back();
    work.pop_back();
    if (!n.contains(p) || n.outdegree(p) != 2 || n.indegree(p) > 1) continue;
    VertexId a = n.children(p)[0];
    VertexId b = n.children(p)[1];
    if (!n.is_leaf(a) || !n.is_leaf(b)) continue;
    const std::string la = n.label(a);
    const std::string lb = n.label(b);
    if (!tree_siblings(t, la, lb)) continue;

    VertexId ta = *t.find_label(la);
    VertexId tb = *t.find_label(lb);
    VertexId tp = t.parents(ta).front();

    const std::string fresh = "__r" + std::to_string(++next);
    ReductionStep step;
    step.kind = ReductionKind::cherry;
    step.removed_branches = {{p, a}, {p, b}};
    step.introduced_leaf.emplace(p, fresh);
    step.merged_labels = {la, lb};
    collapse_cherry(net, p, a, b, fresh);
    collapse_cherry(tree, tp, ta, tb, fresh);
    ++replaced;
    if (trace) trace->steps.push_back(std::move(step));

    if (auto up = single_parent(n, p)) work.push_back(*up);
  }
  return replaced;
}

CherryReduction cherry_reduce(const Network& net, const PhyloTree& tree) {
  if (!same_leaf_set(net, tree.network())) throw LeafSetMismatch();
  NetworkEditor ned(net);
  NetworkEditor ted(tree.network());
  ReductionTrace trace;
  std::size_t next = last_reserved_index(net, tree.network());
  cherry_reduce_in_place(ned, ted, next, &trace);
  return {std::move(ned).release(), PhyloTree::from_network(std::move(ted).release()),
          std::move(trace)};
}

std::optional<UncleNephew> match_uncle_nephew(const Network& net, VertexId site) {
  if (!net.contains(site) || net.outdegree(site) != 2 || net.indegree(site) > 1) {
    return std::nullopt;
  }
  for (int i = 0; i < 2; ++i) {
    VertexId uncle = net.children(site)[i];
    VertexId y = net.children(site)[1 - i];
    if (!net.is_leaf(uncle) || net.is_leaf(y)) continue;
    if (net.indegree(y) != 2 || net.outdegree(y) != 1) continue;
    VertexId nephew = net.children(y).front();
    if (!net.is_leaf(nephew)) continue;
    auto ps = net.parents(y);
    VertexId other = ps[0] == site ? ps[1] : ps[0];
    if (other == site) continue;
    return UncleNephew{site, uncle, y, nephew, other};
  }
  return std::nullopt;
}

std::pair<Network, ReductionStep> uncle_nephew_reduce(const Network& net, const PhyloTree& tree,
                                                      VertexId site) {
  auto m = match_uncle_nephew(net, site);
  if (!m) {
    std::ostringstream os;
    os << "no uncle-nephew structure at " << site;
    throw InputError(os.str());
  }
  ReductionStep step;
  step.kind = ReductionKind::uncle_nephew;
  const bool sib = tree.siblings(net.label(m->uncle), net.label(m->nephew));
  const Branch cut = sib ? Branch{m->dangling, m->hybrid} : Branch{m->site, m->hybrid};
  NetworkEditor ed(net);
  ed.remove_branch(cut.tail, cut.head);
  step.removed_branches.push_back(cut);
  const std::array<VertexId, 2> seeds{cut.tail, cut.head};
  suppress_around(ed, seeds, step);
  return {std::move(ed).release(), std::move(step)};
}

std::pair<Network, PhyloTree> replay(const Network& net, const PhyloTree& tree,
                                     const ReductionTrace& trace) {
  NetworkEditor ned(net);
  NetworkEditor ted(tree.network());
  for (const auto& step : trace.steps) {
    if (step.kind == ReductionKind::cherry) {
      if (step.merged_labels.size() != 2 || !step.introduced_leaf) {
        throw InputError("cherry step without merged labels");
      }
      const auto& fresh = step.introduced_leaf->second;
      for (NetworkEditor* ed : {&ned, &ted}) {
        const Network& g = ed->network();
        auto a = g.find_label(step.merged_labels[0]);
        auto b = g.find_label(step.merged_labels[1]);
        if (!a || !b) throw InputError("cherry step names unknown leaves");
        auto pa = single_parent(g, *a);
        auto pb = single_parent(g, *b);
        if (!pa || pa != pb) throw InputError("cherry step leaves are not siblings");
        collapse_cherry(*ed, *pa, *a, *b, fresh);
      }
      continue;
    }
    for (const auto& b : step.removed_branches) ned.remove_branch(b.tail, b.head);
    ReductionStep scratch;
    suppress_all(ned, scratch);
  }
  return {std::move(ned).release(), PhyloTree::from_network(std::move(ted).release())};
}

}  // namespace netdisplay
