#include "netdisplay/newick.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <sstream>
#include <unordered_map>

namespace netdisplay {

namespace {

constexpr std::size_t kMaxDepth = 4096;

bool is_label_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

bool is_reserved_label(std::string_view s) {
  if (s.size() < 4 || s.substr(0, 3) != "__r") return false;
  return std::all_of(s.begin() + 3, s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

struct ParsedNode {
  std::vector<std::size_t> children;
  std::string name;
  std::string tag;
  std::size_t offset = 0;
  bool has_subtree = false;
};

struct ParseFailure {
  std::size_t offset;
  std::string message;
  // Further errors found in the same pass.
  std::vector<ParseFailure> more = {};
};

class StatementParser {
 public:
  StatementParser(std::string_view text, std::size_t pos) : text_(text), pos_(pos) {}

  // Parses one statement starting at pos_; on success pos_ is just past ';'.
  std::vector<ParsedNode> run() {
    skip();
    start_ = pos_;
    subtree(0);
    skip();
    if (pos_ >= text_.size()) fail(pos_, "missing ';'");
    if (text_[pos_] == ')' || text_[pos_] == ',') fail(pos_, "unbalanced parentheses");
    if (text_[pos_] != ';') fail(pos_, std::string("unexpected '") + text_[pos_] + "'");
    ++pos_;
    return std::move(nodes_);
  }

  [[nodiscard]] std::size_t position() const { return pos_; }
  [[nodiscard]] std::size_t start() const { return start_; }

 private:
  [[noreturn]] static void fail(std::size_t off, std::string msg) {
    throw ParseFailure{off, std::move(msg)};
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '[') {
        auto close = text_.find(']', pos_);
        if (close == std::string_view::npos) fail(pos_, "unterminated comment");
        pos_ = close + 1;
      } else {
        break;
      }
    }
  }

  std::string word() {
    std::size_t b = pos_;
    while (pos_ < text_.size() && is_label_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(b, pos_ - b));
  }

  std::size_t subtree(std::size_t depth) {
    if (depth > kMaxDepth) fail(pos_, "nesting too deep");
    skip();
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    nodes_[id].offset = pos_;
    if (pos_ < text_.size() && text_[pos_] == '(') {
      nodes_[id].has_subtree = true;
      ++pos_;
      while (true) {
        std::size_t child = subtree(depth + 1);
        nodes_[id].children.push_back(child);
        skip();
        if (pos_ >= text_.size()) fail(pos_, "unbalanced parentheses");
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        if (text_[pos_] == ';') fail(pos_, "unbalanced parentheses");
        fail(pos_, std::string("unexpected '") + text_[pos_] + "'");
      }
    }
    skip();
    nodes_[id].name = word();
    skip();
    if (pos_ < text_.size() && text_[pos_] == '#') {
      ++pos_;
      nodes_[id].tag = word();
      if (nodes_[id].tag.empty()) fail(pos_, "empty hybrid tag");
    }
    skip();
    if (pos_ < text_.size() && text_[pos_] == ':') fail(pos_, "branch lengths are not supported");
    if (!nodes_[id].has_subtree && nodes_[id].name.empty() && nodes_[id].tag.empty()) {
      if (pos_ >= text_.size()) fail(pos_, "unexpected end of input");
      if (text_[pos_] == ')' || text_[pos_] == ',' || text_[pos_] == ';') {
        fail(pos_, "missing label");
      }
      fail(pos_, std::string("unexpected '") + text_[pos_] + "'");
    }
    return id;
  }

  std::string_view text_;
  std::size_t pos_;
  std::size_t start_ = 0;
  std::vector<ParsedNode> nodes_;
};

enum class Mode { network, tree };

Network build(const std::vector<ParsedNode>& nodes, std::size_t stmt_offset, Mode mode,
              const ParseOptions& opts) {
  struct TagInfo {
    std::vector<std::size_t> occurrences;
    std::optional<std::size_t> carrier;
  };
  std::map<std::string, TagInfo> tags;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.tag.empty()) continue;
    if (mode == Mode::tree) throw ParseFailure{n.offset, "hybrid tag in tree"};
    auto& info = tags[n.tag];
    info.occurrences.push_back(i);
    if (n.has_subtree) {
      if (info.carrier) {
        throw ParseFailure{n.offset, "hybrid tag #" + n.tag + " has inconsistent child subtrees"};
      }
      info.carrier = i;
    }
  }
  if (mode == Mode::tree) {
    for (const auto& n : nodes) {
      if (n.children.size() > 2) {
        throw ParseFailure{n.offset, "polytomy at offset " + std::to_string(n.offset)};
      }
      if (n.children.size() == 1) {
        throw ParseFailure{n.offset, "unary vertex at offset " + std::to_string(n.offset)};
      }
    }
  }
  std::vector<ParseFailure> unmatched;
  for (const auto& [tag, info] : tags) {
    if (info.occurrences.size() < 2) {
      unmatched.push_back({nodes[info.occurrences.front()].offset, "hybrid tag #" + tag + " unmatched"});
    }
  }
  if (!unmatched.empty()) {
    std::sort(unmatched.begin(), unmatched.end(),
              [](const ParseFailure& a, const ParseFailure& b) { return a.offset < b.offset; });
    ParseFailure first = unmatched.front();
    first.more.assign(unmatched.begin() + 1, unmatched.end());
    throw first;
  }

  NetworkEditor ed;
  std::vector<VertexId> vertex_of(nodes.size());
  std::map<std::string, VertexId> tag_vertex;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (!n.tag.empty()) {
      auto it = tag_vertex.find(n.tag);
      if (it == tag_vertex.end()) it = tag_vertex.emplace(n.tag, ed.add_vertex()).first;
      vertex_of[i] = it->second;
    } else {
      vertex_of[i] = ed.add_vertex();
    }
  }

  // Leaf labels. A hybrid without any subtree-carrying occurrence is a leaf.
  auto assign_label = [&](VertexId v, const ParsedNode& n) {
    if (!opts.allow_reserved_labels && is_reserved_label(n.name)) {
      throw ParseFailure{n.offset, "label '" + n.name + "' uses the reserved __r namespace"};
    }
    const auto& current = ed.network().label(v);
    if (!current.empty() && current != n.name) {
      throw ParseFailure{n.offset, "hybrid leaf has conflicting labels"};
    }
    try {
      ed.set_label(v, n.name);
    } catch (const InputError& e) {
      throw ParseFailure{n.offset, e.what()};
    }
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    const bool leaf = n.tag.empty() ? !n.has_subtree : !tags[n.tag].carrier.has_value();
    if (!leaf || n.name.empty()) continue;
    assign_label(vertex_of[i], n);
  }
  for (const auto& [tag, info] : tags) {
    if (info.carrier) continue;
    if (ed.network().label(tag_vertex.at(tag)).empty()) {
      throw ParseFailure{nodes[info.occurrences.front()].offset,
                         "hybrid leaf #" + tag + " has no label"};
    }
  }

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t c : nodes[i].children) ed.add_branch(vertex_of[i], vertex_of[c]);
  }
  ed.set_root(vertex_of[0]);
  Network net = std::move(ed).release();

  auto outcome = validate(net, false);
  if (!outcome.ok()) throw ParseFailure{stmt_offset, outcome.violations.front().message};
  return net;
}

template <class T, class Build>
ParseResult<std::vector<T>> parse_many(std::string_view text, Build&& make, bool single) {
  ParseResult<std::vector<T>> result;
  std::vector<T> out;
  std::size_t pos = 0;
  try {
    while (true) {
      // Skip inter-statement whitespace and comments.
      while (pos < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[pos]))) {
          ++pos;
        } else if (text[pos] == '[') {
          auto close = text.find(']', pos);
          if (close == std::string_view::npos) throw ParseFailure{pos, "unterminated comment"};
          pos = close + 1;
        } else {
          break;
        }
      }
      if (pos >= text.size()) break;
      if (single && !out.empty()) throw ParseFailure{pos, "trailing garbage after ';'"};
      StatementParser p(text, pos);
      auto nodes = p.run();
      out.push_back(make(nodes, p.start()));
      pos = p.position();
    }
    if (out.empty()) throw ParseFailure{pos, "empty input"};
  } catch (const ParseFailure& f) {
    result.diagnostics.push_back({std::min(f.offset, text.size()), f.message, Severity::error});
    for (const auto& g : f.more) {
      result.diagnostics.push_back({std::min(g.offset, text.size()), g.message, Severity::error});
    }
    return result;
  }
  result.value = std::move(out);
  return result;
}

template <class T>
ParseResult<T> first_of(ParseResult<std::vector<T>> many) {
  ParseResult<T> r;
  r.diagnostics = std::move(many.diagnostics);
  if (many.value) r.value = std::move(many.value->front());
  return r;
}

}  // namespace

ParseResult<std::vector<Network>> parse_networks(std::string_view text, const ParseOptions& opts) {
  return parse_many<Network>(
      text,
      [&](const std::vector<ParsedNode>& nodes, std::size_t off) {
        return build(nodes, off, Mode::network, opts);
      },
      false);
}

ParseResult<std::vector<PhyloTree>> parse_trees(std::string_view text, const ParseOptions& opts) {
  return parse_many<PhyloTree>(
      text,
      [&](const std::vector<ParsedNode>& nodes, std::size_t off) {
        Network net = build(nodes, off, Mode::tree, opts);
        try {
          return PhyloTree::from_network(std::move(net));
        } catch (const InputError& e) {
          throw ParseFailure{off, e.what()};
        }
      },
      false);
}

ParseResult<Network> parse_network(std::string_view text, const ParseOptions& opts) {
  return first_of(parse_many<Network>(
      text,
      [&](const std::vector<ParsedNode>& nodes, std::size_t off) {
        return build(nodes, off, Mode::network, opts);
      },
      true));
}

ParseResult<PhyloTree> parse_tree(std::string_view text, const ParseOptions& opts) {
  return first_of(parse_many<PhyloTree>(
      text,
      [&](const std::vector<ParsedNode>& nodes, std::size_t off) {
        Network net = build(nodes, off, Mode::tree, opts);
        try {
          return PhyloTree::from_network(std::move(net));
        } catch (const InputError& e) {
          throw ParseFailure{off, e.what()};
        }
      },
      true));
}

// ---------------------------------------------------------------------------
// Canonical serialization

namespace {

constexpr std::size_t kMaxTiePermutations = 5040;

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Serializer {
 public:
  explicit Serializer(const Network& net) : net_(net) {}

  std::string run() {
    if (net_.vertex_count() == 0) return ";";
    const auto order = net_.topological_order();
    const auto labels = net_.labels();
    std::unordered_map<std::string, std::size_t> rank;
    for (std::size_t i = 0; i < labels.size(); ++i) rank[labels[i]] = i;

    const std::size_t none = labels.size();
    min_rank_.assign(net_.id_bound(), none);
    hash_.assign(net_.id_bound(), 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      VertexId v = *it;
      if (net_.is_leaf(v)) {
        auto r = rank.find(net_.label(v));
        min_rank_[v.index()] = r == rank.end() ? none : r->second;
        hash_[v.index()] = mix(std::hash<std::string>{}(net_.label(v)));
        continue;
      }
      std::vector<std::uint64_t> hs;
      std::size_t m = none;
      for (VertexId c : net_.children(v)) {
        hs.push_back(hash_[c.index()]);
        m = std::min(m, min_rank_[c.index()]);
      }
      std::sort(hs.begin(), hs.end());
      std::uint64_t h = mix(net_.is_reticulation(v) ? 0x52 : 0x54);
      for (auto x : hs) h = mix(h ^ x);
      hash_[v.index()] = h;
      min_rank_[v.index()] = m;
    }

    // Base child order plus the groups of children that compare equal.
    order_.assign(net_.id_bound(), {});
    struct Group {
      VertexId owner;
      std::size_t begin, end;
    };
    std::vector<Group> groups;
    std::size_t combos = 1;
    for (VertexId v : order) {
      auto& ch = order_[v.index()];
      ch.assign(net_.children(v).begin(), net_.children(v).end());
      std::sort(ch.begin(), ch.end(), [&](VertexId a, VertexId b) {
        return std::tie(min_rank_[a.index()], hash_[a.index()], a) <
               std::tie(min_rank_[b.index()], hash_[b.index()], b);
      });
      for (std::size_t i = 0; i < ch.size();) {
        std::size_t j = i + 1;
        while (j < ch.size() && key(ch[j]) == key(ch[i])) ++j;
        if (j - i > 1) {
          groups.push_back({v, i, j});
          for (std::size_t f = 2; f <= j - i && combos <= kMaxTiePermutations; ++f) combos *= f;
        }
        i = j;
      }
    }

    std::string best = emit();
    if (groups.empty() || combos > kMaxTiePermutations) return best;
    // Odometer over the permutations of every tie group.
    while (true) {
      std::size_t g = 0;
      for (; g < groups.size(); ++g) {
        auto& ch = order_[groups[g].owner.index()];
        if (std::next_permutation(ch.begin() + groups[g].begin, ch.begin() + groups[g].end)) break;
      }
      if (g == groups.size()) break;
      best = std::min(best, emit());
    }
    return best;
  }

 private:
  std::pair<std::size_t, std::uint64_t> key(VertexId v) const {
    return {min_rank_[v.index()], hash_[v.index()]};
  }

  std::string emit() {
    tag_.assign(net_.id_bound(), 0);
    next_tag_ = 0;
    std::string out;
    write(net_.root(), out);
    out += ';';
    return out;
  }

  void write(VertexId v, std::string& out) {
    const bool hybrid = net_.is_reticulation(v);
    if (hybrid && tag_[v.index()] != 0) {
      out += "#H" + std::to_string(tag_[v.index()]);
      return;
    }
    if (hybrid) tag_[v.index()] = ++next_tag_;
    const auto& ch = order_[v.index()];
    if (!ch.empty()) {
      out += '(';
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (i) out += ',';
        write(ch[i], out);
      }
      out += ')';
    } else {
      out += net_.label(v);
    }
    if (hybrid) out += "#H" + std::to_string(tag_[v.index()]);
  }

  const Network& net_;
  std::vector<std::size_t> min_rank_;
  std::vector<std::uint64_t> hash_;
  std::vector<std::vector<VertexId>> order_;
  std::vector<std::size_t> tag_;
  std::size_t next_tag_ = 0;
};

}  // namespace

std::string serialize(const Network& net) { return Serializer(net).run(); }

std::string serialize(const PhyloTree& tree) { return serialize(tree.network()); }

bool networks_isomorphic(const Network& a, const Network& b) {
  return serialize(a) == serialize(b);
}

std::string to_dot(const Network& net, const StabilityReport* report) {
  std::ostringstream os;
  os << "digraph network {\n  node [shape=circle, label=\"\", width=0.2];\n";
  for (VertexId v : net.vertices()) {
    os << "  v" << v.value << " [";
    std::vector<std::string> attrs;
    std::string style;
    if (net.is_leaf(v)) {
      attrs.push_back("shape=plaintext, label=\"" + net.label(v) + "\"");
    } else if (net.is_reticulation(v)) {
      style = "filled";
      attrs.push_back("fillcolor=\"#d95f02\"");
    }
    if (v == net.root()) attrs.push_back("xlabel=\"root\"");
    if (report && !net.is_leaf(v)) {
      if (report->stable(v)) {
        attrs.push_back("peripheries=2");
      } else {
        style += style.empty() ? "dashed" : ",dashed";
        attrs.push_back("color=\"#7570b3\", penwidth=2");
      }
    }
    if (!style.empty()) attrs.push_back("style=\"" + style + "\"");
    for (std::size_t i = 0; i < attrs.size(); ++i) os << (i ? ", " : "") << attrs[i];
    os << "];\n";
  }
  for (const auto& b : net.branches()) {
    os << "  v" << b.tail.value << " -> v" << b.head.value;
    if (net.is_reticulation(b.head)) os << " [color=\"#d95f02\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace netdisplay
