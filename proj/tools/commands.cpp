#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "netdisplay/bounds.hpp"
#include "netdisplay/containment.hpp"
#include "netdisplay/newick.hpp"
#include "netdisplay/stability.hpp"

namespace netdisplay::cli {

using nlohmann::json;

std::size_t oracle_cap() {
  if (const char* env = std::getenv("NETDISPLAY_ORACLE_CAP")) {
    try {
      return static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      throw InputError(std::string("NETDISPLAY_ORACLE_CAP is not a number: ") + env);
    }
  }
  return 20;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  using clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  DisplayOptions opts;
  opts.record_trace = false;
  opts.oracle_cap = oracle_cap();
  for (std::size_t n : cfg.sizes) {
    const auto k = static_cast<std::size_t>(std::llround(cfg.ret_ratio * static_cast<double>(n)));
    for (std::size_t i = 0; i < cfg.instances; ++i) {
      GenSpec spec{n, k, cfg.cls, cfg.seed + 1000003 * i + n, 100000};
      auto outcome = generate(spec);
      if (!outcome.network) throw PreconditionError(outcome.notice);
      const Network& net = *outcome.network;
      Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
      std::vector<std::size_t> choices(net.reticulation_count());
      for (auto& c : choices) c = rng.below(2);
      const PhyloTree tree = apply_resolution(net, resolution_from_choices(net, choices));

      BenchRow row{n, net.reticulation_count(), 0, 0};
      double best = 0;
      for (std::size_t r = 0; r < std::max<std::size_t>(cfg.repeats, 1); ++r) {
        const auto t0 = clock::now();
        const auto verdict = displays(net, tree, opts);
        const double s = std::chrono::duration<double>(clock::now() - t0).count();
        if (!verdict.displayed) {
          throw InternalConsistencyError("bench instance built from a resolution not displayed");
        }
        if (r == 0 || s < best) best = s;
        row.iterations = verdict.iterations;
      }
      row.seconds = best;
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream os;
  if (path == "-") {
    os << in.rdbuf();
  } else {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open " + path);
    os << f.rdbuf();
  }
  return os.str();
}

template <class T>
T take_or_report(ParseResult<T> res, const std::string& path, std::ostream& err) {
  // Errors surface through the exception thrown by take().
  for (const auto& d : res.diagnostics) {
    if (d.severity == Severity::warning) {
      err << path << ": offset " << d.byte_offset << ": warning: " << d.message << '\n';
    }
  }
  return std::move(res).take();
}

json flags_json(const ClassFlags& f) {
  return {{"binary", f.binary},
          {"tree_child", f.tree_child},
          {"reticulation_visible", f.reticulation_visible},
          {"nearly_stable", f.nearly_stable},
          {"subphylogeny_free", f.subphylogeny_free}};
}

json stats_json(const ClassStats& s) {
  return {{"n_leaves", s.n_leaves},         {"m_reticulations", s.m_reticulations},
          {"s_ret", s.s_ret},               {"u_ret", s.u_ret},
          {"tree_vertices", s.tree_vertices}, {"branches", s.branches}};
}

std::string_view violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::empty: return "empty";
    case ViolationKind::no_root: return "no_root";
    case ViolationKind::multiple_roots: return "multiple_roots";
    case ViolationKind::cycle: return "cycle";
    case ViolationKind::unreachable: return "unreachable";
    case ViolationKind::suppressible_vertex: return "suppressible_vertex";
    case ViolationKind::unlabeled_leaf: return "unlabeled_leaf";
    case ViolationKind::labeled_internal: return "labeled_internal";
    case ViolationKind::parallel_branches: return "parallel_branches";
    case ViolationKind::not_binary: return "not_binary";
  }
  return "?";
}

int cmd_validate(const std::string& path, std::istream& in, std::ostream& out,
                 std::ostream& err) {
  auto nets = take_or_report(parse_networks(read_input(path, in)), path, err);
  for (const auto& net : nets) {
    const auto outcome = validate(net, true);
    json v = json::array();
    for (const auto& viol : outcome.violations) {
      v.push_back({{"kind", violation_name(viol.kind)}, {"message", viol.message}});
    }
    out << json{{"valid", true},
                {"binary", outcome.ok()},
                {"leaves", net.leaf_count()},
                {"reticulations", net.reticulation_count()},
                {"vertices", net.vertex_count()},
                {"branches", net.branch_count()},
                {"violations", v}}
               .dump()
        << '\n';
  }
  return kTrue;
}

int cmd_classify(const std::string& path, std::istream& in, std::ostream& out,
                 std::ostream& err) {
  auto nets = take_or_report(parse_networks(read_input(path, in)), path, err);
  for (const auto& net : nets) out << flags_json(classify(net)).dump() << '\n';
  return kTrue;
}

void require_binary(const Network& net) {
  if (!validate(net, true).ok()) throw PreconditionError("network is not binary");
}

int cmd_stats(const std::string& path, bool table, std::istream& in, std::ostream& out,
              std::ostream& err) {
  auto nets = take_or_report(parse_networks(read_input(path, in)), path, err);
  bool all_pass = true;
  for (const auto& net : nets) {
    require_binary(net);
    const ClassStats s = class_stats(net);
    const BoundReport report = verify_bounds(net);
    if (table) {
      out << "n=" << s.n_leaves << " m=" << s.m_reticulations << " s_ret=" << s.s_ret
          << " u_ret=" << s.u_ret << " tree_vertices=" << s.tree_vertices
          << " branches=" << s.branches << '\n';
      out << std::left << std::setw(40) << "bound" << std::right << std::setw(10) << "limit"
          << std::setw(10) << "observed" << "  result\n";
      for (const auto& b : report) {
        out << std::left << std::setw(40) << b.name << std::right << std::setw(10) << b.limit
            << std::setw(10) << b.observed << "  " << (b.pass ? "pass" : "FAIL") << '\n';
      }
    } else {
      json bounds = json::array();
      for (const auto& b : report) {
        bounds.push_back(
            {{"name", b.name}, {"limit", b.limit}, {"observed", b.observed}, {"pass", b.pass}});
      }
      json j = stats_json(s);
      j["bounds"] = bounds;
      out << j.dump() << '\n';
    }
    for (const auto& b : report) all_pass = all_pass && b.pass;
  }
  if (!all_pass) {
    err << "error: a bound is violated; the stability computation or input handling is wrong\n";
    return kInternal;
  }
  return kTrue;
}

int cmd_contains(const std::string& net_path, const std::string& tree_path,
                 const std::string& algo, bool trace, std::istream& in, std::ostream& out,
                 std::ostream& err) {
  const Network net = take_or_report(parse_network(read_input(net_path, in)), net_path, err);
  const PhyloTree tree = take_or_report(parse_tree(read_input(tree_path, in)), tree_path, err);
  if (!same_leaf_set(net, tree.network())) throw LeafSetMismatch();
  const std::size_t cap = oracle_cap();

  std::string used = algo;
  if (algo == "auto") {
    const ClassFlags f = classify(net);
    if (f.binary && f.nearly_stable) {
      used = "fast";
    } else if (net.reticulation_count() <= cap) {
      used = "oracle";
    } else {
      throw PreconditionError("network is not binary nearly stable and has more than " +
                              std::to_string(cap) + " reticulations");
    }
  }

  json j;
  ContainmentVerdict verdict;
  if (used == "fast") {
    DisplayOptions opts;
    opts.oracle_cap = cap;
    opts.record_trace = trace;
    verdict = displays(net, tree, opts);
  } else {
    verdict = oracle_displays(net, tree, cap);
  }
  j["displayed"] = verdict.displayed;
  j["algo"] = used;
  j["decided_by"] = verdict.decided_by;
  j["iterations"] = verdict.iterations;
  j["reticulations_initial"] = verdict.reticulations_initial;
  j["leaves"] = net.leaf_count();
  if (verdict.certificate) {
    json kept = json::array();
    for (const auto& [r, b] : verdict.certificate->kept) {
      kept.push_back({b.tail.value, b.head.value});
    }
    j["certificate"] = kept;
  }
  if (trace) {
    json steps = json::array();
    std::istringstream lines(verdict.trace.to_text());
    for (std::string line; std::getline(lines, line);) {
      if (!line.empty()) steps.push_back(line);
    }
    j["trace"] = steps;
  }
  out << j.dump() << '\n';
  return verdict.displayed ? kTrue : kFalse;
}

int cmd_transform(const std::string& path, std::istream& in, std::ostream& out,
                  std::ostream& err) {
  const Network net = take_or_report(parse_network(read_input(path, in)), path, err);
  const TransformResult r = ns_to_rv_transform(net);
  out << serialize(r.net) << '\n';
  err << json{{"before", stats_json(r.before)},
              {"after", stats_json(r.after)},
              {"rewirings", r.rewirings}}
             .dump()
      << '\n';
  return kTrue;
}

int cmd_dot(const std::string& path, std::istream& in, std::ostream& out, std::ostream& err) {
  const Network net = take_or_report(parse_network(read_input(path, in)), path, err);
  const StabilityReport report = stability(net);
  out << to_dot(net, &report);
  return kTrue;
}

int cmd_gen(GenSpec spec, std::size_t count, std::ostream& out, std::ostream& err) {
  const std::uint64_t base = spec.seed;
  for (std::size_t i = 0; i < count; ++i) {
    spec.seed = base + i;
    auto outcome = generate(spec);
    if (!outcome.network) {
      err << "error: seed " << spec.seed << ": " << outcome.notice << '\n';
      return kPrecondition;
    }
    out << metadata_comment(spec) << '\n' << serialize(*outcome.network) << '\n';
  }
  return kTrue;
}

int cmd_bench(const BenchConfig& cfg, std::ostream& out) {
  const auto rows = run_bench(cfg);
  out << "n,m,wall_seconds,iterations\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.m << ',' << std::setprecision(6) << r.seconds << ',' << r.iterations
        << '\n';
  }
  return kTrue;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Tree containment for nearly stable phylogenetic networks", "netdisplay"};
  app.require_subcommand(1);

  std::string net_path, tree_path, algo = "auto", target = "rv";
  bool trace = false, table = false;

  auto* validate_cmd = app.add_subcommand("validate", "Check eNewick networks");
  validate_cmd->add_option("network", net_path, "eNewick file, - for stdin")->required();

  auto* classify_cmd = app.add_subcommand("classify", "Report class membership as JSON");
  classify_cmd->add_option("network", net_path, "eNewick file, - for stdin")->required();

  auto* stats_cmd = app.add_subcommand("stats", "Vertex counts and size bounds");
  stats_cmd->add_option("network", net_path, "eNewick file, - for stdin")->required();
  stats_cmd->add_flag("--table", table, "Print a table instead of JSON");

  auto* contains_cmd = app.add_subcommand("contains", "Decide whether the network displays the tree");
  contains_cmd->add_option("network", net_path, "eNewick file")->required();
  contains_cmd->add_option("tree", tree_path, "Newick file")->required();
  contains_cmd->add_option("--algo", algo, "auto, fast or oracle")
      ->check(CLI::IsMember({"auto", "fast", "oracle"}));
  contains_cmd->add_flag("--trace", trace, "Include the reduction trace");

  auto* transform_cmd = app.add_subcommand("transform", "Rewire into a reticulation-visible network");
  transform_cmd->add_option("network", net_path, "eNewick file, - for stdin")->required();
  transform_cmd->add_option("--to", target, "Target class")->check(CLI::IsMember({"rv"}));

  auto* dot_cmd = app.add_subcommand("dot", "Graphviz rendering with stability marks");
  dot_cmd->add_option("network", net_path, "eNewick file, - for stdin")->required();

  GenSpec spec;
  std::string cls = "any";
  std::size_t count = 1;
  auto* gen_cmd = app.add_subcommand("gen", "Generate random networks");
  gen_cmd->add_option("--leaves", spec.n_leaves, "Leaf count")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--rets", spec.target_reticulations, "Reticulation count");
  gen_cmd->add_option("--class", cls, "any, tree_child, reticulation_visible, nearly_stable");
  gen_cmd->add_option("--seed", spec.seed, "First seed; network i uses seed + i");
  gen_cmd->add_option("--count", count, "Number of networks");
  gen_cmd->add_option("--max-rejections", spec.max_rejections, "Tangling attempts before giving up");

  BenchConfig bench;
  std::string bench_cls = "nearly_stable";
  auto* bench_cmd = app.add_subcommand("bench", "Time displays over growing sizes, CSV");
  bench_cmd->add_option("--sizes", bench.sizes, "Leaf counts")->delimiter(',');
  bench_cmd->add_option("--class", bench_cls, "Network class");
  bench_cmd->add_option("--seed", bench.seed, "Base seed");
  bench_cmd->add_option("--ret-ratio", bench.ret_ratio, "Reticulations per leaf");
  bench_cmd->add_option("--instances", bench.instances, "Networks per size");
  bench_cmd->add_option("--repeats", bench.repeats, "Timings per network, best kept");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kTrue : kUsage;
  }

  auto parse_class = [](const std::string& s) {
    auto c = class_constraint_from_string(s);
    if (!c) throw CLI::ValidationError("--class", "unknown class " + s);
    return *c;
  };

  try {
    if (*validate_cmd) return cmd_validate(net_path, in, out, err);
    if (*classify_cmd) return cmd_classify(net_path, in, out, err);
    if (*stats_cmd) return cmd_stats(net_path, table, in, out, err);
    if (*contains_cmd) return cmd_contains(net_path, tree_path, algo, trace, in, out, err);
    if (*transform_cmd) return cmd_transform(net_path, in, out, err);
    if (*dot_cmd) return cmd_dot(net_path, in, out, err);
    if (*gen_cmd) {
      spec.class_constraint = parse_class(cls);
      return cmd_gen(spec, count, out, err);
    }
    if (*bench_cmd) {
      bench.cls = parse_class(bench_cls);
      return cmd_bench(bench, out);
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace netdisplay::cli
