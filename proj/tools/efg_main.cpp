#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "efg/checker.hpp"
#include "efg/efg.hpp"
#include "efg/generator.hpp"
#include "efg/io.hpp"
#include "efg/stats.hpp"
#include "efg/traces.hpp"

using namespace efg;

namespace {

enum Exit {
  kOk = 0,
  kUsage = 1,
  kIngest = 2,
  kViolation = 3,
  kEscapes = 4,
  kOracleTooLarge = 5,
  kOracleMismatch = 6,
};

struct Globals {
  std::size_t max_paths = kDefaultMaxPaths;
  bool quiet = false;

  OracleLimits limits() const { return OracleLimits{max_paths}; }
};

struct Input {
  std::string source;
  GraphDocument doc;
};

std::vector<Input> load(const std::vector<std::string> &files) {
  std::vector<std::string> paths = files;
  if (paths.empty())
    paths.push_back("-");
  std::vector<Input> out;
  for (const auto &path : paths) {
    std::string text;
    std::string source = path;
    if (path == "-") {
      std::ostringstream ss;
      ss << std::cin.rdbuf();
      text = ss.str();
      source = "<stdin>";
    } else {
      text = read_file(path);
    }
    GraphDocument doc = parse_document(text, source);
    if (doc.name.empty())
      doc.name = source;
    out.push_back({source, std::move(doc)});
  }
  return out;
}

class Output {
public:
  explicit Output(const std::string &path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_)
        throw Error(ErrorCode::NotFound, "cannot write '" + path + "'");
    }
  }
  std::ostream &stream() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

const EventSpec &find_spec(const GraphDocument &doc, const std::string &id) {
  for (const auto &s : doc.specs)
    if (s.object_id == id)
      return s;
  throw Error(ErrorCode::SpecMismatch,
              "graph '" + doc.name + "' has no events for object '" + id + "'");
}

std::vector<const EventSpec *> selected_specs(const GraphDocument &doc,
                                              const std::string &object) {
  std::vector<const EventSpec *> out;
  if (!object.empty())
    out.push_back(&find_spec(doc, object));
  else
    for (const auto &s : doc.specs)
      out.push_back(&s);
  return out;
}

void note(const Globals &g, const std::string &message) {
  if (!g.quiet)
    std::cerr << "efg: " << message << '\n';
}

// ---------------------------------------------------------------- build

struct BuildArgs {
  std::vector<std::string> files;
  std::string object;
  std::string output;
  std::string format = "dot";
};

int cmd_build(const Globals &, const BuildArgs &a) {
  Output out(a.output);
  for (const auto &in : load(a.files)) {
    GraphDocument result;
    result.name = in.doc.name;
    if (a.object.empty()) {
      result.graph = build_efg(in.doc.graph).efg;
      result.specs = in.doc.specs;
    } else {
      const EventSpec &spec = find_spec(in.doc, a.object);
      result.graph = build_efg(color_for(in.doc.graph, spec)).efg;
      result.specs = {spec};
    }
    if (a.format == "json")
      out.stream() << graph_to_json(result).dump(2) << '\n';
    else
      out.stream() << emit_dot(result);
  }
  return kOk;
}

// ---------------------------------------------------------------- stats

struct StatsArgs {
  std::vector<std::string> files;
  bool json = false;
  bool table = false;
  std::string output;
};

int cmd_stats(const Globals &, const StatsArgs &a) {
  Output out(a.output);
  std::vector<GraphStats> all;
  for (const auto &in : load(a.files)) {
    auto built = build_efg(in.doc.graph);
    all.push_back(compute_stats(in.doc.graph, built.efg, in.doc.name));
  }
  auto corpus = summarize(std::move(all));
  if (a.json) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    auto &reports = j["reports"] = nlohmann::ordered_json::array();
    for (const auto &s : corpus.graphs) {
      Report r;
      r.graph_id = s.graph_id;
      r.stats = s;
      reports.push_back(report_json(r));
    }
    j["distribution"] = histograms_json(corpus);
    out.stream() << j.dump(2) << '\n';
  } else {
    out.stream() << render_table(corpus);
  }
  return kOk;
}

// ---------------------------------------------------------------- classes

struct ClassesArgs {
  std::vector<std::string> files;
  unsigned k = 1;
  std::string object;
  std::string output;
};

int cmd_classes(const Globals &g, const ClassesArgs &a) {
  Output out(a.output);
  auto inputs = load(a.files);
  for (const auto &in : inputs) {
    ColoredDirectedGraph cfg = in.doc.graph;
    if (!a.object.empty())
      cfg = color_for(cfg, find_spec(in.doc, a.object));
    auto built = build_efg(cfg);
    if (inputs.size() > 1)
      out.stream() << "# " << in.doc.name << '\n';
    for (const auto &t : efg_traces(built.efg, a.k, g.limits()))
      out.stream() << t << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  std::vector<std::string> files;
  std::string object;
  bool json = false;
  unsigned k = 1;
  std::string output;
};

void print_verdict(std::ostream &os, const std::string &graph,
                   const ColoredDirectedGraph &efg, const Verdict &v) {
  os << graph << ' ' << v.object_id << ' ' << to_string(v.status) << '\n';
  for (const auto &w : v.witnesses) {
    os << "  witness " << render(efg, w.trace) << " (" << to_string(w.exit_state)
       << ")\n";
    for (const auto &c : w.conditions)
      os << "    condition " << efg.name(c.node) << " = "
         << (c.taken_label ? *c.taken_label : std::string("?")) << '\n';
  }
}

int cmd_check(const Globals &g, const CheckArgs &a) {
  Output out(a.output);
  bool violation = false, escapes = false;
  auto reports = nlohmann::ordered_json::array();
  for (const auto &in : load(a.files)) {
    auto specs = selected_specs(in.doc, a.object);
    if (specs.empty())
      note(g, "graph '" + in.doc.name + "' declares no event_role; nothing to check");

    auto base = build_efg(in.doc.graph);
    Report report;
    report.graph_id = in.doc.name;
    report.stats = compute_stats(in.doc.graph, base.efg, in.doc.name);
    report.graph = &in.doc.graph;
    report.verdicts.emplace();
    for (const EventSpec *spec : specs) {
      auto efg = build_efg(color_for(in.doc.graph, *spec)).efg;
      Verdict v = check_two_event(efg, *spec, a.k, g.limits());
      violation = violation || v.status == VerdictStatus::Violation;
      escapes = escapes || v.status == VerdictStatus::Escapes;
      if (!a.json)
        print_verdict(out.stream(), in.doc.name, efg, v);
      report.verdicts->push_back(std::move(v));
    }
    if (a.json) {
      report.classes = efg_traces(base.efg, a.k, g.limits());
      reports.push_back(report_json(report));
    }
  }
  if (a.json)
    out.stream() << reports.dump(2) << '\n';
  if (violation)
    return kViolation;
  return escapes ? kEscapes : kOk;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
  std::vector<std::string> files;
  unsigned k = 1;
  bool json = false;
  std::string output;
};

int cmd_oracle(const Globals &g, const OracleArgs &a) {
  Output out(a.output);
  bool ok = true;
  auto reports = nlohmann::ordered_json::array();
  for (const auto &in : load(a.files)) {
    auto bij = verify_bijection(in.doc.graph, a.k, g.limits());
    bool doc_ok = bij.ok;
    auto oracle = bijection_json(bij, a.k);
    auto &checks = oracle["verdicts"] = nlohmann::ordered_json::array();
    for (const auto &spec : in.doc.specs) {
      auto colored = color_for(in.doc.graph, spec);
      auto efg = build_efg(colored).efg;
      Verdict on_efg = check_two_event(efg, spec, a.k, g.limits());
      Verdict on_cfg = check_on_cfg_oracle(in.doc.graph, spec, a.k, g.limits());
      bool same = on_efg.status == on_cfg.status &&
                  on_efg.witnesses.size() == on_cfg.witnesses.size();
      for (std::size_t i = 0; same && i < on_efg.witnesses.size(); ++i)
        same = render(efg, on_efg.witnesses[i].trace) ==
                   render(colored, on_cfg.witnesses[i].trace) &&
               on_efg.witnesses[i].exit_state == on_cfg.witnesses[i].exit_state;
      nlohmann::ordered_json c;
      c["object"] = spec.object_id;
      c["efg_status"] = to_string(on_efg.status);
      c["cfg_status"] = to_string(on_cfg.status);
      c["agree"] = same;
      checks.push_back(std::move(c));
      doc_ok = doc_ok && same;
      if (!a.json)
        out.stream() << in.doc.name << " verdict " << spec.object_id << ' '
                     << (same ? "agree" : "DIFFER") << " ("
                     << to_string(on_efg.status) << ")\n";
    }
    if (a.json) {
      auto built = build_efg(in.doc.graph);
      Report report;
      report.graph_id = in.doc.name;
      report.stats = compute_stats(in.doc.graph, built.efg, in.doc.name);
      report.classes = bij.efg_traces;
      report.oracle = std::move(oracle);
      reports.push_back(report_json(report));
    } else {
      out.stream() << in.doc.name << " bijection k=" << a.k << ' '
                   << (bij.ok ? "ok" : "FAILED") << " ("
                   << bij.cfg_classes.size() << " classes, "
                   << bij.efg_traces.size() << " EFG traces)\n";
      for (const auto &t : bij.missing_in_efg)
        out.stream() << "  only in CFG: " << t << '\n';
      for (const auto &t : bij.missing_in_cfg)
        out.stream() << "  only in EFG: " << t << '\n';
    }
    ok = ok && doc_ok;
  }
  if (a.json)
    out.stream() << reports.dump(2) << '\n';
  return ok ? kOk : kOracleMismatch;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::uint64_t seed = 0;
  std::string nodes = "1..10";
  std::string events = "0..3";
  double branch_probability = 0.35;
  double loop_probability = 0.5;
  std::size_t back_edges = 2;
  std::string object = "obj";
  std::string format = "dot";
  std::string output;
};

IntRange parse_range(const std::string &text, const char *what) {
  auto fail = [&]() -> IntRange {
    throw Error(ErrorCode::ConfigError,
                std::string("bad ") + what + " range '" + text +
                    "', expected N or A..B");
  };
  auto number = [&](const std::string &s) -> std::size_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      fail();
    return std::stoull(s);
  };
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    auto n = number(text);
    return {n, n};
  }
  return {number(text.substr(0, dots)), number(text.substr(dots + 2))};
}

int cmd_gen(const Globals &, const GenArgs &a) {
  GenConfig c;
  c.seed = a.seed;
  c.nodes = parse_range(a.nodes, "node");
  c.events = parse_range(a.events, "event");
  c.branch_probability = a.branch_probability;
  c.loop_probability = a.loop_probability;
  c.max_back_edges = a.back_edges;
  c.object_id = a.object;
  auto doc = generate_document(c);
  Output out(a.output);
  if (a.format == "json")
    out.stream() << graph_to_json(doc).dump(2) << '\n';
  else
    out.stream() << emit_dot(doc);
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Event-flow graphs: compact CFGs around events and check "
               "two-event properties"};
  app.name("efg");
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("efg ") + EFG_VERSION);

  Globals globals;
  app.add_option("--max-paths", globals.max_paths,
                 "Ceiling on enumerated walks for oracles and witnesses")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", globals.quiet, "Suppress notes on stderr");

  auto k_option = [](CLI::App *sub, unsigned &k) {
    sub->add_option("-k", k, "Per-transition budget for walks in cycles")
        ->check(CLI::Range(1u, 16u));
  };

  BuildArgs build;
  auto *sub_build = app.add_subcommand("build", "Build the EFG of each CFG");
  sub_build->add_option("files", build.files, "CFG files (DOT or JSON; - for stdin)");
  sub_build->add_option("--object", build.object,
                        "Color only the events of this object");
  sub_build->add_option("-o,--output", build.output, "Output file");
  sub_build->add_option("--format", build.format, "dot or json")
      ->check(CLI::IsMember({"dot", "json"}));

  StatsArgs stats;
  auto *sub_stats = app.add_subcommand("stats", "Reduction statistics");
  sub_stats->add_option("files", stats.files, "CFG files");
  auto *json_flag = sub_stats->add_flag("--json", stats.json, "JSON report");
  auto *table_flag =
      sub_stats->add_flag("--table", stats.table, "Plain-text table (default)");
  json_flag->excludes(table_flag);
  sub_stats->add_option("-o,--output", stats.output, "Output file");

  ClassesArgs classes;
  auto *sub_classes =
      app.add_subcommand("classes", "Print the event traces of each EFG");
  sub_classes->add_option("files", classes.files, "CFG files");
  k_option(sub_classes, classes.k);
  sub_classes->add_option("--object", classes.object,
                          "Color only the events of this object");
  sub_classes->add_option("-o,--output", classes.output, "Output file");

  CheckArgs check;
  auto *sub_check =
      app.add_subcommand("check", "Check lock/unlock style event pairs");
  sub_check->add_option("files", check.files, "CFG files");
  sub_check->add_option("--object", check.object, "Check only this object");
  sub_check->add_flag("--json", check.json, "JSON report");
  k_option(sub_check, check.k);
  sub_check->add_option("-o,--output", check.output, "Output file");

  OracleArgs oracle;
  auto *sub_oracle = app.add_subcommand(
      "oracle", "Cross-check the EFG against brute-force CFG walks");
  sub_oracle->add_option("files", oracle.files, "CFG files");
  k_option(sub_oracle, oracle.k);
  sub_oracle->add_flag("--json", oracle.json, "JSON report");
  sub_oracle->add_option("-o,--output", oracle.output, "Output file");

  GenArgs gen;
  auto *sub_gen = app.add_subcommand("gen", "Emit a random well-formed CFG");
  sub_gen->add_option("--seed", gen.seed, "Random seed");
  sub_gen->add_option("--nodes", gen.nodes, "Inner node count, N or A..B");
  sub_gen->add_option("--events", gen.events, "Event count, N or A..B");
  sub_gen->add_option("--branch-prob", gen.branch_probability,
                      "Chance that a new node opens a parallel arm");
  sub_gen->add_option("--loop-prob", gen.loop_probability,
                      "Chance of each back edge");
  sub_gen->add_option("--back-edges", gen.back_edges, "Most back edges");
  sub_gen->add_option("--object", gen.object, "Object id of the events");
  sub_gen->add_option("--format", gen.format, "dot or json")
      ->check(CLI::IsMember({"dot", "json"}));
  sub_gen->add_option("-o,--output", gen.output, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (sub_build->parsed())
      return cmd_build(globals, build);
    if (sub_stats->parsed())
      return cmd_stats(globals, stats);
    if (sub_classes->parsed())
      return cmd_classes(globals, classes);
    if (sub_check->parsed())
      return cmd_check(globals, check);
    if (sub_oracle->parsed())
      return cmd_oracle(globals, oracle);
    if (sub_gen->parsed())
      return cmd_gen(globals, gen);
  } catch (const IngestError &e) {
    std::cerr << e.what() << '\n';
    return kIngest;
  } catch (const Error &e) {
    std::cerr << "efg: error[" << to_string(e.code()) << "]: " << e.what()
              << '\n';
    switch (e.code()) {
    case ErrorCode::OracleTooLarge:
      return kOracleTooLarge;
    case ErrorCode::ConfigError:
      return kUsage;
    default:
      return kIngest;
    }
  }
  return kUsage;
}
