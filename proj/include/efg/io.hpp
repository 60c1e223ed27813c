#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "efg/checker.hpp"
#include "efg/document.hpp"
#include "efg/stats.hpp"
#include "efg/traces.hpp"

namespace efg {

inline constexpr int kReportSchemaVersion = 1;

// DOT dialect:
//   digraph name {
//     TOP [kind=entry];
//     e1  [kind=event, event_role=first, object="m"];
//     c1  [kind=branch];
//     c1 -> x [label="T"];
//   }
// Node kinds: entry, exit, event, branch, plain.  Without `kind` a node is an
// event if it has event_role, a branch with two or more out-edges, plain
// otherwise.  `colored` defaults to kind == event.  Other attributes are
// accepted and ignored.  Throws IngestError with a coded diagnostic.
GraphDocument parse_dot(std::string_view text,
                        std::string_view source = "<input>");

// JSON when the first non-blank character is '{', DOT otherwise.
GraphDocument parse_document(std::string_view text,
                             std::string_view source = "<input>");

std::string emit_dot(const GraphDocument &doc);

nlohmann::ordered_json graph_to_json(const GraphDocument &doc);
GraphDocument graph_from_json(const nlohmann::json &j,
                              std::string_view source = "<input>");

// Report pieces.
nlohmann::ordered_json stats_json(const GraphStats &s);
nlohmann::ordered_json histograms_json(const CorpusStats &c);
nlohmann::ordered_json verdict_json(const ColoredDirectedGraph &g,
                                    const Verdict &v);
nlohmann::ordered_json bijection_json(const BijectionReport &r, unsigned k);

struct Report {
  std::string graph_id;
  GraphStats stats;
  std::optional<std::vector<std::string>> classes;
  const ColoredDirectedGraph *graph = nullptr; // names for verdict nodes
  std::optional<std::vector<Verdict>> verdicts;
  std::optional<nlohmann::ordered_json> oracle;
};

nlohmann::ordered_json report_json(const Report &r);

std::string read_file(const std::string &path);

} // namespace efg
