#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmc/normalization.hpp"

namespace pmc {
struct EvaluationTheoryTree;
}

namespace pmc::model {

enum class NodeKind {
  StartEvent,
  EndEvent,
  IntermediateEvent,
  Task,
  SubProcess,
  GatewayXOR,
  GatewayAND,
  GatewayOR,
  DataObject,
  Pool,
  Lane,
  Generic,  // unsupported BPMN construct, kept so nothing is dropped silently
};

enum class EdgeKind { Sequence, Message, Data };

std::string to_string(NodeKind kind);
std::string to_string(EdgeKind kind);

bool is_gateway(NodeKind kind);
bool is_event(NodeKind kind);
bool is_activity(NodeKind kind);
/// Node that takes part in sequence flow (not data, pool, or lane).
bool is_flow_node(NodeKind kind);

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Generic;
  std::string label;
  std::string tag;     // BPMN local element name, e.g. "userTask"
  std::string parent;  // enclosing sub-process id, empty at process level
  std::string lane;    // lane id, empty when not assigned
  int line = 0;
};

struct Edge {
  std::string id;
  std::string source;
  std::string target;
  EdgeKind kind = EdgeKind::Sequence;
  int line = 0;
};

struct ProcessModelGraph {
  std::string language = "BPMN 2.0";
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<std::string> warnings;

  const Node* find(std::string_view id) const;
  std::size_t count(NodeKind kind) const;
  std::size_t count(EdgeKind kind) const;
};

/// Parses BPMN 2.0 XML. Flow nodes, sequence flows, message flows, data
/// associations, pools, and lanes become graph elements; other constructs
/// inside a process are kept as Generic nodes with a warning. Throws
/// `pmc::Error` for malformed XML, a document without a process, or a flow
/// referencing an unknown node (with the element's line).
ProcessModelGraph parse_model(std::string_view document, const std::string& source = "<model>");
ProcessModelGraph load_model_file(const std::filesystem::path& path);

/// Names accepted as `binding` for model-derived metrics.
const std::vector<std::string>& extractor_names();

/// Evaluates one extractor. Returns nullopt for an unknown name.
std::optional<double> extract(const ProcessModelGraph& graph, std::string_view extractor);

struct RawMetricValue {
  std::string metric_id;
  double value = 0.0;
};

/// One value per model-derived metric of the tree, in tree order. Throws a
/// Validation error "unextractable_metric" listing every metric whose
/// binding has no extractor.
std::vector<RawMetricValue> extract_metrics(const ProcessModelGraph& graph, const EvaluationTheoryTree& tree);

/// Metrics of a graph keyed by extractor name; used by `model inspect`.
std::map<std::string, double> all_metrics(const ProcessModelGraph& graph);

std::string graph_to_json(const ProcessModelGraph& graph, const std::map<std::string, double>& metrics);

}  // namespace pmc::model
