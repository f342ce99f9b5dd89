#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json_util.hpp"
#include "pmc/error.hpp"
#include "pmc/ett.hpp"
#include "pmc/model.hpp"
#include "text_util.hpp"

namespace pmc::model {

std::string to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::StartEvent: return "start_event";
    case NodeKind::EndEvent: return "end_event";
    case NodeKind::IntermediateEvent: return "intermediate_event";
    case NodeKind::Task: return "task";
    case NodeKind::SubProcess: return "sub_process";
    case NodeKind::GatewayXOR: return "gateway_xor";
    case NodeKind::GatewayAND: return "gateway_and";
    case NodeKind::GatewayOR: return "gateway_or";
    case NodeKind::DataObject: return "data_object";
    case NodeKind::Pool: return "pool";
    case NodeKind::Lane: return "lane";
    case NodeKind::Generic: return "generic";
  }
  return "generic";
}

std::string to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Sequence: return "sequence";
    case EdgeKind::Message: return "message";
    case EdgeKind::Data: return "data";
  }
  return "sequence";
}

bool is_gateway(NodeKind kind) {
  return kind == NodeKind::GatewayXOR || kind == NodeKind::GatewayAND || kind == NodeKind::GatewayOR;
}

bool is_event(NodeKind kind) {
  return kind == NodeKind::StartEvent || kind == NodeKind::EndEvent || kind == NodeKind::IntermediateEvent;
}

bool is_activity(NodeKind kind) { return kind == NodeKind::Task || kind == NodeKind::SubProcess; }

bool is_flow_node(NodeKind kind) {
  return kind != NodeKind::DataObject && kind != NodeKind::Pool && kind != NodeKind::Lane;
}

const Node* ProcessModelGraph::find(std::string_view id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

std::size_t ProcessModelGraph::count(NodeKind kind) const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [&](const Node& n) { return n.kind == kind; }));
}

std::size_t ProcessModelGraph::count(EdgeKind kind) const {
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.kind == kind; }));
}

namespace {

/// Sequence-flow view of the flow nodes, indexed 0..n-1.
struct FlowGraph {
  std::vector<const Node*> nodes;
  std::vector<std::vector<int>> succ;
  std::vector<std::vector<int>> pred;

  explicit FlowGraph(const ProcessModelGraph& graph) {
    std::unordered_map<std::string, int> index;
    for (const Node& n : graph.nodes) {
      if (!is_flow_node(n.kind)) continue;
      index.emplace(n.id, static_cast<int>(nodes.size()));
      nodes.push_back(&n);
    }
    succ.resize(nodes.size());
    pred.resize(nodes.size());
    for (const Edge& e : graph.edges) {
      if (e.kind != EdgeKind::Sequence) continue;
      const auto s = index.find(e.source);
      const auto t = index.find(e.target);
      if (s == index.end() || t == index.end()) continue;
      succ[static_cast<std::size_t>(s->second)].push_back(t->second);
      pred[static_cast<std::size_t>(t->second)].push_back(s->second);
    }
  }

  int size() const { return static_cast<int>(nodes.size()); }
  int degree(int v) const { return static_cast<int>(succ[v].size() + pred[v].size()); }
};

using BitRow = std::vector<bool>;

/// dom[v][u] is true when u dominates v. A virtual root feeds every node
/// without predecessors in `in`.
std::vector<BitRow> dominators(const std::vector<std::vector<int>>& in, int n) {
  std::vector<BitRow> dom(static_cast<std::size_t>(n), BitRow(static_cast<std::size_t>(n), true));
  for (int v = 0; v < n; ++v) {
    if (in[v].empty()) {
      std::fill(dom[v].begin(), dom[v].end(), false);
      dom[v][v] = true;
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      if (in[v].empty()) continue;
      BitRow next(static_cast<std::size_t>(n), true);
      for (int p : in[v]) {
        for (int u = 0; u < n; ++u) next[u] = next[u] && dom[p][u];
      }
      next[v] = true;
      if (next != dom[v]) {
        dom[v] = std::move(next);
        changed = true;
      }
    }
  }
  return dom;
}

bool reaches(const FlowGraph& g, int from, int to) {
  std::vector<bool> seen(static_cast<std::size_t>(g.size()), false);
  std::vector<int> stack = {from};
  seen[from] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : g.succ[v]) {
      if (w == to) return true;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return false;
}

/// 1 when every split gateway (two or more outgoing flows) and every join
/// gateway (two or more incoming flows) has a partner of the same kind.
/// A split and a join pair up either as a forward block (the split dominates
/// the join and the join post-dominates the split) or as a loop (the join
/// dominates the split, the split post-dominates the join, and the split
/// leads back to the join).
double block_structuredness(const FlowGraph& g) {
  const int n = g.size();
  const auto dom = dominators(g.pred, n);
  const auto pdom = dominators(g.succ, n);
  std::vector<int> splits;
  std::vector<int> joins;
  for (int v = 0; v < n; ++v) {
    if (!is_gateway(g.nodes[v]->kind)) continue;
    if (g.succ[v].size() >= 2) splits.push_back(v);
    if (g.pred[v].size() >= 2) joins.push_back(v);
  }
  auto paired = [&](int s, int j) {
    if (s == j || g.nodes[s]->kind != g.nodes[j]->kind) return false;
    const bool block = dom[j][s] && pdom[s][j];
    const bool loop = dom[s][j] && pdom[j][s] && reaches(g, s, j);
    return block || loop;
  };
  for (int s : splits) {
    if (std::none_of(joins.begin(), joins.end(), [&](int j) { return paired(s, j); })) return 0.0;
  }
  for (int j : joins) {
    if (std::none_of(splits.begin(), splits.end(), [&](int s) { return paired(s, j); })) return 0.0;
  }
  return 1.0;
}

/// Strongly connected components with a cycle (size > 1 or a self-loop).
double loop_count(const FlowGraph& g) {
  const int n = g.size();
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<int> stack;
  int counter = 0;
  int loops = 0;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w : g.succ[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> component;
      int w = -1;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component.push_back(w);
      } while (w != v);
      const bool self_loop = std::find(g.succ[v].begin(), g.succ[v].end(), v) != g.succ[v].end();
      if (component.size() > 1 || self_loop) ++loops;
    }
  };
  for (int v = 0; v < n; ++v) {
    if (index[v] < 0) visit(v);
  }
  return loops;
}

double nesting_depth(const ProcessModelGraph& graph) {
  std::unordered_map<std::string, std::string> parent;
  for (const Node& n : graph.nodes) parent[n.id] = n.parent;
  int deepest = 0;
  for (const Node& n : graph.nodes) {
    int depth = 0;
    std::string p = n.parent;
    while (!p.empty() && depth <= static_cast<int>(graph.nodes.size())) {
      ++depth;
      const auto it = parent.find(p);
      p = it == parent.end() ? std::string() : it->second;
    }
    deepest = std::max(deepest, depth);
  }
  return deepest;
}

std::size_t word_count(const std::string& text) {
  std::istringstream in(text);
  std::size_t words = 0;
  std::string word;
  while (in >> word) ++words;
  return words;
}

using Extractor = std::function<double(const ProcessModelGraph&, const FlowGraph&)>;

const std::vector<std::pair<std::string, Extractor>>& extractors() {
  auto kind_count = [](NodeKind kind) {
    return [kind](const ProcessModelGraph& g, const FlowGraph&) { return static_cast<double>(g.count(kind)); };
  };
  static const std::vector<std::pair<std::string, Extractor>> table = {
      {"node_count", [](const ProcessModelGraph&, const FlowGraph& f) { return static_cast<double>(f.size()); }},
      {"edge_count", [](const ProcessModelGraph& g, const FlowGraph&) { return static_cast<double>(g.edges.size()); }},
      {"sequence_flow_count",
       [](const ProcessModelGraph& g, const FlowGraph&) { return static_cast<double>(g.count(EdgeKind::Sequence)); }},
      {"message_flow_count",
       [](const ProcessModelGraph& g, const FlowGraph&) { return static_cast<double>(g.count(EdgeKind::Message)); }},
      {"gateway_count",
       [](const ProcessModelGraph& g, const FlowGraph&) {
         return static_cast<double>(g.count(NodeKind::GatewayXOR) + g.count(NodeKind::GatewayAND) +
                                    g.count(NodeKind::GatewayOR));
       }},
      {"xor_gateway_count", kind_count(NodeKind::GatewayXOR)},
      {"and_gateway_count", kind_count(NodeKind::GatewayAND)},
      {"or_gateway_count", kind_count(NodeKind::GatewayOR)},
      {"start_event_count", kind_count(NodeKind::StartEvent)},
      {"end_event_count", kind_count(NodeKind::EndEvent)},
      {"task_count", kind_count(NodeKind::Task)},
      {"subprocess_count", kind_count(NodeKind::SubProcess)},
      {"data_object_count", kind_count(NodeKind::DataObject)},
      {"participant_count",
       [](const ProcessModelGraph& g, const FlowGraph&) {
         return static_cast<double>(g.count(NodeKind::Pool) + g.count(NodeKind::Lane));
       }},
      {"max_degree",
       [](const ProcessModelGraph&, const FlowGraph& f) {
         int best = 0;
         for (int v = 0; v < f.size(); ++v) best = std::max(best, f.degree(v));
         return static_cast<double>(best);
       }},
      {"average_connector_degree",
       [](const ProcessModelGraph&, const FlowGraph& f) {
         int gateways = 0;
         int total = 0;
         for (int v = 0; v < f.size(); ++v) {
           if (!is_gateway(f.nodes[v]->kind)) continue;
           ++gateways;
           total += f.degree(v);
         }
         return gateways == 0 ? 0.0 : static_cast<double>(total) / gateways;
       }},
      {"nesting_depth", [](const ProcessModelGraph& g, const FlowGraph&) { return nesting_depth(g); }},
      {"unlabeled_node_ratio",
       [](const ProcessModelGraph& g, const FlowGraph&) {
         int activities = 0;
         int unlabeled = 0;
         for (const Node& n : g.nodes) {
           if (!is_activity(n.kind)) continue;
           ++activities;
           if (detail::trim(n.label).empty()) ++unlabeled;
         }
         return activities == 0 ? 0.0 : static_cast<double>(unlabeled) / activities;
       }},
      {"average_label_words",
       [](const ProcessModelGraph& g, const FlowGraph&) {
         int labeled = 0;
         std::size_t words = 0;
         for (const Node& n : g.nodes) {
           if (!is_activity(n.kind) || detail::trim(n.label).empty()) continue;
           ++labeled;
           words += word_count(n.label);
         }
         return labeled == 0 ? 0.0 : static_cast<double>(words) / labeled;
       }},
      {"distinct_node_kinds",
       [](const ProcessModelGraph& g, const FlowGraph&) {
         std::set<NodeKind> kinds;
         for (const Node& n : g.nodes) kinds.insert(n.kind);
         return static_cast<double>(kinds.size());
       }},
      {"density",
       [](const ProcessModelGraph& g, const FlowGraph& f) {
         const double n = f.size();
         return n < 2 ? 0.0 : static_cast<double>(g.count(EdgeKind::Sequence)) / (n * (n - 1.0));
       }},
      {"loop_count", [](const ProcessModelGraph&, const FlowGraph& f) { return loop_count(f); }},
      {"block_structuredness", [](const ProcessModelGraph&, const FlowGraph& f) { return block_structuredness(f); }},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& extractor_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : extractors()) out.push_back(name);
    return out;
  }();
  return names;
}

std::optional<double> extract(const ProcessModelGraph& graph, std::string_view extractor) {
  for (const auto& [name, fn] : extractors()) {
    if (name == extractor) return fn(graph, FlowGraph(graph));
  }
  return std::nullopt;
}

std::vector<RawMetricValue> extract_metrics(const ProcessModelGraph& graph, const EvaluationTheoryTree& tree) {
  const FlowGraph flow(graph);
  std::unordered_map<std::string, double> cache;
  std::vector<RawMetricValue> values;
  std::vector<std::string> missing;
  for (const auto& criterion : tree.criteria) {
    for (const auto& metric : criterion.metrics) {
      if (metric.source != MetricSource::ModelDerived) continue;
      auto cached = cache.find(metric.binding);
      if (cached == cache.end()) {
        const auto& table = extractors();
        const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == metric.binding; });
        if (it == table.end()) {
          missing.push_back(metric.id);
          continue;
        }
        cached = cache.emplace(metric.binding, it->second(graph, flow)).first;
      }
      values.push_back({metric.id, cached->second});
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw validation_error("unextractable_metric", "unextractable metric(s): " + list);
  }
  return values;
}

std::map<std::string, double> all_metrics(const ProcessModelGraph& graph) {
  const FlowGraph flow(graph);
  std::map<std::string, double> out;
  for (const auto& [name, fn] : extractors()) out[name] = fn(graph, flow);
  return out;
}

std::string graph_to_json(const ProcessModelGraph& graph, const std::map<std::string, double>& metrics) {
  detail::ordered_json root;
  root["language"] = graph.language;
  detail::ordered_json nodes = detail::ordered_json::array();
  for (const Node& n : graph.nodes) {
    detail::ordered_json o;
    o["id"] = n.id;
    o["kind"] = to_string(n.kind);
    o["label"] = n.label;
    o["element"] = n.tag;
    if (!n.parent.empty()) o["parent"] = n.parent;
    if (!n.lane.empty()) o["lane"] = n.lane;
    o["line"] = n.line;
    nodes.push_back(std::move(o));
  }
  root["nodes"] = std::move(nodes);
  detail::ordered_json edges = detail::ordered_json::array();
  for (const Edge& e : graph.edges) {
    edges.push_back({{"id", e.id}, {"kind", to_string(e.kind)}, {"source", e.source}, {"target", e.target}, {"line", e.line}});
  }
  root["edges"] = std::move(edges);
  root["warnings"] = graph.warnings;
  detail::ordered_json m = detail::ordered_json::object();
  for (const auto& [name, value] : metrics) m[name] = value;
  root["metrics"] = std::move(m);
  return root.dump(2) + "\n";
}

}  // namespace pmc::model
