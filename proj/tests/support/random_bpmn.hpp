#pragma once

// Random BPMN documents plus brute-force metric counts taken from what the
// generator emitted, never from the parsed graph.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace pmc::testing {

enum class GenKind { Start, End, Intermediate, Task, SubProcess, Xor, And, Or, Data };

struct GenNode {
  std::string id;
  GenKind kind;
  std::string tag;
  std::string label;
  int container = -1;  // index of the enclosing sub-process node, -1 at top level
  int depth = 0;
};

struct GenEdge {
  int source;
  int target;
  bool data = false;
};

struct GeneratedModel {
  std::string xml;
  std::vector<GenNode> nodes;
  std::vector<GenEdge> edges;
};

inline GeneratedModel generate_model(std::mt19937& rng, int max_elements = 30) {
  static const std::vector<std::pair<GenKind, std::string>> palette = {
      {GenKind::Start, "startEvent"},       {GenKind::End, "endEvent"},
      {GenKind::Intermediate, "intermediateCatchEvent"}, {GenKind::Intermediate, "boundaryEvent"},
      {GenKind::Task, "task"},              {GenKind::Task, "userTask"},
      {GenKind::Task, "serviceTask"},       {GenKind::Task, "scriptTask"},
      {GenKind::SubProcess, "subProcess"},  {GenKind::SubProcess, "callActivity"},
      {GenKind::Xor, "exclusiveGateway"},   {GenKind::And, "parallelGateway"},
      {GenKind::Or, "inclusiveGateway"},    {GenKind::Data, "dataObjectReference"},
  };
  static const std::vector<std::string> words = {"check", "order", "send", "invoice", "approve", "review", "ship"};
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  GeneratedModel m;
  const int count = pick(1, max_elements);
  for (int i = 0; i < count; ++i) {
    const auto& [kind, tag] = palette[static_cast<std::size_t>(pick(0, static_cast<int>(palette.size()) - 1))];
    GenNode n{"n" + std::to_string(i), kind, tag, "", -1, 0};
    // Only expandable sub-processes (not call activities) may hold children.
    std::vector<int> containers = {-1};
    for (int j = 0; j < i; ++j) {
      if (m.nodes[j].tag == "subProcess" && m.nodes[j].depth < 3) containers.push_back(j);
    }
    n.container = containers[static_cast<std::size_t>(pick(0, static_cast<int>(containers.size()) - 1))];
    n.depth = n.container < 0 ? 0 : m.nodes[n.container].depth + 1;
    const int label_words = pick(0, 3);
    for (int w = 0; w < label_words; ++w) {
      n.label += (w ? " " : "") + words[static_cast<std::size_t>(pick(0, static_cast<int>(words.size()) - 1))];
    }
    if (pick(0, 5) == 0 && !n.label.empty()) n.label = "  ";  // whitespace-only counts as unlabeled
    m.nodes.push_back(n);
  }

  std::map<int, std::vector<int>> flow_members;
  std::map<int, std::vector<int>> data_members;
  for (int i = 0; i < count; ++i) {
    (m.nodes[i].kind == GenKind::Data ? data_members : flow_members)[m.nodes[i].container].push_back(i);
  }
  for (const auto& [container, members] : flow_members) {
    const int edges = pick(0, static_cast<int>(members.size()) * 2);
    for (int e = 0; e < edges; ++e) {
      const int s = members[static_cast<std::size_t>(pick(0, static_cast<int>(members.size()) - 1))];
      const int t = members[static_cast<std::size_t>(pick(0, static_cast<int>(members.size()) - 1))];
      m.edges.push_back({s, t, false});
    }
    const auto data = data_members.find(container);
    if (data == data_members.end()) continue;
    for (int owner : members) {
      if (m.nodes[owner].kind != GenKind::Task || pick(0, 2) != 0) continue;
      const int d = data->second[static_cast<std::size_t>(pick(0, static_cast<int>(data->second.size()) - 1))];
      if (pick(0, 1) == 0) m.edges.push_back({d, owner, true});
      else m.edges.push_back({owner, d, true});
    }
  }

  std::ostringstream xml;
  xml << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<definitions xmlns=\"http://www.omg.org/spec/BPMN/20100524/MODEL\" id=\"defs\">\n"
      << "  <process id=\"proc\">\n";
  int flow_id = 0;
  auto emit = [&](auto&& self, int container, int indent) -> void {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (int i = 0; i < count; ++i) {
      const GenNode& n = m.nodes[i];
      if (n.container != container) continue;
      xml << pad << "<" << n.tag << " id=\"" << n.id << "\" name=\"" << n.label << "\">\n";
      for (const GenEdge& e : m.edges) {
        // Associations live inside the task; the data object side stays empty.
        if (!e.data || n.kind == GenKind::Data) continue;
        if (e.target == i) {
          xml << pad << "  <dataInputAssociation><sourceRef>" << m.nodes[e.source].id
              << "</sourceRef><targetRef>in_" << n.id << "</targetRef></dataInputAssociation>\n";
        } else if (e.source == i) {
          xml << pad << "  <dataOutputAssociation><targetRef>" << m.nodes[e.target].id
              << "</targetRef></dataOutputAssociation>\n";
        }
      }
      if (n.tag == "subProcess") self(self, i, indent + 2);
      xml << pad << "</" << n.tag << ">\n";
    }
    for (const GenEdge& e : m.edges) {
      if (e.data || m.nodes[e.source].container != container) continue;
      xml << pad << "<sequenceFlow id=\"sf" << flow_id++ << "\" sourceRef=\"" << m.nodes[e.source].id
          << "\" targetRef=\"" << m.nodes[e.target].id << "\"/>\n";
    }
  };
  emit(emit, -1, 4);
  xml << "  </process>\n</definitions>\n";
  m.xml = xml.str();
  return m;
}

/// Counts computed by brute force over the generator's own record.
inline std::map<std::string, double> naive_counts(const GeneratedModel& m) {
  const int n = static_cast<int>(m.nodes.size());
  auto is_flow = [&](int i) { return m.nodes[i].kind != GenKind::Data; };
  auto is_gateway = [&](int i) {
    const GenKind k = m.nodes[i].kind;
    return k == GenKind::Xor || k == GenKind::And || k == GenKind::Or;
  };
  auto count_kind = [&](GenKind kind) {
    return static_cast<double>(std::count_if(m.nodes.begin(), m.nodes.end(), [&](const GenNode& g) { return g.kind == kind; }));
  };
  std::vector<int> flow;
  for (int i = 0; i < n; ++i) {
    if (is_flow(i)) flow.push_back(i);
  }
  std::vector<GenEdge> seq;
  for (const auto& e : m.edges) {
    if (!e.data) seq.push_back(e);
  }
  auto degree = [&](int v) {
    int d = 0;
    for (const auto& e : seq) d += (e.source == v) + (e.target == v);
    return d;
  };

  std::map<std::string, double> c;
  c["node_count"] = static_cast<double>(flow.size());
  c["edge_count"] = static_cast<double>(m.edges.size());
  c["sequence_flow_count"] = static_cast<double>(seq.size());
  c["message_flow_count"] = 0;
  c["participant_count"] = 0;
  c["xor_gateway_count"] = count_kind(GenKind::Xor);
  c["and_gateway_count"] = count_kind(GenKind::And);
  c["or_gateway_count"] = count_kind(GenKind::Or);
  c["gateway_count"] = c["xor_gateway_count"] + c["and_gateway_count"] + c["or_gateway_count"];
  c["start_event_count"] = count_kind(GenKind::Start);
  c["end_event_count"] = count_kind(GenKind::End);
  c["task_count"] = count_kind(GenKind::Task);
  c["subprocess_count"] = count_kind(GenKind::SubProcess);
  c["data_object_count"] = count_kind(GenKind::Data);

  int max_degree = 0;
  int gateway_total = 0;
  int gateways = 0;
  for (int v : flow) {
    max_degree = std::max(max_degree, degree(v));
    if (is_gateway(v)) {
      ++gateways;
      gateway_total += degree(v);
    }
  }
  c["max_degree"] = max_degree;
  c["average_connector_degree"] = gateways ? static_cast<double>(gateway_total) / gateways : 0.0;

  int depth = 0;
  for (const auto& g : m.nodes) depth = std::max(depth, g.depth);
  c["nesting_depth"] = depth;

  int activities = 0;
  int unlabeled = 0;
  int labeled_words = 0;
  for (const auto& g : m.nodes) {
    if (g.kind != GenKind::Task && g.kind != GenKind::SubProcess) continue;
    ++activities;
    if (g.label.find_first_not_of(' ') == std::string::npos) {
      ++unlabeled;
    } else {
      labeled_words += 1 + static_cast<int>(std::count(g.label.begin(), g.label.end(), ' '));
    }
  }
  c["unlabeled_node_ratio"] = activities ? static_cast<double>(unlabeled) / activities : 0.0;
  c["average_label_words"] = activities > unlabeled ? static_cast<double>(labeled_words) / (activities - unlabeled) : 0.0;

  std::set<GenKind> kinds;
  for (const auto& g : m.nodes) kinds.insert(g.kind);
  c["distinct_node_kinds"] = static_cast<double>(kinds.size());

  const double fn = static_cast<double>(flow.size());
  c["density"] = fn < 2 ? 0.0 : static_cast<double>(seq.size()) / (fn * (fn - 1.0));

  // Cycles: transitive closure by repeated relaxation, then mutual reachability.
  std::vector<std::vector<bool>> reach(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  for (const auto& e : seq) reach[e.source][e.target] = true;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
      }
    }
  }
  int loops = 0;
  for (int v : flow) {
    bool representative = reach[v][v];
    for (int u : flow) {
      if (u < v && reach[u][v] && reach[v][u]) representative = false;
    }
    if (representative) ++loops;
  }
  c["loop_count"] = loops;
  return c;
}

}  // namespace pmc::testing
