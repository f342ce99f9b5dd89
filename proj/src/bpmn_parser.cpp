#include <expat.h>

#include <map>
#include <memory>
#include <set>
#include <unordered_map>

#include "pmc/error.hpp"
#include "pmc/model.hpp"
#include "text_util.hpp"

namespace pmc::model {

namespace {

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

// Elements that are ignored without a warning wherever they appear. They
// carry attributes of the enclosing element rather than graph structure.
const std::set<std::string>& quiet_elements() {
  static const std::set<std::string> names = {
      "documentation", "incoming", "outgoing", "conditionExpression", "completionCondition",
      "ioSpecification", "dataInput", "dataOutput", "inputSet", "outputSet", "dataInputRefs",
      "dataOutputRefs", "property", "dataObject", "dataState", "multiInstanceLoopCharacteristics",
      "standardLoopCharacteristics", "loopCardinality", "loopCondition", "timerEventDefinition",
      "messageEventDefinition", "signalEventDefinition", "errorEventDefinition", "escalationEventDefinition",
      "compensateEventDefinition", "conditionalEventDefinition", "linkEventDefinition",
      "terminateEventDefinition", "cancelEventDefinition", "timeDuration", "timeDate", "timeCycle",
      "condition", "script", "text", "resourceRole", "performer", "humanPerformer", "potentialOwner",
      "resourceAssignmentExpression", "formalExpression", "assignment", "from", "to", "transformation",
  };
  return names;
}

// Root-level definitions that are not part of any process graph.
const std::set<std::string>& definition_elements() {
  static const std::set<std::string> names = {
      "message", "signal", "error", "escalation", "itemDefinition", "interface", "operation", "resource",
      "dataStore", "category", "categoryValue", "import", "correlationProperty", "globalTask",
      "endPoint", "partnerEntity", "partnerRole", "inMessageRef", "outMessageRef",
  };
  return names;
}

std::optional<NodeKind> flow_node_kind(const std::string& name) {
  static const std::unordered_map<std::string, NodeKind> kinds = {
      {"startEvent", NodeKind::StartEvent},
      {"endEvent", NodeKind::EndEvent},
      {"intermediateCatchEvent", NodeKind::IntermediateEvent},
      {"intermediateThrowEvent", NodeKind::IntermediateEvent},
      {"boundaryEvent", NodeKind::IntermediateEvent},
      {"task", NodeKind::Task},
      {"userTask", NodeKind::Task},
      {"serviceTask", NodeKind::Task},
      {"sendTask", NodeKind::Task},
      {"receiveTask", NodeKind::Task},
      {"manualTask", NodeKind::Task},
      {"businessRuleTask", NodeKind::Task},
      {"scriptTask", NodeKind::Task},
      {"subProcess", NodeKind::SubProcess},
      {"transaction", NodeKind::SubProcess},
      {"adHocSubProcess", NodeKind::SubProcess},
      {"callActivity", NodeKind::SubProcess},
      {"exclusiveGateway", NodeKind::GatewayXOR},
      {"parallelGateway", NodeKind::GatewayAND},
      {"inclusiveGateway", NodeKind::GatewayOR},
      {"dataObjectReference", NodeKind::DataObject},
      {"dataStoreReference", NodeKind::DataObject},
  };
  const auto it = kinds.find(name);
  if (it == kinds.end()) return std::nullopt;
  return it->second;
}

bool is_container(const std::string& name) {
  return name == "subProcess" || name == "transaction" || name == "adHocSubProcess";
}

struct PendingEdge {
  Edge edge;
  std::string element;  // BPMN element name, for error messages
};

enum class Frame {
  Definitions,
  Collaboration,
  Process,    // process or sub-process body
  FlowNode,   // a node; children describe it
  Lane,
  FlowNodeRef,
  DataAssociation,
  RefText,    // sourceRef / targetRef inside a data association
  Skip,       // subtree ignored
  Other,
};

class BpmnReader {
 public:
  explicit BpmnReader(std::string source) : source_(std::move(source)) {}

  ProcessModelGraph read(std::string_view document) {
    std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreateNS(nullptr, '|'));
    parser_ = parser.get();
    XML_SetUserData(parser_, this);
    XML_SetElementHandler(parser_, &BpmnReader::on_start, &BpmnReader::on_end);
    XML_SetCharacterDataHandler(parser_, &BpmnReader::on_text);
    if (XML_Parse(parser_, document.data(), static_cast<int>(document.size()), XML_TRUE) == XML_STATUS_ERROR) {
      if (pending_error_) throw *pending_error_;
      throw input_error("malformed_xml", std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser_)),
                        source_ + ":" + std::to_string(XML_GetCurrentLineNumber(parser_)));
    }
    if (pending_error_) throw *pending_error_;
    if (process_count_ == 0) throw input_error("no_process", "document contains no process element", source_);
    finish();
    return std::move(graph_);
  }

 private:
  static std::string local_name(const XML_Char* name) {
    std::string full(name);
    const auto bar = full.rfind('|');
    return bar == std::string::npos ? full : full.substr(bar + 1);
  }

  static std::string attribute(const XML_Char** attrs, std::string_view key) {
    for (int i = 0; attrs[i] != nullptr; i += 2) {
      if (local_name(attrs[i]) == key) return attrs[i + 1];
    }
    return {};
  }

  static void on_start(void* self, const XML_Char* name, const XML_Char** attrs) {
    auto* reader = static_cast<BpmnReader*>(self);
    try {
      reader->start(local_name(name), attrs);
    } catch (const Error& e) {
      reader->fail(e);
    }
  }

  static void on_end(void* self, const XML_Char*) { static_cast<BpmnReader*>(self)->end(); }

  static void on_text(void* self, const XML_Char* text, int length) {
    auto* reader = static_cast<BpmnReader*>(self);
    if (!reader->stack_.empty()) {
      const Frame top = reader->stack_.back().frame;
      if (top == Frame::FlowNodeRef || top == Frame::RefText) reader->text_.append(text, static_cast<std::size_t>(length));
    }
  }

  void fail(const Error& e) {
    if (!pending_error_) pending_error_ = e;
    XML_StopParser(parser_, XML_FALSE);
  }

  int line() const { return static_cast<int>(XML_GetCurrentLineNumber(parser_)); }
  std::string at(const std::string& element, const std::string& id) const {
    return source_ + ":" + std::to_string(line()) + " <" + element + (id.empty() ? "" : " id=\"" + id + "\"") + ">";
  }

  struct Entry {
    Frame frame;
    std::string name;
    std::string id;
  };

  Frame parent_frame() const { return stack_.empty() ? Frame::Other : stack_.back().frame; }

  // Innermost sub-process id; empty at process level.
  std::string enclosing_container() const {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      if (it->frame == Frame::Process) return it->name == "process" ? std::string() : it->id;
    }
    return {};
  }

  bool in_subprocess_body() const {
    return !stack_.empty() && stack_.back().frame == Frame::Process && stack_.back().name != "process";
  }

  void add_node(Node node) {
    if (!node_index_.emplace(node.id, graph_.nodes.size()).second) {
      throw input_error("duplicate_id", "duplicate element id '" + node.id + "'", at(node.tag, node.id));
    }
    graph_.nodes.push_back(std::move(node));
  }

  void warn(const std::string& message) {
    graph_.warnings.push_back(source_ + ":" + std::to_string(line()) + ": " + message);
  }

  void start(const std::string& name, const XML_Char** attrs) {
    const Frame parent = parent_frame();
    const std::string id = attribute(attrs, "id");
    if (parent == Frame::Skip) {
      stack_.push_back({Frame::Skip, name, id});
      return;
    }
    if (name == "BPMNDiagram" || name == "extensionElements") {
      stack_.push_back({Frame::Skip, name, id});
      return;
    }
    if (name == "definitions") {
      stack_.push_back({Frame::Definitions, name, id});
      return;
    }
    if (name == "collaboration") {
      stack_.push_back({Frame::Collaboration, name, id});
      return;
    }
    if (name == "process") {
      ++process_count_;
      process_ids_.insert(id);
      stack_.push_back({Frame::Process, name, id});
      return;
    }
    if (parent == Frame::Collaboration) {
      if (name == "participant") {
        add_node({id, NodeKind::Pool, attribute(attrs, "name"), name, {}, {}, line()});
        stack_.push_back({Frame::Other, name, id});
      } else if (name == "messageFlow") {
        pending_.push_back({{id, attribute(attrs, "sourceRef"), attribute(attrs, "targetRef"), EdgeKind::Message, line()}, name});
        stack_.push_back({Frame::Other, name, id});
      } else {
        if (!quiet_elements().contains(name)) warn("ignored collaboration element <" + name + ">");
        stack_.push_back({Frame::Skip, name, id});
      }
      return;
    }
    if (parent == Frame::Definitions) {
      if (!definition_elements().contains(name) && !quiet_elements().contains(name)) {
        warn("ignored definitions element <" + name + ">");
      }
      stack_.push_back({Frame::Skip, name, id});
      return;
    }
    if (name == "laneSet" || name == "childLaneSet") {
      stack_.push_back({Frame::Other, name, id});
      return;
    }
    if (name == "lane") {
      add_node({id, NodeKind::Lane, attribute(attrs, "name"), name, enclosing_container(), {}, line()});
      stack_.push_back({Frame::Lane, name, id});
      return;
    }
    if (name == "flowNodeRef" && parent == Frame::Lane) {
      text_.clear();
      stack_.push_back({Frame::FlowNodeRef, name, stack_.back().id});
      return;
    }
    const bool association = name == "dataInputAssociation" || name == "dataOutputAssociation";
    if (association && (parent == Frame::FlowNode || in_subprocess_body())) {
      association_ = {};
      association_.edge.id = id;
      association_.edge.kind = EdgeKind::Data;
      association_.edge.line = line();
      association_.element = name;
      association_owner_ = stack_.back().id;
      stack_.push_back({Frame::DataAssociation, name, id});
      return;
    }
    if (parent == Frame::Process) {
      if (name == "sequenceFlow") {
        pending_.push_back({{id, attribute(attrs, "sourceRef"), attribute(attrs, "targetRef"), EdgeKind::Sequence, line()}, name});
        stack_.push_back({Frame::Other, name, id});
        return;
      }
      if (auto kind = flow_node_kind(name)) {
        add_node({id, *kind, attribute(attrs, "name"), name, enclosing_container(), {}, line()});
        stack_.push_back({is_container(name) ? Frame::Process : Frame::FlowNode, name, id});
        return;
      }
      if (name == "textAnnotation" || name == "association" || name == "group") {
        warn("ignored artifact <" + name + ">");
        stack_.push_back({Frame::Skip, name, id});
        return;
      }
      if (quiet_elements().contains(name)) {
        quiet_ids_.insert(id);
        stack_.push_back({Frame::Skip, name, id});
        return;
      }
      warn("unsupported element <" + name + "> kept as generic node");
      add_node({id, NodeKind::Generic, attribute(attrs, "name"), name, enclosing_container(), {}, line()});
      stack_.push_back({Frame::FlowNode, name, id});
      return;
    }
    if (parent == Frame::FlowNode) {
      if (quiet_elements().contains(name)) {
        if (!id.empty()) quiet_ids_.insert(id);
      } else {
        warn("ignored element <" + name + "> inside <" + stack_.back().name + ">");
      }
      stack_.push_back({Frame::Skip, name, id});
      return;
    }
    if (parent == Frame::DataAssociation && (name == "sourceRef" || name == "targetRef")) {
      text_.clear();
      stack_.push_back({Frame::RefText, name, id});
      return;
    }
    if (!quiet_elements().contains(name)) warn("ignored element <" + name + ">");
    stack_.push_back({Frame::Skip, name, id});
  }

  void end() {
    if (stack_.empty()) return;
    const Entry entry = stack_.back();
    stack_.pop_back();
    if (entry.frame == Frame::FlowNodeRef) {
      lane_refs_.emplace_back(detail::trim(text_), entry.id);
    } else if (entry.frame == Frame::RefText) {
      const std::string ref = detail::trim(text_);
      // Only the first sourceRef is kept; later ones name further inputs.
      if (entry.name == "sourceRef" && association_.edge.source.empty()) association_.edge.source = ref;
      if (entry.name == "targetRef") association_.edge.target = ref;
    } else if (entry.frame == Frame::DataAssociation) {
      const std::string owner = association_owner_;
      PendingEdge edge = association_;
      if (entry.name == "dataInputAssociation") {
        edge.edge.target = owner;
      } else {
        edge.edge.source = owner;
      }
      if (edge.edge.id.empty()) edge.edge.id = owner + "_" + entry.name + "_" + std::to_string(++synthetic_ids_);
      pending_.push_back(std::move(edge));
    }
  }

  void finish() {
    for (PendingEdge& p : pending_) {
      Edge& e = p.edge;
      const std::string where = source_ + ":" + std::to_string(e.line) + " <" + p.element +
                                (e.id.empty() ? "" : " id=\"" + e.id + "\"") + ">";
      bool skip = false;
      for (const std::string* end : {&e.source, &e.target}) {
        if (node_index_.contains(*end)) continue;
        if (e.kind == EdgeKind::Data && (end->empty() || quiet_ids_.contains(*end))) {
          skip = true;
          continue;
        }
        if (e.kind == EdgeKind::Message && process_ids_.contains(*end)) {
          skip = true;
          continue;
        }
        throw input_error("dangling_reference", "flow references unknown element '" + *end + "'", where);
      }
      if (skip) {
        graph_.warnings.push_back(where + ": data or message flow endpoint is not a graph node; edge skipped");
        continue;
      }
      graph_.edges.push_back(std::move(e));
    }
    for (const auto& [node_id, lane_id] : lane_refs_) {
      const auto it = node_index_.find(node_id);
      if (it == node_index_.end()) {
        throw input_error("dangling_reference", "lane references unknown element '" + node_id + "'",
                          source_ + " <lane id=\"" + lane_id + "\">");
      }
      // Nested lanes repeat the reference after the outer lane, so the last
      // one seen is the innermost lane.
      graph_.nodes[it->second].lane = lane_id;
    }
  }

  std::string source_;
  XML_Parser parser_ = nullptr;
  std::optional<Error> pending_error_;
  std::vector<Entry> stack_;
  std::string text_;
  ProcessModelGraph graph_;
  std::unordered_map<std::string, std::size_t> node_index_;
  std::vector<PendingEdge> pending_;
  PendingEdge association_;
  std::string association_owner_;
  std::vector<std::pair<std::string, std::string>> lane_refs_;
  std::set<std::string> quiet_ids_;
  std::set<std::string> process_ids_;
  int process_count_ = 0;
  int synthetic_ids_ = 0;
};

}  // namespace

ProcessModelGraph parse_model(std::string_view document, const std::string& source) {
  return BpmnReader(source).read(document);
}

ProcessModelGraph load_model_file(const std::filesystem::path& path) {
  return parse_model(detail::read_file(path), path.string());
}

}  // namespace pmc::model
