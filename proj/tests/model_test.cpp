#include <gtest/gtest.h>

#include <json.hpp>

#include <random>
#include <string>

#include "pmc/defaults.hpp"
#include "pmc/error.hpp"
#include "pmc/ett.hpp"
#include "pmc/model.hpp"
#include "pmc/normalization.hpp"
#include "random_bpmn.hpp"

using namespace pmc;
using namespace pmc::model;

namespace {

const std::string kModels = PMC_FIXTURE_DIR "/models/";

std::string wrap(const std::string& body) {
  return "<?xml version=\"1.0\"?>\n"
         "<definitions xmlns=\"http://www.omg.org/spec/BPMN/20100524/MODEL\">\n"
         "<process id=\"p\">\n" +
         body + "</process>\n</definitions>\n";
}

double metric(const ProcessModelGraph& g, const std::string& name) {
  const auto v = extract(g, name);
  EXPECT_TRUE(v.has_value()) << name;
  return v.value_or(-1.0);
}

Error parse_error(const std::string& xml) {
  try {
    parse_model(xml, "doc.bpmn");
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected parse_model to throw";
  return input_error("none", "none");
}

}  // namespace

TEST(ModelFixtures, Sequence) {
  const auto g = load_model_file(kModels + "sequence.bpmn");
  EXPECT_EQ(metric(g, "node_count"), 4);
  EXPECT_EQ(metric(g, "edge_count"), 3);
  EXPECT_EQ(metric(g, "gateway_count"), 0);
  EXPECT_EQ(metric(g, "loop_count"), 0);
  EXPECT_EQ(metric(g, "block_structuredness"), 1);
  EXPECT_DOUBLE_EQ(metric(g, "density"), 3.0 / 12.0);
}

TEST(ModelFixtures, XorLoopWithPrefixedNamespace) {
  const auto g = load_model_file(kModels + "xor_loop.bpmn");
  EXPECT_EQ(metric(g, "node_count"), 6);
  EXPECT_EQ(metric(g, "edge_count"), 6);
  EXPECT_EQ(metric(g, "xor_gateway_count"), 2);
  EXPECT_EQ(metric(g, "loop_count"), 1);
  EXPECT_EQ(metric(g, "block_structuredness"), 1);
  EXPECT_DOUBLE_EQ(metric(g, "average_connector_degree"), 3.0);
  EXPECT_EQ(g.find("decide")->label, "Draft accepted?");
}

TEST(ModelFixtures, AndParallel) {
  const auto g = load_model_file(kModels + "and_parallel.bpmn");
  EXPECT_EQ(metric(g, "node_count"), 7);
  EXPECT_EQ(metric(g, "edge_count"), 8);
  EXPECT_EQ(metric(g, "and_gateway_count"), 2);
  EXPECT_EQ(metric(g, "max_degree"), 4);
  EXPECT_EQ(metric(g, "block_structuredness"), 1);
  EXPECT_EQ(metric(g, "loop_count"), 0);
}

TEST(ModelFixtures, OrderHandling) {
  const auto g = load_model_file(kModels + "order_handling.bpmn");
  EXPECT_EQ(g.nodes.size(), 24u);
  EXPECT_EQ(g.count(NodeKind::Pool), 2u);
  EXPECT_EQ(g.count(NodeKind::Lane), 2u);
  EXPECT_EQ(g.count(NodeKind::DataObject), 1u);
  EXPECT_EQ(metric(g, "node_count"), 19);
  EXPECT_EQ(metric(g, "edge_count"), 21);
  EXPECT_EQ(metric(g, "sequence_flow_count"), 18);
  EXPECT_EQ(metric(g, "message_flow_count"), 2);
  EXPECT_EQ(g.count(EdgeKind::Data), 1u);
  EXPECT_EQ(metric(g, "start_event_count"), 3);
  EXPECT_EQ(metric(g, "end_event_count"), 3);
  EXPECT_EQ(metric(g, "task_count"), 8);
  EXPECT_EQ(metric(g, "subprocess_count"), 1);
  EXPECT_EQ(metric(g, "xor_gateway_count"), 2);
  EXPECT_EQ(metric(g, "and_gateway_count"), 2);
  EXPECT_EQ(metric(g, "participant_count"), 4);
  EXPECT_EQ(metric(g, "nesting_depth"), 1);
  EXPECT_DOUBLE_EQ(metric(g, "unlabeled_node_ratio"), 1.0 / 9.0);
  EXPECT_EQ(metric(g, "block_structuredness"), 1);
  EXPECT_EQ(g.warnings.size(), 2u);
  EXPECT_EQ(g.find("s_check")->lane, "lane_sales");
  EXPECT_EQ(g.find("s_ship")->lane, "lane_warehouse");
  for (const auto& n : g.nodes) {
    if (n.id.rfind("pk_", 0) == 0) EXPECT_EQ(n.parent, "s_pick") << n.id;
  }
}

TEST(ModelParse, MinimalModel) {
  const auto g = parse_model(wrap("<startEvent id=\"s\"/><endEvent id=\"e\"/>"
                                  "<sequenceFlow id=\"f\" sourceRef=\"s\" targetRef=\"e\"/>"));
  EXPECT_EQ(g.nodes.size(), 2u);
  EXPECT_EQ(g.edges.size(), 1u);
  EXPECT_TRUE(g.warnings.empty());
  EXPECT_DOUBLE_EQ(metric(g, "density"), 0.5);
}

TEST(ModelParse, GenericConstructKeptWithWarning) {
  const auto g = parse_model(wrap("<startEvent id=\"s\"/><complexGateway id=\"cg\"/>"
                                  "<sequenceFlow id=\"f\" sourceRef=\"s\" targetRef=\"cg\"/>"));
  ASSERT_NE(g.find("cg"), nullptr);
  EXPECT_EQ(g.find("cg")->kind, NodeKind::Generic);
  EXPECT_EQ(g.warnings.size(), 1u);
}

TEST(ModelParse, DanglingReference) {
  const Error e = parse_error(wrap("<startEvent id=\"s\"/>\n<sequenceFlow id=\"f\" sourceRef=\"s\" targetRef=\"x\"/>\n"));
  EXPECT_EQ(e.code(), "dangling_reference");
  EXPECT_EQ(e.kind(), ErrorKind::Input);
  EXPECT_NE(e.where().find("doc.bpmn:5"), std::string::npos) << e.where();
  EXPECT_NE(e.where().find("id=\"f\""), std::string::npos);
}

TEST(ModelParse, MalformedXmlReportsLine) {
  const Error e = parse_error("<definitions>\n<process id=\"p\">\n<task id=\"t\">\n</process>\n");
  EXPECT_EQ(e.code(), "malformed_xml");
  EXPECT_EQ(e.where(), "doc.bpmn:4");
}

TEST(ModelParse, NoProcess) {
  EXPECT_EQ(parse_error("<definitions xmlns=\"http://www.omg.org/spec/BPMN/20100524/MODEL\"/>").code(), "no_process");
}

TEST(ModelParse, DuplicateId) {
  EXPECT_EQ(parse_error(wrap("<task id=\"t\"/><task id=\"t\"/>")).code(), "duplicate_id");
}

TEST(ModelParse, NestedLanesAssignInnermost) {
  const auto g = parse_model(wrap(
      "<laneSet id=\"ls\"><lane id=\"outer\"><flowNodeRef>t</flowNodeRef>"
      "<childLaneSet id=\"cls\"><lane id=\"inner\"><flowNodeRef>t</flowNodeRef></lane></childLaneSet>"
      "</lane></laneSet><task id=\"t\" name=\"Do it\"/>"));
  EXPECT_EQ(g.find("t")->lane, "inner");
  EXPECT_EQ(g.count(NodeKind::Lane), 2u);
}

TEST(BlockStructure, MismatchedGatewayKinds) {
  const auto g = parse_model(wrap(
      "<startEvent id=\"s\"/><exclusiveGateway id=\"x\"/><task id=\"a\"/><task id=\"b\"/>"
      "<parallelGateway id=\"j\"/><endEvent id=\"e\"/>"
      "<sequenceFlow id=\"1\" sourceRef=\"s\" targetRef=\"x\"/>"
      "<sequenceFlow id=\"2\" sourceRef=\"x\" targetRef=\"a\"/>"
      "<sequenceFlow id=\"3\" sourceRef=\"x\" targetRef=\"b\"/>"
      "<sequenceFlow id=\"4\" sourceRef=\"a\" targetRef=\"j\"/>"
      "<sequenceFlow id=\"5\" sourceRef=\"b\" targetRef=\"j\"/>"
      "<sequenceFlow id=\"6\" sourceRef=\"j\" targetRef=\"e\"/>"));
  EXPECT_EQ(metric(g, "block_structuredness"), 0);
}

TEST(BlockStructure, SplitWithoutJoin) {
  const auto g = parse_model(wrap(
      "<startEvent id=\"s\"/><exclusiveGateway id=\"x\"/><endEvent id=\"e1\"/><endEvent id=\"e2\"/>"
      "<sequenceFlow id=\"1\" sourceRef=\"s\" targetRef=\"x\"/>"
      "<sequenceFlow id=\"2\" sourceRef=\"x\" targetRef=\"e1\"/>"
      "<sequenceFlow id=\"3\" sourceRef=\"x\" targetRef=\"e2\"/>"));
  EXPECT_EQ(metric(g, "block_structuredness"), 0);
}

TEST(Extractors, UnknownNameIsNullopt) {
  const auto g = parse_model(wrap("<task id=\"t\"/>"));
  EXPECT_FALSE(extract(g, "cyclomatic_number").has_value());
  for (const auto& name : extractor_names()) EXPECT_TRUE(extract(g, name).has_value()) << name;
}

TEST(Extractors, DefaultTreeIsFullyExtractable) {
  const auto tree = load_ett(defaults::file(defaults::kEttFile));
  const auto g = load_model_file(kModels + "order_handling.bpmn");
  const auto values = extract_metrics(g, tree);
  std::size_t expected = 0;
  for (const auto& c : tree.criteria) {
    for (const auto& m : c.metrics) expected += m.source == MetricSource::ModelDerived;
  }
  ASSERT_EQ(values.size(), expected);
  for (const auto& v : values) {
    EXPECT_DOUBLE_EQ(v.value, *extract(g, tree.find_metric(v.metric_id)->binding)) << v.metric_id;
  }
}

TEST(Extractors, UnextractableMetricListsIds) {
  EvaluationTheoryTree tree;
  QualityCriterion c;
  c.id = "c";
  for (const char* binding : {"node_count", "halstead_volume", "fan_in"}) {
    QualityMetric m;
    m.id = std::string("m.") + binding;
    m.source = MetricSource::ModelDerived;
    m.binding = binding;
    c.metrics.push_back(m);
  }
  tree.criteria.push_back(c);
  try {
    extract_metrics(parse_model(wrap("<task id=\"t\"/>")), tree);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "unextractable_metric");
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
    const std::string what = e.what();
    EXPECT_NE(what.find("m.halstead_volume"), std::string::npos);
    EXPECT_NE(what.find("m.fan_in"), std::string::npos);
    EXPECT_EQ(what.find("m.node_count"), std::string::npos);
  }
}

TEST(Extractors, RandomModelsMatchBruteForce) {
  std::mt19937 rng(31337);
  for (int doc = 0; doc < 200; ++doc) {
    const auto generated = pmc::testing::generate_model(rng);
    const auto graph = parse_model(generated.xml);
    for (const auto& [name, expected] : pmc::testing::naive_counts(generated)) {
      const auto got = extract(graph, name);
      ASSERT_TRUE(got.has_value()) << name;
      EXPECT_NEAR(*got, expected, 1e-12) << "doc " << doc << " metric " << name << "\n" << generated.xml;
    }
  }
}

TEST(GraphJson, CarriesNodesEdgesAndMetrics) {
  const auto g = load_model_file(kModels + "order_handling.bpmn");
  const auto doc = nlohmann::json::parse(graph_to_json(g, all_metrics(g)));
  EXPECT_EQ(doc["nodes"].size(), 24u);
  EXPECT_EQ(doc["edges"].size(), 21u);
  EXPECT_EQ(doc["warnings"].size(), 2u);
  EXPECT_EQ(doc["metrics"]["node_count"], 19);
  EXPECT_EQ(doc["language"], "BPMN 2.0");
}

TEST(NormalizeMetric, Examples) {
  EXPECT_DOUBLE_EQ(normalize_metric(0.5, NormalizationSpec::linear(0, 1), Polarity::HigherIsBetter), 5.5);
  EXPECT_DOUBLE_EQ(normalize_metric(0.5, NormalizationSpec::inverse_linear(0, 1), Polarity::HigherIsBetter), 5.5);
  EXPECT_DOUBLE_EQ(normalize_metric(25, NormalizationSpec::inverse_linear(0, 50), Polarity::HigherIsBetter), 5.5);
  EXPECT_DOUBLE_EQ(normalize_metric(100, NormalizationSpec::linear(0, 50), Polarity::HigherIsBetter), 10.0);
  EXPECT_DOUBLE_EQ(normalize_metric(-3, NormalizationSpec::linear(0, 50), Polarity::HigherIsBetter), 1.0);
  EXPECT_DOUBLE_EQ(normalize_metric(1, NormalizationSpec::boolean(), Polarity::HigherIsBetter), 10.0);
  EXPECT_DOUBLE_EQ(normalize_metric(0, NormalizationSpec::boolean(), Polarity::HigherIsBetter), 1.0);
  EXPECT_DOUBLE_EQ(normalize_metric(12, NormalizationSpec::identity(), Polarity::HigherIsBetter), 10.0);
  EXPECT_DOUBLE_EQ(normalize_metric(3, NormalizationSpec::identity(), Polarity::LowerIsBetter), 8.0);
  EXPECT_DOUBLE_EQ(normalize_metric(0, NormalizationSpec::linear(0, 10), Polarity::LowerIsBetter), 10.0);
}

TEST(NormalizeMetric, RangeAndMonotonicity) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> value(-100.0, 100.0);
  const NormalizationSpec specs[] = {NormalizationSpec::identity(), NormalizationSpec::linear(-10, 40),
                                     NormalizationSpec::inverse_linear(0, 5), NormalizationSpec::boolean()};
  for (int i = 0; i < 2000; ++i) {
    const double a = value(rng), b = value(rng);
    for (const auto& spec : specs) {
      for (Polarity p : {Polarity::HigherIsBetter, Polarity::LowerIsBetter}) {
        const double sa = normalize_metric(a, spec, p);
        EXPECT_GE(sa, 1.0);
        EXPECT_LE(sa, 10.0);
        const double reflected = normalize_metric(a, spec, p == Polarity::HigherIsBetter ? Polarity::LowerIsBetter
                                                                                         : Polarity::HigherIsBetter);
        EXPECT_DOUBLE_EQ(sa + reflected, 11.0);
      }
      if (spec.kind == NormalizationSpec::Kind::LinearClamp && a <= b) {
        EXPECT_LE(normalize_metric(a, spec, Polarity::HigherIsBetter), normalize_metric(b, spec, Polarity::HigherIsBetter));
      }
      if (spec.kind == NormalizationSpec::Kind::InverseLinearClamp && a <= b) {
        EXPECT_GE(normalize_metric(a, spec, Polarity::HigherIsBetter), normalize_metric(b, spec, Polarity::HigherIsBetter));
      }
    }
  }
}

TEST(NormalizeMetric, KindNamesRoundTrip) {
  for (auto kind : {NormalizationSpec::Kind::Identity, NormalizationSpec::Kind::LinearClamp,
                    NormalizationSpec::Kind::InverseLinearClamp, NormalizationSpec::Kind::Boolean}) {
    EXPECT_EQ(parse_normalization_kind(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_normalization_kind("sigmoid"), Error);
}
