#include "tel/graphml.hpp"

#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace tel {

namespace {

namespace pt = boost::property_tree;

struct KeyDef {
  std::string attr_name;
  bool for_edge = false;
};

double parse_number(const std::string& raw, const std::string& where) {
  try {
    std::size_t pos = 0;
    double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad numeric value '" + raw + "' in " + where);
  }
}

}  // namespace

NetworkGraph load_graphml(const std::string& text, const LinkDefaults& defaults) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(std::string("GraphML parse failure: ") + e.what());
  }

  auto graphml = tree.get_child_optional("graphml");
  if (!graphml) throw ParseError("not a GraphML document: missing <graphml> root");

  // key id -> attribute name, scoped to edges.
  std::unordered_map<std::string, KeyDef> keys;
  for (const auto& [tag, child] : *graphml) {
    if (tag != "key") continue;
    KeyDef def;
    // The attribute is literally named "attr.name": a '/'-separated path
    // keeps ptree from splitting it on the dot.
    def.attr_name = child.get<std::string>(
        pt::ptree::path_type("<xmlattr>/attr.name", '/'), "");
    def.for_edge = child.get<std::string>("<xmlattr>.for", "") == "edge";
    keys.emplace(child.get<std::string>("<xmlattr>.id", ""), def);
  }

  auto graph = graphml->get_child_optional("graph");
  if (!graph) {
    // A document with no <graph> element is treated as empty.
    return NetworkGraph{};
  }

  NetworkGraph g;
  for (const auto& [tag, child] : *graph) {
    if (tag != "node") continue;
    auto id = child.get_optional<std::string>("<xmlattr>.id");
    if (!id) throw ParseError("<node> element without id attribute");
    try {
      g.add_node(*id);
    } catch (const GraphError& e) {
      throw ParseError(std::string("node validation: ") + e.what());
    }
  }

  for (const auto& [tag, child] : *graph) {
    if (tag != "edge") continue;
    auto src = child.get_optional<std::string>("<xmlattr>.source");
    auto dst = child.get_optional<std::string>("<xmlattr>.target");
    if (!src || !dst) throw ParseError("<edge> element without source/target");
    if (!g.has_node(*src))
      throw ParseError("edge references unknown node: " + *src);
    if (!g.has_node(*dst))
      throw ParseError("edge references unknown node: " + *dst);

    LinkDefaults attrs = defaults;
    for (const auto& [dtag, dchild] : child) {
      if (dtag != "data") continue;
      std::string key_id = dchild.get<std::string>("<xmlattr>.key", "");
      auto it = keys.find(key_id);
      if (it == keys.end()) continue;
      const std::string& name = it->second.attr_name;
      const std::string where = "edge " + *src + "-" + *dst;
      if (name == "bandwidth")
        attrs.bandwidth_bps = parse_number(dchild.data(), where);
      else if (name == "delay")
        attrs.delay_ms = parse_number(dchild.data(), where);
      else if (name == "cost")
        attrs.cost = parse_number(dchild.data(), where);
    }
    try {
      g.add_link(g.index_of(*src), g.index_of(*dst), attrs);
    } catch (const GraphError& e) {
      throw ParseError(std::string("edge validation: ") + e.what());
    }
  }
  return g;
}

NetworkGraph load_graphml_file(const std::string& path, const LinkDefaults& defaults) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open GraphML file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_graphml(buf.str(), defaults);
}

std::string to_graphml(const NetworkGraph& graph) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"d0\" for=\"edge\" attr.name=\"bandwidth\" attr.type=\"double\"/>\n"
      << "  <key id=\"d1\" for=\"edge\" attr.name=\"delay\" attr.type=\"double\"/>\n"
      << "  <key id=\"d2\" for=\"edge\" attr.name=\"cost\" attr.type=\"double\"/>\n"
      << "  <graph edgedefault=\"undirected\">\n";
  for (NodeIndex i = 0; i < static_cast<NodeIndex>(graph.node_count()); ++i)
    out << "    <node id=\"" << graph.node(i).name << "\"/>\n";
  out.precision(17);
  graph.for_each_link([&](NodeIndex a, NodeIndex b, const LinkAttr& l) {
    if (a > b) return;  // one element per undirected edge
    out << "    <edge source=\"" << graph.node(a).name << "\" target=\""
        << graph.node(b).name << "\">\n"
        << "      <data key=\"d0\">" << l.bandwidth_bps << "</data>\n"
        << "      <data key=\"d1\">" << l.delay_ms << "</data>\n"
        << "      <data key=\"d2\">" << l.cost << "</data>\n"
        << "    </edge>\n";
  });
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

}  // namespace tel
