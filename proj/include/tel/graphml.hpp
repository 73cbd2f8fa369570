#ifndef TEL_GRAPHML_HPP
#define TEL_GRAPHML_HPP

#include <string>

#include "tel/graph.hpp"

namespace tel {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a GraphML document. Edges missing bandwidth/delay/cost data
/// take the supplied defaults; residuals start at full bandwidth.
/// Recognized edge attribute names: "bandwidth" (bps), "delay" (ms),
/// "cost".
NetworkGraph load_graphml(const std::string& text, const LinkDefaults& defaults);

NetworkGraph load_graphml_file(const std::string& path, const LinkDefaults& defaults);

/// Emits a GraphML document that load_graphml reads back isomorphically.
std::string to_graphml(const NetworkGraph& graph);

}  // namespace tel

#endif  // TEL_GRAPHML_HPP
