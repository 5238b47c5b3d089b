#include "flowfactory/io.hpp"

#include <fstream>
#include <sstream>

#include "flowfactory/error.hpp"

namespace flowfactory {

namespace {

std::int64_t require_int(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number_integer()) {
    fail(ErrorCode::ParseError, std::string("expected integer field \"") + key + "\"");
  }
  return obj.at(key).get<std::int64_t>();
}

BigInt require_bigint(const Json& obj, const char* key) {
  if (obj.is_object() && obj.contains(key) && obj.at(key).is_string()) {
    BigInt z;
    if (z.set_str(obj.at(key).get<std::string>(), 10) != 0) {
      fail(ErrorCode::ParseError, std::string("field \"") + key + "\" is not a decimal integer");
    }
    return z;
  }
  return BigInt(std::to_string(require_int(obj, key)));
}

const Json& require_array(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_array()) {
    fail(ErrorCode::ParseError, std::string("expected array field \"") + key + "\"");
  }
  return obj.at(key);
}

}  // namespace

Json bigint_to_json(const BigInt& z) {
  if (fits_int64(z)) return Json(to_int64(z));
  return Json(z.get_str());
}

Json rational_fields(const Rational& q) {
  return Json{{"num", bigint_to_json(q.get_num())}, {"den", bigint_to_json(q.get_den())}};
}

Json polytope_to_json(const FlowPolytope& polytope) {
  Json edges = Json::array();
  const Graph& g = polytope.graph();
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    edges.push_back({{"id", e}, {"from", g.edge(e).from.value}, {"to", g.edge(e).to.value}});
  }
  return Json{{"nodes", g.node_count()}, {"edges", edges}, {"demands", polytope.demands()}};
}

FlowPolytope polytope_from_json(const Json& doc) {
  const auto nodes = require_int(doc, "nodes");
  if (nodes < 1 || nodes > (1 << 20)) fail(ErrorCode::InvalidInstance, "node count out of range");
  std::vector<DirectedEdge> edges;
  const Json& items = require_array(doc, "edges");
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto id = require_int(items[i], "id");
    if (id != static_cast<std::int64_t>(i)) {
      fail(ErrorCode::ParseError, "edge id " + std::to_string(id) + " at position " + std::to_string(i));
    }
    auto from = require_int(items[i], "from");
    auto to = require_int(items[i], "to");
    if (from < 1 || from > nodes || to < 1 || to > nodes) {
      fail(ErrorCode::InvalidInstance, "edge " + std::to_string(i) + " endpoint out of range");
    }
    edges.push_back({NodeId(static_cast<int>(from)), NodeId(static_cast<int>(to))});
  }
  std::vector<std::int64_t> demands;
  for (const auto& d : require_array(doc, "demands")) {
    if (!d.is_number_integer()) fail(ErrorCode::ParseError, "demands must be integers");
    demands.push_back(d.get<std::int64_t>());
  }
  return FlowPolytope(Graph(static_cast<int>(nodes), std::move(edges)), std::move(demands));
}

Json point_to_json(const InteriorPoint& x) {
  Json coins = Json::array();
  for (EdgeId e = 0; e < x.size(); ++e) {
    Json item = rational_fields(x[e]);
    item["edge"] = e;
    coins.push_back(item);
  }
  return Json{{"coins", coins}};
}

InteriorPoint point_from_json(const Json& doc, std::size_t edge_count) {
  InteriorPoint x{std::vector<Rational>(edge_count)};
  std::vector<bool> seen(edge_count, false);
  for (const auto& item : require_array(doc, "coins")) {
    const auto edge = require_int(item, "edge");
    BigInt num = require_bigint(item, "num");
    BigInt den = require_bigint(item, "den");
    if (den <= 0) fail(ErrorCode::ParseError, "denominator must be positive");
    Rational q(num, den);
    q.canonicalize();
    if (q.get_den() != den) fail(ErrorCode::ParseError, "coin of edge " + std::to_string(edge) + " not in lowest terms");
    if (edge < 0 || static_cast<std::size_t>(edge) >= edge_count) {
      fail(ErrorCode::InvalidInstance, "coin for unknown edge " + std::to_string(edge));
    }
    if (seen[static_cast<std::size_t>(edge)]) fail(ErrorCode::InvalidInstance, "duplicate coin for edge " + std::to_string(edge));
    seen[static_cast<std::size_t>(edge)] = true;
    x.values[static_cast<std::size_t>(edge)] = q;
  }
  for (std::size_t e = 0; e < edge_count; ++e)
    if (!seen[e]) fail(ErrorCode::InvalidInstance, "no coin for edge " + std::to_string(e));
  return x;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& ex) {
    fail(ErrorCode::ParseError, ex.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::ParseError, "cannot write " + path);
  out << text;
}

FlowPolytope load_polytope(const std::string& path) { return polytope_from_json(parse_json(read_file(path))); }

InteriorPoint load_point(const std::string& path, std::size_t edge_count) {
  return point_from_json(parse_json(read_file(path)), edge_count);
}

std::string tape_to_jsonl(const std::vector<TapeRecord>& tape) {
  std::string out;
  for (const auto& r : tape) {
    out += Json{{"edge", r.edge}, {"bit", r.bit ? 1 : 0}}.dump();
    out += '\n';
  }
  return out;
}

std::vector<TapeRecord> tape_from_jsonl(const std::string& text) {
  std::vector<TapeRecord> tape;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json rec = parse_json(line);
    auto edge = require_int(rec, "edge");
    auto bit = require_int(rec, "bit");
    if (edge < 0 || (bit != 0 && bit != 1)) fail(ErrorCode::ParseError, "bad tape record: " + line);
    tape.push_back({static_cast<EdgeId>(edge), bit == 1});
  }
  return tape;
}

}  // namespace flowfactory
