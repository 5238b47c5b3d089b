#pragma once

// JSON forms of polytopes, coin/point files and coin tapes.
//
//   polytope: {"demands": [...], "edges": [{"from": u, "id": i, "to": v}, ...], "nodes": n}
//   coins:    {"coins": [{"den": q, "edge": i, "num": p}, ...]}
//   tape:     one {"bit": 0|1, "edge": i} per line
//
// Keys are emitted sorted. Rationals must be in lowest terms on input.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowfactory/graph.hpp"

namespace flowfactory {

using Json = nlohmann::json;

Json polytope_to_json(const FlowPolytope& polytope);
FlowPolytope polytope_from_json(const Json& doc);

Json point_to_json(const InteriorPoint& x);
/// `edge_count` is the polytope's; every edge must appear exactly once.
InteriorPoint point_from_json(const Json& doc, std::size_t edge_count);

/// A num/den pair; integers that overflow int64 are written as decimal strings.
Json rational_fields(const Rational& q);
Json bigint_to_json(const BigInt& z);

Json parse_json(const std::string& text);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

FlowPolytope load_polytope(const std::string& path);
InteriorPoint load_point(const std::string& path, std::size_t edge_count);

struct TapeRecord {
  EdgeId edge;
  bool bit;
};

std::string tape_to_jsonl(const std::vector<TapeRecord>& tape);
std::vector<TapeRecord> tape_from_jsonl(const std::string& text);

}  // namespace flowfactory
