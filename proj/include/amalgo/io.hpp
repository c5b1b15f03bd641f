#pragma once

#include <string>
#include <string_view>

#include "amalgo/amalgam.hpp"
#include "amalgo/calculus.hpp"
#include "amalgo/ends.hpp"
#include "amalgo/qiverify.hpp"
#include "json.hpp"

namespace amalgo {

// Object keys are kept sorted so that equal values always serialise to the
// same bytes.
using Json = nlohmann::json;

inline constexpr const char* kSchema = "amalgo/1";

/// Pretty-printed with two-space indent and a trailing newline.
std::string dump(const Json& j);
/// Parses a document and checks its "schema" field. Throws Parse.
Json parse_document(std::string_view text);
Json load_document(const std::string& path);
/// {"schema": ..., <body keys>}.
Json document(Json body);
Json error_json(ErrorCode code, const std::string& message);

/// "doubleray", "regtree(3)", "semitree(3,4)", ...; nullptr when the text is
/// not a generator call. Malformed arguments throw Parse.
GraphHandle parse_generator(std::string_view text);

/// A graph description: {"generator": name, "params": [...]},
/// {"explicit": {"vertices", "edges", "label"?}} or {"amalgam": spec}, each
/// with optional "base" and "origin" tokens. Amalgams are contracted.
GraphHandle graph_from_json(const Json& j);
Json graph_to_json(const Graph& g);

/// {"factors": [g1, g2], "adhesion": [[set...], [set...]],
///  "bonding"?: [{"k", "l", "pairs"}], "p"?: [p1, p2],
///  "mode"?: "explicit" | "base_point", "identification_budget"?}.
SpecHandle spec_from_json(const Json& j);
Json spec_to_json(const AmalgamSpec& spec);

FTree ftree_from_json(const Json& j);
Json ftree_to_json(const FTree& ft);

Json to_json(const BallView& view);
Json to_json(const QiConstants& q);
Json to_json(const Witness& w);
Json to_json(const DistortionReport& r);
Json to_json(const ClaimResult& r);
Json to_json(const EndEstimate& e);
Json to_json(const Classification& c);
Json to_json(const Decision& d);

}  // namespace amalgo
