#pragma once

#include <string>

#include <json.hpp>

#include "relalign/alignment.hpp"
#include "relalign/diagnosis.hpp"
#include "relalign/log.hpp"
#include "relalign/pnid.hpp"

namespace relalign {

using Json = nlohmann::ordered_json;

// Parses text, mapping syntax errors to ParseError with line and column.
Json parse_json_text(const std::string& text);
Json read_json_file(const std::string& path);

ProcessModel model_from_json(const Json& doc);
Json model_to_json(const ProcessModel& m);
ProcessModel load_model(const std::string& path);

SystemLog log_from_json(const Json& doc);
Json log_to_json(const SystemLog& l);
SystemLog load_log(const std::string& path);

Json marking_to_json(const Marking& m);
Marking marking_from_json(const Json& doc);

Json event_to_json(const Event& e);
Event event_from_json(const Json& j);

// Moves in emission order, the order as covering pairs and exact costs.
Json alignment_to_json(const Alignment& al);
Alignment alignment_from_json(const Json& doc);

Json records_to_json(const std::vector<DeviationRecord>& records);
Json trust_to_json(const TrustReport& rep);
Json congruence_to_json(const std::vector<CongruenceTriple>& triples);

enum class ColorBy { kind, role };

// Nodes are moves labeled "activity^objects", edges the covering pairs of the
// alignment order. Each node carries a class: the move kind, or the sorted
// roles of its objects.
std::string alignment_to_dot(const Alignment& al, ColorBy color_by, const ObjectUniverse& u = {});

}  // namespace relalign
