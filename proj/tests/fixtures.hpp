#pragma once

#include <string>

#include "relalign/io.hpp"

inline std::string data_path(const std::string& rel) { return std::string(RELALIGN_DATA_DIR) + "/" + rel; }

inline relalign::ProcessModel running_model() { return relalign::load_model(data_path("running_example/model.json")); }

inline relalign::TransitionFiring firing(const std::string& t, relalign::Mode mode, std::string id = "") {
    return {id.empty() ? t : id, t, std::move(mode)};
}

inline relalign::ProcessModel model_from_text(const std::string& text) {
    return relalign::model_from_json(relalign::parse_json_text(text));
}

inline relalign::SystemLog log_from_text(const std::string& text) {
    return relalign::log_from_json(relalign::parse_json_text(text));
}

// i -a-> m -b-> f, or i -tau-> f directly.
inline relalign::ProcessModel choice_model() {
    return model_from_text(R"({
 "version": 1,
 "roles": [{"name": "x", "kind": "expected"}],
 "objects": [{"id": "x1", "role": "x"}],
 "variables": [{"name": "x", "role": "x"}],
 "places": [{"id": "i", "type": ["x"]}, {"id": "m", "type": ["x"]}, {"id": "f", "type": ["x"]}],
 "transitions": [
  {"id": "a", "label": "a", "inputs": [{"place": "i", "vars": [["x"]]}], "outputs": [{"place": "m", "vars": [["x"]]}]},
  {"id": "b", "label": "b", "inputs": [{"place": "m", "vars": [["x"]]}], "outputs": [{"place": "f", "vars": [["x"]]}]},
  {"id": "skip", "label": null, "inputs": [{"place": "i", "vars": [["x"]]}], "outputs": [{"place": "f", "vars": [["x"]]}]}
 ],
 "initial_marking": {"i": [["x1"]]},
 "final_marking": {"f": [["x1"]]}
})");
}

inline relalign::SystemLog choice_log(const std::string& events_json, const std::string& order_json = "[]") {
    return log_from_text(R"({"version": 1, "roles": [{"name": "x", "kind": "expected"}],
 "objects": [{"id": "x1", "role": "x"}], "events": )" + events_json + R"(, "order": )" + order_json + "}");
}
