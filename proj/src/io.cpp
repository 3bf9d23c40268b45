#include "relalign/io.hpp"

#include <fstream>
#include <sstream>

#include "relalign/errors.hpp"

namespace relalign {

namespace {

void require_version(const Json& doc) {
    if (!doc.is_object() || !doc.contains("version") || doc["version"] != 1)
        throw ParseError("document must be an object with \"version\": 1");
}

template <typename T>
T field(const Json& obj, const char* key) {
    if (!obj.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("bad field \"") + key + "\": " + ex.what());
    }
}

ObjectUniverse universe_from_json(const Json& doc) {
    ObjectUniverse u;
    if (doc.contains("roles")) {
        for (const auto& r : doc["roles"]) {
            if (r.is_string()) {
                u.add_role({r.get<std::string>(), RoleKind::spontaneous});
            } else {
                u.add_role({field<std::string>(r, "name"),
                            role_kind_from_string(r.value("kind", std::string("spontaneous")))});
            }
        }
    }
    if (doc.contains("objects")) {
        for (const auto& o : doc["objects"]) {
            auto role = field<std::string>(o, "role");
            if (!u.has_role(role)) u.add_role({role, RoleKind::spontaneous});
            u.add_object(field<std::string>(o, "id"), role, o.value("count", 1));
        }
    }
    return u;
}

Json universe_to_json(const ObjectUniverse& u, Json& doc) {
    Json roles = Json::array();
    for (const auto& r : u.roles()) roles.push_back({{"name", r.name}, {"kind", std::string(to_string(r.kind))}});
    doc["roles"] = roles;
    Json objects = Json::array();
    for (const auto& [name, c] : u.objects().entries()) {
        Json o = {{"id", name}, {"role", u.require_role_of(name)}};
        if (c != 1) o["count"] = c;
        objects.push_back(o);
    }
    doc["objects"] = objects;
    return doc;
}

std::vector<Arc> arcs_from_json(const Json& arr) {
    std::vector<Arc> out;
    for (const auto& a : arr) {
        Arc arc;
        arc.place = field<std::string>(a, "place");
        arc.vars = field<std::vector<VarSeq>>(a, "vars");
        out.push_back(std::move(arc));
    }
    return out;
}

Json arcs_to_json(const std::vector<Arc>& arcs) {
    Json out = Json::array();
    for (const auto& a : arcs) out.push_back({{"place", a.place}, {"vars", a.vars}});
    return out;
}

std::optional<ProjectionTag> tag_from_json(const Json& obj) {
    if (!obj.contains("projection")) return std::nullopt;
    const auto& p = obj["projection"];
    auto roles = field<std::vector<std::string>>(p, "kept_roles");
    return ProjectionTag{field<std::string>(p, "base"), {roles.begin(), roles.end()}};
}

void tag_to_json(const std::optional<ProjectionTag>& tag, Json& obj) {
    if (!tag) return;
    obj["projection"] = {{"base", tag->base}, {"kept_roles", std::vector<std::string>(tag->kept_roles.begin(), tag->kept_roles.end())}};
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        auto [line, col] = line_column(text, ex.byte > 0 ? ex.byte - 1 : 0);
        throw ParseError("malformed JSON", line, col);
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

Marking marking_from_json(const Json& doc) {
    Marking m;
    if (doc.is_null()) return m;
    for (const auto& [place, toks] : doc.items())
        for (const auto& t : toks) m.add(place, t.get<Token>());
    return m;
}

Json marking_to_json(const Marking& m) {
    Json out = Json::object();
    for (const auto& [place, bag] : m.places()) {
        Json toks = Json::array();
        for (const auto& [tok, c] : bag)
            for (int i = 0; i < c; ++i) toks.push_back(tok);
        out[place] = toks;
    }
    return out;
}

ProcessModel model_from_json(const Json& doc) {
    require_version(doc);
    ProcessModel m;
    try {
        m.universe = universe_from_json(doc);
        for (const auto& v : field<Json>(doc, "variables"))
            m.net.add_variable({field<std::string>(v, "name"), field<std::string>(v, "role"), v.value("fresh", false)});
        for (const auto& p : field<Json>(doc, "places"))
            m.net.add_place({field<std::string>(p, "id"), field<std::vector<std::string>>(p, "type"), tag_from_json(p)});
        for (const auto& t : field<Json>(doc, "transitions")) {
            Transition tr;
            tr.id = field<std::string>(t, "id");
            if (t.contains("label") && !t["label"].is_null()) tr.label = t["label"].get<std::string>();
            tr.inputs = arcs_from_json(t.value("inputs", Json::array()));
            tr.outputs = arcs_from_json(t.value("outputs", Json::array()));
            tr.projection = tag_from_json(t);
            m.net.add_transition(std::move(tr));
        }
        m.initial = marking_from_json(doc.value("initial_marking", Json::object()));
        m.final = marking_from_json(doc.value("final_marking", Json::object()));
        for (const auto& v : m.net.variables())
            if (!m.universe.has_role(v.role)) m.universe.add_role({v.role, RoleKind::spontaneous});
        m.net.validate();
    } catch (const ParseError&) {
        throw;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("bad model document: ") + ex.what());
    }
    return m;
}

Json model_to_json(const ProcessModel& m) {
    Json doc = {{"version", 1}};
    universe_to_json(m.universe, doc);
    Json vars = Json::array();
    for (const auto& v : m.net.variables()) {
        Json j = {{"name", v.name}, {"role", v.role}};
        if (v.fresh) j["fresh"] = true;
        vars.push_back(j);
    }
    doc["variables"] = vars;
    Json places = Json::array();
    for (const auto& p : m.net.places()) {
        Json j = {{"id", p.id}, {"type", p.type}};
        tag_to_json(p.projection, j);
        places.push_back(j);
    }
    doc["places"] = places;
    Json trans = Json::array();
    for (const auto& t : m.net.transitions()) {
        Json j = {{"id", t.id}, {"label", t.label ? Json(*t.label) : Json(nullptr)}};
        j["inputs"] = arcs_to_json(t.inputs);
        j["outputs"] = arcs_to_json(t.outputs);
        tag_to_json(t.projection, j);
        trans.push_back(j);
    }
    doc["transitions"] = trans;
    doc["initial_marking"] = marking_to_json(m.initial);
    doc["final_marking"] = marking_to_json(m.final);
    return doc;
}

ProcessModel load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

Event event_from_json(const Json& e) {
    Event ev;
    ev.id = field<std::string>(e, "id");
    ev.activity = field<std::string>(e, "activity");
    ev.objects = ObjectMultiset::from_list(field<std::vector<std::string>>(e, "objects"));
    if (e.contains("timestamp")) ev.timestamp = e["timestamp"].get<double>();
    if (e.contains("recorder")) ev.recorder = e["recorder"].get<std::string>();
    if (e.contains("parent")) ev.parent = e["parent"].get<std::string>();
    if (e.contains("projection_of"))
        ev.projection_of = ObjectMultiset::from_list(e["projection_of"].get<std::vector<std::string>>());
    return ev;
}

Json event_to_json(const Event& e) {
    Json j = {{"id", e.id}, {"activity", e.activity}, {"objects", e.objects.to_list()}};
    if (e.timestamp) j["timestamp"] = *e.timestamp;
    if (e.recorder) j["recorder"] = *e.recorder;
    if (e.parent) j["parent"] = *e.parent;
    if (e.projection_of) j["projection_of"] = e.projection_of->to_list();
    return j;
}

SystemLog log_from_json(const Json& doc) {
    require_version(doc);
    try {
        ObjectUniverse u = universe_from_json(doc);
        std::vector<Event> events;
        bool all_stamped = true;
        for (const auto& e : field<Json>(doc, "events")) {
            events.push_back(event_from_json(e));
            if (!events.back().timestamp) all_stamped = false;
        }
        std::vector<IdPair> order;
        if (doc.contains("order")) {
            for (const auto& pr : doc["order"]) {
                auto v = pr.get<std::vector<std::string>>();
                if (v.size() != 2) throw ParseError("order entries must be pairs");
                order.emplace_back(v[0], v[1]);
            }
        } else if (all_stamped && !events.empty()) {
            std::vector<std::pair<std::string, double>> stamps;
            for (const auto& e : events) stamps.emplace_back(e.id, *e.timestamp);
            order = derive_order_from_timestamps(stamps, doc.value("timestamp_tolerance", 0.0)).order();
        }
        return SystemLog(std::move(u), std::move(events), order);
    } catch (const ParseError&) {
        throw;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("bad log document: ") + ex.what());
    }
}

Json log_to_json(const SystemLog& l) {
    Json doc = {{"version", 1}};
    universe_to_json(l.universe(), doc);
    Json events = Json::array();
    for (const auto& e : l.events()) events.push_back(event_to_json(e));
    doc["events"] = events;
    Json order = Json::array();
    for (const auto& [a, b] : covering_relation(l.order())) order.push_back({a, b});
    doc["order"] = order;
    return doc;
}

SystemLog load_log(const std::string& path) { return log_from_json(read_json_file(path)); }

Json alignment_to_json(const Alignment& al) {
    Json doc = {{"version", 1}, {"relaxed", al.relaxed}, {"total_cost", al.total_cost.to_string()}};
    Json moves = Json::array();
    for (const auto& mv : al.moves) {
        Json j = {{"id", mv.id}, {"kind", to_string(mv.kind)}, {"cost", mv.cost.to_string()}};
        if (mv.event) j["event"] = event_to_json(*mv.event);
        if (mv.firing) {
            Json mode = Json::object();
            for (const auto& [v, o] : mv.firing->mode) mode[v] = o;
            j["firing"] = {{"id", mv.firing->id}, {"transition", mv.firing->transition}, {"mode", mode}};
            j["label"] = mv.label ? Json(*mv.label) : Json(nullptr);
            j["base"] = mv.base_transition;
            j["silent"] = mv.silent;
        }
        if (!mv.substituted_roles.empty()) j["substituted_roles"] = mv.substituted_roles;
        moves.push_back(j);
    }
    doc["moves"] = moves;
    Json order = Json::array();
    for (const auto& [a, b] : covering_relation(al.order)) order.push_back({a, b});
    doc["order"] = order;
    return doc;
}

Alignment alignment_from_json(const Json& doc) {
    require_version(doc);
    try {
        Alignment al;
        al.relaxed = doc.value("relaxed", false);
        al.total_cost = Rational::parse(field<std::string>(doc, "total_cost"));
        std::vector<std::string> ids;
        for (const auto& j : field<Json>(doc, "moves")) {
            Move mv;
            mv.id = field<std::string>(j, "id");
            mv.kind = move_kind_from_string(field<std::string>(j, "kind"));
            mv.cost = Rational::parse(field<std::string>(j, "cost"));
            if (j.contains("event")) mv.event = event_from_json(j["event"]);
            if (j.contains("firing")) {
                const Json& f = j["firing"];
                TransitionFiring tf{field<std::string>(f, "id"), field<std::string>(f, "transition"), {}};
                for (const auto& [v, o] : f.at("mode").items()) tf.mode[v] = o.get<std::string>();
                mv.firing = std::move(tf);
                if (j.contains("label") && !j["label"].is_null()) mv.label = j["label"].get<std::string>();
                mv.base_transition = j.value("base", mv.firing->transition);
                mv.silent = j.value("silent", !mv.label.has_value());
            }
            if (j.contains("substituted_roles"))
                mv.substituted_roles = j["substituted_roles"].get<std::set<std::string>>();
            ids.push_back(mv.id);
            al.moves.push_back(std::move(mv));
        }
        std::vector<IdPair> order;
        if (doc.contains("order"))
            for (const auto& pr : doc["order"]) {
                auto v = pr.get<std::vector<std::string>>();
                if (v.size() != 2) throw ParseError("order entries must be pairs");
                order.emplace_back(v[0], v[1]);
            }
        al.order = Poset::from_pairs(std::move(ids), order);
        return al;
    } catch (const ParseError&) {
        throw;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("bad alignment document: ") + ex.what());
    }
}

Json records_to_json(const std::vector<DeviationRecord>& records) {
    Json out = Json::array();
    for (const auto& r : records) {
        Json cands = Json::array();
        for (auto c : r.candidates) cands.push_back(to_string(c));
        out.push_back({{"move", r.move_id},
                       {"category", to_string(r.category)},
                       {"candidates", cands},
                       {"agreeing_roles", r.agreeing_roles},
                       {"disagreeing_roles", r.disagreeing_roles},
                       {"likelihood_rank", r.likelihood_rank}});
    }
    return out;
}

Json trust_to_json(const TrustReport& rep) {
    Json out = Json::array();
    for (const auto& [key, c] : rep.entries)
        out.push_back({{"role", key.first},
                       {"activity", key.second},
                       {"sync", c.sync},
                       {"relaxed_sync", c.relaxed_sync},
                       {"log", c.log},
                       {"model", c.model},
                       {"substitute", c.substitute},
                       {"trust_score", c.score().to_string()}});
    return out;
}

Json congruence_to_json(const std::vector<CongruenceTriple>& triples) {
    Json out = Json::array();
    for (const auto& t : triples)
        out.push_back({{"move", t.move_id},
                       {"event", t.log_side ? Json(*t.log_side) : Json(nullptr)},
                       {"firing", t.model_side ? Json(*t.model_side) : Json(nullptr)}});
    return out;
}

namespace {

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

struct Style {
    const char* fill;
    const char* border;
};

Style kind_style(const Move& mv) {
    switch (mv.kind) {
        case MoveKind::sync: return {"white", "solid"};
        case MoveKind::relaxed_sync: return {"#d9ead3", "solid"};
        case MoveKind::substitute_sync: return {"#cfe2f3", "solid"};
        case MoveKind::log: return {"#ffe599", "solid"};
        case MoveKind::relaxed_log: return {"#fff2cc", "solid"};
        case MoveKind::model: return mv.silent ? Style{"#eeeeee", "dashed"} : Style{"#d5a6bd", "solid"};
        case MoveKind::relaxed_model: return mv.silent ? Style{"#eeeeee", "dashed"} : Style{"#ead1dc", "solid"};
        case MoveKind::correlation_silent: return {"#eeeeee", "dotted"};
    }
    return {"white", "solid"};
}

}  // namespace

std::string alignment_to_dot(const Alignment& al, ColorBy color_by, const ObjectUniverse& u) {
    static const char* palette[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3",
                                    "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd"};
    std::ostringstream out;
    out << "digraph alignment {\n";
    std::map<std::string, int> role_classes;
    for (const auto& mv : al.moves) {
        ObjectMultiset objs = mv.event ? mv.event->objects : mv.firing ? mv.firing->involved() : ObjectMultiset{};
        std::string activity = mv.event ? mv.event->activity : mv.label.value_or(mv.firing ? mv.firing->transition : "");
        std::string label = activity + "^" + objs.to_string();
        std::string cls;
        std::string fill;
        std::string border;
        if (color_by == ColorBy::kind) {
            cls = std::string(to_string(mv.kind));
            if (mv.silent && mv.kind != MoveKind::correlation_silent) cls += "_silent";
            Style st = kind_style(mv);
            fill = st.fill;
            border = st.border;
        } else {
            std::set<std::string> roles;
            for (const auto& [o, _] : objs.entries())
                if (auto r = u.role_of(o)) roles.insert(*r);
            for (const auto& r : roles) cls += (cls.empty() ? "" : ",") + r;
            if (cls.empty()) cls = "none";
            auto [it, _] = role_classes.emplace(cls, static_cast<int>(role_classes.size()));
            fill = palette[it->second % 10];
            border = is_sync_family(mv.kind) ? "solid" : "dashed";
        }
        out << "  " << dot_quote(mv.id) << " [label=" << dot_quote(label) << ", class=" << dot_quote(cls)
            << ", shape=box, style=" << dot_quote("filled," + border) << ", fillcolor=" << dot_quote(fill) << "];\n";
    }
    for (const auto& [a, b] : covering_relation(al.order)) out << "  " << dot_quote(a) << " -> " << dot_quote(b) << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace relalign
