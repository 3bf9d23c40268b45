#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "relalign/alignment.hpp"
#include "relalign/diagnosis.hpp"

using namespace relalign;

namespace {

Event fragment(const SystemLog& l, const std::string& root, const std::string& id, ObjectMultiset objs) {
    Event e = l.event(root);
    e.id = id;
    e.parent = root;
    e.projection_of = e.objects;
    e.objects = std::move(objs);
    return e;
}

// The ring part of the reference relaxed alignment of the first log.
Alignment ring_part(const SystemLog& l) {
    Alignment al;
    al.relaxed = true;
    Move full;
    full.id = "m1";
    full.kind = MoveKind::model;
    full.firing = TransitionFiring{"ring#1", "ring", {{"p", "p1"}, {"d", "d1"}}};
    full.label = "ring";
    full.base_transition = "ring";
    Move half_sync;
    half_sync.id = "m2";
    half_sync.kind = MoveKind::relaxed_sync;
    half_sync.event = fragment(l, "ring_p2", "ring_p2#1", ObjectMultiset{"d1"});
    half_sync.firing = TransitionFiring{"ring|{d}#1", "ring|{d}", {{"d", "d1"}}};
    half_sync.label = "ring";
    half_sync.base_transition = "ring";
    Move half_log;
    half_log.id = "m3";
    half_log.kind = MoveKind::relaxed_log;
    half_log.event = fragment(l, "ring_p2", "ring_p2#2", ObjectMultiset{"p2"});
    al.moves = {full, half_sync, half_log};
    al.order = Poset::from_pairs({"m1", "m2", "m3"}, {});
    return al;
}

const DeviationRecord& record_of(const std::vector<DeviationRecord>& recs, const std::string& id) {
    auto it = std::find_if(recs.begin(), recs.end(), [&](const auto& r) { return r.move_id == id; });
    REQUIRE(it != recs.end());
    return *it;
}

const Move* first_move(const Alignment& al, MoveKind kind, const std::string& activity) {
    for (const auto& mv : al.moves)
        if (mv.kind == kind && mv.event && mv.event->activity == activity) return &mv;
    return nullptr;
}

}  // namespace

TEST_CASE("congruence of the reference ring moves") {
    auto l = load_log(data_path("running_example/log1.json"));
    auto triples = congruence_of(ring_part(l));
    REQUIRE(triples.size() == 3);
    CHECK(!triples[0].log_side);
    CHECK(*triples[0].model_side == "ring#1");
    CHECK(*triples[1].log_side == "ring_p2#1");
    CHECK(*triples[1].model_side == "ring|{d}#1");
    CHECK(*triples[2].log_side == "ring_p2#2");
    CHECK(!triples[2].model_side);
}

TEST_CASE("classification of the reference ring moves") {
    auto m = running_model();
    auto l = load_log(data_path("running_example/log1.json"));
    auto recs = classify(ring_part(l), l, m);
    CHECK(recs.size() == 2);
    const auto& full = record_of(recs, "m1");
    CHECK(full.category == Category::missing_event);
    CHECK(full.agreeing_roles == std::set<std::string>{"p", "d"});
    CHECK(full.likelihood_rank == 2);
    const auto& half = record_of(recs, "m3");
    CHECK(half.candidates.count(Category::incorrect_object));
    CHECK(half.agreeing_roles == std::set<std::string>{"d"});
    CHECK(half.disagreeing_roles == std::set<std::string>{"p"});
}

TEST_CASE("trust counts of the reference ring moves") {
    auto m = running_model();
    auto l = load_log(data_path("running_example/log1.json"));
    auto rep = trust_report(ring_part(l), m.universe.merged(l.universe()));
    const auto& d = rep.entries.at({"d", "ring"});
    CHECK(d.relaxed_sync == 1);
    CHECK(d.model == 1);
    CHECK(d.total() == 2);
    CHECK(d.score() == Rational(1, 2));
    const auto& p = rep.entries.at({"p", "ring"});
    CHECK(p.log == 1);
    CHECK(p.score() == Rational(0));
}

TEST_CASE("a ring nobody allows is an incorrect event") {
    auto m = running_model();
    auto l = load_log(data_path("running_example/log2.json"));
    auto al = relaxed_align(l, m);
    const Move* mv = first_move(al, MoveKind::log, "ring");
    REQUIRE(mv);
    CHECK(mv->event->objects == ObjectMultiset{"p3", "d1"});
    const auto& rec = record_of(classify(al, l, m), mv->id);
    CHECK(rec.category == Category::incorrect_event);
    CHECK(rec.agreeing_roles.empty());
}

TEST_CASE("a warehouse substitution is an incorrect object") {
    auto m = running_model();
    auto l = load_log(data_path("running_example/log3.json"));
    auto al = relaxed_align(l, m, {}, {"w"});
    auto recs = classify(al, l, m);
    bool found = false;
    for (const auto& mv : al.moves) {
        if (mv.kind != MoveKind::substitute_sync) continue;
        found = true;
        const auto& rec = record_of(recs, mv.id);
        CHECK(rec.category == Category::incorrect_object);
        CHECK(rec.disagreeing_roles == std::set<std::string>{"w"});
    }
    CHECK(found);
}

TEST_CASE("an all-sync alignment is fully trusted") {
    auto m = choice_model();
    auto l = choice_log(R"([{"id": "e1", "activity": "a", "objects": ["x1"]},
                            {"id": "e2", "activity": "b", "objects": ["x1"]}])",
                        R"([["e1", "e2"]])");
    auto al = relaxed_align(l, m);
    CHECK(classify(al, l, m).empty());
    auto rep = trust_report(al, m.universe);
    CHECK(rep.entries.size() == 2);
    for (const auto& [key, c] : rep.entries) CHECK(c.score() == Rational(1));
}

TEST_CASE("diagnosis laws on the delivery logs") {
    auto m = running_model();
    for (const char* name : {"log1.json", "log2.json", "log3.json", "log4.json"}) {
        CAPTURE(name);
        auto l = load_log(data_path(std::string("running_example/") + name));
        for (bool relaxed : {false, true}) {
            auto al = relaxed ? relaxed_align(l, m) : align(l, m);
            CHECK(congruence_violations(al, congruence_of(al)).empty());

            auto recs = classify(al, l, m);
            std::size_t deviating = 0;
            for (const auto& mv : al.moves) {
                bool dev = is_log_family(mv.kind) || mv.kind == MoveKind::substitute_sync ||
                           (is_model_family(mv.kind) && mv.kind != MoveKind::correlation_silent && !mv.silent);
                if (!dev) continue;
                ++deviating;
                const auto& rec = record_of(recs, mv.id);
                std::set<std::string> all = rec.agreeing_roles;
                for (const auto& r : rec.disagreeing_roles) CHECK(all.insert(r).second);
                std::set<std::string> base;
                if (mv.firing) base = m.net.roles_of(m.net.transition(mv.base_transition));
                else
                    for (const auto& [o, _] : l.event(mv.event->root()).objects.entries())
                        base.insert(*l.universe().role_of(o));
                CHECK(all == base);
                CHECK(rec.likelihood_rank == static_cast<int>(rec.agreeing_roles.size()));
                CHECK(!rec.candidates.empty());
                CHECK((rec.category == Category::unclassified) == (rec.candidates.size() > 1));
            }
            CHECK(recs.size() == deviating);  // single recorder: no position records

            auto rep = trust_report(al, m.universe.merged(l.universe()));
            for (const auto& [key, c] : rep.entries) {
                CHECK(c.score() >= Rational(0));
                CHECK(c.score() <= Rational(1));
                bool unsynced = c.log > 0 || c.model > 0;
                for (const auto& mv : al.moves)
                    if (mv.kind == MoveKind::substitute_sync && mv.event->activity == key.second &&
                        mv.substituted_roles.count(key.first))
                        unsynced = true;
                CHECK((c.score() == Rational(1)) == !unsynced);
            }
        }
    }
}

TEST_CASE("co-optimal readings of a lone stop are both reported") {
    auto m = running_model();
    auto l = log_from_text(R"({"version": 1, "roles": [{"name": "d", "kind": "expected"}],
 "objects": [{"id": "d1", "role": "d"}],
 "events": [{"id": "e1", "activity": "t_stop", "objects": ["d1"]}], "order": []})");
    auto d = diagnose(l, m);
    CHECK(d.alternatives.size() == 2);
    for (const auto& alt : d.alternatives) CHECK(alt.total_cost == d.alignment.total_cost);
    REQUIRE(d.records.size() == 1);
    CHECK(d.records[0].candidates == std::set<Category>{Category::missing_event, Category::incorrect_event});
    CHECK(d.records[0].category == Category::unclassified);
}
