#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "relalign/diagnosis.hpp"
#include "relalign/errors.hpp"
#include "relalign/testkit.hpp"

using namespace relalign;

namespace {

Marking replay(const ProcessModel& m, const ExecutionPoset& run) {
    Marking mk = m.initial;
    const auto ext = linear_extensions(run.run, 1);
    for (const auto& id : ext.sequences.front()) mk = fire(m, mk, run.firings.at(id));
    return mk;
}

std::vector<IdPair> sorted_order(const SystemLog& l) {
    auto o = l.order().order();
    std::sort(o.begin(), o.end());
    return o;
}

// First generated run whose log has an event of `activity` mentioning `object`.
SystemLog log_with(const ProcessModel& m, const std::string& activity, const std::string& object) {
    for (std::uint64_t seed = 0;; ++seed) {
        auto l = run_to_log(m, generate_run(m, seed, 12));
        for (const auto& e : l.events())
            if (e.activity == activity && e.objects.count(object)) return l;
    }
}

}  // namespace

TEST_CASE("generated runs reach the final marking") {
    auto m = running_model();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto run = generate_run(m, seed, 12);
        CHECK(replay(m, run) == m.final);
        auto again = generate_run(m, seed, 12);
        CHECK(again.run == run.run);
    }
}

TEST_CASE("a run becomes a log of its visible firings") {
    auto m = running_model();
    auto run = generate_run(m, 3, 12);
    auto l = run_to_log(m, run, {{"ring", "courier"}});
    std::size_t visible = 0;
    for (const auto& [id, f] : run.firings)
        if (!m.net.transition(f.transition).silent()) ++visible;
    CHECK(l.size() == visible);
    for (const auto& e : l.events()) {
        CHECK(e.activity == *m.net.transition(run.firings.at(e.id).transition).label);
        CHECK(e.recorder.has_value() == (e.activity == "ring"));
        for (const auto& f : l.events())
            if (l.order().less(e.id, f.id)) CHECK(run.run.less(e.id, f.id));
    }
    CHECK(!l.multi_recorder());
}

TEST_CASE("target selectors") {
    auto m = running_model();
    auto l = load_log(data_path("running_example/log1.json"));
    CHECK(resolve_target(l, "id:ring_p2") == std::vector<std::string>{"ring_p2"});
    CHECK(resolve_target(l, "ring") == std::vector<std::string>{"ring_p2"});
    CHECK(resolve_target(l, "*").size() == l.size());
    for (const auto& id : resolve_target(l, "role:w"))
        CHECK(l.event(id).objects.count("w1"));
    CHECK_THROWS_AS(resolve_target(l, "activity:nothing"), TargetNotFound);
    CHECK_THROWS_AS(inject(l, {IssueKind::mi_o, "t_start", {}}, 1), TargetNotFound);
}

TEST_CASE("each injector makes its kind of change") {
    auto m = running_model();
    auto l = load_log(data_path("running_example/log1.json"));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto mi_e = inject(l, {IssueKind::mi_e, "*", {}}, seed);
        CHECK(mi_e.size() == l.size() - 1);

        auto in_e = inject(l, {IssueKind::in_e, "*", {}}, seed);
        CHECK(in_e.size() == l.size() + 1);
        int dups = 0;
        for (const auto& e : in_e.events())
            if (!l.has_event(e.id)) {
                ++dups;
                CHECK(e.id.find("_dup") != std::string::npos);
            }
        CHECK(dups == 1);

        auto mi_o = inject(l, {IssueKind::mi_o, "*", {}}, seed);
        int shrunk = 0;
        for (const auto& e : mi_o.events()) {
            const auto& before = l.event(e.id).objects;
            if (e.objects == before) continue;
            ++shrunk;
            CHECK(e.objects.size() < before.size());
            CHECK(e.objects <= before);
        }
        CHECK(shrunk == 1);

        auto in_o = inject(l, {IssueKind::in_o, "*", {}}, seed);
        int replaced = 0;
        for (const auto& e : in_o.events()) {
            const auto& before = l.event(e.id).objects;
            if (e.objects == before) continue;
            ++replaced;
            CHECK(e.objects.size() == before.size());
        }
        CHECK(replaced == 1);
        CHECK(sorted_order(in_o) == sorted_order(l));

        auto mi_p = inject(l, {IssueKind::mi_p, "*", {}}, seed);
        CHECK(mi_p.order().order_size() < l.order().order_size());
        for (const auto& [a, b] : mi_p.order().order()) CHECK(l.order().less(a, b));

        auto in_p = inject(l, {IssueKind::in_p, "*", {}}, seed);
        bool reversed = false;
        for (const auto& [a, b] : l.order().order())
            if (in_p.order().less(b, a)) reversed = true;
        CHECK(reversed);
    }
}

TEST_CASE("a warehouse swap on a depot delivery is found as an incorrect object") {
    auto m = running_model();
    auto clean = log_with(m, "deliver_depot", "w1");
    auto l = inject(clean, {IssueKind::in_o, "activity:deliver_depot", {{"object", "w1"}, {"with", "w2"}}}, 7);
    bool swapped = false;
    for (const auto& e : l.events())
        if (e.activity == "deliver_depot" && e.objects.count("w2") && !clean.event(e.id).objects.count("w2"))
            swapped = true;
    REQUIRE(swapped);
    auto d = diagnose(l, m, {}, {"w"});
    bool found = false;
    for (const auto& r : d.records) found = found || r.candidates.count(Category::incorrect_object);
    CHECK(found);
}

TEST_CASE("random instances are small and replayable") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto inst = random_instance(seed);
        CHECK(inst.log.size() <= 6);
        CHECK(replay(inst.model, inst.run) == inst.model.final);
        CHECK_NOTHROW(inst.model.net.validate());
    }
}
