#include <doctest.h>

#include "fixtures.hpp"
#include "relalign/errors.hpp"
#include "relalign/pnid.hpp"

using namespace relalign;

namespace {

// Firing sequence of the run closest to the first delivery scenario.
std::vector<TransitionFiring> run1_sequence(bool with_tau1 = true) {
    std::vector<TransitionFiring> s = {
        firing("t_start", {{"d", "d1"}}),
        firing("create", {{"nu_p", "p1"}}),
        firing("create", {{"nu_p", "p2"}}),
        firing("order_home", {{"p", "p1"}}),
        firing("order_depot", {{"p", "p2"}}),
        firing("ring", {{"p", "p1"}, {"d", "d1"}}),
        firing("tau2", {{"p", "p1"}, {"d", "d1"}}),
        firing("register_depot", {{"p", "p1"}, {"w", "w1"}}),
        firing("register_depot", {{"p", "p2"}, {"w", "w1"}}),
        firing("deliver_depot", {{"p", "p1"}, {"d", "d1"}, {"w", "w1"}}),
        firing("tau1", {{"p", "p2"}, {"d", "d1"}}),
        firing("deliver_depot", {{"p", "p2"}, {"d", "d1"}, {"w", "w1"}}),
        firing("collect", {{"p", "p1"}, {"w", "w1"}}),
        firing("collect", {{"p", "p2"}, {"w", "w1"}}),
        firing("destroy", {{"p", "p1"}}),
        firing("destroy", {{"p", "p2"}}),
        firing("t_stop", {{"d", "d1"}}),
    };
    if (!with_tau1) s.erase(s.begin() + 10);
    number_firings(s);
    return s;
}

}  // namespace

TEST_CASE("model fixture validates") {
    auto m = running_model();
    CHECK(m.net.places().size() == 12);
    CHECK(m.net.transitions().size() == 13);
    CHECK(m.initial == m.final);
    CHECK(objects_of_roles(m.universe, {"w"}).count("w1") == 2);
}

TEST_CASE("enabled modes at the initial marking") {
    auto m = running_model();
    auto modes = enabled_modes(m, m.initial, "t_start");
    REQUIRE(modes.size() == 2);
    CHECK(modes[0].at("d") == "d1");
    CHECK(modes[1].at("d") == "d2");
    auto create = enabled_modes(m, m.initial, "create");
    REQUIRE(create.size() == 1);
    CHECK(create[0].at("nu_p") == "p#1");
    CHECK(enabled_modes(m, m.initial, "deliver_depot").empty());
    CHECK(enabled_modes(m, m.initial, "ring").empty());
    for (const auto& t : m.net.transitions()) {
        bool expect = t.id == "t_start" || t.id == "create";
        CHECK(enabled_modes(m, m.initial, t.id).empty() == !expect);
    }
}

TEST_CASE("fire") {
    auto m = running_model();
    auto next = fire(m, m.initial, firing("t_start", {{"d", "d1"}}));
    CHECK(next.count("p12", {"d2"}) == 1);
    CHECK(next.count("p12", {"d1"}) == 0);
    CHECK(next.count("p11", {"d1"}) == 1);
    CHECK_THROWS_AS(fire(m, m.initial, firing("t_stop", {{"d", "d1"}})), NotEnabled);
    // A fresh variable must not reuse a live object.
    auto with_p = fire(m, m.initial, firing("create", {{"nu_p", "p1"}}));
    CHECK_FALSE(is_enabled(m, with_p, "create", {{"nu_p", "p1"}}));
    CHECK(is_enabled(m, with_p, "create", {{"nu_p", "p2"}}));
}

TEST_CASE("self loop leaves the marking unchanged") {
    ProcessModel m;
    m.universe.add_role({"r", RoleKind::expected});
    m.universe.add_object("a", "r");
    m.net.add_variable({"x", "r", false});
    m.net.add_place({"q", {"r"}, std::nullopt});
    m.net.add_transition({"loop", std::nullopt, {{"q", {{"x"}}}}, {{"q", {{"x"}}}}, std::nullopt});
    m.initial.add("q", {"a"});
    m.final = m.initial;
    CHECK(fire(m, m.initial, firing("loop", {{"x", "a"}})) == m.initial);
}

TEST_CASE("execution posets") {
    auto m = running_model();
    auto run = execution_poset_from_sequence(run1_sequence());
    CHECK(is_execution_poset(m, run));
    CHECK(is_execution_poset(m, ExecutionPoset{}));
    CHECK_FALSE(is_execution_poset(m, execution_poset_from_sequence(run1_sequence(false))));

    // Equivalence with naive enumeration on a prefix.
    auto seq = run1_sequence();
    seq.resize(8);
    auto prefix = execution_poset_from_sequence(seq);
    Marking end = m.initial;
    for (const auto& f : seq) end = fire(m, end, f);
    bool naive = true;
    for (const auto& order : linear_extensions(prefix.run, 100000).sequences) {
        Marking cur = m.initial;
        for (const auto& id : order) {
            const auto& f = prefix.firings.at(id);
            if (!is_enabled(m, cur, f.transition, f.mode)) {
                naive = false;
                break;
            }
            cur = fire(m, cur, f);
        }
        if (naive && !(cur == end)) naive = false;
    }
    CHECK(naive == is_execution_poset(m, prefix, end));
}

TEST_CASE("net projections") {
    auto m = running_model();
    auto mp = project_net_roles(m, {"p"});
    CHECK(mp.net.has_transition("ring|{p}"));
    CHECK(mp.net.has_transition("deliver_home|{p}"));
    CHECK(mp.net.has_transition("order_home"));
    CHECK_FALSE(mp.net.has_transition("t_start"));
    CHECK(mp.net.has_place("p5|{p}"));
    CHECK_FALSE(mp.net.has_place("p11"));
    CHECK(mp.initial.empty());
    mp.net.validate();

    auto mw = project_net(m, objects_of_roles(m.universe, {"w"}));
    CHECK(mw.net.has_place("p7|{w}"));
    CHECK(mw.net.has_place("p8"));
    CHECK(mw.net.has_place("p9|{w}"));
    CHECK(mw.net.places().size() == 3);
    CHECK(mw.initial.count("p8", {"w1"}) == 2);

    auto all = project_net_roles(m, {"p", "d", "w"});
    CHECK(model_to_json(all) == model_to_json(m));
    auto again = project_net_roles(mp, {"p"});
    CHECK(model_to_json(again) == model_to_json(mp));
}

TEST_CASE("model document round trip") {
    auto m = running_model();
    auto doc = model_to_json(m);
    CHECK(model_to_json(model_from_json(doc)) == doc);
    CHECK_THROWS_AS(parse_json_text("{\"version\": 1,\n  \"roles\": [}"), ParseError);
}
