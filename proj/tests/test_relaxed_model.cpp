#include <doctest.h>

#include "fixtures.hpp"
#include "relalign/relaxed_model.hpp"

using namespace relalign;

TEST_CASE("relaxed model of the delivery net") {
    auto m = running_model();
    auto r = build_relaxed_model(m);
    const auto& net = r.model.net;
    for (const char* t : {"ring|{p}", "ring|{d}", "deliver_home|{p}", "deliver_home|{d}", "tau_create^p5",
                          "tau_destroy^p5", "tau1|{p}", "tau2|{d}", "deliver_depot|{d}", "deliver_depot|{p,w}"})
        CHECK_MESSAGE(net.has_transition(t), t);
    CHECK(net.has_place("p5|{p}"));
    CHECK(net.has_place("p5|{d}"));
    CHECK(r.correlation_transitions.size() == 8);  // p5, p6, p7, p9
    for (const auto& t : r.correlation_transitions) CHECK(net.transition(t).silent());
    for (const auto& [id, tag] : r.projection_index) {
        CHECK(net.transition(id).label == m.net.transition(tag.base).label);
        CHECK(r.base_of(id) == tag.base);
    }
    for (const auto& t : m.net.transitions()) CHECK(net.has_transition(t.id));
    CHECK(r.model.initial == m.initial);
    // deliver_depot has three roles: six proper subsets.
    int dd = 0;
    for (const auto& [id, tag] : r.projection_index)
        if (tag.base == "deliver_depot") ++dd;
    CHECK(dd == 6);
}

TEST_CASE("projected ring halves compose through the correlation net") {
    auto m = running_model();
    auto r = build_relaxed_model(m);
    const auto& rm = r.model;
    Marking mk = rm.initial;
    for (auto f : {firing("t_start", {{"d", "d1"}}), firing("create", {{"nu_p", "p7"}}),
                   firing("order_home", {{"p", "p7"}}), firing("ring|{d}", {{"d", "d1"}}),
                   firing("ring|{p}", {{"p", "p7"}}), firing("tau_create^p5", {{"_p0", "p7"}, {"_d1", "d1"}}),
                   firing("deliver_home", {{"p", "p7"}, {"d", "d1"}})})
        mk = fire(rm, mk, f);
    CHECK(mk.count("p10", {"p7"}) == 1);
    CHECK(mk.count("p11", {"d1"}) == 1);

    Marking corr;
    corr.add("p5", {"p7", "d1"});
    auto destroyed = fire(rm, corr, firing("tau_destroy^p5", {{"_p0", "p7"}, {"_d1", "d1"}}));
    CHECK(fire(rm, destroyed, firing("tau_create^p5", {{"_p0", "p7"}, {"_d1", "d1"}})) == corr);
}

TEST_CASE("single-role nets relax to themselves") {
    ProcessModel m;
    m.universe.add_role({"r", RoleKind::expected});
    m.net.add_variable({"x", "r", false});
    m.net.add_place({"a", {"r"}, std::nullopt});
    m.net.add_place({"b", {"r"}, std::nullopt});
    m.net.add_transition({"go", std::string("go"), {{"a", {{"x"}}}}, {{"b", {{"x"}}}}, std::nullopt});
    auto r = build_relaxed_model(m);
    CHECK(r.correlation_transitions.empty());
    CHECK(r.model.net.transitions().size() == 1);
    CHECK(language_inclusion_check(ProcessModel{}, 4));
}

TEST_CASE("bounded language inclusion on the delivery net") {
    CHECK(language_inclusion_check(running_model(), 8));
}
