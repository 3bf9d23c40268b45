// relalign: align, relax, project, check, generate, inject and export-dot.
//
// Exit codes: 0 success, 1 parse or input error, 2 no alignment exists,
// 3 state budget exhausted, 4 an alignment failed verification.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "relalign/alignment.hpp"
#include "relalign/diagnosis.hpp"
#include "relalign/errors.hpp"
#include "relalign/io.hpp"
#include "relalign/relaxed_model.hpp"
#include "relalign/testkit.hpp"

using namespace relalign;

namespace {

std::set<std::string> split_list(const std::string& text) {
    std::set<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.insert(item);
    return out;
}

std::map<std::string, std::string> split_pairs(const std::vector<std::string>& items) {
    std::map<std::string, std::string> out;
    for (const auto& item : items) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value, got '" + item + "'");
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

void emit(const Json& doc) { std::cout << doc.dump(1) << "\n"; }

std::size_t default_budget() {
    if (const char* env = std::getenv("RA_MAX_STATES")) return std::stoull(env);
    return SearchOptions{}.max_states;
}

struct AlignArgs {
    std::string model;
    std::string log;
    bool relaxed = false;
    std::string epsilon = "1/1024";
    std::string substitutable;
    std::string log_weight = "1";
    std::string model_weight = "1";
    std::size_t max_states = 0;
    bool strict_final = false;
};

int cmd_align(const AlignArgs& a) {
    auto m = load_model(a.model);
    auto l = load_log(a.log);
    CostParams params;
    params.epsilon = Rational::parse(a.epsilon);
    params.log_weight = Rational::parse(a.log_weight);
    params.model_weight = Rational::parse(a.model_weight);
    SearchOptions opts;
    opts.max_states = a.max_states ? a.max_states : default_budget();
    opts.strict_final = a.strict_final;

    Json report;
    Alignment al;
    if (a.relaxed) {
        auto d = diagnose(l, m, params, split_list(a.substitutable), opts);
        al = std::move(d.alignment);
        report["deviations"] = records_to_json(d.records);
        report["trust"] = trust_to_json(d.trust);
    } else {
        al = align(l, m, params, opts);
        report["deviations"] = records_to_json(classify(al, l, m));
        report["trust"] = trust_to_json(trust_report(al, m.universe.merged(l.universe())));
    }
    report["congruence"] = congruence_to_json(congruence_of(al));
    Json doc = alignment_to_json(al);
    doc["report"] = report;
    emit(doc);
    return 0;
}

int cmd_check(const std::string& model, const std::string& log, const std::string& alignment) {
    auto m = load_model(model);
    auto l = load_log(log);
    auto al = alignment_from_json(read_json_file(alignment));
    auto v = verify_alignment(al, l, m, al.relaxed);
    emit({{"version", 1}, {"ok", v.ok}, {"violations", v.violations}});
    return v.ok ? 0 : 4;
}

int cmd_project(const std::string& path, const std::string& roles, const std::string& objects) {
    Json doc = read_json_file(path);
    bool is_log = doc.is_object() && doc.contains("events");
    if (roles.empty() == objects.empty()) throw ParseError("give exactly one of --roles and --objects");
    if (is_log) {
        auto l = log_from_json(doc);
        std::set<std::string> keep;
        if (!objects.empty()) {
            keep = split_list(objects);
        } else {
            auto rs = split_list(roles);
            if (rs.count("all")) rs = l.universe().role_names();
            for (const auto& e : l.events())
                for (const auto& [o, _] : restrict_to_roles(l.universe(), e.objects, rs).entries()) keep.insert(o);
        }
        ObjectMultiset objs;
        for (const auto& o : keep) objs.add(o, 1);
        emit(log_to_json(project_log(l, objs)));
    } else {
        auto m = model_from_json(doc);
        if (!objects.empty()) {
            ObjectMultiset keep;
            for (const auto& o : split_list(objects)) keep.add(o, 1);
            emit(model_to_json(project_net(m, keep)));
        } else {
            auto rs = split_list(roles);
            if (rs.count("all")) rs = m.universe.role_names();
            emit(model_to_json(project_net_roles(m, rs)));
        }
    }
    return 0;
}

int cmd_generate(const std::string& model, std::uint64_t seed, std::size_t max_firings,
                 const std::vector<std::string>& recorders) {
    auto m = load_model(model);
    auto run = generate_run(m, seed, max_firings);
    emit(log_to_json(run_to_log(m, run, split_pairs(recorders))));
    return 0;
}

int cmd_inject(const std::string& log, const std::string& kind, const std::string& target, std::uint64_t seed,
               const std::vector<std::string>& params) {
    auto l = load_log(log);
    IssueSpec spec{issue_kind_from_string(kind), target, split_pairs(params)};
    emit(log_to_json(inject(l, spec, seed)));
    return 0;
}

int cmd_export_dot(const std::string& path, const std::string& color_by, const std::string& model,
                   const std::string& log) {
    auto al = alignment_from_json(read_json_file(path));
    ObjectUniverse u;
    if (!model.empty()) u = load_model(model).universe;
    if (!log.empty()) u = u.merged(load_log(log).universe());
    std::cout << alignment_to_dot(al, color_by == "role" ? ColorBy::role : ColorBy::kind, u);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Alignments of object-centric logs against typed Petri nets with identifiers"};
    app.require_subcommand(1);

    AlignArgs aa;
    auto* align_cmd = app.add_subcommand("align", "Optimal (relaxed) alignment plus a diagnosis report");
    align_cmd->add_option("model", aa.model, "Model document")->required();
    align_cmd->add_option("log", aa.log, "Log document")->required();
    align_cmd->add_flag("--relaxed", aa.relaxed, "Align against the relaxed model and log");
    align_cmd->add_option("--epsilon", aa.epsilon, "Relaxation constant, e.g. 1/1024");
    align_cmd->add_option("--substitutable-roles", aa.substitutable, "Comma-separated roles");
    align_cmd->add_option("--log-weight", aa.log_weight, "Weight of log-side deviations");
    align_cmd->add_option("--model-weight", aa.model_weight, "Weight of model-side deviations");
    align_cmd->add_option("--max-states", aa.max_states, "State budget (default RA_MAX_STATES or 5000000)");
    align_cmd->add_flag("--strict-final", aa.strict_final, "Require the full final marking");

    std::string model, log, doc_path, roles, objects, kind, target = "*", color_by = "kind";
    std::uint64_t seed = 0;
    std::size_t max_firings = 12;
    std::vector<std::string> recorders, params;

    auto* relax_cmd = app.add_subcommand("relax-model", "Write the relaxed model");
    relax_cmd->add_option("model", model, "Model document")->required();

    auto* project_cmd = app.add_subcommand("project", "Project a model or log on roles or objects");
    project_cmd->add_option("document", doc_path, "Model or log document")->required();
    project_cmd->add_option("--roles", roles, "Comma-separated roles, or all");
    project_cmd->add_option("--objects", objects, "Comma-separated objects");

    auto* check_cmd = app.add_subcommand("check", "Verify an alignment document");
    check_cmd->add_option("model", model, "Model document")->required();
    check_cmd->add_option("log", log, "Log document")->required();
    check_cmd->add_option("alignment", doc_path, "Alignment document")->required();

    auto* gen_cmd = app.add_subcommand("generate", "Log of a random run of a model");
    gen_cmd->add_option("model", model, "Model document")->required();
    gen_cmd->add_option("--seed", seed, "Random seed");
    gen_cmd->add_option("--max-firings", max_firings, "Upper bound on firings");
    gen_cmd->add_option("--recorder", recorders, "activity=recorder, repeatable");

    auto* inject_cmd = app.add_subcommand("inject", "Inject a quality issue into a log");
    inject_cmd->add_option("log", log, "Log document")->required();
    inject_cmd->add_option("--kind", kind, "mi_e, in_e, mi_o, in_o, mi_p or in_p")->required();
    inject_cmd->add_option("--target", target, "id:X, activity:X, role:X, X or *");
    inject_cmd->add_option("--seed", seed, "Random seed");
    inject_cmd->add_option("--param", params, "key=value, repeatable (object, with)");

    auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz text of an alignment document");
    dot_cmd->add_option("document", doc_path, "Alignment document")->required();
    dot_cmd->add_option("--color-by", color_by, "kind or role")->check(CLI::IsMember({"kind", "role"}));
    dot_cmd->add_option("--log", log, "Log document giving object roles (for --color-by role)");
    dot_cmd->add_option("--model", model, "Model document giving object roles (for --color-by role)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*align_cmd) return cmd_align(aa);
        if (*relax_cmd) {
            emit(model_to_json(build_relaxed_model(load_model(model)).model));
            return 0;
        }
        if (*project_cmd) return cmd_project(doc_path, roles, objects);
        if (*check_cmd) return cmd_check(model, log, doc_path);
        if (*gen_cmd) return cmd_generate(model, seed, max_firings, recorders);
        if (*inject_cmd) return cmd_inject(log, kind, target, seed, params);
        if (*dot_cmd) return cmd_export_dot(doc_path, color_by, model, log);
    } catch (const NoAlignment& ex) {
        std::cerr << "no alignment: " << ex.what() << "\n";
        return 2;
    } catch (const BudgetExceeded& ex) {
        std::cerr << "budget exceeded: " << ex.what() << "\n";
        return 3;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 1;
}
