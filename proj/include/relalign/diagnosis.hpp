#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relalign/alignment.hpp"

namespace relalign {

struct CongruenceTriple {
    std::string move_id;
    std::optional<std::string> log_side;    // event id, empty for ε
    std::optional<std::string> model_side;  // firing id, empty for ε
};

// Sync-family moves give (e, f), log-family (e, ε), visible model-family
// (ε, f). Silent and correlation moves are left out.
std::vector<CongruenceTriple> congruence_of(const Alignment& al);

// Every event of al|_L and every visible firing of al|_T occurs in exactly one
// triple; returns the offending ids.
std::vector<std::string> congruence_violations(const Alignment& al, const std::vector<CongruenceTriple>& triples);

enum class Category {
    missing_event,
    incorrect_event,
    missing_object,
    incorrect_object,
    missing_position,
    incorrect_position,
    unclassified,
};

std::string_view to_string(Category c);

struct DeviationRecord {
    std::string move_id;
    Category category = Category::unclassified;
    std::set<Category> candidates;
    std::set<std::string> agreeing_roles;
    std::set<std::string> disagreeing_roles;
    int likelihood_rank = 0;  // number of agreeing roles
};

// One record per deviating move (log, visible model, relaxed log, visible
// relaxed model, substitute sync), plus missing_position records on sync
// moves when the log has more than one recorder. A record with several
// candidates is unclassified.
std::vector<DeviationRecord> classify(const Alignment& al, const SystemLog& l, const ProcessModel& m);

// `alt` is another optimal alignment of the same log and model. Deviations of
// `al` that `alt` does not share take the candidates of the alt-only
// deviations touching the same objects.
void merge_alternative(std::vector<DeviationRecord>& records, const Alignment& al, const Alignment& alt,
                       const SystemLog& l, const ProcessModel& m);

struct TrustCounts {
    int sync = 0;
    int relaxed_sync = 0;
    int log = 0;
    int model = 0;
    int substitute = 0;
    Rational synced_weight;
    Rational total_weight;

    int total() const { return sync + relaxed_sync + log + model + substitute; }
    Rational score() const { return total_weight == Rational(0) ? Rational(1) : synced_weight / total_weight; }
};

struct TrustReport {
    std::map<std::pair<std::string, std::string>, TrustCounts> entries;  // (role, activity)
};

TrustReport trust_report(const Alignment& al, const ObjectUniverse& u);

struct Diagnosis {
    Alignment alignment;
    std::vector<Alignment> alternatives;  // co-optimal, other tie-breaks
    std::vector<DeviationRecord> records;
    TrustReport trust;
};

// Relaxed alignment, classification and trust in one go. The alignments found
// with the log-move and model-move tie-breaks are merged into the records.
Diagnosis diagnose(const SystemLog& l, const ProcessModel& m, const CostParams& params = {},
                   const std::set<std::string>& substitutable_roles = {}, const SearchOptions& opts = {});

}  // namespace relalign
