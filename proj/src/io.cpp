#include "sqm/io.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "sqm/error.hpp"

namespace sqm::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

template <typename T>
T get_as(const Json& j, const char* what) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception&) {
        bad(std::string("malformed ") + what);
    }
}

int int_field(const Json& j, const char* key) { return get_as<int>(field(j, key), key); }

std::vector<int> int_list(const Json& j, const char* key) { return get_as<std::vector<int>>(field(j, key), key); }

GoodSet goodset_from_json(const Json& j, int m) {
    const auto bits = get_as<std::int64_t>(j, "bitmask");
    if (bits < 0 || !GoodSet(static_cast<GoodSet::Bits>(bits)).within(m)) bad("bitmask outside the declared goods");
    return GoodSet(static_cast<GoodSet::Bits>(bits));
}

Json profile_json(const Profile& profile) {
    Json out = Json::array();
    for (const auto& p : profile) out.push_back(to_json(p));
    return out;
}

Json observation_json(const MmsObservation& o) {
    return {{"instance_index", o.instance_index},
            {"family", std::string(to_string(o.family))},
            {"agent", o.agent},
            {"value", ratio_json(o.value)},
            {"share", ratio_json(o.share)},
            {"ratio", ratio_json(o.ratio)},
            {"allocation", to_json(o.allocation)},
            {"instance", to_json(o.instance)}};
}

}  // namespace

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    std::int64_t num = 0;
    std::int64_t den = 1;
    if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
        num = j[0].get<std::int64_t>();
        den = j[1].get<std::int64_t>();
    } else if (j.is_string()) {
        const auto s = j.get<std::string>();
        const auto slash = s.find('/');
        try {
            std::size_t used = 0;
            num = std::stoll(s.substr(0, slash), &used);
            if (used != s.substr(0, slash).size()) bad("malformed rational \"" + s + "\"");
            if (slash != std::string::npos) {
                den = std::stoll(s.substr(slash + 1), &used);
                if (used != s.size() - slash - 1) bad("malformed rational \"" + s + "\"");
            }
        } catch (const std::logic_error&) {
            bad("malformed rational \"" + s + "\"");
        }
    } else {
        bad("rational must be an integer, [num, den] or \"num/den\"");
    }
    if (den == 0) bad("zero denominator");
    return Rational(num, den);
}

Json to_json(const Rational& r) { return Json::array({r.numerator(), r.denominator()}); }

Json ratio_json(const Rational& r) { return {{"exact", to_string(r)}, {"decimal", to_double(r)}}; }

Json to_json(const Preference& pref) {
    switch (pref.kind()) {
        case PreferenceKind::Lexicographic: return {{"kind", "lex"}, {"order", pref.lex_order()}};
        case PreferenceKind::AdditiveStrict: {
            Json values = Json::array();
            for (const auto& v : pref.values()) values.push_back(to_json(v));
            return {{"kind", "additive"}, {"values", values}};
        }
        case PreferenceKind::RankTable: break;
    }
    return {{"kind", "rank"}, {"rank", pref.rank_table()}};
}

Preference preference_from_json(const Json& j) {
    const auto kind = get_as<std::string>(field(j, "kind"), "preference kind");
    if (kind == "lex") return Preference::lexicographic(int_list(j, "order"));
    if (kind == "rank") return Preference::from_ranks(get_as<std::vector<std::uint16_t>>(field(j, "rank"), "rank"));
    if (kind == "additive") {
        std::vector<Rational> values;
        const auto& list = field(j, "values");
        if (!list.is_array()) bad("additive values must be an array");
        for (const auto& v : list) values.push_back(rational_from_json(v));
        return Preference::additive(std::move(values));
    }
    bad("unknown preference kind \"" + kind + "\"");
}

Json to_json(const Profile& profile) { return profile_json(profile); }

Json to_json(const Allocation& alloc) {
    Json out = Json::array();
    for (const auto& b : alloc.bundles) out.push_back(b.bits());
    return out;
}

Json to_json(const QuotaOrdering& qo) { return {{"q", qo.q}, {"p", qo.p}}; }

ClassTag class_tag_from_string(std::string_view tag) {
    for (auto t : {ClassTag::Lexicographic, ClassTag::StrictMonotoneAll, ClassTag::StrictAdditive, ClassTag::ExplicitList})
        if (to_string(t) == tag) return t;
    bad("unknown class \"" + std::string(tag) + "\" (expected lex, strict_monotone, additive or explicit)");
}

Json to_json(const PreferenceClass& cls) {
    Json out{{"tag", std::string(to_string(cls.tag()))}, {"m", cls.goods()}};
    if (cls.tag() == ClassTag::ExplicitList) out["members"] = profile_json(cls.members());
    return out;
}

ClassPtr class_from_json(const Json& j, int m) {
    ClassTag tag;
    if (j.is_string()) {
        tag = class_tag_from_string(j.get<std::string>());
    } else {
        tag = class_tag_from_string(get_as<std::string>(field(j, "tag"), "class tag"));
        if (j.contains("m")) m = int_field(j, "m");
    }
    if (m < 0 || m > 16) bad("number of goods must be in [0, 16]");
    switch (tag) {
        case ClassTag::Lexicographic: return std::make_shared<const PreferenceClass>(PreferenceClass::lexicographic(m));
        case ClassTag::StrictMonotoneAll:
            return std::make_shared<const PreferenceClass>(PreferenceClass::strict_monotone_all(m));
        case ClassTag::StrictAdditive: return std::make_shared<const PreferenceClass>(PreferenceClass::strict_additive(m));
        case ClassTag::ExplicitList: {
            if (!j.is_object()) bad("explicit class needs a member list");
            std::vector<Preference> members;
            for (const auto& p : field(j, "members")) members.push_back(preference_from_json(p));
            return std::make_shared<const PreferenceClass>(PreferenceClass::explicit_list(m, std::move(members)));
        }
    }
    bad("unknown class");
}

Mechanism mechanism_from_json(const Json& j) {
    const auto kind = get_as<std::string>(field(j, "kind"), "mechanism kind");
    const auto domain_for = [&](int m) { return class_from_json(j.contains("class") ? j.at("class") : Json("lex"), m); };
    if (kind == "serial_quota") {
        auto q = int_list(j, "q");
        std::vector<int> p(q.size());
        if (j.contains("p")) {
            p = int_list(j, "p");
        } else {
            std::iota(p.begin(), p.end(), 0);
        }
        const int m = j.contains("m") ? int_field(j, "m") : std::accumulate(q.begin(), q.end(), 0);
        if (j.contains("n") && int_field(j, "n") != static_cast<int>(q.size())) bad("n does not match the quota vector");
        return Mechanism::serial_quota(canonicalize(std::move(q), std::move(p), m), domain_for(m));
    }
    const int n = int_field(j, "n");
    if (n < 1) bad("n must be positive");
    if (kind == "table") {
        const auto& cls_json = field(j, "class");
        auto domain = class_from_json(cls_json, j.contains("m") ? int_field(j, "m") : -1);
        const int m = domain->goods();
        const auto& alloc = field(j, "alloc");
        if (!alloc.is_array()) bad("alloc must be an array of allocations");
        std::vector<Allocation> allocations;
        for (const auto& a : alloc) {
            if (!a.is_array() || static_cast<int>(a.size()) != n) bad("each allocation needs one bitmask per agent");
            Allocation out(n);
            for (int i = 0; i < n; ++i) out[i] = goodset_from_json(a[static_cast<std::size_t>(i)], m);
            allocations.push_back(std::move(out));
        }
        return Mechanism::table(std::move(domain), n, allocations);
    }
    const int m = int_field(j, "m");
    if (kind == "round_robin") return Mechanism::round_robin(n, domain_for(m));
    if (kind == "counter_non_truthful") return Mechanism::counter_non_truthful(n, domain_for(m));
    if (kind == "counter_bossy") return Mechanism::counter_bossy(n, domain_for(m));
    if (kind == "counter_non_neutral")
        return Mechanism::counter_non_neutral(n, domain_for(m), j.contains("a") ? int_field(j, "a") : 0,
                                              j.contains("b") ? int_field(j, "b") : 1);
    bad("unknown mechanism kind \"" + kind + "\"");
}

Json to_json(const Mechanism& mech) {
    Json out{{"kind", mech.kind_name()}, {"n", mech.agents()}, {"m", mech.goods()}, {"class", to_json(mech.domain())}};
    if (const auto* sq = std::get_if<mech::SerialQuota>(&mech.variant())) {
        out["q"] = sq->qo.q;
        out["p"] = sq->qo.p;
    } else if (const auto* t = std::get_if<mech::Table>(&mech.variant())) {
        Json alloc = Json::array();
        const auto n = static_cast<std::size_t>(mech.agents());
        for (std::size_t i = 0; i < t->cells.size(); i += n) {
            Json row = Json::array();
            for (std::size_t a = 0; a < n; ++a) row.push_back(t->cells[i + a].bits());
            alloc.push_back(row);
        }
        out["alloc"] = alloc;
    } else if (const auto* c = std::get_if<mech::CounterNonNeutral>(&mech.variant())) {
        out["a"] = c->a;
        out["b"] = c->b;
    }
    return out;
}

Json to_json(const Witness& witness) {
    struct Visitor {
        Json operator()(const DeviationWitness& w) const {
            return {{"type", "deviation"}, {"profile", profile_json(w.profile)}, {"agent", w.agent},
                    {"alternate", to_json(w.alternate)}};
        }
        Json operator()(const PermutationWitness& w) const {
            return {{"type", "permutation"}, {"profile", profile_json(w.profile)}, {"pi", w.pi.map()}};
        }
        Json operator()(const UncoveredWitness& w) const {
            return {{"type", "uncovered"}, {"profile", profile_json(w.profile)}, {"unallocated", w.unallocated.bits()}};
        }
        Json operator()(const BlockingWitness& w) const {
            return {{"type", "blocking"}, {"profile", profile_json(w.profile)}, {"blocking", to_json(w.blocking)}};
        }
        Json operator()(const ControlWitness& w) const {
            Json out{{"type", "control"}, {"set", w.set.bits()}, {"agent", w.agent}};
            out["trigger"] = w.trigger.empty() ? Json(nullptr) : profile_json(w.trigger);
            out["violating"] = profile_json(w.violating);
            return out;
        }
        Json operator()(const PushUpWitness& w) const {
            return {{"type", "push_up"}, {"profile", profile_json(w.profile)}, {"pushed", profile_json(w.pushed)}};
        }
        Json operator()(const EnvyWitness& w) const {
            return {{"type", "envy"}, {"profile", profile_json(w.profile)}, {"allocation", to_json(w.allocation)},
                    {"envious", w.envious}, {"envied", w.envied}};
        }
    };
    return std::visit(Visitor{}, witness);
}

Json to_json(const PropertyReport& report) {
    Json out{{"property", report.property},
             {"passed", report.passed},
             {"applicable", report.applicable},
             {"profiles_checked", report.profiles_checked}};
    out["witness"] = report.witness ? to_json(*report.witness) : Json(nullptr);
    if (!report.all_witnesses.empty()) {
        Json all = Json::array();
        for (const auto& w : report.all_witnesses) all.push_back(to_json(w));
        out["all_witnesses"] = all;
    }
    return out;
}

CardinalInstance instance_from_json(const Json& j) {
    const auto& vals = field(j, "valuations");
    if (!vals.is_array()) bad("valuations must be an array");
    std::vector<std::vector<Rational>> valuations;
    for (const auto& row : vals) {
        if (!row.is_array()) bad("each valuation must be an array");
        std::vector<Rational> v;
        for (const auto& x : row) v.push_back(rational_from_json(x));
        valuations.push_back(std::move(v));
    }
    if (j.contains("n") && int_field(j, "n") != static_cast<int>(valuations.size())) bad("n does not match valuations");
    for (const auto& v : valuations)
        if (j.contains("m") && int_field(j, "m") != static_cast<int>(v.size())) bad("m does not match valuations");
    return CardinalInstance::from_values(std::move(valuations));
}

Json to_json(const CardinalInstance& instance) {
    Json vals = Json::array();
    for (const auto& v : instance.valuations) {
        Json row = Json::array();
        for (const auto& x : v) row.push_back(to_json(x));
        vals.push_back(row);
    }
    return {{"n", instance.agents()}, {"m", instance.goods()}, {"valuations", vals}};
}

Json to_json(const FairnessAudit& audit) {
    Json out{{"mechanism", audit.mechanism}, {"audit", audit.audit}, {"instances_tested", audit.instances_tested}};
    if (audit.audit == "rho_mms") {
        out["worst_ratio"] = ratio_json(audit.worst_ratio);
        out["worst"] = audit.worst ? observation_json(*audit.worst) : Json(nullptr);
    } else {
        Json violations = Json::array();
        for (const auto& v : audit.ef1_violations)
            violations.push_back({{"instance_index", v.instance_index},
                                  {"family", std::string(to_string(v.family))},
                                  {"envious", v.envious},
                                  {"envied", v.envied},
                                  {"allocation", to_json(v.allocation)},
                                  {"instance", to_json(v.instance)}});
        out["violation_count"] = audit.ef1_violations.size();
        out["ef1_violations"] = violations;
    }
    return out;
}

Json to_json(const CharacterizationReport& report) {
    Json family = Json::array();
    for (const auto& qo : report.serial_quota_family) family.push_back(to_json(qo));
    Json satisfying = Json::array();
    for (const auto& r : report.recognized) satisfying.push_back(r ? to_json(*r) : Json(nullptr));
    Json out{{"n", report.n},
             {"m", report.m},
             {"class", report.class_tag},
             {"partition_only", report.partition_only},
             {"tables_checked", report.tables_checked},
             {"satisfying_count", report.satisfying.size()},
             {"satisfying", satisfying},
             {"serial_quota_family", family}};
    out["verdict"] = report.counterexample ? "counterexample_found" : report.sets_equal ? "sets_equal" : "family_mismatch";
    out["counterexample"] = report.counterexample ? to_json(*report.counterexample) : Json(nullptr);
    return out;
}

Json to_json(const MutationReport& report) {
    Json out{{"mutants", report.mutants}, {"survivors", report.survivors}, {"passed", report.report.passed}};
    out["survivor"] = report.survivor ? to_json(*report.survivor) : Json(nullptr);
    return out;
}

Json parse(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        bad(std::string("malformed JSON: ") + e.what());
    }
}

Json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

}  // namespace sqm::io
