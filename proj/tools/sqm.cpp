// Command-line front end: check, verify, fairness, reproduce-paper.
// Exit codes: 0 pass, 1 violation found, 2 usage or limit error.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "sqm/error.hpp"
#include "sqm/fairness.hpp"
#include "sqm/io.hpp"
#include "sqm/properties.hpp"
#include "sqm/scenarios.hpp"
#include "sqm/search.hpp"

namespace {

using sqm::io::Json;

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kError = 2;

struct Common {
    unsigned threads = 0;
    bool no_timestamp = false;
    std::string out;
    std::string format = "json";
};

struct CheckArgs {
    std::string mech;
    std::string axioms = "truthful,nonbossy,neutral";
    bool collect_all = false;
};

struct VerifyArgs {
    int n = 2;
    int m = 2;
    std::string cls = "lex";
    std::string mode = "exhaustive";
    std::uint64_t trials = 1000;
    std::uint64_t seed = 7;
    bool allocations = false;
};

struct FairnessArgs {
    std::string audit;
    std::string q;
    std::string p;
    int n = 0;
    int m = 0;
    std::string family = "all";
    std::uint64_t count = 1000;
    std::uint64_t seed = 1;
    std::string instance;
};

struct ReproduceArgs {
    int criterion = 0;
    std::uint64_t seed = 1;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<int> int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    for (const auto& s : split(text, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(s, &used));
            if (used != s.size()) throw std::invalid_argument(s);
        } catch (const std::logic_error&) {
            throw sqm::Error(sqm::ErrorKind::InvalidInput, std::string("malformed ") + what + " \"" + text + "\"");
        }
    }
    return out;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ss;
    ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
}

void emit(const Common& common, const std::string& command, Json body, const std::string& table) {
    Json doc{{"command", command}};
    if (!common.no_timestamp) doc["generated_at"] = utc_now();
    for (auto& [k, v] : body.items()) doc[k] = std::move(v);
    const auto text = common.format == "table" ? table : doc.dump(2) + "\n";
    if (common.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(common.out);
    if (!file) throw sqm::Error(sqm::ErrorKind::InvalidInput, "cannot write " + common.out);
    file << doc.dump(2) << "\n";
    if (common.format == "table") std::cout << table;
}

const char* verdict(bool passed) { return passed ? "PASS" : "FAIL"; }

int cmd_check(const CheckArgs& args, const Common& common) {
    const auto descriptor = !args.mech.empty() && args.mech.front() == '{' ? sqm::io::parse(args.mech)
                                                                            : sqm::io::load_file(args.mech);
    const auto mech = sqm::io::mechanism_from_json(descriptor);
    sqm::CheckOptions opts;
    opts.threads = common.threads;
    opts.collect_all = args.collect_all;

    Json reports = Json::array();
    std::ostringstream table;
    bool all = true;
    for (const auto& axiom : split(args.axioms, ',')) {
        sqm::PropertyReport r;
        if (axiom == "truthful") r = sqm::check_truthful(mech, opts);
        else if (axiom == "nonbossy" || axiom == "non_bossy") r = sqm::check_non_bossy(mech, opts);
        else if (axiom == "neutral") r = sqm::check_neutral(mech, opts);
        else if (axiom == "partition") r = sqm::check_partition(mech, opts);
        else if (axiom == "pareto") r = sqm::check_pareto_efficient(mech, opts);
        else if (axiom == "push_up") r = sqm::check_push_up_invariance(mech);
        else if (axiom == "control_claim") r = sqm::check_control_claim(mech);
        else throw sqm::Error(sqm::ErrorKind::InvalidInput, "unknown axiom \"" + axiom + "\"");
        all = all && r.passed;
        table << std::left << std::setw(20) << r.property << verdict(r.passed) << "  (" << r.profiles_checked
              << " profiles)\n";
        reports.push_back(sqm::io::to_json(r));
    }
    emit(common, "check", {{"mechanism", sqm::io::to_json(mech)}, {"passed", all}, {"reports", reports}}, table.str());
    return all ? kPass : kViolation;
}

int cmd_verify(const VerifyArgs& args, const Common& common) {
    if (args.n < 1 || args.m < 0) throw sqm::Error(sqm::ErrorKind::InvalidInput, "need --n >= 1 and --m >= 0");
    const auto cls = sqm::io::class_from_json(Json(args.cls), args.m);
    if (!cls->enumerable()) throw sqm::Error(sqm::ErrorKind::NotEnumerable, "verification needs an enumerable class");
    std::ostringstream table;
    if (args.mode == "exhaustive") {
        const auto report = sqm::verify_characterization(args.n, cls, !args.allocations);
        const auto body = sqm::io::to_json(report);
        table << "tables checked: " << report.tables_checked << "\nsatisfying: " << report.satisfying.size()
              << "\nserial-quota family: " << report.serial_quota_family.size()
              << "\nverdict: " << body.at("verdict").get<std::string>() << "\n";
        emit(common, "verify", {{"mode", "exhaustive"}, {"report", body}}, table.str());
        return report.sets_equal ? kPass : kViolation;
    }
    if (args.mode != "mutate") throw sqm::Error(sqm::ErrorKind::InvalidInput, "--mode must be exhaustive or mutate");
    if (args.allocations) throw sqm::Error(sqm::ErrorKind::InvalidInput, "mutation mode only covers partition mechanisms");
    Json bases = Json::array();
    std::uint64_t mutants = 0;
    std::uint64_t survivors = 0;
    std::uint64_t seed = args.seed;
    for (const auto& base : sqm::enumerate_q(args.n, args.m, true)) {
        sqm::MutationOptions opts;
        opts.trials = args.trials;
        opts.seed = seed++;
        const auto r = sqm::mutate_and_falsify(base, cls, opts);
        mutants += r.mutants;
        survivors += r.survivors;
        auto entry = sqm::io::to_json(r);
        entry["base"] = sqm::io::to_json(base);
        entry["seed"] = opts.seed;
        bases.push_back(entry);
    }
    table << "mutants: " << mutants << "\nsurvivors: " << survivors << "\n";
    emit(common, "verify",
         {{"mode", "mutate"}, {"n", args.n}, {"m", args.m}, {"class", args.cls}, {"mutants", mutants},
          {"survivors", survivors}, {"passed", survivors == 0}, {"bases", bases}},
         table.str());
    return survivors == 0 ? kPass : kViolation;
}

std::vector<sqm::InstanceFamily> families(const std::string& text) {
    if (text == "all")
        return {sqm::InstanceFamily::Random, sqm::InstanceFamily::IdenticalGoods, sqm::InstanceFamily::Targeted};
    std::vector<sqm::InstanceFamily> out;
    for (const auto& f : split(text, ',')) {
        if (f == "random") out.push_back(sqm::InstanceFamily::Random);
        else if (f == "identical") out.push_back(sqm::InstanceFamily::IdenticalGoods);
        else if (f == "targeted") out.push_back(sqm::InstanceFamily::Targeted);
        else throw sqm::Error(sqm::ErrorKind::InvalidInput, "unknown family \"" + f + "\" (random, identical, targeted, all)");
    }
    return out;
}

int cmd_fairness(const FairnessArgs& args, const Common& common) {
    auto q = int_list(args.q, "--q");
    const int n = args.n > 0 ? args.n : static_cast<int>(q.size());
    if (static_cast<int>(q.size()) != n) throw sqm::Error(sqm::ErrorKind::InvalidInput, "--q needs one quota per agent");
    std::vector<int> p;
    if (args.p.empty()) {
        for (int i = 0; i < n; ++i) p.push_back(i);
    } else {
        p = int_list(args.p, "--p");
    }
    int m = args.m;
    if (m <= 0) m = std::accumulate(q.begin(), q.end(), 0);
    const auto cls = std::make_shared<const sqm::PreferenceClass>(sqm::PreferenceClass::strict_additive(m));
    const auto mech = sqm::Mechanism::serial_quota(sqm::canonicalize(q, p, m), cls);

    std::vector<sqm::LabeledInstance> instances;
    if (!args.instance.empty()) {
        const auto inst = sqm::io::instance_from_json(sqm::io::load_file(args.instance));
        if (inst.agents() != n || inst.goods() != m)
            throw sqm::Error(sqm::ErrorKind::InvalidInput, "instance size does not match --n/--m");
        instances.push_back({sqm::InstanceFamily::Random, inst});
    } else {
        instances = sqm::generate_instances({n, m, families(args.family), args.count, args.seed}, &mech);
    }

    const auto& sq = std::get<sqm::mech::SerialQuota>(mech.variant()).qo;
    Json body{{"q", sq.q}, {"p", sq.p}, {"n", n}, {"m", m}, {"seed", args.seed}};
    std::ostringstream table;
    bool ok = false;
    if (args.audit == "mms") {
        const auto audit = sqm::rho_mms_audit(mech, instances);
        const auto bound = sqm::approximation_bound(n, m);
        ok = audit.worst_ratio >= bound;
        body["bound"] = sqm::io::ratio_json(bound);
        body["meets_bound"] = ok;
        body["audit"] = sqm::io::to_json(audit);
        table << "instances: " << audit.instances_tested << "\nworst ratio: " << sqm::to_string(audit.worst_ratio)
              << "\nbound: " << sqm::to_string(bound) << "\n";
    } else {
        const auto audit = sqm::ef1_audit(mech, instances);
        ok = audit.ef1_violations.empty();
        body["quota_feasible"] = sqm::ef1_quota_feasibility(sq.q);
        body["audit"] = sqm::io::to_json(audit);
        table << "instances: " << audit.instances_tested << "\nviolations: " << audit.ef1_violations.size()
              << "\nquota feasible: " << (sqm::ef1_quota_feasibility(sq.q) ? "yes" : "no") << "\n";
    }
    emit(common, "fairness " + args.audit, body, table.str());
    return ok ? kPass : kViolation;
}

int cmd_reproduce(const ReproduceArgs& args, const Common& common) {
    sqm::scenarios::AcceptanceOptions opts;
    opts.seed = args.seed;
    opts.threads = common.threads;
    std::vector<sqm::scenarios::CriterionResult> results;
    if (args.criterion == 0) {
        results = sqm::scenarios::run_all(opts);
    } else {
        if (args.criterion < 1 || args.criterion > sqm::scenarios::kCriterionCount)
            throw sqm::Error(sqm::ErrorKind::InvalidInput, "--criterion must be in 1..10");
        std::vector<sqm::scenarios::ReplayItem> log;
        results.push_back(sqm::scenarios::run_criterion(args.criterion, log, opts));
    }
    Json list = Json::array();
    std::ostringstream table;
    std::size_t passed = 0;
    for (const auto& r : results) {
        passed += r.passed;
        Json entry{{"criterion", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}};
        if (!common.no_timestamp) entry["seconds"] = r.seconds;
        list.push_back(entry);
        table << std::setw(2) << r.id << "  " << verdict(r.passed) << "  " << r.title << "\n      " << r.detail << "\n";
    }
    table << passed << "/" << results.size() << " criteria passed\n";
    emit(common, "reproduce-paper", {{"seed", args.seed}, {"criteria", list}, {"passed", passed == results.size()}},
         table.str());
    return passed == results.size() ? kPass : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial-quota mechanism verifier"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--threads", common.threads, "Worker threads (default: SQM_THREADS or all cores)");
    app.add_flag("--no-timestamp", common.no_timestamp, "Omit wall-clock fields so reports are byte-identical");
    app.add_option("-o,--out", common.out, "Write the JSON report to this file");
    app.add_option("--format", common.format, "json or table")->check(CLI::IsMember({"json", "table"}));

    CheckArgs check;
    auto* c = app.add_subcommand("check", "Run axiom checkers on a mechanism descriptor");
    c->add_option("--mech", check.mech, "Descriptor file, or inline JSON")->required();
    c->add_option("--axioms", check.axioms,
                  "Comma list: truthful, nonbossy, neutral, partition, pareto, push_up, control_claim");
    c->add_flag("--collect-all", check.collect_all, "Report every violating profile");

    VerifyArgs verify;
    auto* v = app.add_subcommand("verify", "Verify the characterization by enumeration or mutation");
    v->add_option("--n", verify.n)->required();
    v->add_option("--m", verify.m)->required();
    v->add_option("--class", verify.cls, "lex or strict_monotone");
    v->add_option("--mode", verify.mode, "exhaustive or mutate")->check(CLI::IsMember({"exhaustive", "mutate"}));
    v->add_option("--trials", verify.trials, "Mutants per serial-quota base");
    v->add_option("--seed", verify.seed);
    v->add_flag("--allocations", verify.allocations, "Allow unallocated goods (exhaustive mode)");

    FairnessArgs fair;
    auto* f = app.add_subcommand("fairness", "Audit a serial-quota mechanism for rho-MMS or EF1");
    f->add_option("audit", fair.audit, "mms or ef1")->required()->check(CLI::IsMember({"mms", "ef1"}));
    f->add_option("--q", fair.q, "Quota vector, e.g. 1,1,2")->required();
    f->add_option("--p", fair.p, "Picking order (default 0,1,...)");
    f->add_option("--n", fair.n);
    f->add_option("--m", fair.m, "Goods (default: sum of quotas)");
    f->add_option("--family", fair.family, "random, identical, targeted or all");
    f->add_option("--count", fair.count, "Random instances");
    f->add_option("--seed", fair.seed);
    f->add_option("--instance", fair.instance, "Audit a single instance JSON file instead");

    ReproduceArgs repro;
    auto* r = app.add_subcommand("reproduce-paper", "Run every acceptance criterion");
    r->add_option("--criterion", repro.criterion, "Run only this criterion (1-10)");
    r->add_option("--seed", repro.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    try {
        if (*c) return cmd_check(check, common);
        if (*v) return cmd_verify(verify, common);
        if (*f) return cmd_fairness(fair, common);
        if (*r) return cmd_reproduce(repro, common);
    } catch (const sqm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
