#include "sqm/scenarios.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>

#include "sqm/fairness.hpp"
#include "sqm/properties.hpp"
#include "sqm/random.hpp"
#include "sqm/search.hpp"

namespace sqm::scenarios {

namespace {

ClassPtr lex(int m) { return std::make_shared<const PreferenceClass>(PreferenceClass::lexicographic(m)); }
ClassPtr additive(int m) { return std::make_shared<const PreferenceClass>(PreferenceClass::strict_additive(m)); }

QuotaOrdering identity_order(std::vector<int> q) {
    QuotaOrdering qo;
    qo.p.resize(q.size());
    std::iota(qo.p.begin(), qo.p.end(), 0);
    qo.q = std::move(q);
    return qo;
}

void log_report(std::vector<ReplayItem>& log, int criterion, const Mechanism& mech, const PropertyReport& report,
                const std::string& label) {
    log.push_back({criterion, label + " " + report.property, [mech, report] { return replay(mech, report); }});
}

CriterionResult forward(const AcceptanceOptions& opts) {
    CheckOptions check;
    check.threads = opts.threads;
    struct Grid {
        int n;
        ClassPtr cls;
    };
    const auto monotone = std::make_shared<const PreferenceClass>(PreferenceClass::strict_monotone_all(3));
    const std::vector<Grid> grids{{2, lex(2)}, {2, lex(3)}, {2, lex(4)}, {3, lex(3)}, {3, lex(4)}, {2, monotone}};
    std::size_t checked = 0;
    std::vector<std::string> failures;
    for (const auto& g : grids)
        for (const auto& qo : enumerate_q(g.n, g.cls->goods(), false)) {
            const auto mech = Mechanism::serial_quota(qo, g.cls);
            ++checked;
            for (auto* check_fn : {&check_truthful, &check_non_bossy, &check_neutral})
                if (!check_fn(mech, check).passed) failures.push_back(qo.to_string());
        }
    std::ostringstream detail;
    detail << checked << " serial-quota mechanisms over 6 grids, " << failures.size() << " axiom failures";
    return {1, "serial-quota mechanisms are truthful, non-bossy and neutral", failures.empty(), detail.str()};
}

CriterionResult reverse_exhaustive(std::vector<ReplayItem>& log) {
    CharacterizationOptions copts;
    copts.keep_rejections = true;
    const auto report = verify_characterization(2, lex(2), true, copts);
    for (const auto& [mech, failure] : report.rejections) log_report(log, 2, mech, failure, "rejected table");
    const bool ok = report.tables_checked == 256 && report.satisfying.size() == 4 && report.sets_equal;
    std::ostringstream detail;
    detail << report.tables_checked << " tables, " << report.satisfying.size() << " satisfying, family size "
           << report.serial_quota_family.size() << (report.sets_equal ? ", sets equal" : ", sets differ");
    return {2, "(2,2) partition tables: satisfying set equals the serial-quota family", ok, detail.str()};
}

CriterionResult mutation(std::vector<ReplayItem>& log, const AcceptanceOptions& opts) {
    struct Size {
        int n;
        int m;
        std::uint64_t trials;
    };
    bool ok = true;
    std::ostringstream detail;
    for (const auto& size : {Size{2, 3, 1000}, Size{3, 3, 500}}) {
        const auto cls = lex(size.m);
        std::uint64_t mutants = 0;
        std::uint64_t survivors = 0;
        std::uint64_t seed = opts.seed;
        for (const auto& base : enumerate_q(size.n, size.m, true)) {
            MutationOptions mopts;
            mopts.trials = size.trials;
            mopts.seed = seed++;
            mopts.keep_failures = true;
            const auto r = mutate_and_falsify(base, cls, mopts);
            mutants += r.mutants;
            survivors += r.survivors;
            for (const auto& [mech, failure] : r.failures) log_report(log, 3, mech, failure, "mutant of " + base.to_string());
        }
        ok = ok && mutants >= 1500 && survivors == 0;
        detail << "(" << size.n << "," << size.m << "): " << mutants << " mutants, " << survivors << " survivors; ";
    }
    auto text = detail.str();
    text.resize(text.size() - 2);
    return {3, "single-cell mutants of serial-quota tables all break an axiom", ok, text};
}

CriterionResult pareto(std::vector<ReplayItem>& log, const AcceptanceOptions& opts) {
    CheckOptions check;
    check.threads = opts.threads;
    std::size_t checked = 0;
    std::size_t failures = 0;
    for (int n = 1; n <= 3; ++n)
        for (int m = 1; m <= 4; ++m) {
            const auto cls = lex(m);
            for (const auto& qo : enumerate_q(n, m, true)) {
                ++checked;
                if (!check_pareto_efficient(Mechanism::serial_quota(qo, cls), check).passed) ++failures;
            }
        }

    // Two agents, three goods: the first picker's single best good leaves both worse off
    // than swapping bundles.
    const auto mech = Mechanism::serial_quota(canonicalize({1, 2}, {0, 1}, 3), additive(3));
    const auto inst = CardinalInstance::from_values(
        {{Rational(11), Rational(1001, 100), Rational(10)}, {Rational(10), Rational(101, 100), Rational(1)}});
    const auto report = check_pareto_at(mech, inst.preferences);
    const auto alloc = mech.apply(inst.preferences);
    bool swap_found = false;
    if (!report.passed) {
        log_report(log, 4, mech, report, "intro instance");
        const auto& blocking = std::get<BlockingWitness>(*report.witness).blocking;
        swap_found = blocking == Allocation({alloc[1], alloc[0]});
    }
    std::ostringstream detail;
    detail << checked << " partition mechanisms Pareto-checked, " << failures << " failures; intro instance "
           << alloc.to_string() << (swap_found ? " blocked by the bundle swap" : " not blocked by the swap");
    return {4, "serial-quota partitions are Pareto-optimal; intro instance is blocked", failures == 0 && swap_found,
            detail.str()};
}

CriterionResult control(std::vector<ReplayItem>& log) {
    const auto cls3 = lex(3);
    std::size_t checked = 0;
    std::size_t failures = 0;
    for (const auto& qo : enumerate_q(3, 3, false)) {
        ++checked;
        if (!check_control_claim(Mechanism::serial_quota(qo, cls3)).passed) ++failures;
    }
    struct Counter {
        Mechanism mech;
        const char* breaks;
    };
    const std::vector<Counter> counters{{Mechanism::counter_non_truthful(2, lex(2)), property::kTruthful},
                                        {Mechanism::counter_bossy(3, cls3), property::kNonBossy},
                                        {Mechanism::counter_non_neutral(3, cls3, 0, 1), property::kNeutral}};
    bool counters_ok = true;
    std::ostringstream detail;
    detail << checked << " serial-quota mechanisms, " << failures << " control failures;";
    for (const auto& c : counters) {
        const auto claim = check_control_claim(c.mech);
        if (!claim.passed) log_report(log, 5, c.mech, claim, c.mech.kind_name());
        bool exact = true;
        for (const auto& axiom : {check_truthful(c.mech), check_non_bossy(c.mech), check_neutral(c.mech)}) {
            const bool designated = axiom.property == c.breaks;
            if (axiom.passed == designated) exact = false;
            if (!axiom.passed) log_report(log, 5, c.mech, axiom, c.mech.kind_name());
        }
        counters_ok = counters_ok && !claim.passed && exact;
        detail << " " << c.mech.kind_name() << (claim.passed ? " claim holds" : " claim refuted")
               << (exact ? ", fails only " : ", does not fail only ") << c.breaks << ";";
    }
    auto text = detail.str();
    text.pop_back();
    return {5, "control claim holds for serial quota and fails for the counterexamples", failures == 0 && counters_ok,
            text};
}

CriterionResult approximation(std::vector<ReplayItem>& log, const AcceptanceOptions& opts) {
    bool ok = true;
    std::ostringstream detail;
    for (const auto& [n, m] : std::vector<std::pair<int, int>>{{2, 4}, {2, 6}, {3, 6}}) {
        std::vector<int> q(static_cast<std::size_t>(n), 1);
        q.back() = m - n + 1;
        const auto mech = Mechanism::serial_quota(identity_order(q), additive(m));
        const auto bound = approximation_bound(n, m);

        InstanceSpec identical{n, m, {InstanceFamily::IdenticalGoods}, 0, opts.seed};
        const auto tight = rho_mms_audit(mech, generate_instances(identical));
        const auto rel = to_double(tight.worst_ratio - bound) / to_double(bound);
        if (tight.worst) log.push_back({6, "identical-goods observation", [mech, obs = *tight.worst] { return replay(mech, obs); }});

        InstanceSpec random{n, m, {InstanceFamily::Random}, 10'000, opts.seed};
        const auto sampled = rho_mms_audit(mech, generate_instances(random));
        if (sampled.worst) log.push_back({6, "random worst observation", [mech, obs = *sampled.worst] { return replay(mech, obs); }});

        const bool here = std::abs(rel) <= 1e-3 && sampled.worst_ratio >= bound;
        ok = ok && here;
        detail << "(" << n << "," << m << ") bound " << to_string(bound) << ": identical " << to_double(tight.worst_ratio)
               << ", random min " << to_double(sampled.worst_ratio) << " over " << sampled.instances_tested << "; ";
    }
    auto text = detail.str();
    text.resize(text.size() - 2);
    return {6, "(1,...,1,m-n+1) attains exactly the rho-MMS bound", ok, text};
}

CriterionResult ef1(std::vector<ReplayItem>& log, const AcceptanceOptions& opts) {
    constexpr std::size_t kLoggedPerVector = 20;
    std::size_t vectors = 0;
    std::size_t agree = 0;
    std::size_t feasible = 0;
    std::size_t maximal_instances = 0;
    for (int n = 1; n <= 3; ++n)
        for (int m = 1; m <= 5; ++m) {
            std::set<std::vector<int>> seen;
            for (const auto& pair : enumerate_q(n, m, false)) {
                if (!seen.insert(pair.q).second) continue;
                const auto mech = Mechanism::serial_quota(identity_order(pair.q), additive(m));
                const bool expected = ef1_quota_feasibility(pair.q);
                InstanceSpec spec{n, m, {InstanceFamily::Random, InstanceFamily::IdenticalGoods, InstanceFamily::Targeted},
                                  expected ? 10'000u : 1'000u, opts.seed};
                const auto audit = ef1_audit(mech, generate_instances(spec, &mech));
                for (std::size_t i = 0; i < audit.ef1_violations.size() && i < kLoggedPerVector; ++i)
                    log.push_back({7, "ef1 violation", [mech, v = audit.ef1_violations[i]] { return replay(mech, v); }});
                const bool verdict = audit.ef1_violations.empty();
                ++vectors;
                feasible += expected;
                agree += verdict == expected;
                std::vector<int> maximal(static_cast<std::size_t>(n), 1);
                maximal.back() = 2;
                if (n >= 2 && pair.q == maximal && verdict) maximal_instances += audit.instances_tested;
            }
        }
    std::ostringstream detail;
    detail << agree << "/" << vectors << " quota vectors agree with the feasibility region (" << feasible
           << " feasible); (1,...,1,2) passed " << maximal_instances << " instances";
    return {7, "EF1 audit verdict matches the quota feasibility region", agree == vectors, detail.str()};
}

CriterionResult push_up(const AcceptanceOptions& opts) {
    std::size_t checked = 0;
    std::size_t failures = 0;
    for (const auto& [n, m] : std::vector<std::pair<int, int>>{{2, 3}, {3, 3}}) {
        const auto cls = lex(m);
        for (const auto& qo : enumerate_q(n, m, false)) {
            const auto mech = Mechanism::serial_quota(qo, cls);
            PushUpOptions sampled;
            sampled.trials = 1000;
            sampled.seed = opts.seed;
            const auto a = check_push_up_invariance(mech, sampled);
            PushUpOptions own;
            own.mode = PushUpMode::OwnBundle;
            const auto b = check_push_up_invariance(mech, own);
            ++checked;
            if (!a.passed || !b.passed || !a.applicable) ++failures;
        }
    }
    std::ostringstream detail;
    detail << checked << " mechanisms, 1000 sampled push-ups plus every own-bundle push-up each, " << failures
           << " failures";
    return {8, "push-ups of own bundles leave the allocation unchanged", failures == 0, detail.str()};
}

CriterionResult cardinal(const AcceptanceOptions& opts) {
    Rng rng(opts.seed);
    std::size_t trials = 0;
    std::size_t mismatches = 0;
    for (; trials < 1000; ++trials) {
        const int n = static_cast<int>(uniform_int(rng, 2, 3));
        const int m = static_cast<int>(uniform_int(rng, 2, 5));
        std::vector<std::vector<Rational>> v;
        std::vector<std::vector<Rational>> w;
        for (int i = 0; i < n; ++i) {
            v.push_back(random_strict_values(rng, m));
            auto copy = v.back();
            if (uniform_index(rng, 2) == 0) {
                const Rational c(uniform_int(rng, 1, 1000), uniform_int(rng, 1, 1000));
                for (auto& x : copy) x *= c;
            } else {
                // Integer subset sums differ by at least 1, and the total shift stays below 1/2.
                for (auto& x : copy) x += Rational(uniform_int(rng, -999, 999), 2000 * m);
            }
            w.push_back(std::move(copy));
        }
        const auto a = CardinalInstance::from_values(std::move(v));
        const auto b = CardinalInstance::from_values(std::move(w));
        bool same_order = true;
        for (int i = 0; i < n; ++i)
            same_order = same_order && a.preferences[static_cast<std::size_t>(i)].order_equal(b.preferences[static_cast<std::size_t>(i)]);
        const auto family = enumerate_q(n, m, false);
        const auto mech = trials % 2 == 0
                              ? Mechanism::serial_quota(family[uniform_index(rng, family.size())], additive(m))
                              : Mechanism::round_robin(n, additive(m));
        if (!same_order || cardinal_apply(mech, a) != cardinal_apply(mech, b)) ++mismatches;
    }
    std::ostringstream detail;
    detail << trials << " valuation pairs with equal induced orders, " << mismatches << " mismatches";
    return {9, "equal induced preferences give equal allocations", mismatches == 0, detail.str()};
}

CriterionResult replay_all(std::vector<ReplayItem>& log, const AcceptanceOptions& opts) {
    if (log.empty())
        for (int id = 2; id <= 7; ++id) run_criterion(id, log, opts);
    std::map<int, std::pair<std::size_t, std::size_t>> tally;
    std::size_t reproduced = 0;
    for (const auto& item : log) {
        const bool ok = item.replay();
        reproduced += ok;
        auto& [hit, total] = tally[item.criterion];
        hit += ok;
        ++total;
    }
    std::ostringstream detail;
    detail << reproduced << "/" << log.size() << " witnesses reproduced (";
    bool first = true;
    for (const auto& [c, counts] : tally) {
        detail << (first ? "" : ", ") << "c" << c << " " << counts.first << "/" << counts.second;
        first = false;
    }
    detail << ")";
    return {10, "every emitted witness replays standalone", !log.empty() && reproduced == log.size(), detail.str()};
}

constexpr double kBudgets[] = {60, 1, 120, 60, 30, 60, 90, 30, 10, 60};

}  // namespace

CriterionResult run_criterion(int id, std::vector<ReplayItem>& log, const AcceptanceOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult result;
    switch (id) {
        case 1: result = forward(opts); break;
        case 2: result = reverse_exhaustive(log); break;
        case 3: result = mutation(log, opts); break;
        case 4: result = pareto(log, opts); break;
        case 5: result = control(log); break;
        case 6: result = approximation(log, opts); break;
        case 7: result = ef1(log, opts); break;
        case 8: result = push_up(opts); break;
        case 9: result = cardinal(opts); break;
        case 10: result = replay_all(log, opts); break;
        default: return {id, "unknown criterion", false, "criteria are numbered 1 to 10"};
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.budget_seconds = kBudgets[id - 1];
    return result;
}

std::vector<CriterionResult> run_all(const AcceptanceOptions& opts) {
    std::vector<ReplayItem> log;
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, log, opts));
    return out;
}

}  // namespace sqm::scenarios
