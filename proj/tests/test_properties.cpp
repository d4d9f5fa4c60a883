#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sqm/properties.hpp"
#include "sqm/random.hpp"
#include "sqm/search.hpp"

using namespace sqm;

namespace {

GoodSet set(std::initializer_list<int> goods) {
    GoodSet s;
    for (int g : goods) s = s.with(g);
    return s;
}

ClassPtr lex(int m) { return std::make_shared<const PreferenceClass>(PreferenceClass::lexicographic(m)); }
ClassPtr additive(int m) { return std::make_shared<const PreferenceClass>(PreferenceClass::strict_additive(m)); }

Profile same_lex(std::vector<int> order, int n) { return Profile(static_cast<std::size_t>(n), Preference::lexicographic(std::move(order))); }

CardinalInstance intro_instance() {
    return CardinalInstance::from_values(
        {{Rational(11), Rational(1001, 100), Rational(10)}, {Rational(10), Rational(101, 100), Rational(1)}});
}

Allocation random_allocation(Rng& rng, int n, int m) {
    Allocation a(n);
    for (int g = 0; g < m; ++g) {
        const auto owner = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n + 1)));
        if (owner < n) a[owner] = a[owner].with(g);
    }
    return a;
}

}  // namespace

TEST_CASE("serial quota satisfies the axiom triple") {
    for (const auto& [n, m] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}, {3, 3}, {2, 4}}) {
        const auto cls = lex(m);
        for (const auto& qo : enumerate_q(n, m, false)) {
            const auto mech = Mechanism::serial_quota(qo, cls);
            CHECK(check_truthful(mech).passed);
            CHECK(check_non_bossy(mech).passed);
            CHECK(check_neutral(mech).passed);
            CHECK(check_partition(mech).passed == (qo.total() == m));
        }
    }
}

TEST_CASE("truthfulness failures") {
    const auto nt = Mechanism::counter_non_truthful(2, lex(2));
    const auto r = check_truthful(nt);
    REQUIRE_FALSE(r.passed);
    const auto& w = std::get<DeviationWitness>(*r.witness);
    CHECK(w.profile[0].order_equal(w.profile[1]));
    CHECK(w.agent == 1);
    CHECK(replay(nt, r));

    const auto rr = Mechanism::round_robin(2, lex(4));
    const auto rr_report = check_truthful(rr);
    CHECK_FALSE(rr_report.passed);
    CHECK(replay(rr, rr_report));
    CHECK_THROWS_KIND(check_truthful(Mechanism::round_robin(2, additive(3))), ErrorKind::NotEnumerable);
}

TEST_CASE("non-bossiness") {
    const auto bossy = Mechanism::counter_bossy(3, lex(3));
    const auto r = check_non_bossy(bossy);
    REQUIRE_FALSE(r.passed);
    const auto& w = std::get<DeviationWitness>(*r.witness);
    CHECK(w.agent == 0);
    CHECK(bossy.apply(w.profile)[0].empty());
    CHECK(replay(bossy, r));

    // Two agents and full partitions force non-bossiness: every (2,2) partition table passes.
    const auto cls = lex(2);
    const std::vector<Allocation> choices{Allocation({GoodSet(), set({0, 1})}), Allocation({set({0}), set({1})}),
                                          Allocation({set({1}), set({0})}), Allocation({set({0, 1}), GoodSet()})};
    for (int code = 0; code < 256; ++code) {
        std::vector<Allocation> table;
        for (int p = 0, c = code; p < 4; ++p, c /= 4) table.push_back(choices[static_cast<std::size_t>(c % 4)]);
        CHECK(check_non_bossy(Mechanism::table(cls, 2, table)).passed);
    }
    CHECK(check_non_bossy(Mechanism::round_robin(2, lex(3))).passed);
}

TEST_CASE("neutrality") {
    const auto nn = Mechanism::counter_non_neutral(3, lex(3), 0, 1);
    const auto r = check_neutral(nn);
    REQUIRE_FALSE(r.passed);
    CHECK_FALSE(std::get<PermutationWitness>(*r.witness).pi.is_identity());
    CHECK(replay(nn, r));

    const auto cls = lex(2);
    const auto constant = Mechanism::table(cls, 2, std::vector<Allocation>(4, Allocation({set({0}), set({1})})));
    const auto c = check_neutral(constant);
    CHECK_FALSE(c.passed);
    CHECK(replay(constant, c));
}

TEST_CASE("each counterexample breaks exactly one axiom") {
    const auto cls = lex(3);
    struct Case {
        Mechanism mech;
        bool truthful;
        bool non_bossy;
        bool neutral;
    };
    const std::vector<Case> cases{{Mechanism::counter_non_truthful(2, lex(2)), false, true, true},
                                  {Mechanism::counter_non_truthful(2, cls), false, true, true},
                                  {Mechanism::counter_bossy(3, cls), true, false, true},
                                  {Mechanism::counter_non_neutral(3, cls, 0, 1), true, true, false},
                                  {Mechanism::counter_non_neutral(3, cls, 2, 0), true, true, false}};
    for (const auto& c : cases) {
        CHECK(check_truthful(c.mech).passed == c.truthful);
        CHECK(check_non_bossy(c.mech).passed == c.non_bossy);
        CHECK(check_neutral(c.mech).passed == c.neutral);
    }
}

TEST_CASE("partition check") {
    const auto cls = lex(3);
    CHECK(check_partition(Mechanism::serial_quota(canonicalize({1, 2}, {0, 1}, 3), cls)).passed);
    const auto partial = Mechanism::serial_quota(canonicalize({1, 1}, {0, 1}, 3), cls);
    const auto r = check_partition(partial);
    CHECK_FALSE(r.passed);
    CHECK(replay(partial, r));
    CHECK(check_partition(Mechanism::round_robin(2, cls)).passed);
}

TEST_CASE("pareto blocking agrees with brute force") {
    Rng rng(11);
    const auto cls = PreferenceClass::lexicographic(3);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 2 + static_cast<int>(uniform_index(rng, 2));
        Profile prof;
        for (int i = 0; i < n; ++i) prof.push_back(cls.member(uniform_index(rng, cls.size())));
        const auto alloc = random_allocation(rng, n, 3);
        const auto blocking = pareto_blocking(alloc, prof);
        CHECK(blocking.has_value() == oracle::pareto_dominated(alloc, prof));
    }
}

TEST_CASE("pareto efficiency examples") {
    for (const auto& qo : enumerate_q(3, 3, true)) CHECK(check_pareto_efficient(Mechanism::serial_quota(qo, lex(3))).passed);
    CHECK(check_pareto_efficient(Mechanism::serial_quota(canonicalize({3}, {0}, 3), lex(3))).passed);

    const auto mech = Mechanism::serial_quota(canonicalize({1, 2}, {0, 1}, 3), additive(3));
    const auto inst = intro_instance();
    const auto r = check_pareto_at(mech, inst.preferences);
    REQUIRE_FALSE(r.passed);
    CHECK(std::get<BlockingWitness>(*r.witness).blocking == Allocation({set({1, 2}), set({0})}));
    CHECK(replay(mech, r));
}

TEST_CASE("improving cycles agree with brute force") {
    Rng rng(5);
    const auto cls = PreferenceClass::lexicographic(4);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(uniform_index(rng, 2));
        Profile prof;
        for (int i = 0; i < n; ++i) prof.push_back(cls.member(uniform_index(rng, cls.size())));
        const auto alloc = random_allocation(rng, n, 4);
        const auto cycle = find_improving_cycle(alloc, prof);
        CHECK(cycle.has_value() == oracle::improving_cycle_exists(alloc, prof));
        if (cycle) {
            CHECK(is_strictly_improving(*cycle, alloc, prof));
            const auto after = augmented(alloc, *cycle);
            CHECK(after.disjoint());
            CHECK(after.allocated() == alloc.allocated());
        }
    }
}

TEST_CASE("improving cycle examples") {
    // The intro allocation is only blocked by swapping whole bundles, never by one-good trades.
    const auto inst = intro_instance();
    const Allocation intro({set({0}), set({1, 2})});
    CHECK_FALSE(find_improving_cycle(intro, inst.preferences).has_value());
    CHECK_FALSE(oracle::improving_cycle_exists(intro, inst.preferences));

    for (const auto& qo : enumerate_q(3, 4, false)) {
        const auto prof = same_lex({3, 1, 0, 2}, 3);
        CHECK_FALSE(find_improving_cycle(apply_serial_quota(qo, prof), prof).has_value());
    }
    CHECK_FALSE(find_improving_cycle(Allocation({set({0, 1})}), same_lex({1, 0}, 1)).has_value());

    // Two agents each holding the other's favorite.
    const Profile crossed{Preference::lexicographic({1, 0}), Preference::lexicographic({0, 1})};
    const auto cycle = find_improving_cycle(Allocation({set({0}), set({1})}), crossed);
    REQUIRE(cycle.has_value());
    CHECK(cycle->agents == std::vector<int>{0, 1});
}

TEST_CASE("pareto-efficient outputs have no improving cycle") {
    for (const auto& [n, m] : std::vector<std::pair<int, int>>{{2, 3}, {3, 3}}) {
        const auto cls = lex(m);
        for (const auto& qo : enumerate_q(n, m, true)) {
            const auto mech = Mechanism::serial_quota(qo, cls);
            REQUIRE(check_pareto_efficient(mech).passed);
            for (std::size_t idx = 0; idx < profile_count(cls->size(), n); ++idx) {
                const auto prof = index_to_profile(idx, *cls, n);
                CHECK_FALSE(find_improving_cycle(mech.apply(prof), prof).has_value());
            }
        }
    }
}

TEST_CASE("push-up invariance") {
    const auto cls = lex(3);
    for (const auto& qo : enumerate_q(2, 3, false)) {
        const auto mech = Mechanism::serial_quota(qo, cls);
        for (auto mode : {PushUpMode::Sampled, PushUpMode::Exhaustive, PushUpMode::OwnBundle}) {
            PushUpOptions opts;
            opts.mode = mode;
            const auto r = check_push_up_invariance(mech, opts);
            CHECK(r.passed);
            CHECK(r.applicable);
        }
    }
    const auto base = same_lex({0, 1, 2}, 1)[0];
    CHECK(is_push_up(base, base, set({0})));

    // The lemma's hypothesis fails here, and a push-up that breaks report equality changes the outcome.
    const auto nt = Mechanism::counter_non_truthful(2, lex(2));
    PushUpOptions exhaustive;
    exhaustive.mode = PushUpMode::Exhaustive;
    const auto r = check_push_up_invariance(nt, exhaustive);
    CHECK_FALSE(r.applicable);
    CHECK_FALSE(r.passed);
    CHECK(replay(nt, r));
}

TEST_CASE("control") {
    const auto cls = lex(3);
    const auto mech = Mechanism::serial_quota(canonicalize({2, 1}, {1, 0}, 3), cls);
    for (int s = 0; s < 8; ++s) {
        const GoodSet target(static_cast<GoodSet::Bits>(s));
        // The first picker controls exactly the sets no larger than her quota.
        CHECK(controls(mech, 1, target).passed == (target.size() <= 2));
    }
    CHECK(controls(mech, 0, GoodSet()).passed);
    const auto r = controls(mech, 1, GoodSet::full(3));
    CHECK_FALSE(r.passed);
    CHECK(replay(mech, r));
}

TEST_CASE("control claim") {
    for (const auto& qo : enumerate_q(3, 3, false)) CHECK(check_control_claim(Mechanism::serial_quota(qo, lex(3))).passed);

    const auto bossy = Mechanism::counter_bossy(3, lex(3));
    const auto b = check_control_claim(bossy);
    REQUIRE_FALSE(b.passed);
    CHECK(std::get<ControlWitness>(*b.witness).set.size() == 1);
    CHECK(replay(bossy, b));

    const auto nn = Mechanism::counter_non_neutral(3, lex(3), 0, 1);
    const auto n = check_control_claim(nn);
    REQUIRE_FALSE(n.passed);
    CHECK(std::get<ControlWitness>(*n.witness).set == set({0}));
    CHECK(replay(nn, n));

    const auto nt = Mechanism::counter_non_truthful(2, lex(2));
    const auto t = check_control_claim(nt);
    CHECK_FALSE(t.passed);
    CHECK(replay(nt, t));
}

TEST_CASE("consecutive allocations") {
    const auto order = Preference::lexicographic({0, 1, 2});
    CHECK(check_consecutive(Allocation({set({0}), set({1, 2})}), order));
    CHECK_FALSE(check_consecutive(Allocation({set({0, 2}), set({1})}), order));
    CHECK(check_consecutive(Allocation({set({1}), set({0})}), order));
    CHECK_FALSE(check_consecutive(Allocation({set({1}), set({2})}), order));
    CHECK_THROWS_KIND(check_consecutive(Allocation({set({0}), set({1})}), Preference::from_ranks({0, 2, 1, 3})),
                      ErrorKind::UnsupportedPreference);
    for (const auto& qo : enumerate_q(3, 4, false)) {
        const auto prof = same_lex({2, 3, 0, 1}, 3);
        CHECK(check_consecutive(apply_serial_quota(qo, prof), prof[0]));
    }
}

TEST_CASE("collected witnesses all replay") {
    CheckOptions all;
    all.collect_all = true;
    const auto bossy = Mechanism::counter_bossy(3, lex(3));
    const auto r = check_non_bossy(bossy, all);
    CHECK(r.all_witnesses.size() > 1);
    for (const auto& w : r.all_witnesses) {
        PropertyReport single = r;
        single.witness = w;
        CHECK(replay(bossy, single));
    }
    // A fabricated witness must not replay.
    PropertyReport fake = r;
    fake.witness = DeviationWitness{index_to_profile(0, bossy.domain(), 3), 2, bossy.domain().member(0)};
    CHECK_FALSE(replay(bossy, fake));
}

TEST_CASE("witnesses do not depend on the thread count") {
    const auto rr = Mechanism::round_robin(3, lex(4));
    CheckOptions one;
    one.threads = 1;
    CheckOptions many;
    many.threads = 4;
    const auto a = check_truthful(rr, one);
    const auto b = check_truthful(rr, many);
    REQUIRE_FALSE(a.passed);
    CHECK(a.profiles_checked == b.profiles_checked);
    const auto& wa = std::get<DeviationWitness>(*a.witness);
    const auto& wb = std::get<DeviationWitness>(*b.witness);
    CHECK(wa.agent == wb.agent);
    CHECK(profile_index(wa.profile, rr.domain()) == profile_index(wb.profile, rr.domain()));
}
