#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "sqm/preference_class.hpp"
#include "sqm/random.hpp"

using namespace sqm;

namespace {

GoodSet set(std::initializer_list<int> goods) {
    GoodSet s;
    for (int g : goods) s = s.with(g);
    return s;
}

std::vector<Preference> sample_prefs() {
    auto out = enumerate_class(ClassTag::StrictMonotoneAll, 3);
    for (auto& p : enumerate_class(ClassTag::Lexicographic, 3)) out.push_back(p);
    out.push_back(Preference::additive({Rational(11), Rational(1001, 100), Rational(10)}));
    out.push_back(Preference::additive({Rational(3), Rational(2), Rational(7, 2)}));
    return out;
}

}  // namespace

TEST_CASE("goodset algebra matches set semantics") {
    const auto a = set({0, 2});
    const auto b = set({1, 2});
    CHECK((a | b) == set({0, 1, 2}));
    CHECK((a & b) == set({2}));
    CHECK((a - b) == set({0}));
    CHECK(a.size() == 2);
    CHECK(GoodSet::full(3).bits() == 7);
    CHECK(a.within(3));
    CHECK_FALSE(set({3}).within(3));
    CHECK(set({2}).subset_of(a));
    CHECK(a.goods() == std::vector<int>{0, 2});
    CHECK(a.to_string() == "{g0,g2}");
}

TEST_CASE("permutations validate and compose") {
    CHECK_THROWS_KIND(Permutation({0, 0, 1}), ErrorKind::InvalidInput);
    const auto t = Permutation::transposition(3, 0, 2);
    CHECK(t(set({0})) == set({2}));
    CHECK(t.inverse().then(t).is_identity());
    CHECK(Permutation::all(3).size() == 6);
}

TEST_CASE("compare examples") {
    const auto lex = Preference::lexicographic({0, 1, 2});
    CHECK(lex.compare(set({0}), set({1, 2})) == Order::Greater);
    for (const auto& p : sample_prefs()) CHECK(p.compare(GoodSet(), set({0})) == Order::Less);
    const auto add = Preference::additive({Rational(11), Rational(1001, 100), Rational(10)});
    CHECK(add.compare(set({0}), set({1, 2})) == Order::Less);
    CHECK_THROWS_KIND(lex.compare(set({1}), set({1})), ErrorKind::IdenticalSets);
}

TEST_CASE("strictness totality and monotone consistency") {
    for (const auto& p : sample_prefs()) {
        const auto all = GoodSet::full(p.goods());
        for (auto s : oracle::subsets(all))
            for (auto t : oracle::subsets(all)) {
                if (s == t) continue;
                CHECK((p.compare(s, t) == Order::Greater) != (p.compare(t, s) == Order::Greater));
                if (s.subset_of(t)) CHECK(p.compare(s, t) == Order::Less);
            }
        CHECK(p.rank(GoodSet()) == 0);
        CHECK(p.rank(all) == (1U << p.goods()) - 1);
    }
}

TEST_CASE("demand examples and errors") {
    const auto lex = Preference::lexicographic({0, 1, 2});
    CHECK(lex.demand(GoodSet::full(3), 0) == GoodSet());
    CHECK(lex.demand(set({1, 2}), 1) == set({1}));
    const auto add = Preference::additive({Rational(11), Rational(1001, 100), Rational(10)});
    CHECK(add.demand(GoodSet::full(3), 1) == set({0}));
    CHECK_THROWS_KIND(lex.demand(set({1}), 2), ErrorKind::QuotaExceedsPool);
}

TEST_CASE("demand weakly beats every feasible subset") {
    for (const auto& p : sample_prefs())
        for (auto pool : oracle::subsets(GoodSet::full(p.goods())))
            for (int k = 0; k <= pool.size(); ++k) {
                const auto d = p.demand(pool, k);
                CHECK(d.size() == k);
                CHECK(d.subset_of(pool));
                for (auto t : oracle::subsets(pool))
                    if (t.size() <= k) CHECK(p.weakly_prefers(d, t));
            }
}

TEST_CASE("permuted preference examples") {
    const auto lex = Preference::lexicographic({0, 1});
    CHECK(lex.permuted(Permutation::identity(2)).structurally_equal(lex));
    const auto swapped = lex.permuted(Permutation::transposition(2, 0, 1));
    CHECK(swapped.is_lexicographic());
    CHECK(swapped.lex_order() == std::vector<int>{1, 0});
    const auto table = Preference::from_ranks({0, 2, 1, 3});
    CHECK(table.permuted(Permutation::transposition(2, 0, 1)).rank_table() == std::vector<std::uint16_t>{0, 1, 2, 3});
    const auto add = Preference::additive({Rational(3), Rational(2), Rational(7, 2)});
    const auto moved = add.permuted(Permutation({2, 0, 1}));
    CHECK(moved.values() == std::vector<Rational>{Rational(2), Rational(7, 2), Rational(3)});
}

TEST_CASE("permutation preserves comparisons and round-trips") {
    for (const auto& p : sample_prefs())
        for (const auto& pi : Permutation::all(p.goods())) {
            const auto q = p.permuted(pi);
            for (auto s : oracle::subsets(GoodSet::full(p.goods())))
                CHECK(q.rank(pi(s)) == p.rank(s));
            CHECK(q.permuted(pi.inverse()).order_equal(p));
        }
    Rng rng(3);
    const auto lex4 = enumerate_class(ClassTag::Lexicographic, 4);
    for (int trial = 0; trial < 50; ++trial) {
        auto map = Permutation::identity(4).map();
        shuffle(map, rng);
        const Permutation pi(map);
        const auto& p = lex4[uniform_index(rng, lex4.size())];
        CHECK(p.permuted(pi).permuted(pi.inverse()).order_equal(p));
    }
}

TEST_CASE("induced preference examples and agreement") {
    const auto lex = Preference::lexicographic({0, 1, 2});
    CHECK(lex.induced(GoodSet::full(3)).order_equal(lex));
    const auto sub = lex.induced(set({1, 2}));
    CHECK(sub.goods() == 2);
    CHECK(sub.order_equal(Preference::lexicographic({0, 1})));
    // (3,2,1) itself ties {g0} with {g1,g2}; (4,2,1) is the nearest strict vector.
    CHECK_THROWS_KIND(Preference::additive({Rational(3), Rational(2), Rational(1)}), ErrorKind::TieDetected);
    const auto add = Preference::additive({Rational(4), Rational(2), Rational(1)}).induced(set({0, 2}));
    CHECK(add.values() == std::vector<Rational>{Rational(4), Rational(1)});

    for (const auto& p : sample_prefs())
        for (auto w : oracle::subsets(GoodSet::full(p.goods()))) {
            const auto ind = p.induced(w);
            const auto goods = w.goods();
            auto dense = [&](GoodSet s) {
                GoodSet out;
                for (std::size_t i = 0; i < goods.size(); ++i)
                    if (s.contains(goods[i])) out = out.with(static_cast<int>(i));
                return out;
            };
            for (auto s : oracle::subsets(w))
                for (auto t : oracle::subsets(w))
                    if (s != t) CHECK(ind.prefers(dense(s), dense(t)) == p.prefers(s, t));
        }
}

TEST_CASE("strong desire examples") {
    const auto lex = Preference::lexicographic({0, 1, 2});
    CHECK(lex.strongly_desires(set({0})));
    CHECK(lex.strongly_desires(set({0, 1})));
    CHECK_FALSE(lex.strongly_desires(set({1})));
    CHECK(lex.strongly_desires(GoodSet()));
}

TEST_CASE("strong desire agrees with the literal definition") {
    auto prefs = sample_prefs();
    for (auto& p : enumerate_class(ClassTag::Lexicographic, 4)) prefs.push_back(p);
    for (const auto& p : prefs)
        for (auto s : oracle::subsets(GoodSet::full(p.goods()))) CHECK(p.strongly_desires(s) == oracle::strongly_desires(p, s));
}

TEST_CASE("lexicographic preferences strongly desire exactly their prefixes among chains") {
    for (int m = 1; m <= 4; ++m)
        for (const auto& p : enumerate_class(ClassTag::Lexicographic, m)) {
            GoodSet prefix;
            for (int g : p.lex_order()) {
                prefix = prefix.with(g);
                CHECK(p.strongly_desires(prefix));
            }
            for (int g = 0; g < m; ++g)
                CHECK(p.strongly_desires(GoodSet::single(g)) == (g == p.lex_order().front()));
        }
}

TEST_CASE("push-up examples") {
    const auto base = Preference::lexicographic({0, 1});
    CHECK(is_push_up(base, base, set({0})));
    for (const auto& c : enumerate_class(ClassTag::StrictMonotoneAll, 2)) CHECK(is_push_up(c, base, GoodSet::full(2)));
    CHECK_FALSE(is_push_up(Preference::lexicographic({1, 0}), base, set({0})));
}

TEST_CASE("lexicographic orders consistent with blocks") {
    const std::vector<GoodSet> a{set({0, 1}), set({2})};
    CHECK(lexicographic_consistent_with(a, 3).lex_order() == std::vector<int>{0, 1, 2});
    const std::vector<GoodSet> b{set({2}), set({0, 1})};
    CHECK(lexicographic_consistent_with(b, 3).lex_order() == std::vector<int>{2, 0, 1});
    const std::vector<GoodSet> c{GoodSet::full(4)};
    CHECK(lexicographic_consistent_with(c, 4).lex_order() == std::vector<int>{0, 1, 2, 3});
    const std::vector<GoodSet> overlap{set({0, 1}), set({1, 2})};
    CHECK_THROWS_KIND(lexicographic_consistent_with(overlap, 3), ErrorKind::InvalidPartition);
    const std::vector<GoodSet> missing{set({0})};
    CHECK_THROWS_KIND(lexicographic_consistent_with(missing, 3), ErrorKind::InvalidPartition);
}

TEST_CASE("class enumeration matches brute force") {
    CHECK(enumerate_class(ClassTag::Lexicographic, 3).size() == 6);
    CHECK(enumerate_class(ClassTag::Lexicographic, 0).size() == 1);
    CHECK(enumerate_class(ClassTag::Lexicographic, 1).size() == 1);
    for (int m = 0; m <= 3; ++m) {
        const auto expected = oracle::monotone_orders(m);
        const auto got = enumerate_class(ClassTag::StrictMonotoneAll, m);
        CHECK(got.size() == expected.size());
        std::set<std::vector<std::uint16_t>> a(expected.begin(), expected.end());
        std::set<std::vector<std::uint16_t>> b;
        for (const auto& p : got) b.insert(p.rank_table());
        CHECK(a == b);
    }
    CHECK(enumerate_class(ClassTag::StrictMonotoneAll, 2).size() == 2);
    CHECK(enumerate_class(ClassTag::StrictMonotoneAll, 3).size() == 48);
    CHECK_THROWS_KIND(enumerate_class(ClassTag::Lexicographic, 9), ErrorKind::EnumerationTooLarge);
    CHECK_THROWS_KIND(enumerate_class(ClassTag::StrictMonotoneAll, 4), ErrorKind::EnumerationTooLarge);
    CHECK_THROWS_KIND(enumerate_class(ClassTag::StrictAdditive, 3), ErrorKind::NotEnumerable);
}

TEST_CASE("additive validation") {
    CHECK_THROWS_KIND(Preference::additive({Rational(1), Rational(2), Rational(3)}), ErrorKind::TieDetected);
    CHECK_THROWS_KIND(Preference::additive({Rational(-1), Rational(2)}), ErrorKind::InvalidInput);
    CHECK_THROWS_KIND(Preference::from_ranks({0, 1, 1, 3}), ErrorKind::InvalidInput);
    CHECK_THROWS_KIND(Preference::from_ranks({0, 3, 1, 2}), ErrorKind::InvalidInput);
}

TEST_CASE("preference classes") {
    const auto lex = PreferenceClass::lexicographic(3);
    for (std::size_t i = 0; i < lex.size(); ++i) CHECK(lex.index_of(lex.member(i)) == i);
    CHECK(lex.contains(Preference::from_ranks(Preference::lexicographic({2, 1, 0}).rank_table())));
    CHECK_FALSE(lex.contains(Preference::additive({Rational(3), Rational(2), Rational(7, 2)})));

    const auto add = PreferenceClass::strict_additive(3);
    CHECK_FALSE(add.enumerable());
    CHECK(add.contains(Preference::additive({Rational(3), Rational(2), Rational(7, 2)})));
    CHECK_THROWS_KIND(add.size(), ErrorKind::NotEnumerable);

    // Lexicographic preferences alone are permutation-closed.
    CHECK_NOTHROW(PreferenceClass::explicit_list(3, enumerate_class(ClassTag::Lexicographic, 3)));
    auto partial = enumerate_class(ClassTag::Lexicographic, 3);
    partial.pop_back();
    CHECK_THROWS_KIND(PreferenceClass::explicit_list(3, partial), ErrorKind::InvalidDomain);
    auto not_closed = enumerate_class(ClassTag::Lexicographic, 3);
    not_closed.push_back(Preference::additive({Rational(3), Rational(2), Rational(7, 2)}));
    CHECK_THROWS_KIND(PreferenceClass::explicit_list(3, not_closed), ErrorKind::InvalidDomain);

    const auto sm = PreferenceClass::strict_monotone_all(3);
    for (const auto& pi : Permutation::all(3)) {
        const auto& action = sm.permutation_action(pi);
        for (std::size_t i = 0; i < sm.size(); ++i) CHECK(sm.member(action[i]).order_equal(sm.member(i).permuted(pi)));
    }
}

TEST_CASE("degenerate universes") {
    CHECK(PreferenceClass::lexicographic(0).size() == 1);
    CHECK(PreferenceClass::strict_monotone_all(1).size() == 1);
    const auto p = Preference::lexicographic({0});
    CHECK(p.demand(GoodSet::full(1), 1) == GoodSet::full(1));
}
