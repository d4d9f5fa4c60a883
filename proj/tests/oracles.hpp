#pragma once

// Brute-force reference implementations, written independently of the library's fast
// paths. They are slow on purpose and only used at tiny sizes.

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "sqm/error.hpp"
#include "sqm/mechanism.hpp"
#include "sqm/preference.hpp"

namespace oracle {

using sqm::GoodSet;
using sqm::Preference;
using sqm::Rational;

inline std::vector<GoodSet> subsets(GoodSet s) {
    std::vector<GoodSet> out;
    for (std::uint32_t b = 0; b < (1U << 16); ++b) {
        const GoodSet t(static_cast<GoodSet::Bits>(b));
        if (t.subset_of(s)) out.push_back(t);
        if (b >= s.bits()) break;
    }
    return out;
}

/// Literal definition: for every A ⊊ B ⊆ s, A ∪ (M \ s) ≺ B.
inline bool strongly_desires(const Preference& p, GoodSet s) {
    const auto rest = p.universe() - s;
    for (auto b : subsets(s))
        for (auto a : subsets(b))
            if (a != b && !p.prefers(b, a | rest)) return false;
    return true;
}

/// Every ordering of the 2^m subsets that is increasing along strict inclusion, as rank tables.
inline std::vector<std::vector<std::uint16_t>> monotone_orders(int m) {
    const int size = 1 << m;
    std::vector<int> order(static_cast<std::size_t>(size));
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::vector<std::uint16_t>> out;
    do {
        std::vector<std::uint16_t> rank(static_cast<std::size_t>(size));
        for (int pos = 0; pos < size; ++pos) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = static_cast<std::uint16_t>(pos);
        bool ok = true;
        for (int s = 0; s < size && ok; ++s)
            for (int t = 0; t < size && ok; ++t)
                if (s != t && (s & t) == s && rank[static_cast<std::size_t>(s)] > rank[static_cast<std::size_t>(t)]) ok = false;
        if (ok) out.push_back(rank);
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

inline Rational sum(const std::vector<Rational>& v, GoodSet s) {
    Rational total(0);
    for (int g : s.goods()) total += v[static_cast<std::size_t>(g)];
    return total;
}

/// Maximin share over all n^m labeled assignments.
inline Rational mms(const std::vector<Rational>& v, int n) {
    const int m = static_cast<int>(v.size());
    std::size_t total = 1;
    for (int g = 0; g < m; ++g) total *= static_cast<std::size_t>(n);
    Rational best(-1);
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<Rational> parts(static_cast<std::size_t>(n), Rational(0));
        auto c = code;
        for (int g = 0; g < m; ++g) {
            parts[c % static_cast<std::size_t>(n)] += v[static_cast<std::size_t>(g)];
            c /= static_cast<std::size_t>(n);
        }
        best = std::max(best, *std::min_element(parts.begin(), parts.end()));
    }
    return best;
}

/// Every allocation (goods may be unassigned), as bundle vectors.
inline std::vector<sqm::Allocation> all_allocations(int n, int m) {
    std::size_t total = 1;
    for (int g = 0; g < m; ++g) total *= static_cast<std::size_t>(n + 1);
    std::vector<sqm::Allocation> out;
    for (std::size_t code = 0; code < total; ++code) {
        sqm::Allocation a(n);
        auto c = code;
        for (int g = 0; g < m; ++g) {
            const auto owner = static_cast<int>(c % static_cast<std::size_t>(n + 1));
            c /= static_cast<std::size_t>(n + 1);
            if (owner < n) a[owner] = a[owner].with(g);
        }
        out.push_back(a);
    }
    return out;
}

inline bool pareto_dominated(const sqm::Allocation& alloc, const sqm::Profile& profile) {
    const int n = alloc.agents();
    const int m = profile.front().goods();
    for (const auto& b : all_allocations(n, m)) {
        bool weak = true;
        bool strict = false;
        for (int i = 0; i < n; ++i) {
            const auto& p = profile[static_cast<std::size_t>(i)];
            if (p.prefers(alloc[i], b[i])) weak = false;
            if (p.prefers(b[i], alloc[i])) strict = true;
        }
        if (weak && strict) return true;
    }
    return false;
}

/// Any strictly improving single-good trading cycle, by trying every ordered agent
/// sequence of length >= 2 and every choice of one good per agent.
inline bool improving_cycle_exists(const sqm::Allocation& alloc, const sqm::Profile& profile) {
    const int n = alloc.agents();
    std::vector<int> agents(static_cast<std::size_t>(n));
    std::iota(agents.begin(), agents.end(), 0);
    bool found = false;
    std::function<void(std::vector<int>&, std::vector<bool>&)> extend = [&](std::vector<int>& seq, std::vector<bool>& used) {
        if (found) return;
        if (seq.size() >= 2) {
            // choose one good from each participant
            std::function<void(std::size_t, std::vector<int>&)> pick = [&](std::size_t j, std::vector<int>& goods) {
                if (found) return;
                if (j == seq.size()) {
                    bool all = true;
                    for (std::size_t t = 0; t < seq.size() && all; ++t) {
                        const int agent = seq[t];
                        const int give = goods[t];
                        const int get = goods[(t + seq.size() - 1) % seq.size()];
                        const auto after = alloc[agent].without(give).with(get);
                        all = profile[static_cast<std::size_t>(agent)].prefers(after, alloc[agent]);
                    }
                    found = all;
                    return;
                }
                for (int g : alloc[seq[j]].goods()) {
                    goods.push_back(g);
                    pick(j + 1, goods);
                    goods.pop_back();
                }
            };
            std::vector<int> goods;
            pick(0, goods);
        }
        for (int a = 0; a < n; ++a) {
            if (used[static_cast<std::size_t>(a)]) continue;
            used[static_cast<std::size_t>(a)] = true;
            seq.push_back(a);
            extend(seq, used);
            seq.pop_back();
            used[static_cast<std::size_t>(a)] = false;
        }
    };
    std::vector<int> seq;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    extend(seq, used);
    return found;
}

/// Serial dictatorship with quotas, by scanning every candidate subset of the right size.
inline sqm::Allocation serial_quota(const std::vector<int>& q, const std::vector<int>& p, const sqm::Profile& profile) {
    const int n = static_cast<int>(q.size());
    const int m = profile.front().goods();
    sqm::Allocation out(n);
    GoodSet remaining = GoodSet::full(m);
    for (int i = 0; i < n; ++i) {
        const auto& pref = profile[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])];
        std::optional<GoodSet> best;
        for (auto t : subsets(remaining))
            if (t.size() <= q[static_cast<std::size_t>(i)] && (!best || pref.prefers(t, *best))) best = t;
        out[p[static_cast<std::size_t>(i)]] = *best;
        remaining -= *best;
    }
    return out;
}

}  // namespace oracle

/// Asserts that `expr` throws sqm::Error of the given kind.
#define CHECK_THROWS_KIND(expr, expected)                                  \
    do {                                                                   \
        bool thrown_ = false;                                              \
        try {                                                              \
            (void)(expr);                                                  \
        } catch (const sqm::Error& e_) {                                   \
            thrown_ = true;                                                \
            CHECK(e_.kind() == (expected));                                \
        }                                                                  \
        CHECK_MESSAGE(thrown_, "expected sqm::Error from " #expr);         \
    } while (false)
