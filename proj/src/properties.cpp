#include "sqm/properties.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "sqm/error.hpp"
#include "sqm/parallel.hpp"
#include "sqm/random.hpp"

namespace sqm {

namespace {

/// A mechanism evaluated on every profile of its enumerable domain.
struct Tabulated {
    const Mechanism& mech;
    const PreferenceClass& cls;
    int n;
    int m;
    std::size_t k;
    std::size_t count;
    std::vector<GoodSet> cells;
    std::vector<const std::vector<std::uint16_t>*> ranks;
    std::vector<std::size_t> place;

    explicit Tabulated(const Mechanism& mechanism)
        : mech(mechanism), cls(mechanism.domain()), n(mechanism.agents()), m(mechanism.goods()), k(0), count(0) {
        if (!cls.enumerable()) throw Error(ErrorKind::NotEnumerable, "exhaustive checks need an enumerable domain");
        k = cls.size();
        count = profile_count(k, n);
        cells = mechanism.tabulate();
        for (const auto& p : cls.members()) ranks.push_back(&p.rank_table());
        place.assign(static_cast<std::size_t>(n), 1);
        for (int i = n - 2; i >= 0; --i)
            place[static_cast<std::size_t>(i)] = place[static_cast<std::size_t>(i + 1)] * k;
    }

    GoodSet cell(std::size_t idx, int agent) const { return cells[idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(agent)]; }
    std::size_t digit(std::size_t idx, int agent) const { return (idx / place[static_cast<std::size_t>(agent)]) % k; }
    std::size_t with_digit(std::size_t idx, int agent, std::size_t d) const {
        const auto p = place[static_cast<std::size_t>(agent)];
        return idx - digit(idx, agent) * p + d * p;
    }
    bool same_allocation(std::size_t a, std::size_t b) const {
        for (int i = 0; i < n; ++i)
            if (cell(a, i) != cell(b, i)) return false;
        return true;
    }
    Allocation allocation(std::size_t idx) const {
        Allocation out(n);
        for (int i = 0; i < n; ++i) out[i] = cell(idx, i);
        return out;
    }
    Profile profile(std::size_t idx) const { return index_to_profile(idx, cls, n); }
};

/// Lowest violating profile index (or every one in collect-all mode), each turned into a witness.
template <typename Find, typename Make>
PropertyReport run_check(const char* name, std::size_t count, const CheckOptions& opts, Find&& find, Make&& make) {
    PropertyReport report;
    report.property = name;
    if (opts.collect_all) {
        for (std::size_t idx = 0; idx < count; ++idx)
            if (auto v = find(idx)) report.all_witnesses.push_back(make(idx, *v));
        report.profiles_checked = count;
        report.passed = report.all_witnesses.empty();
        if (!report.passed) report.witness = report.all_witnesses.front();
        return report;
    }
    const auto hit = parallel_find_first(count, [&](std::size_t idx) { return find(idx).has_value(); }, opts.threads);
    report.profiles_checked = hit ? *hit + 1 : count;
    if (hit) {
        report.passed = false;
        report.witness = make(*hit, *find(*hit));
    }
    return report;
}

std::vector<Permutation> neutrality_permutations(int m, std::uint64_t seed) {
    if (m <= 4) return Permutation::all(m);
    std::vector<Permutation> out;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) out.push_back(Permutation::transposition(m, a, b));
    Rng rng(seed);
    for (int t = 0; t < 100; ++t) {
        auto map = Permutation::identity(m).map();
        shuffle(map, rng);
        out.emplace_back(std::move(map));
    }
    return out;
}

std::vector<GoodSet> image_table(const Permutation& pi, int m) {
    std::vector<GoodSet> out(std::size_t{1} << m);
    for (std::size_t s = 0; s < out.size(); ++s) out[s] = pi(GoodSet(static_cast<GoodSet::Bits>(s)));
    return out;
}

/// Bundles of every assignment of goods to agents 0..n-1 or to "nobody" (index n).
std::vector<std::vector<GoodSet>> all_assignments(int n, int m) {
    std::size_t total = 1;
    for (int g = 0; g < m; ++g) {
        total *= static_cast<std::size_t>(n + 1);
        if (total > kMaxParetoAssignments) throw Error(ErrorKind::TooLarge, "too many allocations for brute-force Pareto check");
    }
    std::vector<std::vector<GoodSet>> out(total, std::vector<GoodSet>(static_cast<std::size_t>(n)));
    for (std::size_t code = 0; code < total; ++code) {
        auto c = code;
        for (int g = 0; g < m; ++g) {
            const auto owner = c % static_cast<std::size_t>(n + 1);
            c /= static_cast<std::size_t>(n + 1);
            if (owner < static_cast<std::size_t>(n)) out[code][owner] = out[code][owner].with(g);
        }
    }
    return out;
}

PropertyReport failed(const char* name, Witness w, std::uint64_t checked) {
    PropertyReport r;
    r.property = name;
    r.passed = false;
    r.witness = std::move(w);
    r.profiles_checked = checked;
    return r;
}

}  // namespace

PropertyReport check_truthful(const Mechanism& mech, const CheckOptions& opts) {
    const Tabulated t(mech);
    auto find = [&](std::size_t idx) -> std::optional<std::pair<int, std::size_t>> {
        for (int i = 0; i < t.n; ++i) {
            const auto d = t.digit(idx, i);
            const auto& rank = *t.ranks[d];
            const auto own = rank[t.cell(idx, i).bits()];
            for (std::size_t alt = 0; alt < t.k; ++alt) {
                if (alt == d) continue;
                if (rank[t.cell(t.with_digit(idx, i, alt), i).bits()] > own) return std::pair{i, alt};
            }
        }
        return std::nullopt;
    };
    auto make = [&](std::size_t idx, std::pair<int, std::size_t> v) -> Witness {
        return DeviationWitness{t.profile(idx), v.first, t.cls.member(v.second)};
    };
    return run_check(property::kTruthful, t.count, opts, find, make);
}

PropertyReport check_non_bossy(const Mechanism& mech, const CheckOptions& opts) {
    const Tabulated t(mech);
    auto find = [&](std::size_t idx) -> std::optional<std::pair<int, std::size_t>> {
        for (int i = 0; i < t.n; ++i) {
            const auto d = t.digit(idx, i);
            for (std::size_t alt = 0; alt < t.k; ++alt) {
                if (alt == d) continue;
                const auto other = t.with_digit(idx, i, alt);
                if (t.cell(other, i) == t.cell(idx, i) && !t.same_allocation(other, idx)) return std::pair{i, alt};
            }
        }
        return std::nullopt;
    };
    auto make = [&](std::size_t idx, std::pair<int, std::size_t> v) -> Witness {
        return DeviationWitness{t.profile(idx), v.first, t.cls.member(v.second)};
    };
    return run_check(property::kNonBossy, t.count, opts, find, make);
}

PropertyReport check_neutral(const Mechanism& mech, const CheckOptions& opts) {
    const Tabulated t(mech);
    const auto perms = neutrality_permutations(t.m, opts.seed);
    std::vector<const std::vector<std::size_t>*> actions;
    std::vector<std::vector<GoodSet>> images;
    for (const auto& pi : perms) {
        actions.push_back(&t.cls.permutation_action(pi));
        images.push_back(image_table(pi, t.m));
    }
    auto find = [&](std::size_t idx) -> std::optional<std::size_t> {
        for (std::size_t p = 0; p < perms.size(); ++p) {
            std::size_t moved = 0;
            for (int i = 0; i < t.n; ++i) moved += (*actions[p])[t.digit(idx, i)] * t.place[static_cast<std::size_t>(i)];
            for (int i = 0; i < t.n; ++i)
                if (t.cell(moved, i) != images[p][t.cell(idx, i).bits()]) return p;
        }
        return std::nullopt;
    };
    auto make = [&](std::size_t idx, std::size_t p) -> Witness { return PermutationWitness{t.profile(idx), perms[p]}; };
    return run_check(property::kNeutral, t.count, opts, find, make);
}

PropertyReport check_partition(const Mechanism& mech, const CheckOptions& opts) {
    const Tabulated t(mech);
    const auto all = GoodSet::full(t.m);
    auto find = [&](std::size_t idx) -> std::optional<GoodSet> {
        GoodSet covered;
        for (int i = 0; i < t.n; ++i) covered |= t.cell(idx, i);
        if (covered == all) return std::nullopt;
        return all - covered;
    };
    auto make = [&](std::size_t idx, GoodSet missing) -> Witness { return UncoveredWitness{t.profile(idx), missing}; };
    return run_check(property::kPartition, t.count, opts, find, make);
}

std::optional<Allocation> pareto_blocking(const Allocation& alloc, const Profile& profile) {
    const int n = alloc.agents();
    if (n != static_cast<int>(profile.size())) throw Error(ErrorKind::InvalidInput, "profile and allocation sizes differ");
    if (n == 0) return std::nullopt;
    const auto assignments = all_assignments(n, profile.front().goods());
    for (const auto& bundles : assignments) {
        bool weakly = true;
        bool strictly = false;
        for (int i = 0; i < n && weakly; ++i) {
            const auto& pref = profile[static_cast<std::size_t>(i)];
            const auto mine = alloc[i];
            const auto theirs = bundles[static_cast<std::size_t>(i)];
            if (mine == theirs) continue;
            if (pref.prefers(theirs, mine)) strictly = true;
            else weakly = false;
        }
        if (weakly && strictly) return Allocation(bundles);
    }
    return std::nullopt;
}

PropertyReport check_pareto_efficient(const Mechanism& mech, const CheckOptions& opts) {
    const Tabulated t(mech);
    const auto assignments = all_assignments(t.n, t.m);
    auto find = [&](std::size_t idx) -> std::optional<std::size_t> {
        for (std::size_t code = 0; code < assignments.size(); ++code) {
            bool weakly = true;
            bool strictly = false;
            for (int i = 0; i < t.n && weakly; ++i) {
                const auto& rank = *t.ranks[t.digit(idx, i)];
                const auto mine = rank[t.cell(idx, i).bits()];
                const auto theirs = rank[assignments[code][static_cast<std::size_t>(i)].bits()];
                if (theirs < mine) weakly = false;
                else if (theirs > mine) strictly = true;
            }
            if (weakly && strictly) return code;
        }
        return std::nullopt;
    };
    auto make = [&](std::size_t idx, std::size_t code) -> Witness {
        return BlockingWitness{t.profile(idx), Allocation(assignments[code])};
    };
    return run_check(property::kPareto, t.count, opts, find, make);
}

PropertyReport check_pareto_at(const Mechanism& mech, const Profile& profile) {
    const auto alloc = mech.apply(profile);
    if (auto blocking = pareto_blocking(alloc, profile))
        return failed(property::kPareto, BlockingWitness{profile, *blocking}, 1);
    PropertyReport r;
    r.property = property::kPareto;
    r.profiles_checked = 1;
    return r;
}

Allocation augmented(const Allocation& alloc, const TradingCycle& cycle) {
    Allocation out = alloc;
    const auto k = cycle.agents.size();
    for (std::size_t j = 0; j < k; ++j) {
        const int agent = cycle.agents[j];
        const int received = cycle.goods[(j + k - 1) % k];
        out[agent] = out[agent].without(cycle.goods[j]).with(received);
    }
    return out;
}

bool is_strictly_improving(const TradingCycle& cycle, const Allocation& alloc, const Profile& profile) {
    const auto k = cycle.agents.size();
    if (k < 2 || cycle.goods.size() != k) return false;
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t l = j + 1; l < k; ++l)
            if (cycle.agents[j] == cycle.agents[l] || cycle.goods[j] == cycle.goods[l]) return false;
        if (!alloc[cycle.agents[j]].contains(cycle.goods[j])) return false;
    }
    const auto after = augmented(alloc, cycle);
    for (int agent : cycle.agents)
        if (!profile[static_cast<std::size_t>(agent)].prefers(after[agent], alloc[agent])) return false;
    return true;
}

namespace {

struct CycleSearch {
    const Allocation& alloc;
    const Profile& profile;
    std::vector<int> agents;
    std::vector<int> goods;
    std::vector<bool> used;

    // Agent gives `gives` and receives `gets`.
    bool gains(int agent, int gives, int gets) const {
        const auto mine = alloc[agent];
        return profile[static_cast<std::size_t>(agent)].prefers(mine.without(gives).with(gets), mine);
    }

    bool extend() {
        const int prev_good = goods.back();
        // Close the cycle: the first agent receives the last good.
        if (agents.size() >= 2 && gains(agents.front(), goods.front(), prev_good)) return true;
        for (int a = agents.front() + 1; a < alloc.agents(); ++a) {
            if (used[static_cast<std::size_t>(a)]) continue;
            for (int g : alloc[a].goods()) {
                if (!gains(a, g, prev_good)) continue;
                agents.push_back(a);
                goods.push_back(g);
                used[static_cast<std::size_t>(a)] = true;
                if (extend()) return true;
                used[static_cast<std::size_t>(a)] = false;
                agents.pop_back();
                goods.pop_back();
            }
        }
        return false;
    }
};

}  // namespace

std::optional<TradingCycle> find_improving_cycle(const Allocation& alloc, const Profile& profile) {
    const int n = alloc.agents();
    if (n != static_cast<int>(profile.size())) throw Error(ErrorKind::InvalidInput, "profile and allocation sizes differ");
    // Every cycle is found starting from its lowest-indexed agent.
    for (int start = 0; start < n; ++start) {
        for (int g : alloc[start].goods()) {
            CycleSearch search{alloc, profile, {start}, {g}, std::vector<bool>(static_cast<std::size_t>(n), false)};
            search.used[static_cast<std::size_t>(start)] = true;
            if (search.extend()) return TradingCycle{search.agents, search.goods};
        }
    }
    return std::nullopt;
}

PropertyReport check_push_up_invariance(const Mechanism& mech, const PushUpOptions& opts) {
    const Tabulated t(mech);
    PropertyReport report;
    report.property = property::kPushUp;
    report.applicable = check_truthful(mech).passed && check_non_bossy(mech).passed;

    // push_ups[d][S] = members that are push-ups of member d for bundle S.
    std::map<std::pair<std::size_t, GoodSet::Bits>, std::vector<std::size_t>> cache;
    auto push_ups = [&](std::size_t d, GoodSet s) -> const std::vector<std::size_t>& {
        auto [it, inserted] = cache.try_emplace({d, s.bits()});
        if (inserted)
            for (std::size_t e = 0; e < t.k; ++e)
                if (is_push_up(t.cls.member(e), t.cls.member(d), s)) it->second.push_back(e);
        return it->second;
    };
    auto record = [&](std::size_t idx, std::size_t pushed) {
        report.passed = false;
        report.witness = PushUpWitness{t.profile(idx), t.profile(pushed)};
    };

    switch (opts.mode) {
        case PushUpMode::Sampled: {
            Rng rng(opts.seed);
            for (std::uint64_t trial = 0; trial < opts.trials; ++trial) {
                const auto idx = static_cast<std::size_t>(uniform_index(rng, t.count));
                std::size_t pushed = 0;
                for (int i = 0; i < t.n; ++i) {
                    const auto& cands = push_ups(t.digit(idx, i), t.cell(idx, i));
                    pushed += cands[uniform_index(rng, cands.size())] * t.place[static_cast<std::size_t>(i)];
                }
                ++report.profiles_checked;
                if (!t.same_allocation(idx, pushed)) {
                    record(idx, pushed);
                    return report;
                }
            }
            break;
        }
        case PushUpMode::Exhaustive: {
            for (std::size_t idx = 0; idx < t.count; ++idx) {
                std::vector<const std::vector<std::size_t>*> cands;
                for (int i = 0; i < t.n; ++i) cands.push_back(&push_ups(t.digit(idx, i), t.cell(idx, i)));
                std::vector<std::size_t> pos(static_cast<std::size_t>(t.n), 0);
                while (true) {
                    std::size_t pushed = 0;
                    for (int i = 0; i < t.n; ++i)
                        pushed += (*cands[static_cast<std::size_t>(i)])[pos[static_cast<std::size_t>(i)]] * t.place[static_cast<std::size_t>(i)];
                    ++report.profiles_checked;
                    if (!t.same_allocation(idx, pushed)) {
                        record(idx, pushed);
                        return report;
                    }
                    int i = t.n - 1;
                    while (i >= 0 && ++pos[static_cast<std::size_t>(i)] == cands[static_cast<std::size_t>(i)]->size())
                        pos[static_cast<std::size_t>(i--)] = 0;
                    if (i < 0) break;
                }
            }
            break;
        }
        case PushUpMode::OwnBundle: {
            const auto all = GoodSet::full(t.m);
            for (std::size_t idx = 0; idx < t.count; ++idx) {
                std::size_t pushed = 0;
                for (int i = 0; i < t.n; ++i) {
                    const std::vector<GoodSet> blocks{t.cell(idx, i), all - t.cell(idx, i)};
                    const auto lex = lexicographic_consistent_with(blocks, t.m);
                    const auto e = t.cls.index_of(lex);
                    if (!e) throw Error(ErrorKind::DomainError, "domain lacks a lexicographic push-up");
                    pushed += *e * t.place[static_cast<std::size_t>(i)];
                }
                ++report.profiles_checked;
                if (!t.same_allocation(idx, pushed)) {
                    record(idx, pushed);
                    return report;
                }
            }
            break;
        }
    }
    return report;
}

namespace {

std::optional<std::size_t> control_violation(const Tabulated& t, int agent, GoodSet set, const std::vector<bool>& desires) {
    return parallel_find_first(t.count, [&](std::size_t idx) {
        return desires[t.digit(idx, agent)] && !set.subset_of(t.cell(idx, agent));
    });
}

std::vector<bool> desire_table(const PreferenceClass& cls, GoodSet set) {
    std::vector<bool> out;
    for (const auto& p : cls.members()) out.push_back(p.strongly_desires(set));
    return out;
}

}  // namespace

PropertyReport controls(const Mechanism& mech, int agent, GoodSet set) {
    const Tabulated t(mech);
    if (agent < 0 || agent >= t.n) throw Error(ErrorKind::InvalidInput, "agent out of range");
    if (!set.within(t.m)) throw Error(ErrorKind::InvalidInput, "set outside the universe");
    const auto desires = desire_table(t.cls, set);
    if (auto hit = control_violation(t, agent, set, desires))
        return failed(property::kControls, ControlWitness{set, agent, {}, t.profile(*hit)}, *hit + 1);
    PropertyReport r;
    r.property = property::kControls;
    r.profiles_checked = t.count;
    return r;
}

PropertyReport check_control_claim(const Mechanism& mech) {
    const Tabulated t(mech);
    std::uint64_t checked = 0;
    for (std::size_t s = 0; s < (std::size_t{1} << t.m); ++s) {
        const GoodSet set(static_cast<GoodSet::Bits>(s));
        const auto desires = desire_table(t.cls, set);
        // First triggering profile per agent.
        std::vector<std::optional<std::size_t>> trigger(static_cast<std::size_t>(t.n));
        for (std::size_t idx = 0; idx < t.count; ++idx) {
            bool all_desire = true;
            for (int i = 0; i < t.n && all_desire; ++i) all_desire = desires[t.digit(idx, i)];
            if (!all_desire) continue;
            for (int i = 0; i < t.n; ++i)
                if (!trigger[static_cast<std::size_t>(i)] && set.subset_of(t.cell(idx, i))) trigger[static_cast<std::size_t>(i)] = idx;
        }
        for (int i = 0; i < t.n; ++i) {
            if (!trigger[static_cast<std::size_t>(i)]) continue;
            checked += t.count;
            if (auto hit = control_violation(t, i, set, desires))
                return failed(property::kControlClaim,
                              ControlWitness{set, i, t.profile(*trigger[static_cast<std::size_t>(i)]), t.profile(*hit)},
                              checked);
        }
    }
    PropertyReport r;
    r.property = property::kControlClaim;
    r.profiles_checked = checked;
    return r;
}

bool envies_beyond_one_good(const Preference& pref, GoodSet own, GoodSet other) {
    if (other.empty()) return false;
    for (int x : other.goods())
        if (pref.weakly_prefers(own, other.without(x))) return false;
    return true;
}

PropertyReport check_ef1(const Allocation& alloc, const Profile& profile) {
    PropertyReport r;
    r.property = property::kEf1;
    r.profiles_checked = 1;
    for (int i = 0; i < alloc.agents(); ++i)
        for (int j = 0; j < alloc.agents(); ++j) {
            if (i == j || !envies_beyond_one_good(profile[static_cast<std::size_t>(i)], alloc[i], alloc[j])) continue;
            r.passed = false;
            r.witness = EnvyWitness{profile, alloc, i, j};
            return r;
        }
    return r;
}

bool check_consecutive(const Allocation& alloc, const Preference& pref) {
    if (!pref.is_lexicographic()) throw Error(ErrorKind::UnsupportedPreference, "consecutiveness needs a lexicographic preference");
    const int n = alloc.agents();
    std::vector<bool> finished(static_cast<std::size_t>(n + 1), false);
    int current = -1;
    for (int g : pref.lex_order()) {
        int owner = n;
        for (int i = 0; i < n; ++i)
            if (alloc[i].contains(g)) owner = i;
        if (owner == current) continue;
        // Unallocated goods must form the final block.
        if (current == n || finished[static_cast<std::size_t>(owner)]) return false;
        if (current >= 0) finished[static_cast<std::size_t>(current)] = true;
        current = owner;
    }
    return true;
}

namespace {

struct Replayer {
    const Mechanism& mech;
    const std::string& property;

    bool operator()(const DeviationWitness& w) const {
        const auto before = mech.apply(w.profile);
        auto deviated = w.profile;
        deviated[static_cast<std::size_t>(w.agent)] = w.alternate;
        const auto after = mech.apply(deviated);
        const auto own_before = before[w.agent];
        const auto own_after = after[w.agent];
        if (property == property::kTruthful)
            return own_after != own_before &&
                   w.profile[static_cast<std::size_t>(w.agent)].compare(own_after, own_before) == Order::Greater;
        if (property == property::kNonBossy) return own_after == own_before && after != before;
        return false;
    }
    bool operator()(const PermutationWitness& w) const {
        Profile moved;
        for (const auto& p : w.profile) moved.push_back(p.permuted(w.pi));
        return mech.apply(moved) != mech.apply(w.profile).permuted(w.pi);
    }
    bool operator()(const UncoveredWitness& w) const {
        const auto a = mech.apply(w.profile);
        return !w.unallocated.empty() && (a.allocated() & w.unallocated).empty();
    }
    bool operator()(const BlockingWitness& w) const {
        const auto a = mech.apply(w.profile);
        const auto& b = w.blocking;
        if (b.agents() != a.agents() || !b.disjoint() || !b.allocated().within(mech.goods())) return false;
        bool strictly = false;
        for (int i = 0; i < a.agents(); ++i) {
            if (a[i] == b[i]) continue;
            if (w.profile[static_cast<std::size_t>(i)].compare(b[i], a[i]) == Order::Less) return false;
            strictly = true;
        }
        return strictly;
    }
    bool operator()(const ControlWitness& w) const {
        const auto& victim = w.violating[static_cast<std::size_t>(w.agent)];
        if (!victim.strongly_desires(w.set) || w.set.subset_of(mech.apply(w.violating)[w.agent])) return false;
        if (w.trigger.empty()) return true;
        for (const auto& p : w.trigger)
            if (!p.strongly_desires(w.set)) return false;
        return w.set.subset_of(mech.apply(w.trigger)[w.agent]);
    }
    bool operator()(const PushUpWitness& w) const {
        const auto a = mech.apply(w.profile);
        for (std::size_t i = 0; i < w.profile.size(); ++i)
            if (!is_push_up(w.pushed[i], w.profile[i], a[static_cast<int>(i)])) return false;
        return mech.apply(w.pushed) != a;
    }
    bool operator()(const EnvyWitness& w) const {
        if (mech.apply(w.profile) != w.allocation) return false;
        return envies_beyond_one_good(w.profile[static_cast<std::size_t>(w.envious)], w.allocation[w.envious],
                                      w.allocation[w.envied]);
    }
};

}  // namespace

bool replay(const Mechanism& mech, const PropertyReport& report) {
    if (report.passed || !report.witness) return false;
    return std::visit(Replayer{mech, report.property}, *report.witness);
}

}  // namespace sqm
