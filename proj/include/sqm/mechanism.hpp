#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "sqm/goodset.hpp"
#include "sqm/preference.hpp"
#include "sqm/preference_class.hpp"
#include "sqm/rational.hpp"

namespace sqm {

/// n pairwise-disjoint bundles; goods may be left unallocated.
struct Allocation {
    std::vector<GoodSet> bundles;

    Allocation() = default;
    explicit Allocation(std::vector<GoodSet> b) : bundles(std::move(b)) {}
    explicit Allocation(int n) : bundles(static_cast<std::size_t>(n)) {}

    int agents() const noexcept { return static_cast<int>(bundles.size()); }
    GoodSet operator[](int agent) const { return bundles[static_cast<std::size_t>(agent)]; }
    GoodSet& operator[](int agent) { return bundles[static_cast<std::size_t>(agent)]; }

    GoodSet allocated() const noexcept;
    bool disjoint() const noexcept;
    bool is_partition(int m) const noexcept { return disjoint() && allocated() == GoodSet::full(m); }
    /// Bundle i becomes π(bundle i).
    Allocation permuted(const Permutation& pi) const;

    bool operator==(const Allocation&) const = default;
    std::string to_string() const;
};

/// Canonical quota-ordering pair: q[i] is the quota of the i-th picker p[i].
struct QuotaOrdering {
    std::vector<int> q;
    std::vector<int> p;

    int agents() const noexcept { return static_cast<int>(q.size()); }
    int total() const noexcept;
    bool operator==(const QuotaOrdering&) const = default;
    auto operator<=>(const QuotaOrdering&) const = default;
    std::string to_string() const;
};

/// Moves zero-quota agents to the end in ascending agent order, keeping the order of the
/// others. Throws QuotaOverflow if the quotas sum past m, InvalidOrdering if p is not a
/// permutation of the agents (or sizes differ), InvalidInput on negative quotas.
QuotaOrdering canonicalize(std::vector<int> q, std::vector<int> p, int m);
bool is_canonical(const QuotaOrdering& qo) noexcept;

/// Serial-quota allocation: each picker in turn takes her quota-demand from what remains.
Allocation apply_serial_quota(const QuotaOrdering& qo, const Profile& profile);

/// Mixed-radix index over an enumerable class; agent 0 is the most significant digit.
std::size_t profile_index(const Profile& profile, const PreferenceClass& cls);  // throws NotInClass
Profile index_to_profile(std::size_t index, const PreferenceClass& cls, int n);
std::vector<std::size_t> profile_digits(std::size_t index, std::size_t radix, int n);
std::size_t digits_to_index(const std::vector<std::size_t>& digits, std::size_t radix);
std::size_t profile_count(std::size_t class_size, int n);  // throws TooLarge on overflow

namespace mech {
struct SerialQuota {
    QuotaOrdering qo;
};
/// One allocation per profile index, stored agent-minor: cells[index * n + agent].
struct Table {
    std::vector<GoodSet> cells;
};
struct RoundRobin {};
/// Two agents with identical reports: agent 0 takes everything; otherwise agent 1 does.
struct CounterNonTruthful {};
/// Agent 1 receives agent 0's favorite good, agent 2 receives the rest.
struct CounterBossy {};
/// Agent 0 picks her favorite outside {a}; if it is b agent 1 picks next and agent 2 takes
/// the rest, otherwise agent 2 picks next and agent 1 takes the rest.
struct CounterNonNeutral {
    int a = 0;
    int b = 1;
};
}  // namespace mech

using MechanismVariant = std::variant<mech::SerialQuota, mech::Table, mech::RoundRobin, mech::CounterNonTruthful,
                                      mech::CounterBossy, mech::CounterNonNeutral>;

/// A deterministic allocation mechanism for n agents over a preference domain.
class Mechanism {
public:
    static Mechanism serial_quota(QuotaOrdering qo, ClassPtr domain);
    /// `allocations[i]` is the output on profile index i of the (enumerable) domain.
    static Mechanism table(ClassPtr domain, int n, const std::vector<Allocation>& allocations);
    static Mechanism table_from_cells(ClassPtr domain, int n, std::vector<GoodSet> cells);
    static Mechanism round_robin(int n, ClassPtr domain);
    static Mechanism counter_non_truthful(int n, ClassPtr domain);
    static Mechanism counter_bossy(int n, ClassPtr domain);
    static Mechanism counter_non_neutral(int n, ClassPtr domain, int a, int b);

    int agents() const noexcept { return n_; }
    int goods() const noexcept { return domain_->goods(); }
    const PreferenceClass& domain() const noexcept { return *domain_; }
    const ClassPtr& domain_ptr() const noexcept { return domain_; }
    const MechanismVariant& variant() const noexcept { return variant_; }
    std::string kind_name() const;

    /// Throws DomainError if the profile is not in domain^n.
    Allocation apply(const Profile& profile) const;
    /// As apply, for a profile index of an enumerable domain.
    Allocation apply_index(std::size_t index) const;

    /// Every allocation, indexed by profile, flattened agent-minor.
    std::vector<GoodSet> tabulate() const;

private:
    Mechanism(int n, ClassPtr domain, MechanismVariant variant);
    Allocation evaluate(const Profile& profile) const;

    int n_;
    ClassPtr domain_;
    MechanismVariant variant_;
};

/// Valuations of n agents with the strict ordinal preferences they induce.
struct CardinalInstance {
    std::vector<std::vector<Rational>> valuations;
    Profile preferences;

    /// Throws TieDetected if any valuation is not strict.
    static CardinalInstance from_values(std::vector<std::vector<Rational>> valuations);
    int agents() const noexcept { return static_cast<int>(valuations.size()); }
    int goods() const noexcept { return valuations.empty() ? 0 : static_cast<int>(valuations.front().size()); }
    Rational value(int agent, GoodSet bundle) const;
};

/// Runs the mechanism on the induced ordinal profile.
Allocation cardinal_apply(const Mechanism& mechanism, const CardinalInstance& instance);

/// Counterexample mechanism without neutrality, as a free function on a lexicographic profile.
Allocation apply_counter_non_neutral(const Profile& profile, int a, int b);

}  // namespace sqm
