#include "sqm/mechanism.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "sqm/error.hpp"

namespace sqm {

GoodSet Allocation::allocated() const noexcept {
    GoodSet out;
    for (auto b : bundles) out |= b;
    return out;
}

bool Allocation::disjoint() const noexcept {
    GoodSet seen;
    for (auto b : bundles) {
        if (!(seen & b).empty()) return false;
        seen |= b;
    }
    return true;
}

Allocation Allocation::permuted(const Permutation& pi) const {
    Allocation out(agents());
    for (int i = 0; i < agents(); ++i) out[i] = pi((*this)[i]);
    return out;
}

std::string Allocation::to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < bundles.size(); ++i) {
        if (i) out += ", ";
        out += bundles[i].to_string();
    }
    return out + ")";
}

int QuotaOrdering::total() const noexcept { return std::accumulate(q.begin(), q.end(), 0); }

std::string QuotaOrdering::to_string() const {
    auto join = [](const std::vector<int>& v) {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
        return s + ")";
    };
    return "q=" + join(q) + " p=" + join(p);
}

QuotaOrdering canonicalize(std::vector<int> q, std::vector<int> p, int m) {
    if (q.size() != p.size()) throw Error(ErrorKind::InvalidOrdering, "quota and ordering lengths differ");
    const int n = static_cast<int>(q.size());
    std::vector<bool> seen(q.size(), false);
    for (int a : p) {
        if (a < 0 || a >= n || seen[static_cast<std::size_t>(a)])
            throw Error(ErrorKind::InvalidOrdering, "ordering is not a permutation of the agents");
        seen[static_cast<std::size_t>(a)] = true;
    }
    long sum = 0;
    for (int x : q) {
        if (x < 0) throw Error(ErrorKind::InvalidInput, "negative quota");
        sum += x;
    }
    if (sum > m) throw Error(ErrorKind::QuotaOverflow, "quotas sum to more than the number of goods");

    QuotaOrdering out;
    std::vector<int> idle;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] > 0) {
            out.q.push_back(q[i]);
            out.p.push_back(p[i]);
        } else {
            idle.push_back(p[i]);
        }
    }
    std::sort(idle.begin(), idle.end());
    for (int a : idle) {
        out.q.push_back(0);
        out.p.push_back(a);
    }
    return out;
}

bool is_canonical(const QuotaOrdering& qo) noexcept {
    bool in_suffix = false;
    int last_idle = -1;
    for (std::size_t i = 0; i < qo.q.size(); ++i) {
        if (qo.q[i] == 0) {
            if (in_suffix && qo.p[i] < last_idle) return false;
            in_suffix = true;
            last_idle = qo.p[i];
        } else if (in_suffix) {
            return false;
        }
    }
    return true;
}

Allocation apply_serial_quota(const QuotaOrdering& qo, const Profile& profile) {
    const int n = qo.agents();
    if (static_cast<int>(profile.size()) != n) throw Error(ErrorKind::DomainError, "profile size differs from agents");
    Allocation out(n);
    if (n == 0) return out;
    GoodSet remaining = profile.front().universe();
    for (int i = 0; i < n; ++i) {
        const int agent = qo.p[static_cast<std::size_t>(i)];
        const auto bundle = profile[static_cast<std::size_t>(agent)].demand(remaining, qo.q[static_cast<std::size_t>(i)]);
        out[agent] = bundle;
        remaining -= bundle;
    }
    return out;
}

std::size_t profile_count(std::size_t class_size, int n) {
    std::size_t count = 1;
    for (int i = 0; i < n; ++i) {
        if (class_size != 0 && count > std::numeric_limits<std::size_t>::max() / class_size)
            throw Error(ErrorKind::TooLarge, "profile count overflows");
        count *= class_size;
    }
    return count;
}

std::vector<std::size_t> profile_digits(std::size_t index, std::size_t radix, int n) {
    std::vector<std::size_t> digits(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        digits[static_cast<std::size_t>(i)] = index % radix;
        index /= radix;
    }
    return digits;
}

std::size_t digits_to_index(const std::vector<std::size_t>& digits, std::size_t radix) {
    std::size_t index = 0;
    for (auto d : digits) index = index * radix + d;
    return index;
}

std::size_t profile_index(const Profile& profile, const PreferenceClass& cls) {
    std::vector<std::size_t> digits;
    digits.reserve(profile.size());
    for (const auto& pref : profile) {
        auto idx = cls.index_of(pref);
        if (!idx) throw Error(ErrorKind::NotInClass, "preference is not a member of the class");
        digits.push_back(*idx);
    }
    return digits_to_index(digits, cls.size());
}

Profile index_to_profile(std::size_t index, const PreferenceClass& cls, int n) {
    if (index >= profile_count(cls.size(), n)) throw Error(ErrorKind::InvalidInput, "profile index out of range");
    Profile out;
    out.reserve(static_cast<std::size_t>(n));
    for (auto d : profile_digits(index, cls.size(), n)) out.push_back(cls.member(d));
    return out;
}

Mechanism::Mechanism(int n, ClassPtr domain, MechanismVariant variant)
    : n_(n), domain_(std::move(domain)), variant_(std::move(variant)) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "a mechanism needs at least one agent");
    if (!domain_) throw Error(ErrorKind::InvalidInput, "missing domain");
}

Mechanism Mechanism::serial_quota(QuotaOrdering qo, ClassPtr domain) {
    const int m = domain->goods();
    auto canonical = canonicalize(qo.q, qo.p, m);
    const int n = canonical.agents();
    return Mechanism(n, std::move(domain), mech::SerialQuota{std::move(canonical)});
}

Mechanism Mechanism::table(ClassPtr domain, int n, const std::vector<Allocation>& allocations) {
    std::vector<GoodSet> cells;
    cells.reserve(allocations.size() * static_cast<std::size_t>(n));
    for (const auto& a : allocations) {
        if (a.agents() != n) throw Error(ErrorKind::InvalidInput, "allocation has the wrong number of agents");
        cells.insert(cells.end(), a.bundles.begin(), a.bundles.end());
    }
    return table_from_cells(std::move(domain), n, std::move(cells));
}

Mechanism Mechanism::table_from_cells(ClassPtr domain, int n, std::vector<GoodSet> cells) {
    if (!domain->enumerable()) throw Error(ErrorKind::NotEnumerable, "table mechanisms need an enumerable domain");
    const auto profiles = profile_count(domain->size(), n);
    if (cells.size() != profiles * static_cast<std::size_t>(n))
        throw Error(ErrorKind::InvalidInput, "table must hold one allocation per profile");
    const int m = domain->goods();
    for (std::size_t i = 0; i < profiles; ++i) {
        Allocation a(std::vector<GoodSet>(cells.begin() + static_cast<std::ptrdiff_t>(i * n),
                                          cells.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
        if (!a.disjoint() || !a.allocated().within(m))
            throw Error(ErrorKind::InvalidInput, "table entry is not an allocation");
    }
    return Mechanism(n, std::move(domain), mech::Table{std::move(cells)});
}

Mechanism Mechanism::round_robin(int n, ClassPtr domain) {
    return Mechanism(n, std::move(domain), mech::RoundRobin{});
}

namespace {
void require_lexicographic_domain(const PreferenceClass& domain) {
    if (domain.tag() != ClassTag::Lexicographic)
        throw Error(ErrorKind::DomainError, "counterexample mechanisms are defined on lexicographic domains");
}
}  // namespace

Mechanism Mechanism::counter_non_truthful(int n, ClassPtr domain) {
    require_lexicographic_domain(*domain);
    if (n < 2) throw Error(ErrorKind::TooSmall, "needs at least two agents");
    return Mechanism(n, std::move(domain), mech::CounterNonTruthful{});
}

Mechanism Mechanism::counter_bossy(int n, ClassPtr domain) {
    require_lexicographic_domain(*domain);
    if (n < 3) throw Error(ErrorKind::TooSmall, "needs at least three agents");
    if (domain->goods() < 1) throw Error(ErrorKind::TooSmall, "needs at least one good");
    return Mechanism(n, std::move(domain), mech::CounterBossy{});
}

Mechanism Mechanism::counter_non_neutral(int n, ClassPtr domain, int a, int b) {
    require_lexicographic_domain(*domain);
    const int m = domain->goods();
    if (n < 3 || m < 3) throw Error(ErrorKind::TooSmall, "needs at least three agents and three goods");
    if (a == b || a < 0 || b < 0 || a >= m || b >= m)
        throw Error(ErrorKind::InvalidInput, "a and b must be distinct goods");
    return Mechanism(n, std::move(domain), mech::CounterNonNeutral{a, b});
}

std::string Mechanism::kind_name() const {
    struct Visitor {
        std::string operator()(const mech::SerialQuota&) const { return "serial_quota"; }
        std::string operator()(const mech::Table&) const { return "table"; }
        std::string operator()(const mech::RoundRobin&) const { return "round_robin"; }
        std::string operator()(const mech::CounterNonTruthful&) const { return "counter_non_truthful"; }
        std::string operator()(const mech::CounterBossy&) const { return "counter_bossy"; }
        std::string operator()(const mech::CounterNonNeutral&) const { return "counter_non_neutral"; }
    };
    return std::visit(Visitor{}, variant_);
}

Allocation apply_counter_non_neutral(const Profile& profile, int a, int b) {
    const int n = static_cast<int>(profile.size());
    if (n < 3 || profile.front().goods() < 3) throw Error(ErrorKind::TooSmall, "needs three agents and three goods");
    const auto all = profile.front().universe();
    Allocation out(n);
    const int x = profile[0].favorite(all.without(a));
    out[0] = GoodSet::single(x);
    const int chooser = (x == b) ? 1 : 2;
    const int taker = (x == b) ? 2 : 1;
    const auto rest = all.without(x);
    const int y = profile[static_cast<std::size_t>(chooser)].favorite(rest);
    out[chooser] = GoodSet::single(y);
    out[taker] = rest.without(y);
    return out;
}

Allocation Mechanism::evaluate(const Profile& profile) const {
    const int m = goods();
    const auto all = GoodSet::full(m);
    struct Visitor {
        const Mechanism& self;
        const Profile& profile;
        int m;
        GoodSet all;

        Allocation operator()(const mech::SerialQuota& sq) const { return apply_serial_quota(sq.qo, profile); }
        Allocation operator()(const mech::Table& t) const {
            const auto idx = profile_index(profile, self.domain()) * static_cast<std::size_t>(self.n_);
            return Allocation(std::vector<GoodSet>(t.cells.begin() + static_cast<std::ptrdiff_t>(idx),
                                                   t.cells.begin() + static_cast<std::ptrdiff_t>(idx) + self.n_));
        }
        Allocation operator()(const mech::RoundRobin&) const {
            Allocation out(self.n_);
            GoodSet remaining = all;
            for (int turn = 0; !remaining.empty(); turn = (turn + 1) % self.n_) {
                const int g = profile[static_cast<std::size_t>(turn)].favorite(remaining);
                out[turn] = out[turn].with(g);
                remaining = remaining.without(g);
            }
            return out;
        }
        Allocation operator()(const mech::CounterNonTruthful&) const {
            Allocation out(self.n_);
            out[profile[0].order_equal(profile[1]) ? 0 : 1] = all;
            return out;
        }
        Allocation operator()(const mech::CounterBossy&) const {
            Allocation out(self.n_);
            const int x = profile[0].favorite(all);
            out[1] = GoodSet::single(x);
            out[2] = all.without(x);
            return out;
        }
        Allocation operator()(const mech::CounterNonNeutral& c) const {
            auto out = apply_counter_non_neutral(profile, c.a, c.b);
            return out;
        }
    };
    return std::visit(Visitor{*this, profile, m, all}, variant_);
}

Allocation Mechanism::apply(const Profile& profile) const {
    if (static_cast<int>(profile.size()) != n_) throw Error(ErrorKind::DomainError, "profile has the wrong number of agents");
    for (const auto& pref : profile)
        if (!domain_->contains(pref)) throw Error(ErrorKind::DomainError, "preference outside the mechanism's domain");
    return evaluate(profile);
}

Allocation Mechanism::apply_index(std::size_t index) const {
    if (const auto* t = std::get_if<mech::Table>(&variant_)) {
        const auto base = index * static_cast<std::size_t>(n_);
        if (base >= t->cells.size()) throw Error(ErrorKind::InvalidInput, "profile index out of range");
        return Allocation(std::vector<GoodSet>(t->cells.begin() + static_cast<std::ptrdiff_t>(base),
                                               t->cells.begin() + static_cast<std::ptrdiff_t>(base) + n_));
    }
    return evaluate(index_to_profile(index, *domain_, n_));
}

std::vector<GoodSet> Mechanism::tabulate() const {
    if (const auto* t = std::get_if<mech::Table>(&variant_)) return t->cells;
    const auto count = profile_count(domain_->size(), n_);
    const auto k = domain_->size();
    std::vector<GoodSet> cells(count * static_cast<std::size_t>(n_));
    Profile profile(static_cast<std::size_t>(n_), domain_->member(0));
    for (std::size_t idx = 0; idx < count; ++idx) {
        auto digits = profile_digits(idx, k, n_);
        for (int i = 0; i < n_; ++i) profile[static_cast<std::size_t>(i)] = domain_->member(digits[static_cast<std::size_t>(i)]);
        const auto a = evaluate(profile);
        std::copy(a.bundles.begin(), a.bundles.end(), cells.begin() + static_cast<std::ptrdiff_t>(idx * n_));
    }
    return cells;
}

CardinalInstance CardinalInstance::from_values(std::vector<std::vector<Rational>> valuations) {
    CardinalInstance inst;
    for (const auto& v : valuations) {
        if (!valuations.empty() && v.size() != valuations.front().size())
            throw Error(ErrorKind::InvalidInput, "valuations over different numbers of goods");
        inst.preferences.push_back(Preference::additive(v));
    }
    inst.valuations = std::move(valuations);
    return inst;
}

Rational CardinalInstance::value(int agent, GoodSet bundle) const {
    Rational sum = 0;
    for (int g : bundle.goods()) sum += valuations[static_cast<std::size_t>(agent)][static_cast<std::size_t>(g)];
    return sum;
}

Allocation cardinal_apply(const Mechanism& mechanism, const CardinalInstance& instance) {
    for (const auto& pref : instance.preferences)
        if (pref.kind() != PreferenceKind::AdditiveStrict)
            throw Error(ErrorKind::TieDetected, "valuation does not induce a strict preference");
    if (std::holds_alternative<mech::Table>(mechanism.variant()) || mechanism.domain().enumerable()) {
        // Tables and enumerable domains are keyed by the induced order, not the values.
        Profile induced;
        for (const auto& pref : instance.preferences) {
            auto idx = mechanism.domain().index_of(pref);
            if (!idx) throw Error(ErrorKind::DomainError, "induced preference outside the mechanism's domain");
            induced.push_back(mechanism.domain().member(*idx));
        }
        return mechanism.apply(induced);
    }
    return mechanism.apply(instance.preferences);
}

}  // namespace sqm
