#include "sqm/search.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "sqm/error.hpp"
#include "sqm/random.hpp"

namespace sqm {

namespace {

void quota_vectors(int k, int remaining, bool exact, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(prefix.size()) == k) {
        if (!exact || remaining == 0) out.push_back(prefix);
        return;
    }
    for (int x = 1; x <= remaining; ++x) {
        prefix.push_back(x);
        quota_vectors(k, remaining - x, exact, prefix, out);
        prefix.pop_back();
    }
}

void pickers(int n, int k, std::vector<int>& prefix, std::vector<bool>& used, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(prefix.size()) == k) {
        out.push_back(prefix);
        return;
    }
    for (int a = 0; a < n; ++a) {
        if (used[static_cast<std::size_t>(a)]) continue;
        used[static_cast<std::size_t>(a)] = true;
        prefix.push_back(a);
        pickers(n, k, prefix, used, out);
        prefix.pop_back();
        used[static_cast<std::size_t>(a)] = false;
    }
}

/// Bundles of every assignment of m goods to n agents (partitions) or to n agents plus
/// "nobody"; good g's owner is digit g in base n (or n+1).
std::vector<std::vector<GoodSet>> assignments(int n, int m, bool partition_only) {
    const std::size_t base = static_cast<std::size_t>(partition_only ? n : n + 1);
    std::size_t total = 1;
    for (int g = 0; g < m; ++g) total *= base;
    std::vector<std::vector<GoodSet>> out(total, std::vector<GoodSet>(static_cast<std::size_t>(n)));
    for (std::size_t code = 0; code < total; ++code) {
        auto c = code;
        for (int g = 0; g < m; ++g) {
            const auto owner = c % base;
            c /= base;
            if (owner < static_cast<std::size_t>(n)) out[code][owner] = out[code][owner].with(g);
        }
    }
    return out;
}

std::size_t assignment_code(const std::vector<GoodSet>& cells, std::size_t offset, int n, int m) {
    std::size_t code = 0;
    for (int g = m - 1; g >= 0; --g) {
        std::size_t owner = static_cast<std::size_t>(n);
        for (int i = 0; i < n; ++i)
            if (cells[offset + static_cast<std::size_t>(i)].contains(g)) owner = static_cast<std::size_t>(i);
        code = code * static_cast<std::size_t>(n) + owner;
    }
    return code;
}

std::optional<PropertyReport> first_failure(const Mechanism& mech, bool partition_only) {
    CheckOptions single;
    single.threads = 1;
    if (partition_only)
        if (auto r = check_partition(mech, single); !r.passed) return r;
    if (auto r = check_truthful(mech, single); !r.passed) return r;
    if (auto r = check_non_bossy(mech, single); !r.passed) return r;
    if (auto r = check_neutral(mech, single); !r.passed) return r;
    return std::nullopt;
}

}  // namespace

std::vector<QuotaOrdering> enumerate_q(int n, int m, bool partition_only) {
    if (n < 1 || m < 0) throw Error(ErrorKind::InvalidInput, "need n >= 1 and m >= 0");
    std::vector<QuotaOrdering> out;
    for (int k = 0; k <= n; ++k) {
        std::vector<std::vector<int>> quotas;
        std::vector<int> prefix;
        quota_vectors(k, m, partition_only, prefix, quotas);
        if (quotas.empty()) continue;
        std::vector<std::vector<int>> orders;
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        pickers(n, k, prefix, used, orders);
        for (const auto& q : quotas)
            for (const auto& order : orders) {
                QuotaOrdering qo;
                qo.q = q;
                qo.p = order;
                std::vector<bool> picked(static_cast<std::size_t>(n), false);
                for (int a : order) picked[static_cast<std::size_t>(a)] = true;
                for (int a = 0; a < n; ++a)
                    if (!picked[static_cast<std::size_t>(a)]) {
                        qo.q.push_back(0);
                        qo.p.push_back(a);
                    }
                out.push_back(std::move(qo));
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<QuotaOrdering> recognize_serial_quota(const Mechanism& mech) {
    if (!mech.domain().enumerable()) throw Error(ErrorKind::NotEnumerable, "recognition needs an enumerable domain");
    const auto cells = mech.tabulate();
    for (const auto& qo : enumerate_q(mech.agents(), mech.goods(), false))
        if (Mechanism::serial_quota(qo, mech.domain_ptr()).tabulate() == cells) return qo;
    return std::nullopt;
}

MechanismSpace mechanism_space(int n, const PreferenceClass& cls, bool partition_only) {
    MechanismSpace space;
    space.n = n;
    space.m = cls.goods();
    space.profiles = profile_count(cls.size(), n);
    space.choices = 1;
    for (int g = 0; g < space.m; ++g) space.choices *= static_cast<std::size_t>(partition_only ? n : n + 1);
    std::uint64_t tables = 1;
    for (std::size_t p = 0; p < space.profiles; ++p) {
        if (tables > kMaxEnumeratedTables / std::max<std::size_t>(space.choices, 1) && space.choices > 1) return space;
        tables *= space.choices;
    }
    if (tables <= kMaxEnumeratedTables) space.tables = tables;
    return space;
}

bool satisfies_axioms(const Mechanism& mech, bool partition_only) { return !first_failure(mech, partition_only); }

CharacterizationReport verify_characterization(int n, ClassPtr cls, bool partition_only, const CharacterizationOptions& opts) {
    const auto space = mechanism_space(n, *cls, partition_only);
    if (!space.tables)
        throw Error(ErrorKind::TooLarge, "mechanism space exceeds 10^7 tables; use mutation mode");
    CharacterizationReport report;
    report.n = n;
    report.m = cls->goods();
    report.class_tag = std::string(to_string(cls->tag()));
    report.partition_only = partition_only;
    report.serial_quota_family = enumerate_q(n, report.m, partition_only);

    const auto choices = assignments(n, report.m, partition_only);
    std::vector<std::size_t> digits(space.profiles, 0);
    std::vector<GoodSet> cells(space.profiles * static_cast<std::size_t>(n));
    for (std::uint64_t t = 0; t < *space.tables; ++t) {
        for (std::size_t p = 0; p < space.profiles; ++p)
            std::copy(choices[digits[p]].begin(), choices[digits[p]].end(),
                      cells.begin() + static_cast<std::ptrdiff_t>(p * static_cast<std::size_t>(n)));
        auto mech = Mechanism::table_from_cells(cls, n, cells);
        if (auto failure = first_failure(mech, partition_only)) {
            if (opts.keep_rejections) report.rejections.emplace_back(mech, *failure);
        } else {
            report.recognized.push_back(recognize_serial_quota(mech));
            report.satisfying.push_back(std::move(mech));
        }
        ++report.tables_checked;
        for (std::size_t p = space.profiles; p-- > 0;) {
            if (++digits[p] < choices.size()) break;
            digits[p] = 0;
        }
    }

    std::set<QuotaOrdering> found;
    for (std::size_t i = 0; i < report.satisfying.size(); ++i) {
        if (!report.recognized[i]) {
            if (!report.counterexample) report.counterexample = report.satisfying[i];
            continue;
        }
        found.insert(*report.recognized[i]);
    }
    const std::set<QuotaOrdering> family(report.serial_quota_family.begin(), report.serial_quota_family.end());
    report.sets_equal = !report.counterexample && found == family && found.size() == report.satisfying.size();
    return report;
}

MutationReport mutate_and_falsify(const QuotaOrdering& base, ClassPtr cls, const MutationOptions& opts) {
    const int m = cls->goods();
    const int n = base.agents();
    if (base.total() != m) throw Error(ErrorKind::InvalidInput, "mutation needs a partition serial-quota base");
    const auto base_mech = Mechanism::serial_quota(base, cls);
    const auto base_cells = base_mech.tabulate();
    const auto count = profile_count(cls->size(), n);
    const auto choices = assignments(n, m, true);
    if (choices.size() < 2) throw Error(ErrorKind::TooSmall, "no alternative partitions to mutate to");

    MutationReport out;
    out.report.property = "mutation_falsification";
    Rng rng(opts.seed);
    for (std::uint64_t trial = 0; trial < opts.trials; ++trial) {
        const auto idx = static_cast<std::size_t>(uniform_index(rng, count));
        const auto offset = idx * static_cast<std::size_t>(n);
        const auto current = assignment_code(base_cells, offset, n, m);
        auto code = static_cast<std::size_t>(uniform_index(rng, choices.size() - 1));
        if (code >= current) ++code;  // never restore the original cell
        auto cells = base_cells;
        std::copy(choices[code].begin(), choices[code].end(), cells.begin() + static_cast<std::ptrdiff_t>(offset));
        auto mutant = Mechanism::table_from_cells(cls, n, std::move(cells));
        ++out.mutants;
        ++out.report.profiles_checked;
        if (auto failure = first_failure(mutant, true)) {
            if (opts.keep_failures) out.failures.emplace_back(mutant, *failure);
        } else {
            ++out.survivors;
            if (!out.survivor) out.survivor = mutant;
        }
    }
    out.report.passed = out.survivors == 0;
    return out;
}

}  // namespace sqm
