#include "sqm/fairness.hpp"

#include <algorithm>

#include <boost/integer/common_factor_rt.hpp>

#include "sqm/error.hpp"

namespace sqm {

namespace {

struct Scaled {
    std::vector<std::int64_t> values;
    std::int64_t denominator = 1;
};

Scaled scale(std::span<const Rational> values) {
    Scaled out;
    for (const auto& v : values) out.denominator = boost::integer::lcm(out.denominator, v.denominator());
    __int128 total = 0;
    for (const auto& v : values) {
        const __int128 s = static_cast<__int128>(v.numerator()) * (out.denominator / v.denominator());
        total += s;
        if (total > (__int128{1} << 62) || s < 0) throw Error(ErrorKind::InvalidInput, "values overflow or are negative");
        out.values.push_back(static_cast<std::int64_t>(s));
    }
    return out;
}

/// Restricted-growth enumeration: each unordered partition into at most n parts once.
struct MmsSearch {
    const std::vector<std::int64_t>& values;
    int n;
    std::vector<std::int64_t> parts;
    std::int64_t best = 0;

    void run(std::size_t good, int used) {
        if (good == values.size()) {
            const auto worst = used < n ? 0 : *std::min_element(parts.begin(), parts.end());
            best = std::max(best, worst);
            return;
        }
        const int limit = std::min(n, used + 1);
        for (int p = 0; p < limit; ++p) {
            parts[static_cast<std::size_t>(p)] += values[good];
            run(good + 1, std::max(used, p + 1));
            parts[static_cast<std::size_t>(p)] -= values[good];
        }
    }
};

bool subset_sums_distinct(const std::vector<std::int64_t>& values) {
    const std::size_t size = std::size_t{1} << values.size();
    std::vector<std::int64_t> sums(size, 0);
    for (std::size_t s = 1; s < size; ++s) sums[s] = sums[s & (s - 1)] + values[static_cast<std::size_t>(std::countr_zero(s))];
    std::sort(sums.begin(), sums.end());
    return std::adjacent_find(sums.begin(), sums.end()) == sums.end();
}

}  // namespace

Rational mms(std::span<const Rational> values, int n) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "MMS needs at least one agent");
    double partitions = 1;
    for (std::size_t g = 0; g < values.size(); ++g) partitions *= n;
    if (partitions > static_cast<double>(kMaxMmsPartitions)) throw Error(ErrorKind::TooLarge, "n^m exceeds 10^7");
    const auto scaled = scale(values);
    MmsSearch search{scaled.values, n, std::vector<std::int64_t>(static_cast<std::size_t>(n), 0)};
    search.run(0, 0);
    return Rational(search.best, scaled.denominator);
}

std::string_view to_string(InstanceFamily family) noexcept {
    switch (family) {
        case InstanceFamily::Random: return "random";
        case InstanceFamily::IdenticalGoods: return "identical";
        case InstanceFamily::Targeted: return "targeted";
    }
    return "unknown";
}

std::vector<Rational> random_strict_values(Rng& rng, int m) {
    while (true) {
        std::vector<std::int64_t> raw;
        for (int g = 0; g < m; ++g) raw.push_back(uniform_int(rng, 1, 1000));
        if (!subset_sums_distinct(raw)) continue;
        return std::vector<Rational>(raw.begin(), raw.end());
    }
}

std::vector<Rational> identical_goods_values(int m) {
    std::vector<Rational> out;
    for (int g = 0; g < m; ++g) out.push_back(Rational(1) + kIdenticalEpsilon * Rational(std::int64_t{1} << g));
    return out;
}

std::vector<LabeledInstance> generate_instances(const InstanceSpec& spec, const Mechanism* mechanism) {
    if (spec.n < 1 || spec.m < 0 || spec.m > kMaxGoods) throw Error(ErrorKind::InvalidInput, "bad instance dimensions");
    std::vector<LabeledInstance> out;
    const auto n = static_cast<std::size_t>(spec.n);
    for (auto family : spec.families) {
        switch (family) {
            case InstanceFamily::Random: {
                Rng rng(spec.seed);
                for (std::uint64_t c = 0; c < spec.count; ++c) {
                    std::vector<std::vector<Rational>> vals;
                    for (std::size_t i = 0; i < n; ++i) vals.push_back(random_strict_values(rng, spec.m));
                    out.push_back({family, CardinalInstance::from_values(std::move(vals))});
                }
                break;
            }
            case InstanceFamily::IdenticalGoods:
                out.push_back({family, CardinalInstance::from_values(
                                           std::vector<std::vector<Rational>>(n, identical_goods_values(spec.m)))});
                break;
            case InstanceFamily::Targeted: {
                const auto* sq = mechanism ? std::get_if<mech::SerialQuota>(&mechanism->variant()) : nullptr;
                if (!sq) break;
                const auto& qo = sq->qo;
                // The first n-1 pickers never depend on the last picker's report.
                auto base = CardinalInstance::from_values(std::vector<std::vector<Rational>>(n, identical_goods_values(spec.m)));
                const auto alloc = apply_serial_quota(qo, base.preferences);
                const int last = qo.p.back();
                for (std::size_t i = 0; i + 1 < n; ++i) {
                    if (qo.q[i] < 2) continue;
                    const auto target = alloc[qo.p[i]];
                    auto vals = base.valuations;
                    auto& v = vals[static_cast<std::size_t>(last)];
                    for (int g = 0; g < spec.m; ++g)
                        v[static_cast<std::size_t>(g)] = Rational(std::int64_t{1} << (target.contains(g) ? spec.m + g : g));
                    out.push_back({family, CardinalInstance::from_values(std::move(vals))});
                }
                break;
            }
        }
    }
    return out;
}

FairnessAudit rho_mms_audit(const Mechanism& mechanism, const std::vector<LabeledInstance>& instances) {
    FairnessAudit audit;
    audit.mechanism = mechanism.kind_name();
    audit.audit = "rho_mms";
    const int n = mechanism.agents();
    for (std::size_t idx = 0; idx < instances.size(); ++idx) {
        const auto& inst = instances[idx].instance;
        const auto alloc = cardinal_apply(mechanism, inst);
        for (int i = 0; i < n; ++i) {
            const auto share = mms(inst.valuations[static_cast<std::size_t>(i)], n);
            const auto value = inst.value(i, alloc[i]);
            const Rational ratio = share == Rational(0) ? Rational(1) : value / share;
            if (!audit.worst || ratio < audit.worst_ratio) {
                audit.worst_ratio = ratio;
                audit.worst = MmsObservation{idx, instances[idx].family, inst, alloc, i, value, share, ratio};
            }
        }
        ++audit.instances_tested;
    }
    return audit;
}

FairnessAudit ef1_audit(const Mechanism& mechanism, const std::vector<LabeledInstance>& instances) {
    FairnessAudit audit;
    audit.mechanism = mechanism.kind_name();
    audit.audit = "ef1";
    for (std::size_t idx = 0; idx < instances.size(); ++idx) {
        const auto& inst = instances[idx].instance;
        const auto alloc = cardinal_apply(mechanism, inst);
        const auto report = check_ef1(alloc, inst.preferences);
        if (!report.passed) {
            const auto& w = std::get<EnvyWitness>(*report.witness);
            audit.ef1_violations.push_back({idx, instances[idx].family, inst, alloc, w.envious, w.envied});
        }
        ++audit.instances_tested;
    }
    return audit;
}

bool ef1_quota_feasibility(std::span<const int> q) {
    if (q.size() <= 1) return true;
    bool all_ones = true;
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
        if (q[i] > 1) return false;
        if (q[i] != 1) all_ones = false;
    }
    return q.back() <= (all_ones ? 2 : 1);
}

Rational approximation_bound(int n, int m) {
    const int denom = (m - n + 2) / 2;
    if (denom < 1) return Rational(1);
    return Rational(1, denom);
}

bool replay(const Mechanism& mechanism, const MmsObservation& observation) {
    const auto alloc = cardinal_apply(mechanism, observation.instance);
    if (alloc != observation.allocation) return false;
    const auto& values = observation.instance.valuations[static_cast<std::size_t>(observation.agent)];
    const auto share = mms(values, mechanism.agents());
    const auto value = observation.instance.value(observation.agent, alloc[observation.agent]);
    const Rational ratio = share == Rational(0) ? Rational(1) : value / share;
    return share == observation.share && value == observation.value && ratio == observation.ratio;
}

bool replay(const Mechanism& mechanism, const Ef1Violation& violation) {
    const auto alloc = cardinal_apply(mechanism, violation.instance);
    if (alloc != violation.allocation) return false;
    return envies_beyond_one_good(violation.instance.preferences[static_cast<std::size_t>(violation.envious)],
                                  alloc[violation.envious], alloc[violation.envied]);
}

}  // namespace sqm
