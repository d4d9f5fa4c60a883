#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqm/mechanism.hpp"
#include "sqm/properties.hpp"
#include "sqm/random.hpp"
#include "sqm/rational.hpp"

namespace sqm {

inline constexpr std::uint64_t kMaxMmsPartitions = 10'000'000;

/// Maximin share: best over all partitions into n bundles of the worst bundle value.
/// Values may tie. Throws TooLarge when n^m exceeds 10^7.
Rational mms(std::span<const Rational> values, int n);

/// ε used by the identical-goods family: good g is worth 1 + ε·2^g.
inline const Rational kIdenticalEpsilon{1, 1'000'000};

enum class InstanceFamily {
    Random,         // uniform integers in [1, 1000], resampled on subset-sum ties
    IdenticalGoods, // every agent values good g at 1 + ε·2^g
    Targeted,       // last picker values only the bundle of a non-last picker with quota >= 2
};

std::string_view to_string(InstanceFamily family) noexcept;

struct InstanceSpec {
    int n = 2;
    int m = 3;
    std::vector<InstanceFamily> families{InstanceFamily::Random, InstanceFamily::IdenticalGoods,
                                         InstanceFamily::Targeted};
    std::uint64_t count = 1000;  // random instances
    std::uint64_t seed = 1;
};

struct LabeledInstance {
    InstanceFamily family;
    CardinalInstance instance;
};

/// Deterministic instance stream. The targeted family needs a serial-quota mechanism and
/// yields one instance per non-last picker with quota at least 2.
std::vector<LabeledInstance> generate_instances(const InstanceSpec& spec, const Mechanism* mechanism = nullptr);

std::vector<Rational> random_strict_values(Rng& rng, int m);
std::vector<Rational> identical_goods_values(int m);

struct MmsObservation {
    std::size_t instance_index = 0;
    InstanceFamily family = InstanceFamily::Random;
    CardinalInstance instance;
    Allocation allocation;
    int agent = 0;
    Rational value;
    Rational share;
    Rational ratio;
};

struct Ef1Violation {
    std::size_t instance_index = 0;
    InstanceFamily family = InstanceFamily::Random;
    CardinalInstance instance;
    Allocation allocation;
    int envious = 0;
    int envied = 0;
};

struct FairnessAudit {
    std::string mechanism;
    std::string audit;  // "rho_mms" or "ef1"
    std::uint64_t instances_tested = 0;
    Rational worst_ratio{1};
    std::optional<MmsObservation> worst;
    std::vector<Ef1Violation> ef1_violations;
};

/// Minimum over instances and agents of v_i(bundle_i) / MMS(v_i, n); 1 when MMS is 0.
/// Ties keep the earliest (instance, agent).
FairnessAudit rho_mms_audit(const Mechanism& mechanism, const std::vector<LabeledInstance>& instances);
FairnessAudit ef1_audit(const Mechanism& mechanism, const std::vector<LabeledInstance>& instances);

/// Quota vectors for which a serial-quota mechanism can be EF1: every non-last quota at
/// most 1; the last at most 2 when all earlier quotas are 1, at most 1 otherwise.
bool ef1_quota_feasibility(std::span<const int> q);

/// 1 / floor((m - n + 2) / 2).
Rational approximation_bound(int n, int m);

/// Recomputes the observation's ratio from scratch.
bool replay(const Mechanism& mechanism, const MmsObservation& observation);
/// Re-runs the mechanism and re-checks the envy.
bool replay(const Mechanism& mechanism, const Ef1Violation& violation);

}  // namespace sqm
