#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqm/mechanism.hpp"

namespace sqm {

namespace property {
inline constexpr const char* kTruthful = "truthful";
inline constexpr const char* kNonBossy = "non_bossy";
inline constexpr const char* kNeutral = "neutral";
inline constexpr const char* kPartition = "partition";
inline constexpr const char* kPareto = "pareto_efficient";
inline constexpr const char* kPushUp = "push_up_invariance";
inline constexpr const char* kControls = "controls";
inline constexpr const char* kControlClaim = "control_claim";
inline constexpr const char* kEf1 = "ef1";
}  // namespace property

/// Agent `agent` reporting `alternate` instead of her preference in `profile`.
struct DeviationWitness {
    Profile profile;
    int agent = 0;
    Preference alternate;
};

struct PermutationWitness {
    Profile profile;
    Permutation pi;
};

struct UncoveredWitness {
    Profile profile;
    GoodSet unallocated;
};

struct BlockingWitness {
    Profile profile;
    Allocation blocking;
};

/// `trigger` is empty for a plain control failure; `violating` is where the agent
/// strongly desires `set` and misses part of it.
struct ControlWitness {
    GoodSet set;
    int agent = 0;
    Profile trigger;
    Profile violating;
};

struct PushUpWitness {
    Profile profile;
    Profile pushed;
};

/// Agent `envious` still prefers `envied`'s bundle after removing any single good from it.
struct EnvyWitness {
    Profile profile;
    Allocation allocation;
    int envious = 0;
    int envied = 0;
};

using Witness = std::variant<DeviationWitness, PermutationWitness, UncoveredWitness, BlockingWitness,
                             ControlWitness, PushUpWitness, EnvyWitness>;

struct PropertyReport {
    std::string property;
    bool passed = true;
    std::optional<Witness> witness;
    /// Every violation, only filled in collect-all mode.
    std::vector<Witness> all_witnesses;
    std::uint64_t profiles_checked = 0;
    /// False when the checked statement's hypothesis does not hold for the mechanism.
    bool applicable = true;
};

struct CheckOptions {
    bool collect_all = false;
    unsigned threads = 0;
    std::uint64_t seed = 0x5eed;
};

PropertyReport check_truthful(const Mechanism& mech, const CheckOptions& opts = {});
PropertyReport check_non_bossy(const Mechanism& mech, const CheckOptions& opts = {});
/// All m! permutations for m <= 4; transpositions plus 100 seeded random ones beyond.
PropertyReport check_neutral(const Mechanism& mech, const CheckOptions& opts = {});
PropertyReport check_partition(const Mechanism& mech, const CheckOptions& opts = {});

inline constexpr std::size_t kMaxParetoAssignments = 4096;

/// An allocation that weakly improves every agent and strictly improves one, found by
/// brute force over all (n+1)^m assignments (goods may stay unallocated).
std::optional<Allocation> pareto_blocking(const Allocation& alloc, const Profile& profile);
PropertyReport check_pareto_efficient(const Mechanism& mech, const CheckOptions& opts = {});
/// Pareto check of the mechanism's output on one profile (any domain).
PropertyReport check_pareto_at(const Mechanism& mech, const Profile& profile);

/// Single-good trading cycle: agents[j] gives goods[j] and receives goods[j-1] (cyclically).
struct TradingCycle {
    std::vector<int> agents;
    std::vector<int> goods;
};
Allocation augmented(const Allocation& alloc, const TradingCycle& cycle);
bool is_strictly_improving(const TradingCycle& cycle, const Allocation& alloc, const Profile& profile);
/// Exhaustive search over simple cycles.
std::optional<TradingCycle> find_improving_cycle(const Allocation& alloc, const Profile& profile);

enum class PushUpMode {
    Sampled,     // `trials` random profiles, one random push-up profile each
    Exhaustive,  // every profile, every push-up profile in the domain
    OwnBundle,   // every profile, lexicographic push-up listing each agent's bundle first
};

struct PushUpOptions {
    PushUpMode mode = PushUpMode::Sampled;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
};

/// Identical allocations on every checked push-up pair. `applicable` reports whether the
/// mechanism is truthful and non-bossy.
PropertyReport check_push_up_invariance(const Mechanism& mech, const PushUpOptions& opts = {});

PropertyReport controls(const Mechanism& mech, int agent, GoodSet set);
/// Whenever every agent strongly desires S and some agent i receives S, agent i controls S.
PropertyReport check_control_claim(const Mechanism& mech);

/// Some ordering of the agents makes their bundles consecutive blocks of the lexicographic
/// order; unallocated goods form the last block. Throws UnsupportedPreference.
bool check_consecutive(const Allocation& alloc, const Preference& pref);

/// True iff A_j is non-empty and A_j minus {x} is strictly better than `own` for every x in A_j.
bool envies_beyond_one_good(const Preference& pref, GoodSet own, GoodSet other);
/// Every ordered pair i != j has A_j empty or some x with A_j minus {x} weakly worse for i than A_i.
PropertyReport check_ef1(const Allocation& alloc, const Profile& profile);

/// Re-evaluates a failed report's witness from scratch through the public mechanism
/// interface; true iff the violation is reproduced.
bool replay(const Mechanism& mech, const PropertyReport& report);

}  // namespace sqm
