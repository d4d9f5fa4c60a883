#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqm/mechanism.hpp"
#include "sqm/properties.hpp"

namespace sqm {

inline constexpr std::uint64_t kMaxEnumeratedTables = 10'000'000;

/// Every canonical (q, p) for n agents and m goods; `partition_only` keeps sum(q) = m.
/// Sorted lexicographically by quota vector, then picking order.
std::vector<QuotaOrdering> enumerate_q(int n, int m, bool partition_only);

/// The canonical pair whose serial-quota mechanism agrees with `mech` on every profile.
std::optional<QuotaOrdering> recognize_serial_quota(const Mechanism& mech);

/// Size of the table-mechanism space over an enumerable domain.
struct MechanismSpace {
    int n = 0;
    int m = 0;
    std::size_t profiles = 0;
    std::size_t choices = 0;  // allocations per profile
    /// choices^profiles, or nullopt once it passes 10^7.
    std::optional<std::uint64_t> tables;
};
MechanismSpace mechanism_space(int n, const PreferenceClass& cls, bool partition_only);

/// Truthful, non-bossy and neutral (and partition, when `partition_only`).
bool satisfies_axioms(const Mechanism& mech, bool partition_only);

struct CharacterizationReport {
    int n = 0;
    int m = 0;
    std::string class_tag;
    bool partition_only = true;
    std::uint64_t tables_checked = 0;
    std::vector<Mechanism> satisfying;
    std::vector<std::optional<QuotaOrdering>> recognized;  // parallel to `satisfying`
    std::vector<QuotaOrdering> serial_quota_family;
    /// Sets equal, or the first satisfying table that matches no pair.
    bool sets_equal = false;
    std::optional<Mechanism> counterexample;
    /// Failing reports of every rejected table, kept when requested.
    std::vector<std::pair<Mechanism, PropertyReport>> rejections;
};

struct CharacterizationOptions {
    bool keep_rejections = false;
};

/// Enumerates every table mechanism and compares the axiom-satisfying ones to the
/// serial-quota family. Throws TooLarge past 10^7 tables.
CharacterizationReport verify_characterization(int n, ClassPtr cls, bool partition_only,
                                               const CharacterizationOptions& opts = {});

struct MutationReport {
    PropertyReport report;  // passed iff no mutant survived
    std::uint64_t mutants = 0;
    std::uint64_t survivors = 0;
    std::optional<Mechanism> survivor;
    /// First failing axiom report of each mutant, kept when requested.
    std::vector<std::pair<Mechanism, PropertyReport>> failures;
};

struct MutationOptions {
    std::uint64_t trials = 1000;
    std::uint64_t seed = 7;
    bool keep_failures = false;
};

/// Each trial overwrites one random profile's allocation of the base serial-quota table with
/// a different random partition and runs the three axioms plus partition.
MutationReport mutate_and_falsify(const QuotaOrdering& base, ClassPtr cls, const MutationOptions& opts = {});

}  // namespace sqm
