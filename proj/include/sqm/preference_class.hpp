#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <vector>

#include "sqm/preference.hpp"

namespace sqm {

enum class ClassTag { Lexicographic, StrictMonotoneAll, StrictAdditive, ExplicitList };

std::string_view to_string(ClassTag tag) noexcept;

inline constexpr int kMaxLexicographicGoods = 8;
inline constexpr int kMaxStrictMonotoneGoods = 3;

/// Complete, duplicate-free, deterministic enumeration of a named class.
///
/// Lexicographic preferences come in lexicographic order of their good ordering.
/// StrictMonotoneAll lists the linear extensions of the subset lattice (worst set first),
/// in lexicographic order of the bitmask sequence.
std::vector<Preference> enumerate_class(ClassTag tag, int m);

/// A permutations-closed domain of strict preferences.
class PreferenceClass {
public:
    static PreferenceClass lexicographic(int m);
    static PreferenceClass strict_monotone_all(int m);
    /// Non-enumerable; membership means "strict additive" (lexicographic preferences are
    /// strict additive with powers-of-two values, so they belong too).
    static PreferenceClass strict_additive(int m);
    /// Throws InvalidDomain unless the list is duplicate-free, closed under every
    /// permutation of goods, and contains every lexicographic preference.
    static PreferenceClass explicit_list(int m, std::vector<Preference> members);

    ClassTag tag() const noexcept { return tag_; }
    int goods() const noexcept { return m_; }
    bool enumerable() const noexcept { return tag_ != ClassTag::StrictAdditive; }
    std::size_t size() const;  // throws NotEnumerable
    const Preference& member(std::size_t index) const { return members_.at(index); }
    const std::vector<Preference>& members() const;  // throws NotEnumerable

    /// Index of the member order-equal to `pref`, if any.
    std::optional<std::size_t> index_of(const Preference& pref) const;
    bool contains(const Preference& pref) const;

    /// action[i] = index of member(i) permuted by pi. Cached per permutation.
    const std::vector<std::size_t>& permutation_action(const Permutation& pi) const;

private:
    PreferenceClass(ClassTag tag, int m, std::vector<Preference> members);

    ClassTag tag_;
    int m_;
    std::vector<Preference> members_;
    std::map<std::vector<std::uint16_t>, std::size_t> index_;

    struct ActionCache {
        std::mutex mutex;
        std::map<std::vector<int>, std::shared_ptr<const std::vector<std::size_t>>> actions;
    };
    std::shared_ptr<ActionCache> actions_ = std::make_shared<ActionCache>();
};

using ClassPtr = std::shared_ptr<const PreferenceClass>;

}  // namespace sqm
