#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace sqm {

inline constexpr int kMaxGoods = 16;

/// A subset of goods {0, ..., m-1}; bit i set iff good i is in the set.
class GoodSet {
public:
    using Bits = std::uint32_t;

    constexpr GoodSet() noexcept = default;
    constexpr explicit GoodSet(Bits bits) noexcept : bits_(bits) {}

    static constexpr GoodSet full(int m) noexcept { return GoodSet((Bits{1} << m) - 1); }
    static constexpr GoodSet single(int good) noexcept { return GoodSet(Bits{1} << good); }

    constexpr Bits bits() const noexcept { return bits_; }
    constexpr int size() const noexcept { return std::popcount(bits_); }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    constexpr bool contains(int good) const noexcept { return (bits_ >> good) & 1U; }
    constexpr bool subset_of(GoodSet other) const noexcept { return (bits_ & ~other.bits_) == 0; }
    constexpr bool within(int m) const noexcept { return m >= 32 || bits_ < (Bits{1} << m); }

    /// Lowest-indexed good; undefined on the empty set.
    constexpr int first() const noexcept { return std::countr_zero(bits_); }

    constexpr GoodSet with(int good) const noexcept { return GoodSet(bits_ | (Bits{1} << good)); }
    constexpr GoodSet without(int good) const noexcept { return GoodSet(bits_ & ~(Bits{1} << good)); }

    constexpr GoodSet operator|(GoodSet o) const noexcept { return GoodSet(bits_ | o.bits_); }
    constexpr GoodSet operator&(GoodSet o) const noexcept { return GoodSet(bits_ & o.bits_); }
    constexpr GoodSet operator-(GoodSet o) const noexcept { return GoodSet(bits_ & ~o.bits_); }
    constexpr GoodSet operator^(GoodSet o) const noexcept { return GoodSet(bits_ ^ o.bits_); }
    GoodSet& operator|=(GoodSet o) noexcept { bits_ |= o.bits_; return *this; }
    GoodSet& operator&=(GoodSet o) noexcept { bits_ &= o.bits_; return *this; }
    GoodSet& operator-=(GoodSet o) noexcept { bits_ &= ~o.bits_; return *this; }

    constexpr auto operator<=>(const GoodSet&) const noexcept = default;

    std::vector<int> goods() const {
        std::vector<int> out;
        for (Bits b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
        return out;
    }

    std::string to_string() const;

private:
    Bits bits_ = 0;
};

/// Visits every subset of `set` (including the empty set and `set` itself).
template <typename F>
void for_each_subset(GoodSet set, F&& f) {
    const auto all = set.bits();
    auto sub = all;
    while (true) {
        f(GoodSet(sub));
        if (sub == 0) break;
        sub = (sub - 1) & all;
    }
}

/// A bijection on goods; map[i] is the image of good i.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> map);  // throws InvalidInput if not a bijection

    static Permutation identity(int m);
    static Permutation transposition(int m, int a, int b);
    /// All m! permutations in lexicographic order of the image vector.
    static std::vector<Permutation> all(int m);

    int goods() const noexcept { return static_cast<int>(map_.size()); }
    int operator()(int good) const { return map_[static_cast<std::size_t>(good)]; }
    GoodSet operator()(GoodSet set) const;
    Permutation inverse() const;
    Permutation then(const Permutation& outer) const;  // outer ∘ this
    const std::vector<int>& map() const noexcept { return map_; }
    bool is_identity() const noexcept;

    bool operator==(const Permutation&) const = default;

private:
    std::vector<int> map_;
};

}  // namespace sqm
