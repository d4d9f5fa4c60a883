#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sqm/goodset.hpp"
#include "sqm/rational.hpp"

namespace sqm {

enum class Order { Less, Greater };

enum class PreferenceKind { RankTable, Lexicographic, AdditiveStrict };

/// A strict, weakly monotone total order over all subsets of m goods.
///
/// The canonical semantics is the rank table (rank 0 = empty set, rank 2^m-1 = all goods).
/// Lexicographic and strict-additive preferences keep their structured form and answer
/// comparisons and demands without touching the table; the table is compiled on first
/// use and shared between copies.
class Preference {
public:
    using Rank = std::uint32_t;

    /// Throws InvalidInput unless `ranks` is a bijection onto [0, 2^m) that is strictly
    /// increasing along set inclusion.
    static Preference from_ranks(std::vector<std::uint16_t> ranks);
    /// `order` lists all goods, most important first.
    static Preference lexicographic(std::vector<int> order);
    /// Throws TieDetected if two distinct subsets have equal value.
    static Preference additive(std::vector<Rational> values);

    int goods() const noexcept { return m_; }
    PreferenceKind kind() const noexcept { return kind_; }
    bool is_lexicographic() const noexcept { return kind_ == PreferenceKind::Lexicographic; }
    const std::vector<int>& lex_order() const noexcept { return order_; }
    const std::vector<Rational>& values() const noexcept { return values_; }
    GoodSet universe() const noexcept { return GoodSet::full(m_); }

    Rank rank(GoodSet s) const;
    const std::vector<std::uint16_t>& rank_table() const;

    /// Throws IdenticalSets when s == t.
    Order compare(GoodSet s, GoodSet t) const;
    /// s strictly better than t.
    bool prefers(GoodSet s, GoodSet t) const { return rank(s) > rank(t); }
    /// s at least as good as t (equal sets included).
    bool weakly_prefers(GoodSet s, GoodSet t) const { return rank(s) >= rank(t); }

    /// The unique best subset of `pool` with at most k goods. Throws QuotaExceedsPool.
    GoodSet demand(GoodSet pool, int k) const;
    /// Top-ranked single good of a non-empty pool.
    int favorite(GoodSet pool) const { return demand(pool, 1).first(); }

    /// The preference ≼^π with π(S) ≼^π π(T) iff S ≼ T.
    Preference permuted(const Permutation& pi) const;
    /// Restriction to the goods of `w`, re-indexed densely in ascending good order.
    Preference induced(GoodSet w) const;
    /// For every A ⊊ B ⊆ s: A ∪ (M \ s) ≺ B.
    bool strongly_desires(GoodSet s) const;

    /// Same order on subsets, regardless of representation.
    bool order_equal(const Preference& other) const;
    /// Same representation and same data.
    bool structurally_equal(const Preference& other) const;

private:
    struct RankCache;

    Preference(int m, PreferenceKind kind);
    std::int64_t scaled_value(GoodSet s) const noexcept;

    int m_ = 0;
    PreferenceKind kind_ = PreferenceKind::RankTable;
    std::vector<int> order_;                 // lexicographic
    std::vector<Rank> lex_weight_;           // lexicographic: per-good weight
    std::vector<Rational> values_;           // additive
    std::vector<std::int64_t> scaled_;       // additive: values times common denominator
    std::shared_ptr<RankCache> cache_;
};

using Profile = std::vector<Preference>;

/// Every Z with Z ≼_base s also has Z ≼_candidate s.
bool is_push_up(const Preference& candidate, const Preference& base, GoodSet s);

/// Lexicographic order listing the blocks in sequence, ascending good index inside each
/// block. Empty blocks are ignored. Throws InvalidPartition unless the blocks partition
/// the m goods.
Preference lexicographic_consistent_with(std::span<const GoodSet> blocks, int m);

}  // namespace sqm
