#include "sqm/preference.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

#include <boost/integer/common_factor_rt.hpp>

#include "sqm/error.hpp"

namespace sqm {

struct Preference::RankCache {
    std::once_flag once;
    std::vector<std::uint16_t> table;
};

Preference::Preference(int m, PreferenceKind kind)
    : m_(m), kind_(kind), cache_(std::make_shared<RankCache>()) {
    if (m < 0 || m > kMaxGoods) throw Error(ErrorKind::InvalidInput, "number of goods must be in [0, 16]");
}

Preference Preference::from_ranks(std::vector<std::uint16_t> ranks) {
    const auto size = ranks.size();
    if (size == 0 || (size & (size - 1)) != 0)
        throw Error(ErrorKind::InvalidInput, "rank table size must be a power of two");
    const int m = std::countr_zero(size);
    Preference p(m, PreferenceKind::RankTable);

    std::vector<bool> seen(size, false);
    for (auto r : ranks) {
        if (r >= size || seen[r]) throw Error(ErrorKind::InvalidInput, "rank table is not a bijection");
        seen[r] = true;
    }
    // Checking single-good removals suffices: inclusion chains compose.
    for (std::size_t s = 1; s < size; ++s)
        for (auto b = static_cast<GoodSet::Bits>(s); b != 0; b &= b - 1) {
            auto t = s & ~(std::size_t{1} << std::countr_zero(b));
            if (ranks[t] >= ranks[s]) throw Error(ErrorKind::InvalidInput, "rank table is not monotone");
        }
    std::call_once(p.cache_->once, [&] { p.cache_->table = std::move(ranks); });
    return p;
}

Preference Preference::lexicographic(std::vector<int> order) {
    const int m = static_cast<int>(order.size());
    Preference p(m, PreferenceKind::Lexicographic);
    std::vector<bool> seen(order.size(), false);
    p.lex_weight_.assign(order.size(), 0);
    for (int pos = 0; pos < m; ++pos) {
        const int g = order[static_cast<std::size_t>(pos)];
        if (g < 0 || g >= m || seen[static_cast<std::size_t>(g)])
            throw Error(ErrorKind::InvalidInput, "lexicographic order must list every good once");
        seen[static_cast<std::size_t>(g)] = true;
        p.lex_weight_[static_cast<std::size_t>(g)] = Rank{1} << (m - 1 - pos);
    }
    p.order_ = std::move(order);
    return p;
}

Preference Preference::additive(std::vector<Rational> values) {
    const int m = static_cast<int>(values.size());
    Preference p(m, PreferenceKind::AdditiveStrict);
    std::int64_t denom = 1;
    for (const auto& v : values) {
        if (v < Rational(0)) throw Error(ErrorKind::InvalidInput, "additive values must be non-negative");
        denom = boost::integer::lcm(denom, v.denominator());
    }
    p.scaled_.reserve(values.size());
    __int128 total = 0;
    for (const auto& v : values) {
        const __int128 scaled = static_cast<__int128>(v.numerator()) * (denom / v.denominator());
        total += scaled;
        if (total > (__int128{1} << 62)) throw Error(ErrorKind::InvalidInput, "additive values overflow");
        p.scaled_.push_back(static_cast<std::int64_t>(scaled));
    }
    p.values_ = std::move(values);

    const std::size_t size = std::size_t{1} << m;
    std::vector<std::int64_t> sums(size, 0);
    for (std::size_t s = 1; s < size; ++s) {
        const int g = std::countr_zero(s);
        sums[s] = sums[s & (s - 1)] + p.scaled_[static_cast<std::size_t>(g)];
    }
    std::sort(sums.begin(), sums.end());
    if (std::adjacent_find(sums.begin(), sums.end()) != sums.end())
        throw Error(ErrorKind::TieDetected, "two distinct subsets have equal additive value");
    return p;
}

std::int64_t Preference::scaled_value(GoodSet s) const noexcept {
    std::int64_t sum = 0;
    for (auto b = s.bits(); b != 0; b &= b - 1) sum += scaled_[static_cast<std::size_t>(std::countr_zero(b))];
    return sum;
}

const std::vector<std::uint16_t>& Preference::rank_table() const {
    std::call_once(cache_->once, [this] {
        const std::size_t size = std::size_t{1} << m_;
        std::vector<std::uint16_t> table(size);
        if (kind_ == PreferenceKind::Lexicographic) {
            for (std::size_t s = 0; s < size; ++s) table[s] = static_cast<std::uint16_t>(rank(GoodSet(static_cast<GoodSet::Bits>(s))));
        } else {
            std::vector<std::int64_t> sums(size, 0);
            for (std::size_t s = 1; s < size; ++s)
                sums[s] = sums[s & (s - 1)] + scaled_[static_cast<std::size_t>(std::countr_zero(s))];
            std::vector<std::uint32_t> idx(size);
            std::iota(idx.begin(), idx.end(), 0U);
            std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return sums[a] < sums[b]; });
            for (std::size_t r = 0; r < size; ++r) table[idx[r]] = static_cast<std::uint16_t>(r);
        }
        cache_->table = std::move(table);
    });
    return cache_->table;
}

Preference::Rank Preference::rank(GoodSet s) const {
    if (kind_ == PreferenceKind::Lexicographic) {
        Rank r = 0;
        for (auto b = s.bits(); b != 0; b &= b - 1) r += lex_weight_[static_cast<std::size_t>(std::countr_zero(b))];
        return r;
    }
    return rank_table()[s.bits()];
}

Order Preference::compare(GoodSet s, GoodSet t) const {
    if (s == t) throw Error(ErrorKind::IdenticalSets, "compare requires distinct sets");
    switch (kind_) {
        case PreferenceKind::Lexicographic: {
            const auto diff = s ^ t;
            for (int g : order_)
                if (diff.contains(g)) return s.contains(g) ? Order::Greater : Order::Less;
            break;
        }
        case PreferenceKind::AdditiveStrict:
            return scaled_value(s) > scaled_value(t) ? Order::Greater : Order::Less;
        case PreferenceKind::RankTable:
            break;
    }
    return rank(s) > rank(t) ? Order::Greater : Order::Less;
}

GoodSet Preference::demand(GoodSet pool, int k) const {
    if (k < 0 || k > pool.size()) throw Error(ErrorKind::QuotaExceedsPool, "quota larger than the pool");
    switch (kind_) {
        case PreferenceKind::Lexicographic: {
            GoodSet out;
            for (int g : order_) {
                if (out.size() == k) break;
                if (pool.contains(g)) out = out.with(g);
            }
            return out;
        }
        case PreferenceKind::AdditiveStrict: {
            auto goods = pool.goods();
            std::partial_sort(goods.begin(), goods.begin() + k, goods.end(), [&](int a, int b) {
                return scaled_[static_cast<std::size_t>(a)] > scaled_[static_cast<std::size_t>(b)];
            });
            GoodSet out;
            for (int i = 0; i < k; ++i) out = out.with(goods[static_cast<std::size_t>(i)]);
            return out;
        }
        case PreferenceKind::RankTable:
            break;
    }
    const auto& table = rank_table();
    GoodSet best;
    for_each_subset(pool, [&](GoodSet t) {
        if (t.size() <= k && table[t.bits()] > table[best.bits()]) best = t;
    });
    return best;
}

Preference Preference::permuted(const Permutation& pi) const {
    if (pi.goods() != m_) throw Error(ErrorKind::InvalidInput, "permutation size differs from number of goods");
    switch (kind_) {
        case PreferenceKind::Lexicographic: {
            std::vector<int> order;
            order.reserve(order_.size());
            for (int g : order_) order.push_back(pi(g));
            return lexicographic(std::move(order));
        }
        case PreferenceKind::AdditiveStrict: {
            std::vector<Rational> values(values_.size());
            for (int g = 0; g < m_; ++g) values[static_cast<std::size_t>(pi(g))] = values_[static_cast<std::size_t>(g)];
            return additive(std::move(values));
        }
        case PreferenceKind::RankTable:
            break;
    }
    const auto inv = pi.inverse();
    const auto& table = rank_table();
    std::vector<std::uint16_t> out(table.size());
    for (std::size_t s = 0; s < table.size(); ++s)
        out[s] = table[inv(GoodSet(static_cast<GoodSet::Bits>(s))).bits()];
    return from_ranks(std::move(out));
}

Preference Preference::induced(GoodSet w) const {
    if (!w.within(m_)) throw Error(ErrorKind::InvalidInput, "induced set outside the universe");
    const auto kept = w.goods();
    std::vector<int> new_index(static_cast<std::size_t>(m_), -1);
    for (std::size_t j = 0; j < kept.size(); ++j) new_index[static_cast<std::size_t>(kept[j])] = static_cast<int>(j);

    switch (kind_) {
        case PreferenceKind::Lexicographic: {
            std::vector<int> order;
            for (int g : order_)
                if (w.contains(g)) order.push_back(new_index[static_cast<std::size_t>(g)]);
            return lexicographic(std::move(order));
        }
        case PreferenceKind::AdditiveStrict: {
            std::vector<Rational> values;
            for (int g : kept) values.push_back(values_[static_cast<std::size_t>(g)]);
            return additive(std::move(values));
        }
        case PreferenceKind::RankTable:
            break;
    }
    const std::size_t size = std::size_t{1} << kept.size();
    std::vector<GoodSet::Bits> lifted(size, 0);
    for (std::size_t s = 1; s < size; ++s)
        lifted[s] = lifted[s & (s - 1)] | (GoodSet::Bits{1} << kept[static_cast<std::size_t>(std::countr_zero(s))]);
    const auto& table = rank_table();
    std::vector<std::uint32_t> idx(size);
    std::iota(idx.begin(), idx.end(), 0U);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return table[lifted[a]] < table[lifted[b]]; });
    std::vector<std::uint16_t> ranks(size);
    for (std::size_t r = 0; r < size; ++r) ranks[idx[r]] = static_cast<std::uint16_t>(r);
    return from_ranks(std::move(ranks));
}

bool Preference::strongly_desires(GoodSet s) const {
    // Monotonicity reduces A ⊊ B to the maximal choices A = B \ {b}.
    const auto rest = universe() - s;
    bool ok = true;
    for_each_subset(s, [&](GoodSet b) {
        if (!ok) return;
        for (int g : b.goods())
            if (!prefers(b, b.without(g) | rest)) {
                ok = false;
                return;
            }
    });
    return ok;
}

bool Preference::order_equal(const Preference& other) const {
    if (m_ != other.m_) return false;
    if (kind_ == PreferenceKind::Lexicographic && other.kind_ == PreferenceKind::Lexicographic)
        return order_ == other.order_;
    return rank_table() == other.rank_table();
}

bool Preference::structurally_equal(const Preference& other) const {
    if (m_ != other.m_ || kind_ != other.kind_) return false;
    switch (kind_) {
        case PreferenceKind::Lexicographic: return order_ == other.order_;
        case PreferenceKind::AdditiveStrict: return values_ == other.values_;
        case PreferenceKind::RankTable: return rank_table() == other.rank_table();
    }
    return false;
}

bool is_push_up(const Preference& candidate, const Preference& base, GoodSet s) {
    if (candidate.goods() != base.goods()) throw Error(ErrorKind::InvalidInput, "preferences over different universes");
    const auto base_s = base.rank(s);
    const auto cand_s = candidate.rank(s);
    const std::size_t size = std::size_t{1} << base.goods();
    for (std::size_t z = 0; z < size; ++z) {
        const GoodSet zs(static_cast<GoodSet::Bits>(z));
        if (base.rank(zs) <= base_s && candidate.rank(zs) > cand_s) return false;
    }
    return true;
}

Preference lexicographic_consistent_with(std::span<const GoodSet> blocks, int m) {
    GoodSet covered;
    std::vector<int> order;
    for (auto block : blocks) {
        if (!block.within(m)) throw Error(ErrorKind::InvalidPartition, "block contains goods outside the universe");
        if (!(covered & block).empty()) throw Error(ErrorKind::InvalidPartition, "blocks overlap");
        covered |= block;
        for (int g : block.goods()) order.push_back(g);
    }
    if (covered != GoodSet::full(m)) throw Error(ErrorKind::InvalidPartition, "blocks do not cover every good");
    return Preference::lexicographic(std::move(order));
}

}  // namespace sqm
