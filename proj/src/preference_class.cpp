#include "sqm/preference_class.hpp"

#include <algorithm>
#include <numeric>

#include "sqm/error.hpp"

namespace sqm {

std::string_view to_string(ClassTag tag) noexcept {
    switch (tag) {
        case ClassTag::Lexicographic: return "lex";
        case ClassTag::StrictMonotoneAll: return "strict_monotone";
        case ClassTag::StrictAdditive: return "additive";
        case ClassTag::ExplicitList: return "explicit";
    }
    return "unknown";
}

namespace {

void extend_linear(std::vector<std::uint16_t>& ranks, std::vector<bool>& placed, std::size_t next_rank,
                   std::vector<Preference>& out) {
    const std::size_t size = ranks.size();
    if (next_rank == size) {
        out.push_back(Preference::from_ranks(ranks));
        return;
    }
    for (std::size_t s = 0; s < size; ++s) {
        if (placed[s]) continue;
        bool minimal = true;
        for (auto b = static_cast<GoodSet::Bits>(s); b != 0 && minimal; b &= b - 1)
            minimal = placed[s & ~(std::size_t{1} << std::countr_zero(b))];
        if (!minimal) continue;
        placed[s] = true;
        ranks[s] = static_cast<std::uint16_t>(next_rank);
        extend_linear(ranks, placed, next_rank + 1, out);
        placed[s] = false;
    }
}

}  // namespace

std::vector<Preference> enumerate_class(ClassTag tag, int m) {
    if (m < 0) throw Error(ErrorKind::InvalidInput, "negative number of goods");
    switch (tag) {
        case ClassTag::Lexicographic: {
            if (m > kMaxLexicographicGoods)
                throw Error(ErrorKind::EnumerationTooLarge, "lexicographic enumeration is capped at 8 goods");
            std::vector<Preference> out;
            std::vector<int> order(static_cast<std::size_t>(m));
            std::iota(order.begin(), order.end(), 0);
            do {
                out.push_back(Preference::lexicographic(order));
            } while (std::next_permutation(order.begin(), order.end()));
            return out;
        }
        case ClassTag::StrictMonotoneAll: {
            if (m > kMaxStrictMonotoneGoods)
                throw Error(ErrorKind::EnumerationTooLarge, "strict monotone enumeration is capped at 3 goods");
            const std::size_t size = std::size_t{1} << m;
            std::vector<std::uint16_t> ranks(size, 0);
            std::vector<bool> placed(size, false);
            std::vector<Preference> out;
            extend_linear(ranks, placed, 0, out);
            return out;
        }
        case ClassTag::StrictAdditive:
            throw Error(ErrorKind::NotEnumerable, "strict additive preferences are not enumerable");
        case ClassTag::ExplicitList:
            throw Error(ErrorKind::NotEnumerable, "explicit classes are constructed from a member list");
    }
    return {};
}

PreferenceClass::PreferenceClass(ClassTag tag, int m, std::vector<Preference> members)
    : tag_(tag), m_(m), members_(std::move(members)) {
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i].goods() != m) throw Error(ErrorKind::InvalidDomain, "member over a different universe");
        if (!index_.emplace(members_[i].rank_table(), i).second)
            throw Error(ErrorKind::InvalidDomain, "duplicate member in preference class");
    }
}

PreferenceClass PreferenceClass::lexicographic(int m) {
    return PreferenceClass(ClassTag::Lexicographic, m, enumerate_class(ClassTag::Lexicographic, m));
}

PreferenceClass PreferenceClass::strict_monotone_all(int m) {
    return PreferenceClass(ClassTag::StrictMonotoneAll, m, enumerate_class(ClassTag::StrictMonotoneAll, m));
}

PreferenceClass PreferenceClass::strict_additive(int m) {
    if (m < 0 || m > kMaxGoods) throw Error(ErrorKind::InvalidInput, "number of goods must be in [0, 16]");
    return PreferenceClass(ClassTag::StrictAdditive, m, {});
}

PreferenceClass PreferenceClass::explicit_list(int m, std::vector<Preference> members) {
    PreferenceClass cls(ClassTag::ExplicitList, m, std::move(members));
    for (const auto& lex : enumerate_class(ClassTag::Lexicographic, m))
        if (!cls.index_of(lex)) throw Error(ErrorKind::InvalidDomain, "class misses a lexicographic preference");
    for (const auto& pi : Permutation::all(m))
        for (const auto& p : cls.members_)
            if (!cls.index_of(p.permuted(pi))) throw Error(ErrorKind::InvalidDomain, "class is not permutations-closed");
    return cls;
}

std::size_t PreferenceClass::size() const {
    if (!enumerable()) throw Error(ErrorKind::NotEnumerable, "class is not enumerable");
    return members_.size();
}

const std::vector<Preference>& PreferenceClass::members() const {
    if (!enumerable()) throw Error(ErrorKind::NotEnumerable, "class is not enumerable");
    return members_;
}

std::optional<std::size_t> PreferenceClass::index_of(const Preference& pref) const {
    if (!enumerable() || pref.goods() != m_) return std::nullopt;
    if (tag_ == ClassTag::Lexicographic) {
        if (!pref.is_lexicographic()) {
            // Could still be order-equal to a lexicographic preference.
            auto it = index_.find(pref.rank_table());
            return it == index_.end() ? std::nullopt : std::optional(it->second);
        }
        // Members are in lexicographic order of their orderings: rank the permutation.
        const auto& order = pref.lex_order();
        const std::size_t len = order.size();
        std::vector<std::size_t> factorial(len + 1, 1);
        for (std::size_t k = 1; k <= len; ++k) factorial[k] = factorial[k - 1] * k;
        std::size_t index = 0;
        std::vector<bool> used(len, false);
        for (std::size_t pos = 0; pos < len; ++pos) {
            std::size_t smaller = 0;
            for (int g = 0; g < order[pos]; ++g)
                if (!used[static_cast<std::size_t>(g)]) ++smaller;
            used[static_cast<std::size_t>(order[pos])] = true;
            index += smaller * factorial[len - 1 - pos];
        }
        return index;
    }
    auto it = index_.find(pref.rank_table());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool PreferenceClass::contains(const Preference& pref) const {
    if (pref.goods() != m_) return false;
    if (tag_ == ClassTag::StrictAdditive)
        return pref.kind() == PreferenceKind::AdditiveStrict || pref.kind() == PreferenceKind::Lexicographic;
    return index_of(pref).has_value();
}

const std::vector<std::size_t>& PreferenceClass::permutation_action(const Permutation& pi) const {
    if (!enumerable()) throw Error(ErrorKind::NotEnumerable, "class is not enumerable");
    std::lock_guard lock(actions_->mutex);
    auto& slot = actions_->actions[pi.map()];
    if (!slot) {
        auto action = std::make_shared<std::vector<std::size_t>>(members_.size());
        for (std::size_t i = 0; i < members_.size(); ++i) {
            auto idx = index_of(members_[i].permuted(pi));
            if (!idx) throw Error(ErrorKind::InvalidDomain, "class is not permutations-closed");
            (*action)[i] = *idx;
        }
        slot = std::move(action);
    }
    return *slot;
}

}  // namespace sqm
