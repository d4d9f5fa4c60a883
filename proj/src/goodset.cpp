#include "sqm/goodset.hpp"

#include <algorithm>
#include <numeric>

#include "sqm/error.hpp"

namespace sqm {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::IdenticalSets: return "IdenticalSets";
        case ErrorKind::QuotaExceedsPool: return "QuotaExceedsPool";
        case ErrorKind::InvalidPartition: return "InvalidPartition";
        case ErrorKind::EnumerationTooLarge: return "EnumerationTooLarge";
        case ErrorKind::NotEnumerable: return "NotEnumerable";
        case ErrorKind::QuotaOverflow: return "QuotaOverflow";
        case ErrorKind::InvalidOrdering: return "InvalidOrdering";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::TooSmall: return "TooSmall";
        case ErrorKind::TieDetected: return "TieDetected";
        case ErrorKind::NotInClass: return "NotInClass";
        case ErrorKind::InvalidDomain: return "InvalidDomain";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::UnsupportedPreference: return "UnsupportedPreference";
        case ErrorKind::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

std::string GoodSet::to_string() const {
    std::string out = "{";
    bool first_good = true;
    for (int g : goods()) {
        if (!first_good) out += ",";
        out += "g" + std::to_string(g);
        first_good = false;
    }
    return out + "}";
}

Permutation::Permutation(std::vector<int> map) : map_(std::move(map)) {
    std::vector<bool> seen(map_.size(), false);
    for (int v : map_) {
        if (v < 0 || static_cast<std::size_t>(v) >= map_.size() || seen[static_cast<std::size_t>(v)])
            throw Error(ErrorKind::InvalidInput, "permutation is not a bijection");
        seen[static_cast<std::size_t>(v)] = true;
    }
}

Permutation Permutation::identity(int m) {
    std::vector<int> map(static_cast<std::size_t>(m));
    std::iota(map.begin(), map.end(), 0);
    return Permutation(std::move(map));
}

Permutation Permutation::transposition(int m, int a, int b) {
    auto map = identity(m).map_;
    std::swap(map.at(static_cast<std::size_t>(a)), map.at(static_cast<std::size_t>(b)));
    return Permutation(std::move(map));
}

std::vector<Permutation> Permutation::all(int m) {
    std::vector<Permutation> out;
    auto map = identity(m).map_;
    do {
        out.emplace_back(map);
    } while (std::next_permutation(map.begin(), map.end()));
    return out;
}

GoodSet Permutation::operator()(GoodSet set) const {
    GoodSet out;
    for (auto b = set.bits(); b != 0; b &= b - 1) out = out.with(map_[static_cast<std::size_t>(std::countr_zero(b))]);
    return out;
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) inv[static_cast<std::size_t>(map_[i])] = static_cast<int>(i);
    return Permutation(std::move(inv));
}

Permutation Permutation::then(const Permutation& outer) const {
    std::vector<int> out(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) out[i] = outer(map_[i]);
    return Permutation(std::move(out));
}

bool Permutation::is_identity() const noexcept {
    for (std::size_t i = 0; i < map_.size(); ++i)
        if (map_[i] != static_cast<int>(i)) return false;
    return true;
}

}  // namespace sqm
