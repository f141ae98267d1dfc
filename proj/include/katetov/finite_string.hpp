#pragma once
// Finite strings of naturals under the prefix order.

#include "katetov/rational.hpp"

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <string>
#include <vector>

namespace katetov {

struct FiniteString {
    std::vector<Nat> entries;

    FiniteString() = default;
    FiniteString(std::initializer_list<Nat> xs) : entries(xs) {}
    explicit FiniteString(std::vector<Nat> xs) : entries(std::move(xs)) {}

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    Nat operator[](std::size_t i) const { return entries[i]; }

    FiniteString prefix(std::size_t len) const {
        return FiniteString(std::vector<Nat>(entries.begin(), entries.begin() + static_cast<long>(std::min(len, size()))));
    }
    FiniteString child(Nat x) const {
        FiniteString s = *this;
        s.entries.push_back(x);
        return s;
    }
    FiniteString parent() const { return prefix(size() == 0 ? 0 : size() - 1); }

    // this ⪯ other
    bool is_prefix_of(const FiniteString& other) const {
        return size() <= other.size() && std::equal(entries.begin(), entries.end(), other.entries.begin());
    }
    bool comparable(const FiniteString& other) const { return is_prefix_of(other) || other.is_prefix_of(*this); }

    // Lexicographic order; a proper prefix sorts first.
    auto operator<=>(const FiniteString&) const = default;
    bool operator==(const FiniteString&) const = default;

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(entries[i]);
        }
        return s + ")";
    }
};

} // namespace katetov
