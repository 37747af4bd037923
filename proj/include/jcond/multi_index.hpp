#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace jcond {

/// Derivative multi-index p in N^n.
///
/// Ordering is graded (total order first) and, within one grade,
/// reverse-lexicographic, so D[1] sorts before D[2] and D[1,1] before D[1,2].
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t dim) : entries_(dim, 0) {}
    MultiIndex(std::initializer_list<unsigned> entries) : entries_(entries) {}
    explicit MultiIndex(std::vector<unsigned> entries) : entries_(std::move(entries)) {}

    static MultiIndex unit(std::size_t dim, std::size_t axis, unsigned count = 1)
    {
        MultiIndex p(dim);
        p.entries_.at(axis) = count;
        return p;
    }

    std::size_t dim() const { return entries_.size(); }
    unsigned operator[](std::size_t i) const { return entries_[i]; }
    unsigned& operator[](std::size_t i) { return entries_[i]; }
    const std::vector<unsigned>& entries() const { return entries_; }

    unsigned order() const
    {
        unsigned s = 0;
        for (unsigned e : entries_)
            s += e;
        return s;
    }
    bool is_zero() const { return order() == 0; }

    MultiIndex bumped(std::size_t axis, unsigned count = 1) const
    {
        MultiIndex p = *this;
        p.entries_.at(axis) += count;
        return p;
    }

    MultiIndex& operator+=(const MultiIndex& other);
    friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }

    /// Axes listed in application order (axis 0 first), one entry per unit.
    std::vector<std::size_t> axis_sequence() const;

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);

private:
    std::vector<unsigned> entries_;
};

/// All multi-indices of dimension `dim` with order exactly `order`, in canonical order.
std::vector<MultiIndex> multi_indices_of_order(std::size_t dim, unsigned order);

/// All multi-indices of dimension `dim` with order <= `max_order`, in canonical order.
std::vector<MultiIndex> multi_indices_up_to(std::size_t dim, unsigned max_order);

/// "1,1,2" style listing of 1-based axes, as written inside D[...].
std::string axis_list(const MultiIndex& p);

} // namespace jcond
