#include "jcond/multi_index.hpp"

#include <stdexcept>

namespace jcond {

MultiIndex& MultiIndex::operator+=(const MultiIndex& other)
{
    if (other.dim() != dim())
        throw std::invalid_argument("multi-index dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i)
        entries_[i] += other.entries_[i];
    return *this;
}

std::vector<std::size_t> MultiIndex::axis_sequence() const
{
    std::vector<std::size_t> seq;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        for (unsigned k = 0; k < entries_[i]; ++k)
            seq.push_back(i);
    return seq;
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b)
{
    if (auto c = a.dim() <=> b.dim(); c != 0)
        return c;
    if (auto c = a.order() <=> b.order(); c != 0)
        return c;
    // reverse lexicographic: more weight on earlier axes sorts first
    return b.entries_ <=> a.entries_;
}

namespace {

void enumerate(std::size_t dim, std::size_t axis, unsigned remaining, std::vector<unsigned>& cur,
               std::vector<MultiIndex>& out)
{
    if (axis + 1 == dim) {
        cur[axis] = remaining;
        out.emplace_back(cur);
        return;
    }
    for (unsigned k = remaining + 1; k-- > 0;) {
        cur[axis] = k;
        enumerate(dim, axis + 1, remaining - k, cur, out);
    }
}

} // namespace

std::vector<MultiIndex> multi_indices_of_order(std::size_t dim, unsigned order)
{
    std::vector<MultiIndex> out;
    if (dim == 0) {
        if (order == 0)
            out.emplace_back();
        return out;
    }
    std::vector<unsigned> cur(dim, 0);
    enumerate(dim, 0, order, cur, out);
    return out;
}

std::vector<MultiIndex> multi_indices_up_to(std::size_t dim, unsigned max_order)
{
    std::vector<MultiIndex> out;
    for (unsigned k = 0; k <= max_order; ++k) {
        auto level = multi_indices_of_order(dim, k);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

std::string axis_list(const MultiIndex& p)
{
    std::string s;
    for (std::size_t axis : p.axis_sequence()) {
        if (!s.empty())
            s += ',';
        s += std::to_string(axis + 1);
    }
    return s;
}

} // namespace jcond
