#include "tentlab/point_set.hpp"

#include <algorithm>
#include <stdexcept>

namespace tentlab {

PointSet::PointSet(std::size_t universe, bool filled) : bits_(universe, filled ? 1 : 0) {}

PointSet PointSet::from_indices(std::size_t universe, std::span<const std::size_t> indices)
{
    PointSet s(universe);
    for (std::size_t i : indices) {
        if (i >= universe)
            throw std::out_of_range("point index out of range");
        s.insert(i);
    }
    return s;
}

std::size_t PointSet::count() const
{
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> PointSet::indices() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) out.push_back(i);
    return out;
}

PointSet PointSet::complement() const
{
    PointSet c(universe());
    for (std::size_t i = 0; i < bits_.size(); ++i) c.bits_[i] = bits_[i] ? 0 : 1;
    return c;
}

bool PointSet::subset_of(const PointSet& other) const
{
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] && !other.bits_[i]) return false;
    return true;
}

bool PointSet::intersects(const PointSet& other) const
{
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] && other.bits_[i]) return true;
    return false;
}

PointSet& PointSet::operator&=(const PointSet& other)
{
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] = bits_[i] & other.bits_[i];
    return *this;
}

PointSet& PointSet::operator|=(const PointSet& other)
{
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] = bits_[i] | other.bits_[i];
    return *this;
}

PointSet& PointSet::operator-=(const PointSet& other)
{
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] = bits_[i] & (other.bits_[i] ^ 1);
    return *this;
}

}  // namespace tentlab
