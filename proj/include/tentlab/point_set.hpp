#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tentlab {

/// Subset of the index set {0, ..., n-1} of a finite space.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::size_t universe, bool filled = false);

    static PointSet from_indices(std::size_t universe, std::span<const std::size_t> indices);

    std::size_t universe() const { return bits_.size(); }
    bool contains(std::size_t i) const { return bits_[i] != 0; }
    void insert(std::size_t i) { bits_[i] = 1; }
    void erase(std::size_t i) { bits_[i] = 0; }

    std::size_t count() const;
    bool empty() const { return count() == 0; }
    bool full() const { return count() == universe(); }

    /// Members in increasing index order.
    std::vector<std::size_t> indices() const;

    PointSet complement() const;
    bool subset_of(const PointSet& other) const;
    bool intersects(const PointSet& other) const;

    PointSet& operator&=(const PointSet& other);
    PointSet& operator|=(const PointSet& other);
    PointSet& operator-=(const PointSet& other);

    friend PointSet operator&(PointSet a, const PointSet& b) { return a &= b; }
    friend PointSet operator|(PointSet a, const PointSet& b) { return a |= b; }
    friend PointSet operator-(PointSet a, const PointSet& b) { return a -= b; }
    friend bool operator==(const PointSet&, const PointSet&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

}  // namespace tentlab
