#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>

namespace tentlab {

/// FNV-1a, used for provenance fingerprints in reports.
class Fnv1a {
public:
    void bytes(const void* data, std::size_t n)
    {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
    }
    void value(double x) { bytes(&x, sizeof x); }
    void value(std::uint64_t x) { bytes(&x, sizeof x); }
    void values(std::span<const double> xs)
    {
        for (double x : xs) value(x);
    }
    void text(std::string_view s) { bytes(s.data(), s.size()); }

    std::uint64_t digest() const { return state_; }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string hex_digest(std::uint64_t h);

}  // namespace tentlab
