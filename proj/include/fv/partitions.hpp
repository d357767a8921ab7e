#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fv {

std::uint64_t binomial(int n, int k);

class Partition {
public:
    // parts must be weakly decreasing with width >= parts[0] >= ... >= 0.
    Partition(std::vector<int> parts, int width);

    int height() const { return static_cast<int>(parts_.size()); }
    int width() const { return width_; }
    int operator[](std::size_t i) const { return parts_[i]; }
    const std::vector<int>& parts() const { return parts_; }
    int weight() const;
    std::string to_string() const;

    bool operator==(const Partition& o) const { return parts_ == o.parts_ && width_ == o.width_; }
    bool operator!=(const Partition& o) const { return !(*this == o); }

private:
    std::vector<int> parts_;
    int width_;
};

class ParticleConfiguration {
public:
    // positions are 1-based, strictly increasing, within [1, ring_size].
    ParticleConfiguration(std::vector<int> positions, int ring_size);

    int ring_size() const { return ring_size_; }
    int particles() const { return static_cast<int>(positions_.size()); }
    int operator[](std::size_t i) const { return positions_[i]; }
    const std::vector<int>& positions() const { return positions_; }
    bool occupied(int site) const;
    // Site 1 is the most significant of ring_size bits.
    std::uint32_t mask() const;
    static ParticleConfiguration from_mask(std::uint32_t mask, int ring_size);
    std::string to_string() const;

    bool operator==(const ParticleConfiguration& o) const {
        return positions_ == o.positions_ && ring_size_ == o.ring_size_;
    }
    bool operator!=(const ParticleConfiguration& o) const { return !(*this == o); }

private:
    std::vector<int> positions_;
    int ring_size_;
};

Partition config_to_partition(const ParticleConfiguration& x);
ParticleConfiguration partition_to_config(const Partition& lambda, int M);

// Partitions in the m^N box, parts lexicographically decreasing.
class BoxPartitions {
public:
    BoxPartitions(int m, int N);

    class iterator {
    public:
        using value_type = Partition;
        using difference_type = std::ptrdiff_t;
        iterator() = default;
        iterator(std::vector<int> parts, int width, bool done) : parts_(std::move(parts)), width_(width), done_(done) {}
        Partition operator*() const { return Partition(parts_, width_); }
        iterator& operator++();
        bool operator==(const iterator& o) const { return done_ == o.done_ && (done_ || parts_ == o.parts_); }
        bool operator!=(const iterator& o) const { return !(*this == o); }

    private:
        std::vector<int> parts_;
        int width_ = 0;
        bool done_ = true;
    };

    iterator begin() const;
    iterator end() const { return iterator({}, m_, true); }

private:
    int m_;
    int N_;
};

BoxPartitions enumerate_box(int m, int N);
std::vector<Partition> box_partitions(int m, int N);

// All N-particle configurations on M sites, in lexicographic order of positions.
std::vector<ParticleConfiguration> enumerate_configurations(int M, int N);

ParticleConfiguration parse_configuration(const std::string& text, int M);

}  // namespace fv
