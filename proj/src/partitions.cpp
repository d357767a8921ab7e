#include "fv/partitions.hpp"

#include <sstream>
#include <stdexcept>

namespace fv {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

Partition::Partition(std::vector<int> parts, int width) : parts_(std::move(parts)), width_(width) {
    if (width_ < 0) throw std::invalid_argument("negative box width");
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] < 0 || parts_[i] > width_) throw std::invalid_argument("partition outside box: " + to_string());
        if (i > 0 && parts_[i] > parts_[i - 1]) throw std::invalid_argument("parts not weakly decreasing: " + to_string());
    }
}

int Partition::weight() const {
    int s = 0;
    for (int p : parts_) s += p;
    return s;
}

std::string Partition::to_string() const {
    std::ostringstream os;
    os << "λ = [";
    for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
    os << "] in box " << width_ << "^" << parts_.size();
    return os.str();
}

ParticleConfiguration::ParticleConfiguration(std::vector<int> positions, int ring_size)
    : positions_(std::move(positions)), ring_size_(ring_size) {
    if (ring_size_ < 1 || ring_size_ > 31) throw std::invalid_argument("ring size must be in [1, 31]");
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        if (positions_[i] < 1 || positions_[i] > ring_size_)
            throw std::invalid_argument("particle position outside ring: " + to_string());
        if (i > 0 && positions_[i] <= positions_[i - 1])
            throw std::invalid_argument("positions not strictly increasing: " + to_string());
    }
}

bool ParticleConfiguration::occupied(int site) const {
    for (int p : positions_)
        if (p == site) return true;
    return false;
}

std::uint32_t ParticleConfiguration::mask() const {
    std::uint32_t m = 0;
    for (int p : positions_) m |= 1u << (ring_size_ - p);
    return m;
}

ParticleConfiguration ParticleConfiguration::from_mask(std::uint32_t mask, int ring_size) {
    std::vector<int> pos;
    for (int x = 1; x <= ring_size; ++x)
        if (mask & (1u << (ring_size - x))) pos.push_back(x);
    return ParticleConfiguration(std::move(pos), ring_size);
}

std::string ParticleConfiguration::to_string() const {
    std::ostringstream os;
    os << "x = (";
    for (std::size_t i = 0; i < positions_.size(); ++i) os << (i ? "," : "") << positions_[i];
    os << ") on " << ring_size_ << " sites";
    return os.str();
}

Partition config_to_partition(const ParticleConfiguration& x) {
    const int N = x.particles();
    std::vector<int> parts(N);
    for (int j = 1; j <= N; ++j) parts[j - 1] = x[N - j] - N + j - 1;
    return Partition(std::move(parts), x.ring_size() - N);
}

ParticleConfiguration partition_to_config(const Partition& lambda, int M) {
    const int N = lambda.height();
    if (N > M) throw std::invalid_argument("more parts than sites");
    for (int p : lambda.parts())
        if (p > M - N) throw std::invalid_argument("partition outside box (M-N)^N: " + lambda.to_string());
    std::vector<int> pos(N);
    for (int j = 1; j <= N; ++j) pos[j - 1] = lambda[N - j] + j;
    return ParticleConfiguration(std::move(pos), M);
}

BoxPartitions::BoxPartitions(int m, int N) : m_(m), N_(N) {
    if (m < 0 || N < 0) throw std::invalid_argument("box dimensions must be nonnegative");
}

BoxPartitions::iterator BoxPartitions::begin() const { return iterator(std::vector<int>(N_, m_), m_, false); }

BoxPartitions::iterator& BoxPartitions::iterator::operator++() {
    int i = static_cast<int>(parts_.size()) - 1;
    while (i >= 0 && parts_[i] == 0) --i;
    if (i < 0) {
        done_ = true;
        return *this;
    }
    --parts_[i];
    for (std::size_t k = static_cast<std::size_t>(i) + 1; k < parts_.size(); ++k) parts_[k] = parts_[i];
    return *this;
}

BoxPartitions enumerate_box(int m, int N) { return BoxPartitions(m, N); }

std::vector<Partition> box_partitions(int m, int N) {
    std::vector<Partition> out;
    for (const auto& p : enumerate_box(m, N)) out.push_back(p);
    return out;
}

std::vector<ParticleConfiguration> enumerate_configurations(int M, int N) {
    if (N < 0 || N > M) throw std::invalid_argument("particle number outside [0, M]");
    std::vector<ParticleConfiguration> out;
    std::vector<int> pos(N);
    for (int i = 0; i < N; ++i) pos[i] = i + 1;
    while (true) {
        out.emplace_back(pos, M);
        int i = N - 1;
        while (i >= 0 && pos[i] == M - N + i + 1) --i;
        if (i < 0) break;
        ++pos[i];
        for (int k = i + 1; k < N; ++k) pos[k] = pos[k - 1] + 1;
    }
    return out;
}

ParticleConfiguration parse_configuration(const std::string& text, int M) {
    std::vector<int> pos;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const int v = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument("malformed configuration: " + text);
        pos.push_back(v);
    }
    return ParticleConfiguration(std::move(pos), M);
}

}  // namespace fv
