#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "fv/partitions.hpp"
#include "fv/vertex.hpp"

using namespace fv;

TEST_CASE("configuration to partition examples") {
    CHECK(config_to_partition(ParticleConfiguration({1, 2, 3}, 5)).parts() == std::vector<int>{0, 0, 0});
    CHECK(config_to_partition(ParticleConfiguration({1, 3}, 4)).parts() == std::vector<int>{1, 0});
    CHECK(config_to_partition(ParticleConfiguration({1, 3, 5}, 6)).parts() == std::vector<int>{2, 1, 0});
    CHECK(partition_to_config(Partition({1, 0}, 2), 4) == ParticleConfiguration({1, 3}, 4));
    CHECK(partition_to_config(Partition({2, 1, 0}, 3), 6) == ParticleConfiguration({1, 3, 5}, 6));
    CHECK(partition_to_config(Partition({0, 0, 0}, 2), 5) == ParticleConfiguration({1, 2, 3}, 5));
    CHECK_THROWS_AS(partition_to_config(Partition({3, 0}, 3), 4), std::invalid_argument);
}

TEST_CASE("round trip for every configuration up to ten sites") {
    for (int M = 1; M <= 10; ++M)
        for (int N = 0; N <= M; ++N)
            for (const auto& x : enumerate_configurations(M, N)) {
                const auto lambda = config_to_partition(x);
                CHECK(lambda.width() == M - N);
                CHECK(partition_to_config(lambda, M) == x);
            }
}

TEST_CASE("box enumeration") {
    const auto small = box_partitions(1, 2);
    REQUIRE(small.size() == 3);
    CHECK(small[0].parts() == std::vector<int>{1, 1});
    CHECK(small[1].parts() == std::vector<int>{1, 0});
    CHECK(small[2].parts() == std::vector<int>{0, 0});
    CHECK(box_partitions(2, 2).size() == 6);
    CHECK(box_partitions(4, 2).size() == 15);
    for (int m = 0; m <= 5; ++m)
        for (int N = 0; N <= 4; ++N) {
            const auto all = box_partitions(m, N);
            CHECK(all.size() == binomial(m + N, N));
            std::set<std::vector<int>> seen;
            for (const auto& p : all) seen.insert(p.parts());
            CHECK(seen.size() == all.size());
            for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i].parts() < all[i - 1].parts());
        }
}

TEST_CASE("box size equals sector dimension") {
    for (int M = 1; M <= 8; ++M)
        for (int N = 0; N <= M; ++N) CHECK(box_partitions(M - N, N).size() == SectorBasis(M, N).size());
}

TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(Partition({1, 2}, 3), std::invalid_argument);
    CHECK_THROWS_AS(Partition({4, 2}, 3), std::invalid_argument);
    CHECK_THROWS_AS(ParticleConfiguration({2, 2}, 3), std::invalid_argument);
    CHECK_THROWS_AS(ParticleConfiguration({0, 2}, 3), std::invalid_argument);
    CHECK_THROWS_AS(parse_configuration("1,x", 4), std::invalid_argument);
    CHECK(parse_configuration("1,3,4", 5) == ParticleConfiguration({1, 3, 4}, 5));
}

TEST_CASE("text form") {
    CHECK(Partition({2, 1, 0}, 4).to_string() == "λ = [2,1,0] in box 4^3");
}
