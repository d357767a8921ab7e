#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fv/json_io.hpp"

namespace fv::verify {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0;
    std::string detail;
};

// Runs the ten acceptance criteria in order; on_result is called after each one.
std::vector<CriterionResult> run_desk(const std::function<void(const CriterionResult&)>& on_result = {});

// Scalar-product invariants at one (M, N) with seeded rational draws.
Json scalar_invariants(int M, int N, std::uint64_t seed);

}  // namespace fv::verify
