#pragma once

#include <vector>

#include "json.hpp"

#include "fv/partitions.hpp"
#include "fv/scalar.hpp"

namespace fv {

using Json = nlohmann::ordered_json;

// Rationals as "p/q" strings, complex numbers as [re, im].
Json to_json(const Rational& q);
Json to_json(const Complex& z);
Json to_json(const Partition& lambda);
Json to_json(const ParticleConfiguration& x);

template <class S>
Json to_json(const std::vector<S>& xs) {
    Json out = Json::array();
    for (const auto& x : xs) out.push_back(to_json(x));
    return out;
}

Rational rational_from_json(const Json& j);
Complex complex_from_json(const Json& j);

}  // namespace fv
