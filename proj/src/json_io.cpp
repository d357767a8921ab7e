#include "fv/json_io.hpp"

#include <stdexcept>

namespace fv {

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Partition& lambda) { return lambda.parts(); }

Json to_json(const ParticleConfiguration& x) { return x.positions(); }

Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw std::invalid_argument("expected a rational as \"p/q\" or an integer");
}

Complex complex_from_json(const Json& j) {
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_number()) return {j.get<double>(), 0.0};
    throw std::invalid_argument("expected a complex number as [re, im]");
}

}  // namespace fv
