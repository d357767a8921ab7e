#include "fv/scalar.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace fv {

namespace {

std::string trimmed(std::string_view text) {
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    return std::string(text.substr(b, e - b));
}

Rational parse_integer(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty number");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("malformed number: " + s);
    for (std::size_t k = i; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) throw std::invalid_argument("malformed number: " + s);
    mpz_class z(s[0] == '+' ? s.substr(1) : s, 10);
    return Rational(z);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const std::string s = trimmed(text);
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        Rational num = parse_integer(s.substr(0, slash));
        Rational den = parse_integer(s.substr(slash + 1));
        if (sgn(den) == 0) throw std::invalid_argument("zero denominator: " + s);
        Rational q = num / den;
        q.canonicalize();
        return q;
    }
    if (const auto dot = s.find('.'); dot != std::string::npos) {
        std::string whole = s.substr(0, dot);
        const std::string frac = s.substr(dot + 1);
        const bool negative = !whole.empty() && whole[0] == '-';
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        Rational w = parse_integer(whole);
        if (frac.empty()) return w;
        Rational f = parse_integer(frac);
        if (sgn(f) < 0 || frac[0] == '-' || frac[0] == '+') throw std::invalid_argument("malformed number: " + s);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        Rational q = f / Rational(scale);
        Rational r = negative ? Rational(w - q) : Rational(w + q);
        r.canonicalize();
        return r;
    }
    return parse_integer(s);
}

Complex parse_complex(std::string_view text) {
    const std::string s = trimmed(text);
    if (!s.empty() && s.find(',') != std::string::npos) {
        std::string body = s;
        if (body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
        const auto comma = body.find(',');
        return {parse_rational(body.substr(0, comma)).get_d(), parse_rational(body.substr(comma + 1)).get_d()};
    }
    char* end = nullptr;
    const double re = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') return {parse_rational(s).get_d(), 0.0};
    return {re, 0.0};
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const Complex& z) {
    std::ostringstream os;
    os.precision(17);
    os << "[" << z.real() << ", " << z.imag() << "]";
    return os.str();
}

}  // namespace fv
