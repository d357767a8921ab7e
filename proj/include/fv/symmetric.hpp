#pragma once

#include <stdexcept>
#include <vector>

#include "fv/determinant.hpp"
#include "fv/partitions.hpp"
#include "fv/series.hpp"

namespace fv {

namespace detail {

inline long vandermonde_sign(std::size_t n) { return ((n * (n - 1) / 2) % 2) ? -1 : 1; }

inline std::vector<int> padded_parts(const Partition& lambda, std::size_t nvars) {
    if (nvars < static_cast<std::size_t>(lambda.height())) throw std::invalid_argument("fewer variables than parts");
    std::vector<int> parts = lambda.parts();
    parts.resize(nvars, 0);
    return parts;
}

// det[phi_k(z_j)] / prod_{j<k}(z_j - z_k), confluent where z's coincide.
template <class S, class Phi>
S bialternant(Phi&& phi, const std::vector<S>& z) {
    const S r = confluent_det_ratio_columns(std::forward<Phi>(phi), z, z.size());
    return vandermonde_sign(z.size()) < 0 ? S(-r) : r;
}

}  // namespace detail

template <class S>
S schur_eval(const Partition& lambda, const std::vector<S>& z) {
    const auto parts = detail::padded_parts(lambda, z.size());
    const long N = static_cast<long>(z.size());
    return detail::bialternant(
        [&](const Series<S>& x, std::size_t k) { return x.pow(parts[k] + N - 1 - static_cast<long>(k)); }, z);
}

template <class S>
S grothendieck_eval(const Partition& lambda, const std::vector<S>& z, const S& beta) {
    const auto parts = detail::padded_parts(lambda, z.size());
    const long N = static_cast<long>(z.size());
    return detail::bialternant(
        [&](const Series<S>& x, std::size_t k) {
            return x.pow(parts[k] + N - 1 - static_cast<long>(k)) * (x * beta + S(1)).pow(static_cast<long>(k));
        },
        z);
}

// Columns z^{lambda_k+N-k} (1+beta/z)^{1-k} written as z^{lambda_k+N-1} / (z+beta)^{k-1}.
template <class S>
S dual_grothendieck_eval(const Partition& lambda, const std::vector<S>& z, const S& beta) {
    const auto parts = detail::padded_parts(lambda, z.size());
    for (const auto& zj : z)
        if (is_zero(zj)) throw std::domain_error("dual Grothendieck polynomial needs nonzero variables");
    const long N = static_cast<long>(z.size());
    return detail::bialternant(
        [&](const Series<S>& x, std::size_t k) {
            Series<S> col = x.pow(parts[k] + N - 1);
            if (k == 0) return col;
            const Series<S> shifted = x + beta;
            if (is_zero(shifted.value())) throw std::domain_error("division by vanishing (1+beta/z)");
            return col * shifted.pow(-static_cast<long>(k));
        },
        z);
}

// prod_j (1+beta/y_j)^{N-1} times the dual polynomial; a polynomial with
// columns y^{lambda_k} (y+beta)^{N-k}, finite at y_j = -beta.
template <class S>
S dual_grothendieck_regularized(const Partition& lambda, const std::vector<S>& y, const S& beta) {
    const auto parts = detail::padded_parts(lambda, y.size());
    const long N = static_cast<long>(y.size());
    return detail::bialternant(
        [&](const Series<S>& x, std::size_t k) {
            return x.pow(parts[k]) * (x + beta).pow(N - 1 - static_cast<long>(k));
        },
        y);
}

}  // namespace fv
