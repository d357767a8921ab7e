#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fv/matrix.hpp"
#include "fv/series.hpp"

namespace fv {

// Fraction-free elimination with row swaps on zero pivots.
template <class S>
S det_bareiss(Matrix<S> m) {
    if (!m.square()) throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return S(1);
    S prev(1);
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (is_zero(m(k, k))) {
            std::size_t p = k + 1;
            while (p < n && is_zero(m(p, k))) ++p;
            if (p == n) return S(0);
            m.swap_rows(k, p);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                S v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                m(i, j) = v / prev;
            }
            m(i, k) = S(0);
        }
        prev = m(k, k);
    }
    S d = m(n - 1, n - 1);
    return negate ? S(-d) : d;
}

template <class S>
S det_lu(Matrix<S> m) {
    if (!m.square()) throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = m.rows();
    S d(1);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = magnitude(m(k, k));
        for (std::size_t r = k + 1; r < n; ++r) {
            const double v = magnitude(m(r, k));
            if (v > best) {
                best = v;
                p = r;
            }
        }
        if (best == 0.0) return S(0);
        if (p != k) {
            m.swap_rows(k, p);
            d = -d;
        }
        const S pivot = m(k, k);
        d *= pivot;
        for (std::size_t r = k + 1; r < n; ++r) {
            const S f = m(r, k) / pivot;
            if (is_zero(f)) continue;
            for (std::size_t c = k + 1; c < n; ++c) m(r, c) -= f * m(k, c);
        }
    }
    return d;
}

template <class S>
S det(const Matrix<S>& m) {
    if constexpr (is_exact_v<S>) {
        return det_bareiss(m);
    } else {
        return det_lu(m);
    }
}

// Gauss-Jordan inverse; throws on a singular matrix.
template <class S>
Matrix<S> inverse(Matrix<S> m) {
    if (!m.square()) throw std::invalid_argument("inverse of non-square matrix");
    const std::size_t n = m.rows();
    Matrix<S> inv = Matrix<S>::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        if constexpr (is_exact_v<S>) {
            while (p < n && is_zero(m(p, k))) ++p;
            if (p == n) throw std::domain_error("singular matrix");
        } else {
            double best = magnitude(m(k, k));
            for (std::size_t r = k + 1; r < n; ++r)
                if (magnitude(m(r, k)) > best) {
                    best = magnitude(m(r, k));
                    p = r;
                }
            if (best == 0.0) throw std::domain_error("singular matrix");
        }
        m.swap_rows(k, p);
        inv.swap_rows(k, p);
        const S pivot_inv = S(1) / m(k, k);
        for (std::size_t c = 0; c < n; ++c) {
            m(k, c) *= pivot_inv;
            inv(k, c) *= pivot_inv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == k || is_zero(m(r, k))) continue;
            const S f = m(r, k);
            for (std::size_t c = 0; c < n; ++c) {
                m(r, c) -= f * m(k, c);
                inv(r, c) -= f * inv(k, c);
            }
        }
    }
    return inv;
}

struct PointGroup {
    std::size_t first;         // index of a representative point
    std::size_t multiplicity;  // number of coincident points
};

template <class S>
std::vector<PointGroup> group_coincident(const std::vector<S>& points) {
    std::vector<PointGroup> groups;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool placed = false;
        for (auto& g : groups)
            if (coincident(points[g.first], points[i])) {
                ++g.multiplicity;
                placed = true;
                break;
            }
        if (!placed) groups.push_back({i, 1});
    }
    return groups;
}

// lim det[phi(u_j)_k] / prod_{j<k}(u_k - u_j). phi(u, k) receives u as the jet
// u_j + h truncated at the multiplicity of u_j and returns the jet of column k.
// Coincident points contribute Taylor-coefficient rows.
template <class S, class Phi>
S confluent_det_ratio_columns(Phi&& phi, const std::vector<S>& points, std::size_t ncols) {
    const std::size_t n = points.size();
    if (n != ncols) throw std::invalid_argument("confluent determinant needs as many points as columns");
    if (n == 0) return S(1);
    const auto groups = group_coincident(points);
    Matrix<S> m(n, n);
    std::size_t row = 0;
    for (const auto& g : groups) {
        const S& a = points[g.first];
        const Series<S> u = Series<S>::variable(g.multiplicity, a);
        for (std::size_t k = 0; k < n; ++k) {
            const Series<S> col = phi(u, k);
            if (col.order() < g.multiplicity) throw std::domain_error("required derivative unavailable");
            for (std::size_t i = 0; i < g.multiplicity; ++i) m(row + i, k) = col[i];
        }
        row += g.multiplicity;
    }
    S denom(1);
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::size_t h = g + 1; h < groups.size(); ++h) {
            const S diff = points[groups[h].first] - points[groups[g].first];
            denom *= ipow(diff, static_cast<long>(groups[g].multiplicity * groups[h].multiplicity));
        }
    return det(m) / denom;
}

// lim det[phi(u_j, v_k)] / prod_{j<k}(u_k - u_j).
template <class S, class Phi>
S confluent_det_ratio(Phi&& phi, const std::vector<S>& u_points, const std::vector<S>& v_points) {
    return confluent_det_ratio_columns(
        [&](const Series<S>& u, std::size_t k) { return phi(u, v_points[k]); }, u_points, v_points.size());
}

}  // namespace fv
