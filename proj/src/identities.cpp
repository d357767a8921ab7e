#include "fv/identities.hpp"

#include "fv/tasep.hpp"

namespace fv {

Complex orthogonality_weight(const std::vector<Complex>& z, double beta, int M) {
    const int N = static_cast<int>(z.size());
    Complex s(1), w(1);
    for (int j = 0; j < N; ++j) {
        const Complex den = static_cast<double>(M) + static_cast<double>(M - N) * beta * z[j];
        if (den == Complex(0)) throw std::domain_error("pole in the orthogonality weight");
        s += beta * z[j] / den;
        w *= std::pow(z[j], 1 - N) * (Complex(1) + beta * z[j]) / den;
        for (int k = 0; k < N; ++k)
            if (j != k) w *= z[j] - z[k];
    }
    return w / s;
}

OrthogonalityResult orthogonality_check(int M, int N, double beta, const Partition& lambda, const Partition& mu,
                                        Execution ex) {
    return orthogonality_check(bethe_solve(M, N, beta, ex), lambda, mu, ex);
}

OrthogonalityResult orthogonality_check(const BetheReport& rep, const Partition& lambda, const Partition& mu,
                                        Execution ex) {
    rep.require_complete();
    const int M = rep.M, N = rep.N;
    const double beta = rep.beta;
    OrthogonalityResult out;
    out.solutions = rep.solutions.size();
    out.max_residual = rep.max_residual();
    const Complex b(beta);
    out.value = ordered_sum(rep.solutions.size(), ex, Complex(0), [&](std::size_t i) {
        const auto& sol = rep.solutions[i];
        // The z = 1 set at beta = -1 contributes the uniform weight.
        if (sol.stationary) return Complex(1.0 / static_cast<double>(binomial(M, N)));
        std::vector<Complex> y;
        for (const auto& x : sol.z) y.push_back(Complex(1) / x);
        return orthogonality_weight(sol.z, beta, M) * dual_grothendieck_eval(lambda, y, b) *
               grothendieck_eval(mu, sol.z, b);
    });
    return out;
}

}  // namespace fv
