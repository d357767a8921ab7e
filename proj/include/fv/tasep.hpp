#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fv/parallel.hpp"
#include "fv/partitions.hpp"
#include "fv/scalar.hpp"

namespace fv {

struct BetheSolution {
    std::vector<Complex> z;
    Complex Y;       // prod (1 + beta z_j); prod (1 - z_j) for the TASEP
    Complex energy;  // -N + sum 1/z_j
    std::vector<double> residuals;
    std::vector<int> choice_id;  // labels of the selected polynomial roots; empty for the stationary set
    bool stationary = false;

    double max_residual() const;
};

struct BetheFailure {
    std::vector<int> choice_id;
    std::string reason;
};

struct BetheReport {
    int M = 0;
    int N = 0;
    double beta = -1;
    std::vector<BetheSolution> solutions;
    std::vector<BetheFailure> failures;  // choices that did not yield a new regular solution

    std::size_t expected() const;
    bool complete() const { return solutions.size() == expected(); }
    double max_residual() const;
    // Throws std::runtime_error with a diagnostic unless complete.
    void require_complete() const;
};

// Root sets of (1 + beta z_k)^N + (-1)^N z_k^M prod_j (1 + beta z_j) = 0.
// beta = -1 is the TASEP case, where the stationary set z = 1 is inserted analytically;
// it uses the companion iteration, other beta continue from the decoupled roots at beta = 0.
BetheReport bethe_solve(int M, int N, double beta = -1.0, Execution ex = Execution::parallel);

// Fixed point Y = c prod(1 - z'_k(Y)) on labelled companion roots, z' = -beta z.
BetheReport bethe_solve_companion(int M, int N, double beta, Execution ex = Execution::parallel);
// Path tracking from beta = 0; choice_id holds the starting labels I_j.
BetheReport bethe_solve_continuation(int M, int N, double beta, Execution ex = Execution::parallel);

// Roots of (1-z)^N - (-1)^{N-1} Y z^M.
std::vector<Complex> companion_roots(Complex Y, int M, int N);

double bethe_residual(const std::vector<Complex>& z, int k, double beta, int M);

struct GreenQuery {
    ParticleConfiguration from;
    ParticleConfiguration to;
    double t = 0;

    void validate() const;
};

// Configuration-basis observable, rows/columns in enumerate_configurations order.
using Observable = Eigen::MatrixXd;

Observable identity_observable(int M, int N);
// n_i = 1 - s_i with s_i the hole projector at site i.
Observable density_observable(int M, int N, int site);
// j_i = (1 - s_i) s_{i+1}, sites taken mod M.
Observable current_observable(int M, int N, int site);
// s_l ... s_{l+n-1}, sites taken mod M.
Observable hole_string_observable(int M, int N, int l, int n);

// Bethe data of one sector with cached Grothendieck values per root set.
class TasepSpectrum {
public:
    TasepSpectrum(int M, int N, Execution ex = Execution::parallel);

    int M() const { return M_; }
    int N() const { return N_; }
    const BetheReport& bethe() const { return report_; }
    const std::vector<ParticleConfiguration>& configurations() const { return configs_; }
    std::size_t index_of(const ParticleConfiguration& x) const;

    double green(const ParticleConfiguration& to, const ParticleConfiguration& from, double t) const;
    double stationary_term() const;
    double sum_rule(const ParticleConfiguration& from, double t) const;
    double expectation(const Observable& a, const ParticleConfiguration& from, double t) const;
    // Density and current through the closed form of the hole-string form factor.
    double density_ff(int site, const ParticleConfiguration& from, double t) const;
    double current_ff(int site, const ParticleConfiguration& from, double t) const;

    // Norm denominator sum_gamma G_gamma(z) Gbar_gamma(1/z) of a regular solution.
    Complex norm(std::size_t solution) const { return norm_[solution]; }

private:
    double spectral_sum(const ParticleConfiguration& from, double t,
                        const std::vector<Complex>& ket_weights, double stationary_value) const;
    double hole_string_ff(int l, int n, const ParticleConfiguration& from, double t) const;

    int M_, N_;
    Execution ex_;
    BetheReport report_;
    std::vector<ParticleConfiguration> configs_;
    std::vector<Partition> parts_;
    std::vector<std::vector<Complex>> G_, Gbar_;  // per solution, per configuration
    std::vector<Complex> norm_;
};

double green_function(const GreenQuery& q, Execution ex = Execution::parallel);
double sum_rule_check(const ParticleConfiguration& x, double t, Execution ex = Execution::parallel);
double expectation(const Observable& a, const ParticleConfiguration& x, double t,
                   Execution ex = Execution::parallel);

// sum_nu sum_mu A_mu^nu G_mu(z;-1) for A = s_l ... s_{l+n-1}, by the V^{(M-n)} determinant.
Complex form_factor_sum(int l, int n, const std::vector<Complex>& z, int M);

// Dense generator and evolution e^{Ht}|x>.
class MasterOracle {
public:
    // force_series skips the eigendecomposition.
    MasterOracle(int M, int N, bool force_series = false);

    const Eigen::MatrixXd& generator() const { return H_; }
    const std::vector<ParticleConfiguration>& configurations() const { return configs_; }
    std::size_t index_of(const ParticleConfiguration& x) const;
    Eigen::VectorXd evolve(const ParticleConfiguration& x, double t) const;
    Eigen::VectorXcd spectrum() const { return evals_; }
    bool used_series() const { return use_series_; }

private:
    int M_, N_;
    std::vector<ParticleConfiguration> configs_;
    Eigen::MatrixXd H_;
    Eigen::VectorXcd evals_;
    Eigen::MatrixXcd V_, Vinv_;
    bool use_series_ = false;
};

Eigen::MatrixXd tasep_generator(int M, int N);
Eigen::VectorXd master_oracle(const ParticleConfiguration& x, double t);

}  // namespace fv
