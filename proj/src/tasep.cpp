#include "fv/tasep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fv/identities.hpp"
#include "fv/symmetric.hpp"

namespace fv {

namespace {

std::vector<std::vector<int>> subsets(int M, int N) {
    std::vector<std::vector<int>> out;
    std::vector<int> c(N);
    for (int i = 0; i < N; ++i) c[i] = i;
    while (true) {
        out.push_back(c);
        int i = N - 1;
        while (i >= 0 && c[i] == M - N + i) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < N; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

bool root_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

double set_distance(std::vector<Complex> a, std::vector<Complex> b) {
    std::sort(a.begin(), a.end(), root_less);
    std::sort(b.begin(), b.end(), root_less);
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// Roots of the companion polynomial grouped by the branch label k in [0, M).
std::vector<std::vector<Complex>> labelled_roots(Complex t, int M, int N) {
    const Complex Y = std::pow(t, M);
    const double rho = static_cast<double>(N) / M;
    const double offset = N % 2 ? 0.0 : 0.5;
    std::vector<std::vector<Complex>> lab(static_cast<std::size_t>(M));
    for (const Complex& z : companion_roots(Y, M, N)) {
        const Complex r = std::exp(rho * std::log(Complex(1) - z)) / (z * t);
        const double k = std::arg(r) * M / (2 * std::numbers::pi) - offset;
        const long idx = ((std::lround(k) % M) + M) % M;
        lab[static_cast<std::size_t>(idx)].push_back(z);
    }
    return lab;
}

struct ChoiceOutcome {
    bool ok = false;
    std::vector<Complex> zp;  // roots in the rescaled variable z' = -beta z
    std::string reason;
};

// Fixed point t^M = c prod (1 - z'_k(t)) over the chosen labels.
ChoiceOutcome iterate_choice(const std::vector<int>& choice, int M, int N, Complex c, Complex t0, double damp) {
    ChoiceOutcome out;
    Complex t = t0;
    Complex y_prev(std::nan(""), 0);
    for (int it = 0; it < 500; ++it) {
        const auto lab = labelled_roots(t, M, N);
        std::vector<Complex> zs;
        for (int k : choice) {
            if (lab[static_cast<std::size_t>(k)].size() != 1) {
                out.reason = "label collision";
                return out;
            }
            zs.push_back(lab[static_cast<std::size_t>(k)][0]);
        }
        Complex y = c;
        for (const auto& z : zs) y *= Complex(1) - z;
        if (std::abs(y) < 1e-300) {
            out.reason = "fixed point collapsed to Y = 0";
            return out;
        }
        if (std::abs(y - y_prev) <= 1e-13 && std::abs(y - std::pow(t, M)) <= 1e-12) {
            out.ok = true;
            out.zp = zs;
            return out;
        }
        y_prev = y;
        const Complex tn = std::exp(std::log(y) / static_cast<double>(M));
        t = damp * t + (1 - damp) * tn;
    }
    out.reason = "no convergence in 500 iterations";
    return out;
}

Complex complex_energy(const std::vector<Complex>& z) {
    Complex e(-static_cast<double>(z.size()));
    for (const auto& x : z) e += Complex(1) / x;
    return e;
}

BetheSolution make_solution(std::vector<Complex> z, double beta, int M, std::vector<int> choice) {
    BetheSolution s;
    s.z = std::move(z);
    s.Y = Complex(1);
    for (const auto& x : s.z) s.Y *= Complex(1) + beta * x;
    s.energy = complex_energy(s.z);
    for (std::size_t k = 0; k < s.z.size(); ++k) s.residuals.push_back(bethe_residual(s.z, static_cast<int>(k), beta, M));
    s.choice_id = std::move(choice);
    return s;
}

}  // namespace

double BetheSolution::max_residual() const {
    double r = 0;
    for (double x : residuals) r = std::max(r, x);
    return r;
}

std::size_t BetheReport::expected() const { return binomial(M, N); }

double BetheReport::max_residual() const {
    double r = 0;
    for (const auto& s : solutions) r = std::max(r, s.max_residual());
    return r;
}

void BetheReport::require_complete() const {
    if (complete()) return;
    std::ostringstream os;
    os << "incomplete Bethe root enumeration for M = " << M << ", N = " << N << ": found " << solutions.size()
       << " of " << expected();
    for (const auto& f : failures) {
        os << "; choice {";
        for (std::size_t i = 0; i < f.choice_id.size(); ++i) os << (i ? "," : "") << f.choice_id[i];
        os << "}: " << f.reason;
    }
    throw std::runtime_error(os.str());
}

std::vector<Complex> companion_roots(Complex Y, int M, int N) {
    if (N < 1 || N >= M) throw std::invalid_argument("companion polynomial needs 1 <= N < M");
    const Complex b = (N % 2 ? 1.0 : -1.0) * Y;
    if (std::abs(b) < 1e-300) throw std::domain_error("companion polynomial degenerates at Y = 0");
    std::vector<Complex> a(static_cast<std::size_t>(M + 1), Complex(0));
    for (int k = 0; k <= N; ++k) a[static_cast<std::size_t>(k)] = static_cast<double>(binomial(N, k)) * (k % 2 ? -1.0 : 1.0);
    a[static_cast<std::size_t>(M)] -= b;
    const Complex lead = a[static_cast<std::size_t>(M)];
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(M, M);
    for (int i = 1; i < M; ++i) C(i, i - 1) = 1;
    for (int i = 0; i < M; ++i) C(i, M - 1) = -a[static_cast<std::size_t>(i)] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + M);
    for (auto& z : roots)
        for (int step = 0; step < 3; ++step) {
            Complex p = a[static_cast<std::size_t>(M)], dp = 0;
            for (int k = M - 1; k >= 0; --k) {
                dp = dp * z + p;
                p = p * z + a[static_cast<std::size_t>(k)];
            }
            if (std::abs(dp) == 0) break;
            z -= p / dp;
        }
    return roots;
}

double bethe_residual(const std::vector<Complex>& z, int k, double beta, int M) {
    const int N = static_cast<int>(z.size());
    Complex prod(1);
    for (const auto& x : z) prod *= Complex(1) + beta * x;
    const Complex zk = z[static_cast<std::size_t>(k)];
    return std::abs(std::pow(zk, -M) * std::pow(Complex(1) + beta * zk, N) + (N % 2 ? -1.0 : 1.0) * prod);
}

namespace {

BetheReport empty_report(int M, int N, double beta) {
    if (N < 1 || N > M) throw std::invalid_argument("bethe_solve needs 1 <= N <= M");
    BetheReport rep;
    rep.M = M;
    rep.N = N;
    rep.beta = beta;
    return rep;
}

BetheSolution stationary_solution(int N, int M) {
    BetheSolution s = make_solution(std::vector<Complex>(static_cast<std::size_t>(N), Complex(1)), -1.0, M, {});
    s.stationary = true;
    return s;
}

// Adds z unless it has coincident roots or repeats a stored set.
void admit(BetheReport& rep, std::vector<Complex> z, const std::vector<int>& choice) {
    for (std::size_t a = 0; a < z.size(); ++a)
        for (std::size_t b = a + 1; b < z.size(); ++b)
            if (std::abs(z[a] - z[b]) <= 1e-9) {
                rep.failures.push_back({choice, "coincident roots"});
                return;
            }
    for (const auto& s : rep.solutions)
        if (set_distance(s.z, z) <= 1e-9) {
            rep.failures.push_back({choice, "duplicate root set"});
            return;
        }
    rep.solutions.push_back(make_solution(std::move(z), rep.beta, rep.M, choice));
}

std::vector<Complex> decoupled_roots(int M, int N) {
    std::vector<Complex> unit(static_cast<std::size_t>(M));
    for (int I = 0; I < M; ++I)
        unit[static_cast<std::size_t>(I)] = std::polar(1.0, 2 * std::numbers::pi * (I + 0.5 * (N - 1)) / M);
    return unit;
}

// F_k = (1 + b z_k)^N + (-1)^N z_k^M prod_j (1 + b z_j), its Jacobian and its b-derivative.
struct BaeSystem {
    int M, N;

    void eval(const Eigen::VectorXcd& z, Complex b, Eigen::VectorXcd& F, Eigen::MatrixXcd& J,
              Eigen::VectorXcd& Fb) const {
        const double sgn = N % 2 ? -1.0 : 1.0;
        Complex P(1);
        for (int j = 0; j < N; ++j) P *= Complex(1) + b * z(j);
        Eigen::VectorXcd dP(N);
        Complex dPb(0);
        for (int j = 0; j < N; ++j) {
            Complex others(1);
            for (int i = 0; i < N; ++i)
                if (i != j) others *= Complex(1) + b * z(i);
            dP(j) = b * others;
            dPb += z(j) * others;
        }
        F.resize(N);
        J.resize(N, N);
        Fb.resize(N);
        for (int k = 0; k < N; ++k) {
            const Complex f = Complex(1) + b * z(k);
            const Complex zm = std::pow(z(k), M);
            F(k) = std::pow(f, N) + sgn * zm * P;
            Fb(k) = static_cast<double>(N) * z(k) * std::pow(f, N - 1) + sgn * zm * dPb;
            for (int j = 0; j < N; ++j) J(k, j) = sgn * zm * dP(j);
            J(k, k) += static_cast<double>(N) * b * std::pow(f, N - 1) +
                       sgn * static_cast<double>(M) * std::pow(z(k), M - 1) * P;
        }
    }

    // Newton at fixed b; false unless it converges quickly.
    bool correct(Eigen::VectorXcd& z, Complex b, int max_iter, double tol) const {
        Eigen::VectorXcd F, Fb;
        Eigen::MatrixXcd J;
        for (int it = 0; it < max_iter; ++it) {
            eval(z, b, F, J, Fb);
            const Eigen::VectorXcd dz = J.partialPivLu().solve(F);
            if (!dz.allFinite()) return false;
            z -= dz;
            if (dz.norm() <= tol * std::max(1.0, z.norm())) return true;
        }
        return false;
    }
};

bool track_path(const BaeSystem& sys, Eigen::VectorXcd& z, double beta, double detour) {
    const double kappa = detour * std::max(1.0, std::abs(beta));
    auto path = [&](double s) { return Complex(beta * s, kappa * s * (1 - s)); };
    auto dpath = [&](double s) { return Complex(beta, kappa * (1 - 2 * s)); };
    double s = 0, h = 0.02;
    Eigen::VectorXcd F, Fb;
    Eigen::MatrixXcd J;
    while (s < 1) {
        const double step = std::min(h, 1 - s);
        sys.eval(z, path(s), F, J, Fb);
        const Eigen::VectorXcd tangent = -J.partialPivLu().solve(Fb * dpath(s));
        Eigen::VectorXcd trial = z + tangent * step;
        const bool ok = trial.allFinite() && sys.correct(trial, path(s + step), 4, 1e-11) &&
                        (trial - z - tangent * step).norm() <= 0.05 * std::max(1.0, z.norm());
        if (ok) {
            z = trial;
            s += step;
            h = std::min(0.1, h * 1.5);
        } else {
            h /= 2;
            if (h < 1e-7) return false;
        }
    }
    return sys.correct(z, Complex(beta), 20, 1e-15) || sys.correct(z, Complex(beta), 1, 1e-13);
}

}  // namespace

BetheReport bethe_solve_continuation(int M, int N, double beta, Execution ex) {
    BetheReport rep = empty_report(M, N, beta);
    const auto unit = decoupled_roots(M, N);
    const auto choices = subsets(M, N);
    const BaeSystem sys{M, N};
    struct Tracked {
        bool ok = false;
        std::vector<Complex> z;
    };
    // Choices that jumped paths or failed are retracked along other detours.
    std::vector<std::size_t> pending(choices.size());
    for (std::size_t i = 0; i < pending.size(); ++i) pending[i] = i;
    for (double detour : {0.37, -0.53, 0.81, -1.3}) {
        const auto tracked = map_indices<Tracked>(pending.size(), ex, [&](std::size_t p) {
            const auto& c = choices[pending[p]];
            Eigen::VectorXcd z(N);
            for (int j = 0; j < N; ++j) z(j) = unit[static_cast<std::size_t>(c[static_cast<std::size_t>(j)])];
            Tracked t;
            t.ok = beta == 0.0 || track_path(sys, z, beta, detour);
            t.z.assign(z.data(), z.data() + N);
            return t;
        });
        std::vector<std::size_t> again;
        for (std::size_t p = 0; p < pending.size(); ++p) {
            const std::size_t before = rep.solutions.size();
            if (tracked[p].ok) admit(rep, tracked[p].z, choices[pending[p]]);
            if (rep.solutions.size() == before) again.push_back(pending[p]);
        }
        pending = std::move(again);
        if (pending.empty()) break;
    }
    rep.failures.clear();
    for (std::size_t i : pending) rep.failures.push_back({choices[i], "path tracking failed on every detour"});
    return rep;
}

BetheReport bethe_solve_companion(int M, int N, double beta, Execution ex) {
    BetheReport rep = empty_report(M, N, beta);
    if (beta == 0.0) throw std::invalid_argument("companion iteration needs beta != 0");
    if (N == M) {
        if (beta != -1.0) throw std::invalid_argument("N = M handled only for beta = -1");
        rep.solutions.push_back(stationary_solution(N, M));
        return rep;
    }
    const auto choices = subsets(M, N);
    const Complex cscale = std::pow(Complex(-beta), -M);
    const std::vector<std::pair<Complex, double>> starts = {
        {Complex(0.7, 0), 0.5}, {std::polar(0.5, 0.3), 0.5}, {Complex(0.9, 0), 0.8}, {std::polar(0.3, -0.4), 0.8}};
    const auto outcomes = map_indices<ChoiceOutcome>(choices.size(), ex, [&](std::size_t i) {
        ChoiceOutcome o;
        for (const auto& [t0, damp] : starts) {
            o = iterate_choice(choices[i], M, N, cscale, t0, damp);
            if (o.ok) break;
        }
        return o;
    });
    if (beta == -1.0) rep.solutions.push_back(stationary_solution(N, M));
    for (std::size_t i = 0; i < choices.size(); ++i) {
        const auto& o = outcomes[i];
        if (!o.ok) {
            rep.failures.push_back({choices[i], o.reason});
            continue;
        }
        std::vector<Complex> z;
        for (const auto& zp : o.zp) z.push_back(zp / Complex(-beta));
        admit(rep, std::move(z), choices[i]);
    }
    return rep;
}

BetheReport bethe_solve(int M, int N, double beta, Execution ex) {
    if (beta == -1.0) return bethe_solve_companion(M, N, beta, ex);
    if (N == M) throw std::invalid_argument("N = M handled only for beta = -1");
    return bethe_solve_continuation(M, N, beta, ex);
}

void GreenQuery::validate() const {
    if (from.ring_size() != to.ring_size() || from.particles() != to.particles())
        throw std::invalid_argument("Green function query mixes sectors");
    if (!(t >= 0)) throw std::invalid_argument("Green function needs t >= 0");
}

Observable identity_observable(int M, int N) {
    const std::size_t n = binomial(M, N);
    return Observable::Identity(static_cast<long>(n), static_cast<long>(n));
}

namespace {

int wrap_site(int site, int M) { return ((site - 1) % M + M) % M + 1; }

template <class Pred>
Observable diagonal_observable(int M, int N, Pred&& pred) {
    const auto configs = enumerate_configurations(M, N);
    Observable a = Observable::Zero(static_cast<long>(configs.size()), static_cast<long>(configs.size()));
    for (std::size_t i = 0; i < configs.size(); ++i)
        if (pred(configs[i])) a(static_cast<long>(i), static_cast<long>(i)) = 1;
    return a;
}

}  // namespace

Observable density_observable(int M, int N, int site) {
    const int s = wrap_site(site, M);
    return diagonal_observable(M, N, [&](const ParticleConfiguration& x) { return x.occupied(s); });
}

Observable current_observable(int M, int N, int site) {
    const int s = wrap_site(site, M), s1 = wrap_site(site + 1, M);
    return diagonal_observable(M, N,
                               [&](const ParticleConfiguration& x) { return x.occupied(s) && !x.occupied(s1); });
}

Observable hole_string_observable(int M, int N, int l, int n) {
    if (n < 0 || n > M) throw std::invalid_argument("hole string needs 0 <= n <= M");
    return diagonal_observable(M, N, [&](const ParticleConfiguration& x) {
        for (int i = 0; i < n; ++i)
            if (x.occupied(wrap_site(l + i, M))) return false;
        return true;
    });
}

Complex form_factor_sum(int l, int n, const std::vector<Complex>& z, int M) {
    const int N = static_cast<int>(z.size());
    if (N < 1 || N > M) throw std::invalid_argument("form factor needs 1 <= N <= M");
    if (n < 1 - l || n > M) throw std::invalid_argument("form factor needs -l+1 <= n <= M");
    Complex pre(1);
    for (const auto& x : z) {
        if (x == Complex(0)) throw std::domain_error("form factor needs nonzero z");
        pre *= std::pow(x, l + n - 1);
    }
    const int Mn = M - n;
    const Complex r = confluent_det_ratio_columns(
        [&](const Series<Complex>& x, std::size_t jj) {
            const int j = static_cast<int>(jj) + 1;
            const Series<Complex> f = Complex(1) - x;
            Series<Complex> acc(x.order());
            if (j <= N - 1) {
                for (int m = 0; m <= j - 1; ++m)
                    acc += f.pow(m - j + N - 1) * Complex((m % 2 ? -1.0 : 1.0) * static_cast<double>(binomial(Mn, m)));
            } else {
                for (int m = std::max(N - 1, 1); m <= Mn; ++m)
                    acc -= f.pow(m - 1) * Complex((m % 2 ? -1.0 : 1.0) * static_cast<double>(binomial(Mn, m)));
            }
            return acc;
        },
        z, z.size());
    return pre * r;
}

TasepSpectrum::TasepSpectrum(int M, int N, Execution ex)
    : M_(M), N_(N), ex_(ex), report_(bethe_solve(M, N, -1.0, ex)), configs_(enumerate_configurations(M, N)) {
    report_.require_complete();
    for (const auto& c : configs_) parts_.push_back(config_to_partition(c));
    const std::size_t ns = report_.solutions.size();
    G_.assign(ns, {});
    Gbar_.assign(ns, {});
    norm_.assign(ns, Complex(0));
    const Complex beta(-1);
    for_each_index(ns, ex_, [&](std::size_t s) {
        const auto& sol = report_.solutions[s];
        if (sol.stationary) return;
        std::vector<Complex> y;
        for (const auto& z : sol.z) y.push_back(Complex(1) / z);
        for (const auto& p : parts_) {
            G_[s].push_back(grothendieck_eval(p, sol.z, beta));
            Gbar_[s].push_back(dual_grothendieck_eval(p, y, beta));
        }
        norm_[s] = cauchy_rhs(M_, N_, sol.z, y, beta);
    });
}

std::size_t TasepSpectrum::index_of(const ParticleConfiguration& x) const {
    if (x.ring_size() != M_ || x.particles() != N_) throw std::invalid_argument("configuration from another sector");
    for (std::size_t i = 0; i < configs_.size(); ++i)
        if (configs_[i] == x) return i;
    throw std::invalid_argument("unknown configuration");
}

double TasepSpectrum::stationary_term() const { return 1.0 / static_cast<double>(binomial(M_, N_)); }

double TasepSpectrum::spectral_sum(const ParticleConfiguration& from, double t,
                                   const std::vector<Complex>& ket_weights, double stationary_value) const {
    if (!(t >= 0)) throw std::invalid_argument("time must be >= 0");
    const std::size_t xi = index_of(from);
    const std::size_t ns = report_.solutions.size();
    const Complex sum = ordered_sum(ns, ex_, Complex(0), [&](std::size_t s) {
        const auto& sol = report_.solutions[s];
        if (sol.stationary) return Complex(stationary_value * stationary_term());
        return ket_weights[s] * Gbar_[s][xi] / norm_[s] * std::exp(sol.energy * t);
    });
    return sum.real();
}

double TasepSpectrum::green(const ParticleConfiguration& to, const ParticleConfiguration& from, double t) const {
    const std::size_t yi = index_of(to);
    std::vector<Complex> w(report_.solutions.size());
    for (std::size_t s = 0; s < w.size(); ++s)
        if (!report_.solutions[s].stationary) w[s] = G_[s][yi];
    return spectral_sum(from, t, w, 1.0);
}

double TasepSpectrum::sum_rule(const ParticleConfiguration& from, double t) const {
    return expectation(identity_observable(M_, N_), from, t);
}

double TasepSpectrum::expectation(const Observable& a, const ParticleConfiguration& from, double t) const {
    const long n = static_cast<long>(configs_.size());
    if (a.rows() != n || a.cols() != n) throw std::invalid_argument("observable does not match the sector");
    const Eigen::VectorXd colsum = a.colwise().sum().transpose();
    std::vector<Complex> w(report_.solutions.size());
    for (std::size_t s = 0; s < w.size(); ++s) {
        if (report_.solutions[s].stationary) continue;
        for (long mu = 0; mu < n; ++mu) w[s] += colsum(mu) * G_[s][static_cast<std::size_t>(mu)];
    }
    return spectral_sum(from, t, w, colsum.sum());
}

double TasepSpectrum::hole_string_ff(int l, int n, const ParticleConfiguration& from, double t) const {
    std::vector<Complex> w(report_.solutions.size());
    for (std::size_t s = 0; s < w.size(); ++s)
        if (!report_.solutions[s].stationary) w[s] = form_factor_sum(l, n, report_.solutions[s].z, M_);
    // At z = 1 every G is 1, leaving the count of configurations with the window empty.
    return spectral_sum(from, t, w, static_cast<double>(binomial(M_ - n, N_)));
}

double TasepSpectrum::density_ff(int site, const ParticleConfiguration& from, double t) const {
    return hole_string_ff(1, 0, from, t) - hole_string_ff(wrap_site(site, M_), 1, from, t);
}

double TasepSpectrum::current_ff(int site, const ParticleConfiguration& from, double t) const {
    const int s = wrap_site(site, M_);
    return hole_string_ff(s + 1, 1, from, t) - hole_string_ff(s, 2, from, t);
}

double green_function(const GreenQuery& q, Execution ex) {
    q.validate();
    return TasepSpectrum(q.from.ring_size(), q.from.particles(), ex).green(q.to, q.from, q.t);
}

double sum_rule_check(const ParticleConfiguration& x, double t, Execution ex) {
    return TasepSpectrum(x.ring_size(), x.particles(), ex).sum_rule(x, t);
}

double expectation(const Observable& a, const ParticleConfiguration& x, double t, Execution ex) {
    return TasepSpectrum(x.ring_size(), x.particles(), ex).expectation(a, x, t);
}

Eigen::MatrixXd tasep_generator(int M, int N) {
    const auto configs = enumerate_configurations(M, N);
    const long n = static_cast<long>(configs.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    auto index = [&](const ParticleConfiguration& x) {
        return static_cast<long>(std::find(configs.begin(), configs.end(), x) - configs.begin());
    };
    for (long c = 0; c < n; ++c) {
        const auto& x = configs[static_cast<std::size_t>(c)];
        for (int p : x.positions()) {
            const int q = p % M + 1;
            if (x.occupied(q)) continue;
            std::vector<int> pos = x.positions();
            std::replace(pos.begin(), pos.end(), p, q);
            std::sort(pos.begin(), pos.end());
            H(index(ParticleConfiguration(pos, M)), c) += 1;
            H(c, c) -= 1;
        }
    }
    return H;
}

MasterOracle::MasterOracle(int M, int N, bool force_series)
    : M_(M), N_(N), configs_(enumerate_configurations(M, N)), use_series_(force_series) {
    if (M > 12) throw std::invalid_argument("master oracle limited to M <= 12");
    H_ = tasep_generator(M, N);
    const Eigen::RowVectorXd cs = H_.colwise().sum();
    for (long i = 0; i < H_.cols(); ++i) {
        if (std::abs(cs(i)) > 1e-12) throw std::logic_error("generator is not column-stochastic");
        for (long j = 0; j < H_.rows(); ++j)
            if (i != j && H_(j, i) < 0) throw std::logic_error("generator has negative off-diagonal rates");
    }
    if (use_series_) return;
    Eigen::EigenSolver<Eigen::MatrixXd> es(H_);
    if (es.info() != Eigen::Success) {
        use_series_ = true;
        return;
    }
    evals_ = es.eigenvalues();
    V_ = es.eigenvectors();
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V_);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / sv(sv.size() - 1);
    if (!(cond <= 1e8)) {
        use_series_ = true;
        return;
    }
    Vinv_ = V_.inverse();
}

std::size_t MasterOracle::index_of(const ParticleConfiguration& x) const {
    if (x.ring_size() != M_ || x.particles() != N_) throw std::invalid_argument("configuration from another sector");
    for (std::size_t i = 0; i < configs_.size(); ++i)
        if (configs_[i] == x) return i;
    throw std::invalid_argument("unknown configuration");
}

Eigen::VectorXd MasterOracle::evolve(const ParticleConfiguration& x, double t) const {
    if (!(t >= 0)) throw std::invalid_argument("time must be >= 0");
    const long n = H_.rows();
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(static_cast<long>(index_of(x))) = 1;
    if (!use_series_) {
        const Eigen::VectorXcd c = Vinv_ * e.cast<Complex>();
        Eigen::VectorXcd d(n);
        for (long i = 0; i < n; ++i) d(i) = std::exp(evals_(i) * t) * c(i);
        return (V_ * d).real();
    }
    // Scaling and squaring of the Taylor series.
    const Eigen::MatrixXd A = H_ * t;
    const double norm = A.cwiseAbs().colwise().sum().maxCoeff();
    const int s = norm > 0.5 ? static_cast<int>(std::ceil(std::log2(norm / 0.5))) : 0;
    const Eigen::MatrixXd B = A / std::ldexp(1.0, s);
    Eigen::MatrixXd E = Eigen::MatrixXd::Identity(n, n), term = E;
    for (int k = 1; k <= 30; ++k) {
        term = term * B / k;
        E += term;
    }
    for (int i = 0; i < s; ++i) E = E * E;
    return E * e;
}

Eigen::VectorXd master_oracle(const ParticleConfiguration& x, double t) {
    return MasterOracle(x.ring_size(), x.particles()).evolve(x, t);
}

}  // namespace fv
