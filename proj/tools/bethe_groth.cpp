#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fv/identities.hpp"
#include "fv/json_io.hpp"
#include "fv/parallel.hpp"
#include "fv/random.hpp"
#include "fv/symmetric.hpp"
#include "fv/tasep.hpp"
#include "fv/vertex.hpp"
#include "fv/wavefunctions.hpp"
#include "verify.hpp"

using namespace fv;

namespace {

// Thrown for malformed parameters that CLI11 cannot see.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Outcome {
    Json inputs = Json::object();
    Json result = Json::object();
    std::string provenance = "determinant";
    bool verified = true;  // false maps to exit code 2
    std::string csv;       // non-empty replaces the JSON document
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

std::vector<Rational> parse_rationals(const std::string& text) {
    std::vector<Rational> out;
    for (const auto& s : split(text, ',')) out.push_back(parse_rational(s));
    if (out.empty()) throw UsageError("empty value list");
    return out;
}

// Complex lists separate entries by ';', each entry "re,im" or a single real.
std::vector<Complex> parse_complexes(const std::string& text) {
    std::vector<Complex> out;
    for (const auto& s : split(text, ';')) out.push_back(parse_complex(s));
    if (out.empty()) throw UsageError("empty value list");
    return out;
}

std::vector<int> parse_ints(const std::string& text) {
    std::vector<int> out;
    for (const auto& s : split(text, ',')) {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw UsageError("malformed integer: " + s);
        out.push_back(v);
    }
    return out;
}

Partition parse_partition(const std::string& text, int width) {
    auto parts = parse_ints(text);
    if (width < 0) width = parts.empty() ? 0 : parts.front();
    return Partition(std::move(parts), width);
}

std::vector<Rational> distinct_draws(RationalSampler& rng, int n) {
    std::vector<Rational> out;
    while (static_cast<int>(out.size()) < n) {
        const Rational x = rng.draw();
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    }
    return out;
}

void require_sector(int M, int N) {
    if (M < 1 || N < 1 || N > M) throw UsageError("need 1 <= N <= M");
}

Json solution_json(const BetheSolution& s) {
    Json j;
    j["z"] = to_json(s.z);
    j["energy"] = to_json(s.energy);
    j["max_residual"] = s.max_residual();
    j["stationary"] = s.stationary;
    j["choice_id"] = s.choice_id;
    return j;
}

// density:i, current:i or holes:l:n.
Observable parse_observable(const std::string& text, int M, int N) {
    const auto f = split(text, ':');
    if (f.size() == 2 && f[0] == "density") return density_observable(M, N, std::stoi(f[1]));
    if (f.size() == 2 && f[0] == "current") return current_observable(M, N, std::stoi(f[1]));
    if (f.size() == 3 && f[0] == "holes") return hole_string_observable(M, N, std::stoi(f[1]), std::stoi(f[2]));
    throw UsageError("observable must be density:i, current:i or holes:l:n");
}

std::vector<double> parse_grid(const std::string& text) {
    const auto f = split(text, ':');
    if (f.size() != 3) throw UsageError("t-grid must be start:stop:step");
    const double a = std::stod(f[0]), b = std::stod(f[1]), h = std::stod(f[2]);
    if (!(h > 0) || b < a || a < 0) throw UsageError("t-grid needs 0 <= start <= stop and step > 0");
    const long n = std::lround(std::floor((b - a) / h + 1e-9));
    std::vector<double> out;
    for (long k = 0; k <= n; ++k) out.push_back(a + static_cast<double>(k) * h);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Five-vertex model, Grothendieck polynomials and TASEP computations"};
    app.require_subcommand(1);
    bool deterministic = false;
    int threads = 0;
    app.add_flag("--deterministic", deterministic, "report elapsed_ms as 0 for byte-reproducible output");
    app.add_option("--threads", threads, "thread cap (overrides BETHE_GROTH_THREADS)")->check(CLI::NonNegativeNumber);

    std::string command;
    std::function<Outcome()> action;
    auto bind = [&](CLI::App* sub, std::string name, std::function<Outcome()> fn) {
        sub->callback([&command, &action, name = std::move(name), fn = std::move(fn)] {
            command = name;
            action = fn;
        });
    };

    // groth eval
    auto* groth = app.add_subcommand("groth", "symmetric polynomial evaluation")->require_subcommand(1);
    auto* geval = groth->add_subcommand("eval", "evaluate G, its dual or the Schur polynomial");
    std::string g_lambda, g_z, g_beta = "0", g_kind = "grothendieck";
    int g_width = -1;
    bool g_complex = false;
    geval->add_option("--lambda", g_lambda, "parts, e.g. 2,1,0")->required();
    geval->add_option("--z", g_z, "variables")->required();
    geval->add_option("--beta", g_beta, "deformation parameter");
    geval->add_option("--width", g_width, "box width (defaults to the first part)");
    geval->add_option("--kind", g_kind)->check(CLI::IsMember({"grothendieck", "dual", "schur"}));
    geval->add_flag("--complex", g_complex, "complex arithmetic; entries separated by ';'");
    bind(geval, "groth eval", [&] {
        Outcome o;
        const Partition lambda = parse_partition(g_lambda, g_width);
        o.inputs["lambda"] = lambda.to_string();
        o.inputs["kind"] = g_kind;
        auto eval = [&](const auto& z, const auto& beta) {
            using S = std::decay_t<decltype(beta)>;
            o.inputs["z"] = to_json(z);
            o.inputs["beta"] = to_json(beta);
            if (g_kind == "schur") return S(schur_eval(lambda, z));
            if (g_kind == "dual") return S(dual_grothendieck_eval(lambda, z, beta));
            return S(grothendieck_eval(lambda, z, beta));
        };
        if (g_complex)
            o.result["value"] = to_json(eval(parse_complexes(g_z), parse_complex(g_beta)));
        else
            o.result["value"] = to_json(eval(parse_rationals(g_z), parse_rational(g_beta)));
        return o;
    });

    // vertex checks
    auto* vertex = app.add_subcommand("vertex", "integrability checks")->require_subcommand(1);
    std::uint64_t v_seed = 1;
    int v_draws = 50, v_M = 4;
    auto draw_opts = [&](CLI::App* s) {
        s->add_option("--seed", v_seed);
        s->add_option("--draws", v_draws)->check(CLI::PositiveNumber);
    };
    auto* rll = vertex->add_subcommand("rll-check", "RLL relation at random rational points");
    draw_opts(rll);
    bind(rll, "vertex rll-check", [&] {
        Outcome o;
        o.inputs = {{"seed", v_seed}, {"draws", v_draws}};
        RationalSampler rng(v_seed);
        bool ok = true;
        for (int d = 0; d < v_draws; ++d) {
            const auto uv = rng.draw_distinct_squares(2);
            ok = ok && rll_check(uv[0], uv[1], rng.draw());
        }
        o.result["holds"] = ok;
        o.verified = ok;
        return o;
    });
    auto* ybe = vertex->add_subcommand("ybe-check", "Yang-Baxter equation at random rational points");
    draw_opts(ybe);
    bind(ybe, "vertex ybe-check", [&] {
        Outcome o;
        o.inputs = {{"seed", v_seed}, {"draws", v_draws}};
        RationalSampler rng(v_seed);
        bool ok = true;
        for (int d = 0; d < v_draws; ++d) {
            const auto p = rng.draw_distinct_squares(3);
            ok = ok && ybe_check(p[0], p[1], p[2]);
        }
        o.result["holds"] = ok;
        o.verified = ok;
        return o;
    });
    auto* comm = vertex->add_subcommand("commutation-check", "monodromy exchange relations on all sectors");
    comm->add_option("--M", v_M)->check(CLI::Range(1, 8));
    comm->add_option("--seed", v_seed);
    bind(comm, "vertex commutation-check", [&] {
        Outcome o;
        o.inputs = {{"M", v_M}, {"seed", v_seed}};
        RationalSampler rng(v_seed);
        const ModelParameters<Rational> params{rng.draw(), rng.draw_distinct_squares(static_cast<std::size_t>(v_M))};
        const auto uv = rng.draw_distinct_squares(2);
        o.inputs["alpha"] = to_json(params.alpha);
        o.inputs["w"] = to_json(params.w);
        o.inputs["u"] = to_json(uv[0]);
        o.inputs["v"] = to_json(uv[1]);
        const auto rep = commutation_check(uv[0], uv[1], params);
        const bool rtt = rtt_check(uv[0], uv[1], params);
        const bool tc = transfer_commute_check(uv[0], uv[1], params);
        o.result = {{"CB", rep.cb}, {"AB", rep.ab}, {"DB", rep.db}, {"BB", rep.bb}, {"CC", rep.cc},
                    {"RTT", rtt},   {"transfer_commute", tc}};
        o.result["holds"] = rep.all() && rtt && tc;
        o.verified = rep.all() && rtt && tc;
        return o;
    });

    // scalar check
    auto* scalar = app.add_subcommand("scalar", "scalar-product invariants")->require_subcommand(1);
    auto* scheck = scalar->add_subcommand("check", "run the invariant suite at one sector");
    int s_M = 4, s_N = 2;
    std::uint64_t s_seed = 1;
    scheck->add_option("--M", s_M)->check(CLI::Range(1, 6));
    scheck->add_option("--N", s_N)->check(CLI::PositiveNumber);
    scheck->add_option("--seed", s_seed);
    bind(scheck, "scalar check", [&] {
        Outcome o;
        require_sector(s_M, s_N);
        o.inputs = {{"M", s_M}, {"N", s_N}, {"seed", s_seed}};
        o.result = verify::scalar_invariants(s_M, s_N, s_seed);
        bool ok = true;
        for (const auto& [k, v] : o.result.items())
            if (v.is_boolean()) ok = ok && v.get<bool>();
        o.result["holds"] = ok;
        o.verified = ok;
        return o;
    });

    // wavefunction eval
    auto* wave = app.add_subcommand("wavefunction", "off-shell wavefunctions")->require_subcommand(1);
    auto* weval = wave->add_subcommand("eval", "<x|B(v)...|0> or, with --dual, <0|C(u)...|x>");
    std::string w_config, w_params, w_alpha;
    int w_M = 0;
    bool w_dual = false, w_complex = false;
    weval->add_option("--config", w_config, "particle positions, e.g. 1,3,4")->required();
    weval->add_option("--M", w_M, "ring size")->required()->check(CLI::Range(1, 31));
    weval->add_option("--params", w_params, "spectral parameters")->required();
    weval->add_option("--alpha", w_alpha)->required();
    weval->add_flag("--dual", w_dual);
    weval->add_flag("--complex", w_complex, "complex arithmetic; entries separated by ';'");
    bind(weval, "wavefunction eval", [&] {
        Outcome o;
        const ParticleConfiguration x = parse_configuration(w_config, w_M);
        o.inputs["config"] = to_json(x);
        o.inputs["M"] = w_M;
        o.inputs["dual"] = w_dual;
        auto eval = [&](const auto& p, const auto& alpha) {
            using S = std::decay_t<decltype(alpha)>;
            o.inputs["params"] = to_json(p);
            o.inputs["alpha"] = to_json(alpha);
            if (static_cast<int>(p.size()) != x.particles()) throw UsageError("need one parameter per particle");
            return w_dual ? S(dual_wavefunction_det(x, p, alpha)) : S(wavefunction_det(x, p, alpha));
        };
        if (w_complex)
            o.result["value"] = to_json(eval(parse_complexes(w_params), parse_complex(w_alpha)));
        else
            o.result["value"] = to_json(eval(parse_rationals(w_params), parse_rational(w_alpha)));
        return o;
    });

    // identity checks
    auto* identity = app.add_subcommand("identity", "Grothendieck identities")->require_subcommand(1);
    int i_M = 5, i_N = 2;
    std::uint64_t i_seed = 1;
    std::string i_beta;
    auto sector_opts = [&](CLI::App* s) {
        s->add_option("--M", i_M)->check(CLI::Range(1, 12));
        s->add_option("--N", i_N)->check(CLI::PositiveNumber);
        s->add_option("--beta", i_beta);
    };
    auto* cauchy = identity->add_subcommand("cauchy", "finite Cauchy identity at random rational points");
    sector_opts(cauchy);
    cauchy->add_option("--seed", i_seed);
    bind(cauchy, "identity cauchy", [&] {
        Outcome o;
        require_sector(i_M, i_N);
        RationalSampler rng(i_seed);
        std::vector<Rational> z, y;
        Rational beta;
        for (;;) {
            z = distinct_draws(rng, i_N);
            y = distinct_draws(rng, i_N);
            beta = i_beta.empty() ? rng.draw() : parse_rational(i_beta);
            bool pole = false;
            for (const auto& t : y) pole = pole || t + beta == 0;
            if (!pole) break;
        }
        o.inputs = {{"M", i_M}, {"N", i_N}, {"seed", i_seed}};
        o.inputs["beta"] = to_json(beta);
        o.inputs["z"] = to_json(z);
        o.inputs["y"] = to_json(y);
        const Rational lhs = cauchy_lhs(i_M, i_N, z, y, beta), rhs = cauchy_rhs(i_M, i_N, z, y, beta);
        o.result["lhs"] = to_json(lhs);
        o.result["rhs"] = to_json(rhs);
        o.result["equal"] = lhs == rhs;
        o.verified = lhs == rhs;
        return o;
    });
    auto* orth = identity->add_subcommand("orthogonality", "delta property over Bethe root sets");
    sector_opts(orth);
    std::string i_lambda, i_mu;
    orth->add_option("--lambda", i_lambda, "one partition; all pairs when omitted");
    orth->add_option("--mu", i_mu);
    bind(orth, "identity orthogonality", [&] {
        Outcome o;
        require_sector(i_M, i_N);
        const double beta = i_beta.empty() ? -1.0 : parse_complex(i_beta).real();
        o.inputs = {{"M", i_M}, {"N", i_N}, {"beta", beta}};
        const auto roots = bethe_solve(i_M, i_N, beta);
        roots.require_complete();
        std::vector<Partition> parts = box_partitions(i_M - i_N, i_N), lams = parts, mus = parts;
        if (!i_lambda.empty() || !i_mu.empty()) {
            if (i_lambda.empty() || i_mu.empty()) throw UsageError("--lambda and --mu go together");
            lams = {parse_partition(i_lambda, i_M - i_N)};
            mus = {parse_partition(i_mu, i_M - i_N)};
            o.inputs["lambda"] = lams[0].to_string();
            o.inputs["mu"] = mus[0].to_string();
        }
        double err = 0;
        Complex value;
        for (const auto& l : lams)
            for (const auto& m : mus) {
                value = orthogonality_check(roots, l, m).value;
                err = std::max(err, std::abs(value - Complex(l == m ? 1.0 : 0.0)));
            }
        if (lams.size() == 1 && mus.size() == 1) o.result["value"] = to_json(value);
        o.result["pairs"] = lams.size() * mus.size();
        o.result["solutions"] = roots.solutions.size();
        o.result["max_residual"] = roots.max_residual();
        o.result["max_error"] = err;
        o.result["equal"] = err <= 1e-8;
        o.verified = err <= 1e-8;
        return o;
    });
    auto* isum = identity->add_subcommand("sum", "summation formulas at random rational points");
    sector_opts(isum);
    isum->add_option("--seed", i_seed);
    bind(isum, "identity sum", [&] {
        Outcome o;
        require_sector(i_M, i_N);
        RationalSampler rng(i_seed);
        std::vector<Rational> z;
        Rational beta;
        for (;;) {
            z = distinct_draws(rng, i_N);
            beta = i_beta.empty() ? rng.draw() : parse_rational(i_beta);
            bool pole = false;
            for (const auto& t : z) pole = pole || t + beta == 0;
            if (!pole || beta == 0) break;
        }
        o.inputs = {{"M", i_M}, {"N", i_N}, {"seed", i_seed}};
        o.inputs["beta"] = to_json(beta);
        o.inputs["z"] = to_json(z);
        bool ok = true;
        if (beta != 0 || i_N == 1) {
            const auto c = grothendieck_sum_check(i_M, z, beta);
            o.result["grothendieck"] = {{"lhs", to_json(c.lhs)}, {"rhs", to_json(c.rhs)}, {"equal", c.lhs == c.rhs}};
            ok = ok && c.lhs == c.rhs;
        }
        if (beta != 0) {
            const auto d = dual_grothendieck_sum_check(i_M, z, beta);
            o.result["dual"] = {{"lhs", to_json(d.lhs)}, {"rhs", to_json(d.rhs)}, {"equal", d.lhs == d.rhs}};
            ok = ok && d.lhs == d.rhs;
        }
        if (o.result.empty()) throw UsageError("summation determinants need beta != 0 for N >= 2");
        o.result["equal"] = ok;
        o.verified = ok;
        return o;
    });

    // tasep
    auto* tasep = app.add_subcommand("tasep", "TASEP on a ring")->require_subcommand(1);
    int t_M = 6, t_N = 2;
    double t_beta = -1, t_time = 0;
    std::string t_from, t_to, t_obs = "density:1", t_grid = "0:10:0.5", t_format = "json";
    auto ring_opts = [&](CLI::App* s) {
        s->add_option("--M", t_M)->check(CLI::Range(1, 12));
        s->add_option("--N", t_N)->check(CLI::PositiveNumber);
    };
    auto* bethe = tasep->add_subcommand("bethe", "all Bethe root sets of one sector");
    ring_opts(bethe);
    bethe->add_option("--beta", t_beta, "deformation (-1 is the TASEP)");
    bind(bethe, "tasep bethe", [&] {
        Outcome o;
        require_sector(t_M, t_N);
        o.inputs = {{"M", t_M}, {"N", t_N}, {"beta", t_beta}};
        const auto rep = bethe_solve(t_M, t_N, t_beta);
        o.result["expected"] = rep.expected();
        o.result["found"] = rep.solutions.size();
        o.result["complete"] = rep.complete();
        o.result["max_residual"] = rep.max_residual();
        Json sols = Json::array();
        for (const auto& s : rep.solutions) sols.push_back(solution_json(s));
        o.result["solutions"] = sols;
        Json fails = Json::array();
        for (const auto& f : rep.failures) fails.push_back({{"choice_id", f.choice_id}, {"reason", f.reason}});
        o.result["failures"] = fails;
        o.verified = rep.complete();
        return o;
    });
    auto* greenc = tasep->add_subcommand("green", "transition probability from the Grothendieck expansion");
    ring_opts(greenc);
    greenc->add_option("--from", t_from)->required();
    greenc->add_option("--to", t_to)->required();
    greenc->add_option("--t", t_time)->required();
    bind(greenc, "tasep green", [&] {
        Outcome o;
        require_sector(t_M, t_N);
        const GreenQuery q{parse_configuration(t_from, t_M), parse_configuration(t_to, t_M), t_time};
        if (q.from.particles() != t_N) throw UsageError("--from must have N particles");
        q.validate();
        o.inputs = {{"M", t_M}, {"N", t_N}, {"from", to_json(q.from)}, {"to", to_json(q.to)}, {"t", t_time}};
        o.result["value"] = green_function(q);
        return o;
    });
    auto* orc = tasep->add_subcommand("oracle", "dense master-equation evolution");
    ring_opts(orc);
    orc->add_option("--from", t_from)->required();
    orc->add_option("--to", t_to, "one target; the full distribution when omitted");
    orc->add_option("--t", t_time)->required()->check(CLI::NonNegativeNumber);
    bind(orc, "tasep oracle", [&] {
        Outcome o;
        require_sector(t_M, t_N);
        o.provenance = "oracle";
        const auto from = parse_configuration(t_from, t_M);
        if (from.particles() != t_N) throw UsageError("--from must have N particles");
        o.inputs = {{"M", t_M}, {"N", t_N}, {"from", to_json(from)}, {"t", t_time}};
        const MasterOracle mo(t_M, t_N);
        const Eigen::VectorXd p = mo.evolve(from, t_time);
        if (!t_to.empty()) {
            const auto to = parse_configuration(t_to, t_M);
            o.inputs["to"] = to_json(to);
            o.result["value"] = p(static_cast<long>(mo.index_of(to)));
        } else {
            Json dist = Json::array();
            for (std::size_t i = 0; i < mo.configurations().size(); ++i)
                dist.push_back({{"config", to_json(mo.configurations()[i])}, {"p", p(static_cast<long>(i))}});
            o.result["distribution"] = dist;
        }
        return o;
    });
    auto* relax = tasep->add_subcommand("relax", "observable time series against the oracle");
    ring_opts(relax);
    relax->add_option("--from", t_from)->required();
    relax->add_option("--observable", t_obs, "density:i, current:i or holes:l:n");
    relax->add_option("--t-grid", t_grid, "start:stop:step");
    relax->add_option("--format", t_format)->check(CLI::IsMember({"json", "csv"}));
    bind(relax, "tasep relax", [&] {
        Outcome o;
        require_sector(t_M, t_N);
        const auto from = parse_configuration(t_from, t_M);
        if (from.particles() != t_N) throw UsageError("--from must have N particles");
        const Observable a = parse_observable(t_obs, t_M, t_N);
        const auto grid = parse_grid(t_grid);
        o.inputs = {{"M", t_M}, {"N", t_N}, {"from", to_json(from)}, {"observable", t_obs}, {"t_grid", t_grid}};
        const TasepSpectrum spec(t_M, t_N);
        const MasterOracle mo(t_M, t_N);
        const Eigen::RowVectorXd colsum = a.colwise().sum();
        Json series = Json::array();
        std::ostringstream csv;
        csv.precision(17);
        csv << "t,bethe,oracle\n";
        double err = 0;
        for (double t : grid) {
            const double b = spec.expectation(a, from, t);
            const double r = colsum.dot(mo.evolve(from, t));
            err = std::max(err, std::abs(b - r));
            series.push_back({{"t", t}, {"value", b}, {"oracle", r}});
            csv << t << "," << b << "," << r << "\n";
        }
        o.result["series"] = series;
        o.result["max_deviation"] = err;
        if (t_format == "csv") o.csv = csv.str();
        return o;
    });

    // verify-all
    auto* verify_all = app.add_subcommand("verify-all", "acceptance suite");
    std::string level = "desk";
    verify_all->add_option("--level", level)->check(CLI::IsMember({"desk"}));
    bind(verify_all, "verify-all", [&] {
        Outcome o;
        o.inputs["level"] = level;
        Json crit = Json::array();
        bool ok = true;
        for (const auto& r : verify::run_desk()) {
            crit.push_back({{"id", r.id},
                            {"title", r.title},
                            {"pass", r.pass},
                            {"seconds", deterministic ? 0.0 : r.seconds},
                            {"detail", r.detail}});
            ok = ok && r.pass;
        }
        o.result["criteria"] = crit;
        o.result["pass"] = ok;
        o.provenance = "oracle";
        o.verified = ok;
        return o;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (threads > 0) set_thread_count(threads);

    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = action();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n" << app.help();
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    const double ms =
        deterministic ? 0.0 : std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (!out.csv.empty()) {
        std::cout << out.csv;
    } else {
        Json doc;
        doc["command"] = command;
        doc["inputs"] = out.inputs;
        doc["result"] = out.result;
        doc["provenance"] = out.provenance;
        doc["elapsed_ms"] = ms;
        std::cout << doc.dump(2) << "\n";
    }
    return out.verified ? 0 : 2;
}
