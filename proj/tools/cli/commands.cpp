#include "cli/commands.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>

#include "cli/records.hpp"
#include "decaywalk/hitting.hpp"
#include "decaywalk/pgf.hpp"
#include "decaywalk/simulate.hpp"

namespace decaywalk::cli {

namespace {

struct Options
{
    std::string format = "csv";
    double r = 1.0;
    int N = 1;
    std::vector<std::int64_t> k;
    std::vector<double> q;
    std::vector<std::int64_t> n;
    double rel_tol = QuadratureSpec{}.rel_tol;
    double abs_tol = QuadratureSpec{}.abs_tol;
    double trunc_eps = 1e-12;
    int k_cap = 200;

    std::int64_t samples = 100000;
    std::uint64_t seed = 0;
    std::int64_t horizon = 1'000'000;
    bool unkilled = false;
    unsigned workers = 0;
    double sigma = 3.0;
};

/// Writes records and remembers whether any estimate missed its tolerance.
class Emitter
{
public:
    Emitter(std::ostream& out, std::ostream& err, Format format) : writer_{out, format}, err_{err} {}

    void write(const OutputRecord& record) { writer_.write(record); }

    /// Fills value/error_bound from `compute`; on non-convergence writes the
    /// best estimate and flags the run.
    std::optional<EstimateWithError> estimate(OutputRecord record, const std::function<EstimateWithError()>& compute)
    {
        try {
            const EstimateWithError e = compute();
            record.value = e.value;
            record.error_bound = e.error_bound;
            write(record);
            return e;
        } catch (const ConvergenceError& e) {
            record.value = e.best_estimate().value;
            record.error_bound = e.best_estimate().error_bound;
            write(record);
            err_ << "warning: " << record.quantity << " not converged: " << e.what() << '\n';
            not_converged_ = true;
            return std::nullopt;
        }
    }

    std::ostream& err() { return err_; }
    bool not_converged() const { return not_converged_; }

private:
    RecordWriter writer_;
    std::ostream& err_;
    bool not_converged_ = false;
};

QuadratureSpec quadrature(const Options& o)
{
    QuadratureSpec spec;
    spec.rel_tol = o.rel_tol;
    spec.abs_tol = o.abs_tol;
    spec.validate();
    return spec;
}

OutputRecord base(const std::string& quantity, const Options& o, bool with_boundary = true)
{
    OutputRecord rec;
    rec.quantity = quantity;
    rec.r = o.r;
    if (with_boundary)
        rec.N = o.N;
    return rec;
}

OutputRecord mc_base(const std::string& quantity, const Options& o, bool with_boundary = true)
{
    OutputRecord rec = base(quantity, o, with_boundary);
    rec.seed = o.seed;
    rec.source = Source::monte_carlo;
    return rec;
}

SimConfig sim_config(const Options& o)
{
    SimConfig c;
    c.model = WalkModel{o.r, o.N};
    c.n_excursions = o.samples;
    c.seed = o.seed;
    c.horizon = o.horizon;
    c.killed = !o.unkilled;
    c.workers = o.workers;
    c.validate();
    return c;
}

std::vector<std::int64_t> or_default(const std::vector<std::int64_t>& values, std::vector<std::int64_t> fallback)
{
    return values.empty() ? fallback : values;
}

std::vector<std::int64_t> range(std::int64_t lo, std::int64_t hi)
{
    std::vector<std::int64_t> out;
    for (std::int64_t i = lo; i <= hi; ++i)
        out.push_back(i);
    return out;
}

int to_int(std::int64_t value, const char* what)
{
    if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max())
        throw std::domain_error(std::string(what) + " out of range");
    return static_cast<int>(value);
}

// ---- analytic quantities -------------------------------------------------

/// (1-s)^n s with the error of s carried through its derivative.
EstimateWithError local_time_estimate(std::int64_t n, const EstimateWithError& reach)
{
    const LocalTimePmf law{reach.value};
    const double s = reach.value;
    const double m = static_cast<double>(n);
    const double slope = std::abs(std::pow(1.0 - s, m) - (n > 0 ? m * s * std::pow(1.0 - s, m - 1.0) : 0.0));
    return EstimateWithError{law(n), slope * reach.error_bound, EstimateKind::quadrature};
}

void emit_expected_max(Emitter& em, const Options& o)
{
    const WalkModel model{o.r, 1};
    const ExpectedMaxDepth result = expected_max_depth(model, quadrature(o), o.trunc_eps, o.k_cap);
    OutputRecord rec = base("E_M", o, false);
    rec.value = result.estimate.value;
    rec.error_bound = result.estimate.error_bound;
    if (result.divergent) {
        rec.plateau = result.last_tail;
        em.write(rec);
        OutputRecord plateau = base("E_M_plateau", o, false);
        plateau.k = result.last_k;
        plateau.value = result.last_tail;
        em.write(plateau);
        em.err() << "note: E[M] diverges; tail terms level off at " << format_number(result.last_tail) << " by k = "
                 << result.last_k << '\n';
    } else {
        em.write(rec);
    }
}

/// Analytic records for everything `compare` checks. Returns the analytic
/// estimate per record key so the caller can pair them with simulation.
using Key = std::tuple<std::string, std::int64_t, double>;

void add(std::map<Key, EstimateWithError>& into, const OutputRecord& rec, const std::optional<EstimateWithError>& e)
{
    if (e)
        into[Key{rec.quantity, rec.k.value_or(rec.n.value_or(-1)), rec.q.value_or(-1.0)}] = *e;
}

// ---- commands --------------------------------------------------------------

int cmd_simulate(Emitter& em, const Options& o, std::map<Key, EstimateWithError>* collected = nullptr)
{
    const SimConfig config = sim_config(o);
    const bool killed = config.killed;
    auto keep = [&](const OutputRecord& rec, const EstimateWithError& e) {
        OutputRecord out = rec;
        out.value = e.value;
        out.error_bound = e.error_bound;
        em.write(out);
        if (collected)
            add(*collected, out, e);
    };

    const SimSummary excursions = simulate_excursions(config);
    if (killed) {
        keep(mc_base("prob_reach", o), *excursions.reach_freq);
        keep(mc_base("E_D1", o), *excursions.mean_duration);
        for (const auto& [k, visits] : excursions.mean_visits) {
            OutputRecord rec = mc_base("green", o);
            rec.k = k;
            keep(rec, visits);
        }
        for (std::int64_t k : or_default(o.k, range(1, o.N))) {
            OutputRecord rec = mc_base("max_depth_tail", o);
            rec.k = k;
            keep(rec, excursions.max_depth_tail_freq(to_int(k, "k")));
        }

        const SimSummary hitting = run_hitting_experiment(config);
        keep(mc_base("E_tau_N", o), *hitting.mean_tau_N);
        for (std::int64_t n : or_default(o.n, range(0, 5))) {
            OutputRecord rec = mc_base("local_time_pmf", o);
            rec.n = n;
            keep(rec, hitting.local_time_freq(n));
        }
        for (double q : o.q) {
            const PgfPointEstimate point = estimate_pgf_point(q, config);
            for (const auto& [name, e] : {std::pair{"pgf_failed", point.failed}, std::pair{"pgf_success", point.success},
                                          std::pair{"pgf_tau_N", point.composed}}) {
                OutputRecord rec = mc_base(name, o);
                rec.q = q;
                keep(rec, e);
            }
        }
        if (hitting.truncation_count > 0) {
            OutputRecord rec = mc_base("truncation_count_hitting", o);
            rec.value = static_cast<double>(hitting.truncation_count);
            em.write(rec);
            em.err() << "warning: " << hitting.truncation_count
                     << " hitting experiments hit the horizon and were excluded\n";
        }
    } else {
        keep(mc_base("E_theta_1", o, false), *excursions.mean_duration);
        const int deepest = excursions.max_depth_hist.empty() ? 0 : excursions.max_depth_hist.rbegin()->first;
        for (std::int64_t k : or_default(o.k, range(1, deepest))) {
            OutputRecord rec = mc_base("max_depth_tail", o, false);
            rec.k = k;
            keep(rec, excursions.max_depth_tail_freq(to_int(k, "k")));
        }
    }
    if (excursions.truncation_count > 0) {
        OutputRecord rec = mc_base("truncation_count", o, killed);
        rec.value = static_cast<double>(excursions.truncation_count);
        em.write(rec);
        em.err() << "warning: " << excursions.truncation_count << " excursions hit the horizon of " << o.horizon
                 << " steps; means exclude them and max-depth frequencies are lower bounds\n";
    }
    return exit_ok;
}

int cmd_compare(Emitter& em, const Options& o)
{
    if (o.unkilled)
        throw std::domain_error("compare runs the killed process; --unkilled is not accepted");
    const WalkModel model{o.r, o.N};
    const QuadratureSpec spec = quadrature(o);

    std::map<Key, EstimateWithError> analytic;
    auto exact = [&](OutputRecord rec, const std::function<EstimateWithError()>& f) {
        add(analytic, rec, em.estimate(rec, f));
    };

    exact(base("prob_reach", o), [&] { return prob_reach(model, spec); });
    exact(base("E_D1", o), [&] { return expected_excursion_duration(model, spec); });
    for (int k = 1; k < o.N; ++k) {
        OutputRecord rec = base("green", o);
        rec.k = k;
        exact(rec, [&] { return expected_visits(k, model, spec); });
    }
    for (std::int64_t k : or_default(o.k, range(1, o.N))) {
        OutputRecord rec = base("max_depth_tail", o);
        rec.k = k;
        exact(rec, [&] { return max_depth_tail(to_int(k, "k"), model, spec); });
    }
    exact(base("E_tau_N", o), [&] { return expected_hitting_time(model, spec); });
    const EstimateWithError reach = prob_reach(model, spec);
    for (std::int64_t n : or_default(o.n, range(0, 5))) {
        OutputRecord rec = base("local_time_pmf", o);
        rec.n = n;
        exact(rec, [&] { return local_time_estimate(n, reach); });
    }
    for (double q : o.q) {
        const PgfQuery query{q};
        for (const auto& [name, f] :
             {std::pair<std::string, std::function<EstimateWithError()>>{"pgf_failed",
                                                                        [&] { return pgf_failed(query, model, spec); }},
              {"pgf_success", [&] { return pgf_success(query, model, spec); }},
              {"pgf_tau_N", [&] { return pgf_tau_N(query, model, spec); }}}) {
            OutputRecord rec = base(name, o);
            rec.q = q;
            exact(rec, f);
        }
    }

    std::map<Key, EstimateWithError> simulated;
    cmd_simulate(em, o, &simulated);

    int failures = 0;
    int compared = 0;
    for (const auto& [key, mc] : simulated) {
        const auto it = analytic.find(key);
        if (it == analytic.end())
            continue;
        const auto& [quantity, index, q] = key;
        // Monte Carlo bounds are 3-sigma half-widths; sigma counts standard errors.
        const double allowed = o.sigma * mc.error_bound / 3.0 + it->second.error_bound;
        const double gap = std::abs(it->second.value - mc.value);
        const bool ok = gap <= allowed;
        OutputRecord rec = mc_base(quantity, o);
        if (quantity == "local_time_pmf")
            rec.n = index;
        else if (index >= 0)
            rec.k = index;
        if (q >= 0.0)
            rec.q = q;
        rec.value = gap;
        rec.error_bound = allowed;
        rec.source = ok ? Source::pass : Source::fail;
        em.write(rec);
        ++compared;
        failures += ok ? 0 : 1;
    }
    em.err() << "compare: " << compared << " quantities, " << failures << " failed\n";
    if (em.not_converged())
        return exit_not_converged;
    return failures > 0 ? exit_comparison_failed : exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Excursion statistics of a spatially decaying random walk with per-excursion "
                 "uniform environment renewal: analytic values and Monte Carlo checks."};
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    auto add_model = [&](CLI::App* cmd, bool need_boundary) {
        cmd->add_option("--r", o.r, "Spatial decay r in (0, 1]")->required();
        auto* boundary = cmd->add_option("--N", o.N, "Absorbing upper boundary N >= 1");
        if (need_boundary)
            boundary->required();
        cmd->add_option("--rel-tol", o.rel_tol, "Quadrature relative tolerance");
        cmd->add_option("--abs-tol", o.abs_tol, "Quadrature absolute tolerance");
    };
    auto add_sim = [&](CLI::App* cmd) {
        cmd->add_option("--samples", o.samples, "Excursions (and hitting experiments) to simulate");
        cmd->add_option("--seed", o.seed, "Random seed");
        cmd->add_option("--horizon", o.horizon, "Per-excursion step cap");
        cmd->add_option("--workers", o.workers, "Worker threads (0 = all cores); output does not depend on it");
        cmd->add_option("--q", o.q, "Generating-function arguments in (0, 1)");
        cmd->add_option("--k", o.k, "Depths for the max-depth tail");
        cmd->add_option("--n", o.n, "Local-time values");
    };

    std::map<CLI::App*, std::function<int(Emitter&)>> handlers;
    auto analytic = [&](const std::string& name, const std::string& help, bool need_boundary,
                        std::function<void(Emitter&)> body) {
        CLI::App* cmd = app.add_subcommand(name, help);
        add_model(cmd, need_boundary);
        handlers[cmd] = [body](Emitter& em) {
            body(em);
            return em.not_converged() ? exit_not_converged : exit_ok;
        };
        return cmd;
    };

    analytic("prob-reach", "P(an excursion reaches N)", true, [&](Emitter& em) {
        em.estimate(base("prob_reach", o), [&] { return prob_reach(WalkModel{o.r, o.N}, quadrature(o)); });
    });
    analytic("non-reach", "P(an excursion returns to 0 before N)", true, [&](Emitter& em) {
        em.estimate(base("non_reach", o), [&] { return prob_not_reach(WalkModel{o.r, o.N}, quadrature(o)); });
    });
    analytic("local-time", "P(L_{tau_N} = n): failed excursions before the first hit", true, [&](Emitter& em) {
        const EstimateWithError reach = prob_reach(WalkModel{o.r, o.N}, quadrature(o));
        for (std::int64_t n : or_default(o.n, {0})) {
            OutputRecord rec = base("local_time_pmf", o);
            rec.n = n;
            em.estimate(rec, [&] { return local_time_estimate(n, reach); });
        }
    })->add_option("--n", o.n, "Local-time values n >= 0");
    analytic("expected-duration", "E[min(theta_1, tau_N)]", true, [&](Emitter& em) {
        em.estimate(base("E_D1", o), [&] { return expected_excursion_duration(WalkModel{o.r, o.N}, quadrature(o)); });
    });
    analytic("expected-hitting-time", "E[tau_N] by the occupation-time and generating-function routes", true,
             [&](Emitter& em) {
                 const WalkModel model{o.r, o.N};
                 em.estimate(base("E_tau_N", o), [&] { return expected_hitting_time(model, quadrature(o)); });
                 em.estimate(base("E_tau_N_pgf", o),
                             [&] { return expected_hitting_time_routes(model, quadrature(o)).pgf_route; });
             });
    analytic("green", "Expected visits to interior state k per excursion", true, [&](Emitter& em) {
        for (std::int64_t k : or_default(o.k, range(1, o.N - 1))) {
            OutputRecord rec = base("green", o);
            rec.k = k;
            em.estimate(rec, [&] { return expected_visits(to_int(k, "k"), WalkModel{o.r, o.N}, quadrature(o)); });
        }
    })->add_option("--k", o.k, "Interior states 1 <= k <= N-1");
    analytic("pgf", "A(q), B(q) and E[q^{tau_N}]", true, [&](Emitter& em) {
        if (o.q.empty())
            throw std::domain_error("pgf requires at least one --q");
        const WalkModel model{o.r, o.N};
        for (double q : o.q) {
            const PgfQuery query{q};
            for (const auto& [name, f] :
                 {std::pair<std::string, std::function<EstimateWithError()>>{
                      "pgf_failed", [&] { return pgf_failed(query, model, quadrature(o)); }},
                  {"pgf_success", [&] { return pgf_success(query, model, quadrature(o)); }},
                  {"pgf_tau_N", [&] { return pgf_tau_N(query, model, quadrature(o)); }}}) {
                OutputRecord rec = base(name, o);
                rec.q = q;
                em.estimate(rec, f);
            }
        }
    })->add_option("--q", o.q, "Arguments q in (0, 1]");
    analytic("max-depth-tail", "P(M >= k) for the unkilled excursion (N is not used)", false, [&](Emitter& em) {
        for (std::int64_t k : or_default(o.k, {1})) {
            OutputRecord rec = base("max_depth_tail", o, false);
            rec.k = k;
            em.estimate(rec, [&] { return max_depth_tail(to_int(k, "k"), WalkModel{o.r, 1}, quadrature(o)); });
        }
    })->add_option("--k", o.k, "Depths k >= 1");
    CLI::App* expected_max = analytic("expected-max", "E[M] by the tail sum, with divergence detection", false,
                                      [&](Emitter& em) { emit_expected_max(em, o); });
    expected_max->add_option("--trunc-eps", o.trunc_eps, "Stop once a tail term drops below this");
    expected_max->add_option("--k-cap", o.k_cap, "Largest k summed before reporting divergence");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimates with 3-sigma half-widths");
    add_model(simulate, false);
    add_sim(simulate);
    simulate->add_flag("--unkilled", o.unkilled, "Run excursions until they return to 0 (max-depth statistics)");
    handlers[simulate] = [&](Emitter& em) {
        if (!o.unkilled && simulate->count("--N") == 0)
            throw std::domain_error("simulate requires --N unless --unkilled is given");
        return cmd_simulate(em, o);
    };

    CLI::App* compare = app.add_subcommand("compare", "Analytic values against simulation, with PASS/FAIL verdicts");
    add_model(compare, true);
    add_sim(compare);
    compare->add_option("--sigma", o.sigma, "Allowed gap in Monte Carlo standard errors");
    handlers[compare] = [&](Emitter& em) { return cmd_compare(em, o); };

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    Emitter emitter{out, err, o.format == "json" ? Format::json : Format::csv};
    try {
        for (auto& [cmd, handler] : handlers)
            if (cmd->parsed())
                return handler(emitter);
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return exit_not_converged;
    } catch (const PrecisionError& e) {
        err << "error: " << e.what() << '\n';
        return exit_not_converged;
    } catch (const ConsistencyError& e) {
        err << "error: " << e.what() << '\n';
        return exit_not_converged;
    } catch (const ConditioningError& e) {
        err << "error: " << e.what() << '\n';
        return exit_not_converged;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace decaywalk::cli
