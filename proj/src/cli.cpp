#include "qdl/cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "qdl/acceptance.hpp"
#include "qdl/corpus.hpp"
#include "qdl/counting.hpp"
#include "qdl/densities.hpp"
#include "qdl/expsums.hpp"
#include "qdl/integrals.hpp"
#include "qdl/lseries.hpp"
#include "qdl/report.hpp"

namespace qdl {

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

std::vector<i64> parse_c(const std::string& s, std::size_t n) {
    if (s.empty()) return std::vector<i64>(n, 0);
    auto c = parse_int_vector(s);
    if (c.size() != n) throw FormError(FormErrorKind::DimensionMismatch, "--c has " + std::to_string(c.size()) +
                                                                             " entries, form has " + std::to_string(n));
    return c;
}

cplx parse_s(const std::string& s) {
    auto comma = s.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(s), 0.0};
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw UsageError("cannot parse --s '" + s + "'");
    }
}

ojson series_json(const SeriesValue& v) {
    ojson j;
    j["re"] = num(v.value.real());
    j["im"] = num(v.value.imag());
    j["terms"] = v.terms;
    j["tail_bound"] = num(v.tail_bound);
    return j;
}

ojson density_json(const LocalDensity& d) {
    ojson j;
    j["p"] = d.p;
    j["value"] = num(d.value);
    j["err"] = num(d.err);
    j["tail_ratio"] = num(d.tail_ratio);
    j["method"] = d.method;
    ojson parts = ojson::array();
    for (std::size_t k = 0; k < d.partials.size() && k <= 12; ++k) parts.push_back(d.partials[k].get_str());
    j["partials"] = parts;
    return j;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty())
        out << text;
    else
        write_file(path, text);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Zeros of diagonal quadratic forms: exact counts, exponential sums, local densities and the delta method",
                 "qdl"};
    app.require_subcommand(0, 1);
    int threads = 0;
    app.add_option("--threads", threads, "Cap on worker threads (default: all cores)")->check(CLI::NonNegativeNumber);

    std::string form, c_str, out_path, method = "auto", weight;
    i64 bound = -1, energy = -1, q = 1, partial = 0, terms = 100000, p = 0, cutoff = 10000, B = 0, qmax = 0;
    int cmax = 2;
    bool primitive = false, series = false, ledger = false;
    std::string s_str = "2";
    double budget = 1e8;

    auto* count = app.add_subcommand("count", "Count integer zeros in a box or energy region");
    count->add_option("--form", form, "Coefficients, comma separated")->required();
    count->add_option("--bound", bound, "Box bound B");
    count->add_option("--energy", energy, "Energy bound X: max |A_i x_i^2| <= X");
    count->add_flag("--primitive", primitive, "Only primitive zeros");
    count->add_option("--weight", weight, "Smooth weight (wdag, wq) for a weighted count");
    count->add_option("--method", method, "auto, brute or mitm");

    auto* expsum = app.add_subcommand("expsum", "Complete exponential sum S_q(c)");
    expsum->add_option("--form", form)->required();
    expsum->add_option("--q", q)->check(CLI::PositiveNumber);
    expsum->add_option("--c", c_str);
    expsum->add_option("--method", method, "direct, mult, closed or engine");
    expsum->add_option("--partial", partial, "Report sum_{q<=Y} |S_q(c)| instead");

    auto* lser = app.add_subcommand("lseries", "L(s, chi_Q) or the Dirichlet series D(s; c)");
    lser->add_option("--form", form)->required();
    lser->add_option("--s", s_str, "RE[,IM]");
    lser->add_option("--c", c_str, "With --c: D(s; c) summed to --terms");
    lser->add_option("--terms", terms)->check(CLI::PositiveNumber);

    auto* dens = app.add_subcommand("density", "Local density sigma_p or the singular series");
    dens->add_option("--form", form)->required();
    dens->add_option("--p", p);
    dens->add_flag("--series", series);
    dens->add_option("--cutoff", cutoff);

    auto* integ = app.add_subcommand("integral", "Oscillatory integral I_q(c)");
    integ->add_option("--form", form)->required();
    integ->add_option("--B", B)->required()->check(CLI::PositiveNumber);
    integ->add_option("--q", q)->check(CLI::PositiveNumber);
    integ->add_option("--c", c_str);
    integ->add_option("--weight", weight, "wdag or wq");
    integ->add_option("--method", method, "sheet or tensor");
    integ->add_option("--budget", budget, "Evaluation cap for the tensor method");

    auto* recon = app.add_subcommand("reconstruct", "Truncated delta-method sum against the exact weighted count");
    recon->add_option("--form", form)->required();
    recon->add_option("--B", B)->required()->check(CLI::PositiveNumber);
    recon->add_option("--qmax", qmax, "Default: vanishing threshold");
    recon->add_option("--cmax", cmax)->check(CLI::NonNegativeNumber);
    recon->add_flag("--ledger", ledger, "Include the per-(q, shell) ledger");
    recon->add_option("--out", out_path);

    std::string config, csv_path, json_path;
    std::uint64_t seed = 0;
    std::vector<int> ns;
    std::vector<i64> Bs;
    std::size_t corpus_count = 0;
    bool no_densities = false;
    auto* sw = app.add_subcommand("sweep", "Corpus sweep of counts, envelopes and densities");
    sw->add_option("--config", config, "JSON config file");
    sw->add_option("--seed", seed);
    sw->add_option("--n", ns);
    sw->add_option("--count", corpus_count);
    sw->add_option("--B", Bs);
    sw->add_flag("--no-densities", no_densities);
    sw->add_option("--csv", csv_path, "CSV output path");
    sw->add_option("--json", json_path, "JSON output path");

    std::vector<int> only;
    std::string baseline, write_baseline;
    auto* self = app.add_subcommand("selftest", "Run the acceptance criteria");
    self->add_option("--only", only, "Criterion numbers");
    self->add_option("--baseline", baseline);
    self->add_option("--write-baseline", write_baseline, "Write the envelope baseline and exit");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }
    if (app.get_subcommands().empty()) {
        err << app.help();
        return 2;
    }
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (*count) {
            auto Q = parse_form(form);
            ojson j = make_report("count");
            j["form"] = Q.str();
            if (!weight.empty()) {
                if (bound < 1) throw UsageError("--weight needs --bound");
                auto w = parse_weight(weight, Q);
                j["weight"] = w.name();
                j["bound"] = bound;
                j["weighted_count"] = num(count_weighted(Q, bound, w));
            } else {
                auto m = parse_count_method(method);
                CountResult r;
                if ((bound >= 0) == (energy >= 0)) throw UsageError("give exactly one of --bound and --energy");
                if (energy >= 0)
                    r = count_energy(Q, energy, m);
                else if (primitive)
                    r = count_primitive(Q, bound, m);
                else
                    r = count_box(Q, bound, m);
                j[energy >= 0 ? "energy" : "bound"] = energy >= 0 ? energy : bound;
                j["primitive"] = primitive;
                j["count"] = r.count;
                j["method"] = r.method;
                j["seconds"] = r.seconds;
            }
            out << dump_json(j);
        } else if (*expsum) {
            auto Q = parse_form(form);
            auto c = parse_c(c_str, Q.n());
            ojson j = make_report("expsum");
            j["form"] = Q.str();
            j["c"] = c;
            if (partial > 0) {
                j["Y"] = partial;
                j["partial_abs"] = num(partial_sum_abs(Q, partial, c));
            } else {
                j["q"] = q;
                ExpSumValue v;
                if (method == "direct" || method == "auto") {
                    v = sq_direct(Q, q, c);
                } else if (method == "mult") {
                    v = sq_multiplicative(Q, q, c);
                } else if (method == "closed") {
                    if (!is_prime(q) || q == 2) throw UsageError("--method closed needs an odd prime q");
                    long long r = sp_closed(Q, q, c);
                    v.value = (double)r;
                    v.rounded = r;
                } else if (method == "engine") {
                    ExpSumEngine E(Q);
                    v.value = E.S(q, c);
                    v.rounded = std::llround(v.value);
                } else {
                    throw UsageError("unknown --method " + method);
                }
                j["method"] = method == "auto" ? "direct" : method;
                j["value"] = num(v.value);
                j["rounded"] = v.rounded;
                j["err"] = num(v.err);
            }
            out << dump_json(j);
        } else if (*lser) {
            auto Q = parse_form(form);
            cplx s = parse_s(s_str);
            ojson j = make_report("lseries");
            j["form"] = Q.str();
            j["s"] = {s.real(), s.imag()};
            if (!c_str.empty()) {
                auto c = parse_c(c_str, Q.n());
                j["c"] = c;
                j["D"] = series_json(dirichlet_d(Q, c, s, terms));
            } else {
                auto chi = character_of(Q);
                j["conductor"] = chi.conductor;
                j["L"] = series_json(l_partial(chi, s, terms));
            }
            out << dump_json(j);
        } else if (*dens) {
            auto Q = parse_form(form);
            ojson j = make_report("density");
            j["form"] = Q.str();
            if (series) {
                auto ss = singular_series(Q, cutoff);
                j["cutoff"] = ss.cutoff;
                j["value"] = num(ss.value);
                j["lo"] = num(ss.lo);
                j["hi"] = num(ss.hi);
                j["tail"] = ss.tail;
                ojson bad = ojson::array();
                for (auto& d : ss.bad) bad.push_back(density_json(d));
                j["bad_primes"] = bad;
            } else {
                if (p < 2 || !is_prime(p)) throw UsageError("--p must be a prime (or use --series)");
                j["density"] = density_json(sigma_p(Q, p));
            }
            out << dump_json(j);
        } else if (*integ) {
            auto Q = parse_form(form);
            auto c = parse_c(c_str, Q.n());
            if (Q.coeff(0) <= 0) throw UsageError("the first coefficient must be positive");
            auto w = parse_weight(weight.empty() ? "wdag" : weight, Q);
            IntegralValue v;
            if (method == "tensor")
                v = iq_tensor(Q, B, q, c, w, 12, budget);
            else if (method == "sheet" || method == "auto")
                v = iq_integral(Q, B, q, c, w);
            else
                throw UsageError("unknown --method " + method);
            ojson j = make_report("integral");
            j["form"] = Q.str();
            j["weight"] = w.name();
            j["B"] = B;
            j["q"] = q;
            j["c"] = c;
            j["re"] = num(v.value.real());
            j["im"] = num(v.value.imag());
            j["abs_err"] = num(v.abs_err);
            j["evals"] = v.evals;
            out << dump_json(j);
        } else if (*recon) {
            auto Q = parse_form(form);
            ReconstructOptions o;
            o.q_max = qmax;
            o.c_max = cmax;
            auto r = reconstruct(Q, B, o);
            emit(dump_json(reconstruction_json(r, ledger)), out_path, out);
        } else if (*sw) {
            CorpusSpec cs;
            std::vector<i64> bl{8, 16};
            SweepOptions so;
            if (!config.empty()) {
                std::ifstream f(config);
                if (!f) throw UsageError("cannot read " + config);
                auto j = nlohmann::json::parse(f);
                cs.seed = j.value("seed", cs.seed);
                cs.ns = j.value("n", cs.ns);
                cs.amin = j.value("amin", cs.amin);
                cs.amax = j.value("amax", cs.amax);
                cs.count = j.value("count", cs.count);
                cs.primitive = j.value("primitive", cs.primitive);
                cs.nonsquare = j.value("nonsquare", cs.nonsquare);
                cs.same_order = j.value("same_order", cs.same_order);
                bl = j.value("B", bl);
                so.eps = j.value("epsilon", so.eps);
                so.densities = j.value("densities", so.densities);
            }
            if (sw->count("--seed")) cs.seed = seed;
            if (!ns.empty()) cs.ns = ns;
            if (corpus_count > 0) cs.count = corpus_count;
            if (!Bs.empty()) bl = Bs;
            if (no_densities) so.densities = false;
            auto rows = sweep(generate_corpus(cs), bl, so);
            auto csv = sweep_csv(rows);
            if (!csv_path.empty()) write_file(csv_path, csv);
            if (!json_path.empty()) write_file(json_path, dump_json(sweep_json(rows)));
            if (csv_path.empty() && json_path.empty()) out << csv;
            for (auto& r : rows)
                if (!r.majorant_ok) return 1;
        } else if (*self) {
            if (!write_baseline.empty()) {
                write_file(write_baseline, dump_json(envelope_summary()));
                out << "wrote " << write_baseline << "\n";
                return 0;
            }
            AcceptanceOptions o;
            o.only = only;
            o.baseline_path = baseline;
            bool all = true;
            run_acceptance(o, [&](const CriterionResult& r) {
                out << format_result(r) << std::endl;
                all = all && r.pass;
            });
            return all ? 0 : 1;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const FormError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace qdl
