#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "twh/detasym.hpp"
#include "twh/error.hpp"
#include "twh/invapprox.hpp"
#include "twh/oracle.hpp"
#include "twh/spec_io.hpp"
#include "twh/verify.hpp"

using namespace twh;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitResonance = 3;

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw InputError("cannot write " + path);
    f << text;
}

int default_nodes(double alpha) { return std::max(200, int(std::ceil(100.0 * alpha))); }

json pf_json(const PartialFractions& pf) {
    json terms = json::array();
    for (const auto& t : pf.terms) terms.push_back({{"pole", to_json(t.pole)}, {"order", t.order}, {"coeff", to_json(t.coeff)}});
    return {{"constant", to_json(pf.constant)}, {"terms", terms}};
}

json factorization_json(const Factorization& f) {
    json j = {{"contour", f.symbol.contour == Contour::C1 ? "C1" : "C2"},
              {"sigma_plus", to_json(f.sigma_plus)},
              {"sigma_minus", to_json(f.sigma_minus)},
              {"tau_plus", to_json(f.tau_plus)},
              {"tau_minus", to_json(f.tau_minus)}};
    if (f.regular()) return j;
    j["c_minus"] = to_json(f.c_minus);
    j["c_plus"] = to_json(f.c_plus);
    j["tau_plus_at_p"] = to_json(f.tau_plus_at_p);
    j["tau_plus_at_minus_p"] = to_json(f.tau_plus_at_minus_p);
    j["tau_minus_at_p"] = to_json(f.tau_minus_at_p);
    j["tau_minus_at_minus_p"] = to_json(f.tau_minus_at_minus_p);
    if (f.p() == 0.0) {
        j["d_ratio"] = to_json(f.d_ratio);
        j["tau_deriv_plus_0"] = to_json(f.tau_deriv_plus_0);
        j["tau_deriv_minus_0"] = to_json(f.tau_deriv_minus_0);
    }
    if (f.symbol.contour == Contour::C1) {
        j["u_plus"] = pf_json(f.u_plus);
        j["u_minus"] = pf_json(f.u_minus);
    }
    return j;
}

// One evaluated determinant, asymptotic or oracle.
struct DetRecord {
    std::string method;
    double alpha = 0.0;
    cplx value;
    std::optional<cplx> G, E, A_or_B, G2, E2;
    double resonance_distance = NAN;
    double error_estimate = 0.0;
    int nodes = 0;
    std::vector<std::string> warnings;
    double seconds = 0.0;
};

DetRecord evaluate(const SingularSymbol& s, double alpha, DetMethod m, int nodes) {
    const auto t0 = std::chrono::steady_clock::now();
    DetRecord r;
    r.method = method_name(m);
    r.alpha = alpha;
    if (m == DetMethod::oracle) {
        const auto d = nystrom_determinant(s, alpha, nodes);
        r.value = d.value;
        r.error_estimate = d.error_estimate;
        r.nodes = d.n;
    } else {
        const auto d = asymptotic_determinant(s, alpha, m);
        r.value = d.value;
        r.G = d.G;
        r.E = d.E;
        r.A_or_B = d.A_or_B;
        r.G2 = d.G2;
        r.E2 = d.E2;
        if (m == DetMethod::thm3 || m == DetMethod::dual) r.resonance_distance = d.resonance_distance;
        r.error_estimate = d.quadrature_error_estimate;
        r.warnings = d.warnings;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

json record_json(const DetRecord& r) {
    json j = {{"alpha", r.alpha}, {"method", r.method}, {"value", to_json(r.value)}};
    if (r.G) j["G"] = to_json(*r.G);
    if (r.E) j["E"] = to_json(*r.E);
    if (r.A_or_B) j["A_or_B"] = to_json(*r.A_or_B);
    if (r.G2) j["G2"] = to_json(*r.G2);
    if (r.E2) j["E2"] = to_json(*r.E2);
    if (std::isfinite(r.resonance_distance)) j["resonance_distance"] = r.resonance_distance;
    j[r.method == "oracle" ? "oracle_error_estimate" : "quadrature_error_estimate"] = r.error_estimate;
    if (r.nodes) j["nodes"] = r.nodes;
    j["warnings"] = r.warnings;
    return j;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError("malformed " + what + ": " + s);
    }
}

std::vector<double> parse_alpha_range(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw InputError("--alpha expects LO:HI:STEPS");
    const double lo = parse_number(parts[0], "alpha"), hi = parse_number(parts[1], "alpha");
    const double steps = parse_number(parts[2], "steps");
    if (steps < 1 || steps != std::floor(steps) || hi < lo || lo <= 0.0) throw InputError("bad alpha range: " + spec);
    std::vector<double> out;
    const int n = int(steps);
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
}

unsigned worker_count(size_t jobs) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("WH_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) n = unsigned(v);
    }
    return unsigned(std::min<size_t>(n, std::max<size_t>(1, jobs)));
}

// Least-squares slope of log(err) against alpha over points with err > 0.
double log_slope(const std::vector<double>& a, const std::vector<double>& err) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        if (!(err[i] > 0.0) || !std::isfinite(err[i])) continue;
        const double y = std::log(err[i]);
        sx += a[i];
        sy += y;
        sxx += a[i] * a[i];
        sxy += a[i] * y;
        ++n;
    }
    const double den = n * sxx - sx * sx;
    if (n < 2 || den == 0.0) return NAN;
    return (n * sxy - sx * sy) / den;
}

std::string num(double v) { return std::isfinite(v) ? format_double(v) : ""; }
std::string opt_re(const std::optional<cplx>& z) { return z ? format_double(z->real()) : ""; }
std::string opt_im(const std::optional<cplx>& z) { return z ? format_double(z->imag()) : ""; }

int run_sweep(const SingularSymbol& s, const std::string& alpha_spec, const std::string& methods_spec, int nodes_per_unit,
              bool timing, const std::string& out) {
    const auto alphas = parse_alpha_range(alpha_spec);
    std::vector<DetMethod> methods;
    for (const auto& m : split(methods_spec, ',')) methods.push_back(parse_method(m));
    if (methods.empty()) throw InputError("--methods is empty");

    struct Job {
        size_t ai, mi;
    };
    std::vector<Job> jobs;
    for (size_t ai = 0; ai < alphas.size(); ++ai)
        for (size_t mi = 0; mi < methods.size(); ++mi) jobs.push_back({ai, mi});

    std::vector<std::optional<DetRecord>> results(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t k; (k = next.fetch_add(1)) < jobs.size();) {
            const double a = alphas[jobs[k].ai];
            try {
                results[k] = evaluate(s, a, methods[jobs[k].mi], std::max(20, int(std::ceil(nodes_per_unit * a))));
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < worker_count(jobs.size()); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    auto at = [&](size_t ai, size_t mi) -> const DetRecord& { return *results[ai * methods.size() + mi]; };

    std::ostringstream csv;
    csv << "kind,alpha,method,reference,re,im,G_re,G_im,E_re,E_im,AB_re,AB_im,abs_error,rel_error,"
           "resonance_distance,slope"
        << (timing ? ",seconds" : "") << "\n";
    for (size_t ai = 0; ai < alphas.size(); ++ai)
        for (size_t mi = 0; mi < methods.size(); ++mi) {
            const auto& r = at(ai, mi);
            csv << "value," << format_double(r.alpha) << "," << r.method << ",," << format_double(r.value.real()) << ","
                << format_double(r.value.imag()) << "," << opt_re(r.G) << "," << opt_im(r.G) << "," << opt_re(r.E) << ","
                << opt_im(r.E) << "," << opt_re(r.A_or_B) << "," << opt_im(r.A_or_B) << ",,,"
                << num(r.resonance_distance) << ",";
            if (timing) csv << "," << format_double(r.seconds);
            csv << "\n";
        }
    // Pairwise errors; an oracle method is always taken as the reference.
    // rel_error only against the oracle.
    for (size_t i = 0; i < methods.size(); ++i)
        for (size_t j = i + 1; j < methods.size(); ++j) {
            size_t m = i, ref = j;
            if (methods[i] == DetMethod::oracle) std::swap(m, ref);
            std::vector<double> abs_err;
            for (size_t ai = 0; ai < alphas.size(); ++ai) {
                const cplx v = at(ai, m).value, w = at(ai, ref).value;
                const double ae = std::abs(v - w);
                abs_err.push_back(ae);
                csv << "error," << format_double(alphas[ai]) << "," << method_name(methods[m]) << ","
                    << method_name(methods[ref]) << ",,,,,,,,," << format_double(ae) << ","
                    << (methods[ref] == DetMethod::oracle ? num(ae / std::abs(w)) : "")
                    << ",," << (timing ? ",\n" : "\n");
            }
            csv << "slope,," << method_name(methods[m]) << "," << method_name(methods[ref]) << ",,,,,,,,,,,,"
                << num(log_slope(alphas, abs_err)) << (timing ? ",\n" : "\n");
        }
    write_output(out, csv.str());
    return 0;
}

std::vector<double> interior_grid(double alpha, int g) {
    std::vector<double> xs;
    for (int i = 1; i <= g; ++i) xs.push_back(alpha * i / (g + 1));
    return xs;
}

int run_inverse(const SingularSymbol& s, double alpha, int grid, const std::string& method, const std::string& order,
                int nodes, const std::string& out) {
    if (grid < 1) throw InputError("--grid must be positive");
    const auto xs = interior_grid(alpha, grid);
    Eigen::MatrixXcd values(grid, grid);
    if (method == "oracle") {
        const int n = aligned_node_count(nodes > 0 ? nodes : default_nodes(alpha), grid + 1);
        values = nystrom_resolvent(s, alpha, n, xs, xs).values;
    } else {
        TensorOrder ord = kDefaultTensorOrder;
        if (order == "zeta-eta") ord = TensorOrder::zeta_eta;
        else if (order != "eta-zeta") throw InputError("--order expects eta-zeta or zeta-eta");
        const auto f = factorize(s);
        ApproxInverse inv;
        if (method == "regular") inv = regular_inverse_kernel(f, alpha);
        else if (method == "thm1") inv = thm1_inverse_kernel(f, alpha, ord);
        else if (method == "thm2") inv = thm2_inverse_kernel(f, alpha);
        else throw InputError("unknown inverse method: " + method);
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) values(i, j) = eval_inverse_kernel(inv, xs[i], xs[j]);
    }
    std::ostringstream csv;
    csv << "x,y,re,im\n";
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
            csv << format_double(xs[i]) << "," << format_double(xs[j]) << "," << format_double(values(i, j).real()) << ","
                << format_double(values(i, j).imag()) << "\n";
    write_output(out, csv.str());
    return 0;
}

int run_verify(const std::string& suite) {
    bool ok = true;
    for (const auto& r : run_suite(suite)) {
        ok = ok && r.passed;
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.suite << "/" << r.name << " measured=" << format_double(r.measured)
                  << " tol=" << format_double(r.tolerance);
        if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
        std::cout << "\n";
    }
    return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Truncated Wiener-Hopf inverses and determinant asymptotics"};
    app.require_subcommand(1);

    std::string symbol, out, method, alpha_spec, methods, suite = "all", order = "eta-zeta";
    double alpha = 0.0;
    int nodes = 0, grid = 11, nodes_per_unit = 100;
    bool dual = false, timing = false;

    auto* fac = app.add_subcommand("factorize", "Wiener-Hopf factor data as JSON");
    fac->add_option("--symbol", symbol, "preset name or spec file")->required();
    fac->add_flag("--dual", dual, "include the C2 factorization");
    fac->add_option("--out", out, "output path (default stdout)");

    auto* det = app.add_subcommand("det", "determinant report as JSON");
    det->add_option("--symbol", symbol)->required();
    det->add_option("--alpha", alpha)->required();
    det->add_option("--method", method, "kac|thm3|thm4|dual|oracle")->required();
    det->add_option("--nodes", nodes, "oracle node count (default 100*alpha, at least 200)");
    det->add_option("--out", out);

    auto* inv = app.add_subcommand("inverse", "kernel samples of T - I as CSV");
    inv->add_option("--symbol", symbol)->required();
    inv->add_option("--alpha", alpha)->required();
    inv->add_option("--grid", grid, "G: samples at alpha*i/(G+1), i = 1..G");
    inv->add_option("--method", method, "regular|thm1|thm2|oracle")->required();
    inv->add_option("--order", order, "thm1 last tensor term: eta-zeta|zeta-eta");
    inv->add_option("--nodes", nodes, "oracle node count");
    inv->add_option("--out", out);

    auto* sweep = app.add_subcommand("sweep", "determinants over an alpha range as CSV");
    sweep->add_option("--symbol", symbol)->required();
    sweep->add_option("--alpha", alpha_spec, "LO:HI:STEPS")->required();
    sweep->add_option("--methods", methods, "comma-separated methods")->required();
    sweep->add_option("--nodes-per-unit", nodes_per_unit, "oracle nodes per unit of alpha");
    sweep->add_flag("--timing", timing, "add a wall-clock column");
    sweep->add_option("--out", out);

    auto* ver = app.add_subcommand("verify", "run invariant suites");
    ver->add_option("--suite", suite, "all|anchors|identities|kernels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*fac) {
            const auto s = load_symbol(symbol);
            json j = {{"symbol", to_json(s)}};
            const auto d = validate_symbol(s);
            j["diagnostics"] = {{"winding", d.winding}, {"sigma_at_infinity", to_json(d.sigma_at_infinity)},
                                {"pole_margin", d.pole_margin}};
            json fs = json::array();
            if (s.regular) {
                fs.push_back(factorization_json(factorize(s)));
            } else {
                fs.push_back(factorization_json(factorize(s.with_contour(dual ? Contour::C1 : s.contour))));
                if (dual) fs.push_back(factorization_json(factorize(s.with_contour(Contour::C2))));
            }
            j["factorizations"] = fs;
            write_output(out, j.dump(2) + "\n");
            return 0;
        }
        if (*det) {
            const auto s = load_symbol(symbol);
            if (!(alpha > 0.0)) throw InputError("alpha must be positive");
            const auto m = parse_method(method);
            const auto r = evaluate(s, alpha, m, nodes > 0 ? nodes : default_nodes(alpha));
            json j = record_json(r);
            j["symbol"] = to_json(s);
            write_output(out, j.dump(2) + "\n");
            return 0;
        }
        if (*inv) {
            if (!(alpha > 0.0)) throw InputError("alpha must be positive");
            return run_inverse(load_symbol(symbol), alpha, grid, method, order, nodes, out);
        }
        if (*sweep) return run_sweep(load_symbol(symbol), alpha_spec, methods, nodes_per_unit, timing, out);
        if (*ver) return run_verify(suite);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ResonanceError& e) {
        std::cerr << "resonance: " << e.what() << "\n";
        return kExitResonance;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return 0;
}
