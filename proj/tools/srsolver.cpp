#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "srdom/gadget_io.hpp"
#include "srdom/srdom.hpp"

namespace {

using namespace srdom;

enum exit_code { ok = 0, mismatch = 1, parse_failure = 2, bad_decomposition = 3, over_cap = 4, unsupported = 5 };

int code_for(error_kind kind)
{
    switch (kind) {
    case error_kind::invalid_decomposition:
        return bad_decomposition;
    case error_kind::cap_exceeded:
        return over_cap;
    case error_kind::unsupported_spec:
        return unsupported;
    default:
        return parse_failure;
    }
}

int report(const std::string& kind, const std::string& message, int code)
{
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["error"] = kind;
    j["message"] = message;
    j["exit"] = code;
    std::cerr << j.dump() << "\n";
    return code;
}

std::ifstream open_input(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error(error_kind::parse_error, "cannot open " + path);
    return in;
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw std::runtime_error("cannot write " + path);
}

graph load_graph(const std::string& path)
{
    auto in = open_input(path);
    return io::read_gr(in);
}

tree_decomposition load_td(const std::string& path)
{
    auto in = open_input(path);
    return io::read_td(in);
}

std::pair<int, int> parse_pair(const std::string& text, const char* flag)
{
    std::istringstream in(text);
    int k = 0, l = 0;
    char comma = 0;
    if (!(in >> k >> comma >> l) || comma != ',' || in.peek() != EOF)
        throw error(error_kind::parse_error, std::string(flag) + " expects k,l");
    return {k, l};
}

std::pair<int, int> parse_range(const std::string& text)
{
    const auto dots = text.find("..");
    if (dots == std::string::npos)
        throw error(error_kind::parse_error, "--widths expects a..b");
    try {
        std::size_t used_a = 0, used_b = 0;
        const int a = std::stoi(text.substr(0, dots), &used_a);
        const int b = std::stoi(text.substr(dots + 2), &used_b);
        if (used_a != dots || used_b != text.size() - dots - 2 || a < 1 || b < a)
            throw std::invalid_argument(text);
        return {a, b};
    } catch (const std::logic_error&) {
        throw error(error_kind::parse_error, "--widths expects a..b with 1 <= a <= b");
    }
}

std::string text_of(const auto& write, const auto& value)
{
    std::ostringstream out;
    write(out, value);
    return out.str();
}

nlohmann::ordered_json table_json(const feasibility_result& r, bool exact)
{
    auto rows = nlohmann::ordered_json::array();
    for (int k = 0; k <= r.n; ++k) {
        auto row = nlohmann::ordered_json::array();
        for (int l = 0; l <= r.n; ++l)
            row.push_back(exact ? r.exact_at(k, l) ? 1 : 0 : r.at_most_at(k, l) ? 1 : 0);
        rows.push_back(row);
    }
    return rows;
}

struct spec_flags {
    std::string sigma, rho;
    sigma_rho_spec parse() const { return parse_spec(sigma, rho); }
};

void add_spec_flags(CLI::App* app, spec_flags& f)
{
    app->add_option("--sigma", f.sigma, "sigma set, finite:{..} or cofinite:c")->required();
    app->add_option("--rho", f.rho, "rho set, finite:{..} or cofinite:c")->required();
}

struct solve_args {
    std::string graph_path, td_path, format = "json", witness;
    spec_flags spec;
    bool min_k = false;
    std::optional<int> max_violations;
    int threads = 1;
};

int cmd_solve(const solve_args& a)
{
    const auto spec = a.spec.parse();
    const graph g = load_graph(a.graph_path);
    const tree_decomposition td = a.td_path.empty() ? trivial_decomposition(g) : load_td(a.td_path);
    solve_options options;
    options.threads = a.threads;
    if (!a.witness.empty()) {
        const auto [k, l] = parse_pair(a.witness, "--witness");
        const auto s = srdom::witness(g, td, spec, k, l, options);
        if (!s) {
            std::cout << "none\n";
            return ok;
        }
        std::string line;
        for (vertex v : *s)
            line += (line.empty() ? "" : " ") + std::to_string(v + 1);
        std::cout << line << "\n";
        return ok;
    }
    const auto result = solve(g, td, spec, options);
    if (a.min_k) {
        if (!a.max_violations)
            throw error(error_kind::parse_error, "--min-k needs --max-violations");
        const int k = *a.max_violations < 0 ? -1 : result.min_size(std::min(*a.max_violations, result.n));
        std::cout << (k < 0 ? std::string("none") : std::to_string(k)) << "\n";
        return ok;
    }
    if (a.format == "tsv") {
        std::cout << "k\tl\texact\tat_most\n";
        for (int k = 0; k <= result.n; ++k)
            for (int l = 0; l <= result.n; ++l)
                std::cout << k << '\t' << l << '\t' << int(result.exact_at(k, l)) << '\t'
                          << int(result.at_most_at(k, l)) << '\n';
        return ok;
    }
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["sigma"] = spec.sigma.to_string();
    j["rho"] = spec.rho.to_string();
    j["n"] = result.n;
    j["width"] = td.width();
    j["exact"] = table_json(result, true);
    j["at_most"] = table_json(result, false);
    std::cout << j.dump() << "\n";
    return ok;
}

struct verify_args {
    std::string graph_path, td_path, flip;
    spec_flags spec;
    int threads = 1;
};

int cmd_verify(const verify_args& a)
{
    const auto spec = a.spec.parse();
    const graph g = load_graph(a.graph_path);
    const int cap = oracle_cap_from_environment();
    if (g.vertex_count() > cap)
        throw error(error_kind::cap_exceeded,
            "n=" + std::to_string(g.vertex_count()) + " exceeds oracle cap " + std::to_string(cap));
    const tree_decomposition td = a.td_path.empty() ? trivial_decomposition(g) : load_td(a.td_path);
    solve_options options;
    options.threads = a.threads;
    if (!a.flip.empty())
        options.debug_flip = parse_pair(a.flip, "--debug-flip-bit");
    const auto engine = solve(g, td, spec, options);
    const auto truth = brute_force_table(g, spec, cap);
    for (int table = 0; table < 2; ++table)
        for (int k = 0; k <= truth.n; ++k)
            for (int l = 0; l <= truth.n; ++l) {
                const bool e = table ? engine.at_most_at(k, l) : engine.exact_at(k, l);
                const bool o = table ? truth.at_most_at(k, l) : truth.exact_at(k, l);
                if (e != o) {
                    std::cout << "mismatch table=" << (table ? "at_most" : "exact") << " k=" << k << " l=" << l
                              << " engine=" << e << " oracle=" << o << "\n";
                    return mismatch;
                }
            }
    std::cout << "identical n=" << truth.n << "\n";
    return ok;
}

struct gadget_args {
    std::string family, out;
    spec_flags spec;
    int arity = 1, delta = 1;
    bool check = false;
};

int cmd_gadget(const gadget_args& a)
{
    const auto spec = a.spec.parse();
    gadget_instance inst = a.family == "tremendous" ? generate_tremendous(spec)
        : a.family == "fragile"                     ? generate_fragile(spec, a.arity)
                                                    : generate_robust(spec, a.arity, a.delta);
    const tree_decomposition td = inst.path_decomposition ? *inst.path_decomposition : trivial_decomposition(inst.g);
    write_file(a.out + ".gr", text_of(io::write_gr, inst.g));
    write_file(a.out + ".td", text_of(io::write_td, td));
    write_file(a.out + ".gadget.json", io::write_sidecar(io::make_sidecar(inst, spec)));
    std::cout << inst.family << " n=" << inst.g.vertex_count() << " m=" << inst.g.edge_count();
    for (const auto& [name, value] : inst.constants)
        std::cout << " " << name << "=" << value;
    std::cout << "\n";
    if (!a.check)
        return ok;
    const gadget_check c = a.family == "tremendous" ? check_tremendous(inst, spec)
        : a.family == "fragile"                     ? check_fragile(inst, spec)
                                                    : check_robust(inst, spec);
    if (c.ok) {
        std::cout << "check passed\n";
        return ok;
    }
    std::cout << "check failed property=" << c.property << " " << c.message;
    if (c.subset) {
        std::cout << " subset={";
        for (std::size_t i = 0; i < c.subset->size(); ++i)
            std::cout << (i ? "," : "") << (*c.subset)[i] + 1;
        std::cout << "}";
    }
    std::cout << "\n";
    return mismatch;
}

struct bench_args {
    std::string widths = "2..8";
    spec_flags spec{"cofinite:0", "cofinite:1"};
    int reps = 3;
    std::uint64_t seed = 1;
};

int cmd_bench(const bench_args& a)
{
    const auto [from, to] = parse_range(a.widths);
    const auto spec = a.spec.parse();
    const auto rows = run_bench(spec, from, to, a.reps, a.seed);
    std::cout << "width\tmedian_seconds\tjoin_ops\n";
    for (const auto& r : rows)
        std::cout << r.width << '\t' << r.median_seconds << '\t' << r.join_ops << '\n';
    const double base = static_cast<double>(spec.alphabet_size_partial);
    const auto fit = fit_growth(rows, base);
    std::cerr << "fit base=" << base << " slope=" << fit.slope << " slope_over_log_base=" << fit.slope / std::log(base)
              << " max_ratio=" << fit.max_ratio << "\n";
    return ok;
}

struct td_args {
    std::string graph_path, td_path, out;
};

int cmd_td_validate(const td_args& a)
{
    const graph g = load_graph(a.graph_path);
    const tree_decomposition td = load_td(a.td_path);
    const auto violations = validate(td, g);
    if (violations.empty()) {
        std::cout << "valid width=" << td.width() << "\n";
        return ok;
    }
    for (const auto& v : violations)
        std::cout << "invalid: " << describe(v) << "\n";
    return bad_decomposition;
}

int cmd_td_nicify(const td_args& a)
{
    const graph g = load_graph(a.graph_path);
    const tree_decomposition td = load_td(a.td_path);
    const auto nice = to_tree_decomposition(nicify(td, g));
    const std::string text = text_of(io::write_td, nice);
    if (a.out.empty())
        std::cout << text;
    else
        write_file(a.out, text);
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact partial (sigma,rho)-domination over tree decompositions"};
    app.require_subcommand(1);

    solve_args sa;
    auto* solve_cmd = app.add_subcommand("solve", "compute the feasibility tables");
    solve_cmd->add_option("--graph", sa.graph_path, ".gr file")->required();
    add_spec_flags(solve_cmd, sa.spec);
    solve_cmd->add_option("--td", sa.td_path, ".td file; default is a single bag");
    solve_cmd->add_option("--format", sa.format)->check(CLI::IsMember({"json", "tsv"}));
    solve_cmd->add_flag("--min-k", sa.min_k, "print the least k with at most L violations");
    solve_cmd->add_option("--max-violations", sa.max_violations);
    solve_cmd->add_option("--witness", sa.witness, "k,l: print a set of size k with exactly l violations");
    solve_cmd->add_option("--threads", sa.threads)->check(CLI::PositiveNumber);

    verify_args va;
    auto* verify_cmd = app.add_subcommand("verify", "compare the engine against exhaustive search");
    verify_cmd->add_option("--graph", va.graph_path)->required();
    add_spec_flags(verify_cmd, va.spec);
    verify_cmd->add_option("--td", va.td_path);
    verify_cmd->add_option("--threads", va.threads)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--debug-flip-bit", va.flip)->group("");

    gadget_args ga;
    auto* gadget_cmd = app.add_subcommand("gadget", "write a gadget as .gr, .td and .gadget.json");
    gadget_cmd->add_option("family", ga.family)->required()->check(CLI::IsMember({"tremendous", "fragile", "robust"}));
    add_spec_flags(gadget_cmd, ga.spec);
    gadget_cmd->add_option("--arity", ga.arity);
    gadget_cmd->add_option("--delta", ga.delta);
    gadget_cmd->add_option("--out", ga.out, "output path prefix")->required();
    gadget_cmd->add_flag("--check", ga.check, "run the exhaustive definitional check");

    bench_args ba;
    auto* bench_cmd = app.add_subcommand("bench", "time the engine on synthetic width-w instances");
    bench_cmd->add_option("--widths", ba.widths, "a..b");
    bench_cmd->add_option("--reps", ba.reps)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--sigma", ba.spec.sigma);
    bench_cmd->add_option("--rho", ba.spec.rho);
    bench_cmd->add_option("--seed", ba.seed);

    td_args ta;
    auto* td_cmd = app.add_subcommand("td", "tree decomposition utilities");
    td_cmd->require_subcommand(1);
    auto* validate_cmd = td_cmd->add_subcommand("validate", "check a .td against a .gr");
    auto* nicify_cmd = td_cmd->add_subcommand("nicify", "write the nice form as a .td");
    for (auto* c : {validate_cmd, nicify_cmd}) {
        c->add_option("--graph", ta.graph_path)->required();
        c->add_option("--td", ta.td_path)->required();
    }
    nicify_cmd->add_option("--out", ta.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report("usage", e.what(), parse_failure);
    }

    try {
        if (solve_cmd->parsed())
            return cmd_solve(sa);
        if (verify_cmd->parsed())
            return cmd_verify(va);
        if (gadget_cmd->parsed())
            return cmd_gadget(ga);
        if (bench_cmd->parsed())
            return cmd_bench(ba);
        if (validate_cmd->parsed())
            return cmd_td_validate(ta);
        return cmd_td_nicify(ta);
    } catch (const error& e) {
        return report(to_string(e.kind()), e.what(), code_for(e.kind()));
    } catch (const std::bad_alloc&) {
        return report(to_string(error_kind::cap_exceeded), "out of memory for the state tables", over_cap);
    } catch (const std::invalid_argument& e) {
        return report("invalid_argument", e.what(), parse_failure);
    } catch (const std::exception& e) {
        return report("internal", e.what(), parse_failure);
    }
}
