#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "decomposition.hpp"
#include "dp.hpp"
#include "graph.hpp"
#include "spec.hpp"

namespace srdom {

struct bench_instance {
    graph g;
    tree_decomposition td;
};

/// Width-w instance whose nice form has two joins over a full bag of w + 1 vertices.
///
/// A central bag C holds w + 1 vertices with random internal edges; three pendant
/// bags each swap one vertex of C for a fresh vertex x_j attached to part of C.
inline bench_instance make_bench_instance(int w, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    const int core = w + 1;
    bench_instance out;
    out.g = graph(core + 3);
    for (vertex a = 0; a < core; ++a)
        for (vertex b = a + 1; b < core; ++b)
            if (coin(rng))
                out.g.add_edge(a, b);
    std::vector<vertex> centre(core);
    for (vertex a = 0; a < core; ++a)
        centre[a] = a;
    out.td.vertex_count = core + 3;
    out.td.bags.push_back(centre);
    for (int j = 0; j < 3; ++j) {
        const vertex x = core + j, dropped = j % core;
        std::vector<vertex> bag;
        for (vertex a = 0; a < core; ++a) {
            if (a == dropped)
                continue;
            bag.push_back(a);
            if (coin(rng) || (a == (dropped + 1) % core))
                out.g.add_edge(a, x);
        }
        bag.push_back(x);
        out.td.bags.push_back(bag);
        out.td.tree_edges.emplace_back(0, j + 1);
    }
    return out;
}

struct bench_row {
    int width = 0;
    double median_seconds = 0;
    std::uint64_t join_ops = 0;
};

/// Median wall time of a full solve and the fast join kernel's operation count per width.
inline std::vector<bench_row> run_bench(const sigma_rho_spec& spec, int w_from, int w_to, int reps,
    std::uint64_t seed = 1)
{
    std::vector<bench_row> rows;
    for (int w = w_from; w <= w_to; ++w) {
        const auto instance = make_bench_instance(w, seed + static_cast<std::uint64_t>(w));
        const auto ntd = nicify(instance.td, instance.g);
        std::vector<double> times;
        std::uint64_t ops = 0;
        for (int r = 0; r < std::max(reps, 1); ++r) {
            op_counter counter;
            solve_options options;
            options.kernel = join_kernel::fast;
            options.counter = &counter;
            const auto start = std::chrono::steady_clock::now();
            solve(instance.g, ntd, spec, options);
            times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
            ops = counter.total();
        }
        std::sort(times.begin(), times.end());
        rows.push_back({w, times[times.size() / 2], ops});
    }
    return rows;
}

struct growth_fit {
    double slope = 0;     // least-squares d ln(ops) / d w
    double scale = 0;     // c in c * base^w, geometric-mean fit at the given base
    double max_ratio = 0; // worst factor between a measurement and c * base^w
};

inline growth_fit fit_growth(const std::vector<bench_row>& rows, double base)
{
    growth_fit fit;
    const double n = static_cast<double>(rows.size());
    if (rows.size() < 2)
        return fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, log_c = 0;
    for (const auto& r : rows) {
        const double x = r.width, y = std::log(static_cast<double>(std::max<std::uint64_t>(r.join_ops, 1)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        log_c += y - x * std::log(base);
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    log_c /= n;
    fit.scale = std::exp(log_c);
    for (const auto& r : rows) {
        const double predicted = fit.scale * std::pow(base, r.width);
        const double ratio = static_cast<double>(r.join_ops) / predicted;
        fit.max_ratio = std::max(fit.max_ratio, std::max(ratio, 1.0 / ratio));
    }
    return fit;
}

} // namespace srdom
