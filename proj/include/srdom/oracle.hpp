#pragma once

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "error.hpp"
#include "feasibility.hpp"
#include "graph.hpp"
#include "spec.hpp"

namespace srdom {

inline constexpr int default_oracle_cap = 20;

/// Exhaustive ground truth over all 2^n subsets, walked in Gray-code order.
///
/// Selected-neighbour counts are maintained incrementally; the violation count is
/// re-derived only for the flipped vertex and its neighbours.
inline feasibility_result brute_force_table(const graph& g, const sigma_rho_spec& spec, int cap = default_oracle_cap)
{
    const int n = g.vertex_count();
    if (n > cap || n > 40)
        throw error(error_kind::cap_exceeded,
            "oracle refuses n=" + std::to_string(n) + " (cap " + std::to_string(cap) + ")");
    feasibility_result result(n);
    std::vector<bool> selected(n, false);
    std::vector<int> count(n, 0);
    std::vector<char> violated(n, 0);
    auto status = [&](vertex v) {
        return violation_status(g, selected, v, spec) == vertex_status::violated ? 1 : 0;
    };
    int size = 0, violations = 0;
    for (vertex v = 0; v < n; ++v) {
        violated[v] = static_cast<char>(status(v));
        violations += violated[v];
    }
    result.set_exact(0, violations, true);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t step = 1; step < total; ++step) {
        const vertex v = std::countr_zero(step);
        selected[v] = !selected[v];
        size += selected[v] ? 1 : -1;
        const int delta = selected[v] ? 1 : -1;
        for (vertex w : g.neighbors(v))
            count[w] += delta;
        auto refresh = [&](vertex u) {
            side s = selected[u] ? side::selected : side::unselected;
            char now = spec.satisfied(s, count[u]) ? 0 : 1;
            violations += now - violated[u];
            violated[u] = now;
        };
        refresh(v);
        for (vertex w : g.neighbors(v))
            refresh(w);
        result.set_exact(size, violations, true);
    }
    result.close_prefix();
    return result;
}

/// Minimum l with at_most[k][l]; -1 if k is out of range.
inline int min_violations(const graph& g, const sigma_rho_spec& spec, int k, int cap = default_oracle_cap)
{
    return brute_force_table(g, spec, cap).min_violations(k);
}

/// Oracle cap from SRSOLVER_ORACLE_CAP, falling back to the default.
inline int oracle_cap_from_environment()
{
    const char* text = std::getenv("SRSOLVER_ORACLE_CAP");
    if (!text || !*text)
        return default_oracle_cap;
    char* end = nullptr;
    long value = std::strtol(text, &end, 10);
    if (*end != '\0' || value < 0 || value > 40)
        return default_oracle_cap;
    return static_cast<int>(value);
}

} // namespace srdom
