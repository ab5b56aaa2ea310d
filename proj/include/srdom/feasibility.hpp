#pragma once

#include <cstdint>
#include <vector>

namespace srdom {

/// exact[k][l] over (k, l) in [0, n]^2, plus its 2-D prefix-OR.
struct feasibility_result {
    int n = 0;
    std::vector<std::uint8_t> exact;
    std::vector<std::uint8_t> at_most;

    explicit feasibility_result(int n_ = 0) : n(n_), exact((n_ + 1) * (n_ + 1), 0), at_most((n_ + 1) * (n_ + 1), 0) {}

    bool exact_at(int k, int l) const { return in_range(k, l) && exact[k * (n + 1) + l]; }
    bool at_most_at(int k, int l) const { return in_range(k, l) && at_most[k * (n + 1) + l]; }
    void set_exact(int k, int l, bool value) { exact[k * (n + 1) + l] = value ? 1 : 0; }

    void close_prefix()
    {
        for (int k = 0; k <= n; ++k)
            for (int l = 0; l <= n; ++l) {
                bool v = exact[k * (n + 1) + l];
                if (k)
                    v = v || at_most[(k - 1) * (n + 1) + l];
                if (l)
                    v = v || at_most[k * (n + 1) + l - 1];
                at_most[k * (n + 1) + l] = v ? 1 : 0;
            }
    }

    /// Smallest l with at_most[k][l], or -1.
    int min_violations(int k) const
    {
        for (int l = 0; l <= n; ++l)
            if (at_most_at(k, l))
                return l;
        return -1;
    }

    /// Smallest k with at_most[k][l], or -1.
    int min_size(int l) const
    {
        for (int k = 0; k <= n; ++k)
            if (at_most_at(k, l))
                return k;
        return -1;
    }

    friend bool operator==(const feasibility_result&, const feasibility_result&) = default;

private:
    bool in_range(int k, int l) const { return k >= 0 && l >= 0 && k <= n && l <= n; }
};

} // namespace srdom
