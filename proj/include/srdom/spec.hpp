#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace srdom {

/// A nonempty finite set of non-negative integers, or a set {x : x >= c}.
class membership_set {
public:
    static membership_set finite(std::vector<int> elements)
    {
        std::sort(elements.begin(), elements.end());
        elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
        if (elements.empty())
            throw error(error_kind::invalid_spec, "finite membership set must be nonempty");
        if (elements.front() < 0)
            throw error(error_kind::invalid_spec, "membership set elements must be non-negative");
        membership_set s;
        s.finite_ = true;
        s.elements_ = std::move(elements);
        s.build_mask();
        return s;
    }

    static membership_set cofinite_at_least(int threshold)
    {
        if (threshold < 0)
            throw error(error_kind::invalid_spec, "cofinite threshold must be non-negative");
        membership_set s;
        s.finite_ = false;
        s.threshold_ = threshold;
        s.build_mask();
        return s;
    }

    bool is_finite() const noexcept { return finite_; }

    bool contains(int x) const noexcept
    {
        if (x < 0)
            return false;
        if (x < static_cast<int>(mask_.size()))
            return mask_[x] != 0;
        return !finite_;
    }

    int min() const noexcept { return finite_ ? elements_.front() : threshold_; }

    /// Largest element; only meaningful for finite sets.
    int max() const noexcept { return finite_ ? elements_.back() : threshold_; }

    const std::vector<int>& elements() const noexcept { return elements_; }
    int threshold() const noexcept { return threshold_; }

    std::string to_string() const
    {
        if (!finite_)
            return "cofinite:" + std::to_string(threshold_);
        std::string out = "finite:{";
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (i)
                out += ',';
            out += std::to_string(elements_[i]);
        }
        out += '}';
        return out;
    }

    /// Parses `finite:{c1,c2,...}` or `cofinite:c`.
    static membership_set parse(std::string_view text)
    {
        auto fail = [&]() -> membership_set {
            throw error(error_kind::parse_error, "malformed membership set '" + std::string(text) + "'");
        };
        auto parse_int = [&](std::string_view digits) {
            if (digits.empty() || digits.size() > 9)
                fail();
            int value = 0;
            for (char c : digits) {
                if (c < '0' || c > '9')
                    fail();
                value = value * 10 + (c - '0');
            }
            return value;
        };

        constexpr std::string_view finite_prefix = "finite:{";
        constexpr std::string_view cofinite_prefix = "cofinite:";
        if (text.starts_with(cofinite_prefix))
            return cofinite_at_least(parse_int(text.substr(cofinite_prefix.size())));
        if (text.starts_with(finite_prefix) && text.ends_with("}")) {
            std::string_view body = text.substr(finite_prefix.size(), text.size() - finite_prefix.size() - 1);
            std::vector<int> values;
            while (true) {
                auto comma = body.find(',');
                values.push_back(parse_int(body.substr(0, comma)));
                if (comma == std::string_view::npos)
                    break;
                body.remove_prefix(comma + 1);
            }
            return finite(std::move(values));
        }
        return fail();
    }

    friend bool operator==(const membership_set& a, const membership_set& b)
    {
        return a.finite_ == b.finite_ && a.elements_ == b.elements_ && a.threshold_ == b.threshold_;
    }

private:
    membership_set() = default;

    void build_mask()
    {
        int limit = finite_ ? (elements_.empty() ? 0 : elements_.back() + 1) : threshold_;
        mask_.assign(limit, 0);
        if (finite_)
            for (int x : elements_)
                mask_[x] = 1;
    }

    bool finite_ = true;
    std::vector<int> elements_;
    int threshold_ = 0;
    std::vector<std::uint8_t> mask_;
};

inline bool contains(const membership_set& set, int x) { return set.contains(x); }

enum class side : std::uint8_t { selected, unselected };

/// A vertex state: sigma_c for selected vertices, rho_c for unselected ones.
struct state {
    srdom::side side;
    int count;

    friend bool operator==(const state&, const state&) = default;
};

/// Capped counters per side: top index of the sigma and rho chains.
///
/// Codes order all sigma states by count, then all rho states by count.
struct state_alphabet {
    int sigma_cap = 0;
    int rho_cap = 0;

    int size() const noexcept { return sigma_cap + rho_cap + 2; }
    int cap(side s) const noexcept { return s == side::selected ? sigma_cap : rho_cap; }

    int index(state st) const noexcept
    {
        return st.side == side::selected ? st.count : sigma_cap + 1 + st.count;
    }

    state at(int index) const noexcept
    {
        if (index <= sigma_cap)
            return {side::selected, index};
        return {side::unselected, index - sigma_cap - 1};
    }

    friend bool operator==(const state_alphabet&, const state_alphabet&) = default;
};

struct sigma_rho_spec {
    membership_set sigma;
    membership_set rho;
    int s_sigma;
    int s_rho;
    int s_sigma_p;
    int s_rho_p;
    int s_max_p;
    int alphabet_size_partial;
    int alphabet_size_nonpartial;

    const membership_set& set_for(side s) const noexcept { return s == side::selected ? sigma : rho; }
    state_alphabet alphabet() const noexcept { return {s_sigma_p, s_rho_p}; }
    int cap(side s) const noexcept { return s == side::selected ? s_sigma_p : s_rho_p; }

    /// Overflow states are the top states of chains whose set is finite.
    bool is_overflow(state st) const noexcept
    {
        return set_for(st.side).is_finite() && st.count == cap(st.side);
    }

    bool satisfied(side s, int selected_neighbors) const noexcept
    {
        return set_for(s).contains(selected_neighbors);
    }

    std::string to_string() const { return "sigma=" + sigma.to_string() + " rho=" + rho.to_string(); }
};

inline sigma_rho_spec derive_spec(membership_set sigma, membership_set rho)
{
    auto nonpartial = [](const membership_set& s) { return s.is_finite() ? s.max() : s.min(); };
    auto partial = [](const membership_set& s) { return s.is_finite() ? s.max() + 1 : s.min(); };
    if (sigma.is_finite() && sigma.elements().empty())
        throw error(error_kind::invalid_spec, "sigma is empty");
    if (rho.is_finite() && rho.elements().empty())
        throw error(error_kind::invalid_spec, "rho is empty");

    sigma_rho_spec spec{sigma, rho, 0, 0, 0, 0, 0, 0, 0};
    spec.s_sigma = nonpartial(sigma);
    spec.s_rho = nonpartial(rho);
    spec.s_sigma_p = partial(sigma);
    spec.s_rho_p = partial(rho);
    spec.s_max_p = std::max(spec.s_sigma_p, spec.s_rho_p);
    spec.alphabet_size_partial = spec.s_sigma_p + spec.s_rho_p + 2;
    spec.alphabet_size_nonpartial = spec.s_sigma + spec.s_rho + 2;
    return spec;
}

inline sigma_rho_spec parse_spec(std::string_view sigma, std::string_view rho)
{
    return derive_spec(membership_set::parse(sigma), membership_set::parse(rho));
}

/// Capped addition of two states of the same side.
inline state join_states(const state& a, const state& b, const sigma_rho_spec& spec)
{
    if (a.side != b.side)
        throw error(error_kind::undefined_join, "cannot join a sigma-state with a rho-state");
    return {a.side, std::min(a.count + b.count, spec.cap(a.side))};
}

inline std::string to_string(const state& st)
{
    return (st.side == side::selected ? "sigma_" : "rho_") + std::to_string(st.count);
}

} // namespace srdom
