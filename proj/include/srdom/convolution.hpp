#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "error.hpp"
#include "spec.hpp"

namespace srdom {

/// Largest |A|^b a table may have.
inline constexpr std::uint64_t max_codes = std::uint64_t{1} << 32;

/// Mixed-radix codes over the state alphabet: position i has weight |A|^i.
class state_codec {
public:
    state_codec() = default;
    state_codec(int arity, state_alphabet alphabet) : arity_(arity), alphabet_(alphabet)
    {
        const std::uint64_t base = static_cast<std::uint64_t>(alphabet.size());
        powers_.assign(arity + 1, 1);
        for (int i = 0; i < arity; ++i) {
            if (powers_[i] > max_codes / base)
                throw error(error_kind::cap_exceeded, "state space |A|^b too large");
            powers_[i + 1] = powers_[i] * base;
        }
    }

    int arity() const noexcept { return arity_; }
    const state_alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(powers_[arity_]); }
    std::size_t weight(int position) const noexcept { return static_cast<std::size_t>(powers_[position]); }

    int digit(std::size_t code, int position) const noexcept
    {
        return static_cast<int>((code / powers_[position]) % powers_[1]);
    }

    std::vector<state> decode(std::size_t code) const
    {
        std::vector<state> out(arity_);
        for (int i = 0; i < arity_; ++i)
            out[i] = alphabet_.at(digit(code, i));
        return out;
    }

    std::size_t encode(const std::vector<state>& states) const
    {
        std::size_t code = 0;
        for (int i = 0; i < arity_; ++i)
            code += weight(i) * static_cast<std::size_t>(alphabet_.index(states[i]));
        return code;
    }

    std::string describe(std::size_t code) const
    {
        std::string out;
        for (int i = 0; i < arity_; ++i) {
            if (i)
                out += ',';
            out += to_string(alphabet_.at(digit(code, i)));
        }
        return out.empty() ? "eps" : out;
    }

private:
    int arity_ = 0;
    state_alphabet alphabet_{};
    std::vector<std::uint64_t> powers_{1};
};

/// Dense function over (state code, k, l); l has extent 1 for plain indicator tables.
template <class Cell>
struct state_grid {
    int arity = 0;
    state_alphabet alphabet{};
    int k_ext = 1;
    int l_ext = 1;
    std::vector<Cell> cells;

    state_grid() = default;
    state_grid(int arity_, state_alphabet alphabet_, int k_ext_, int l_ext_ = 1)
        : arity(arity_), alphabet(alphabet_), k_ext(k_ext_), l_ext(l_ext_)
    {
        cells.assign(codec().size() * k_ext * l_ext, Cell{});
    }

    state_codec codec() const { return state_codec(arity, alphabet); }
    std::size_t code_count() const { return l_ext * k_ext == 0 ? 0 : cells.size() / (k_ext * l_ext); }
    std::size_t index(std::size_t code, int k, int l = 0) const
    {
        return (code * k_ext + k) * l_ext + l;
    }
    Cell& at(std::size_t code, int k, int l = 0) { return cells[index(code, k, l)]; }
    const Cell& at(std::size_t code, int k, int l = 0) const { return cells[index(code, k, l)]; }
    std::size_t nonzero() const
    {
        std::size_t count = 0;
        for (const Cell& c : cells)
            count += c != Cell{} ? 1 : 0;
        return count;
    }

    friend bool operator==(const state_grid&, const state_grid&) = default;
};

using indicator_table = state_grid<std::uint8_t>;
using count_table = state_grid<std::uint64_t>;

inline indicator_table make_indicator_table(int arity, const sigma_rho_spec& spec, int n_cap)
{
    return indicator_table(arity, spec.alphabet(), n_cap + 1, 1);
}

/// Scalar additions and multiplications performed by a kernel.
struct op_counter {
    std::uint64_t additions = 0;
    std::uint64_t multiplications = 0;
    std::uint64_t total() const noexcept { return additions + multiplications; }
};

namespace detail {

    template <class A, class B>
    void check_same_shape(const state_grid<A>& f, const state_grid<B>& g)
    {
        if (f.arity != g.arity || !(f.alphabet == g.alphabet))
            throw error(error_kind::shape_error, "convolution operands differ in arity or alphabet");
        if (f.cells.size() != f.codec().size() * f.k_ext * f.l_ext
            || g.cells.size() != g.codec().size() * g.k_ext * g.l_ext)
            throw error(error_kind::shape_error, "convolution operand has inconsistent cell count");
    }

    /// Result of capped addition of two alphabet indices, or -1 for mixed sides.
    inline std::vector<int> join_lookup(const state_alphabet& alphabet)
    {
        const int a = alphabet.size();
        std::vector<int> table(a * a, -1);
        for (int x = 0; x < a; ++x)
            for (int y = 0; y < a; ++y) {
                state sx = alphabet.at(x), sy = alphabet.at(y);
                if (sx.side == sy.side)
                    table[x * a + y] = alphabet.index(
                        {sx.side, std::min(sx.count + sy.count, alphabet.cap(sx.side))});
            }
        return table;
    }

    /// Integer coefficients of the L-th cyclotomic polynomial, lowest degree first.
    inline std::vector<long long> cyclotomic(int order)
    {
        std::vector<long long> poly(order + 1, 0);
        poly[0] = -1;
        poly[order] = 1;
        for (int d = 1; d < order; ++d) {
            if (order % d)
                continue;
            auto divisor = cyclotomic(d);
            const int dd = static_cast<int>(divisor.size()) - 1;
            const int pd = static_cast<int>(poly.size()) - 1;
            std::vector<long long> quotient(pd - dd + 1, 0);
            for (int i = pd; i >= dd; --i) {
                long long c = poly[i];
                quotient[i - dd] = c;
                for (int j = 0; j <= dd; ++j)
                    poly[i - dd + j] -= c * divisor[j];
            }
            poly = std::move(quotient);
        }
        return poly;
    }

    /// Transform geometry shared by both operands of one fast convolution.
    ///
    /// Each chain {0..s} with cap is represented by s cyclic frequencies of the
    /// exact states plus one total over the whole chain. Frequencies live in
    /// Z[x]/(x^L - 1) with omega = x^(L/s); a degree variable y records the sum
    /// of exact counts so wrapped products can be told apart from genuine ones.
    struct fast_plan {
        int arity = 0;
        int a = 0;
        int cap[2] = {0, 0};   // per side: chain length minus one
        int first[2] = {0, 0}; // alphabet index of the side's count-0 state
        int scale[2] = {1, 1}; // max(s, 1)
        int order = 1;         // L
        int ring = 1;          // stored ring length: 1 when L <= 2
        int degree = 0;        // D
        std::vector<long long> phi;

        fast_plan(int arity_, const state_alphabet& alphabet) : arity(arity_), a(alphabet.size())
        {
            cap[0] = alphabet.sigma_cap;
            cap[1] = alphabet.rho_cap;
            first[0] = 0;
            first[1] = alphabet.sigma_cap + 1;
            for (int s = 0; s < 2; ++s)
                scale[s] = std::max(cap[s], 1);
            order = std::lcm(scale[0], scale[1]);
            ring = order <= 2 ? 1 : order;
            degree = arity * std::max(0, std::max(cap[0], cap[1]) - 1);
            if (ring > 1)
                phi = cyclotomic(order);
        }

        /// Exponent of x contributing omega_s^(e) for side s.
        int rotation(int s, long long e) const
        {
            long long step = order / scale[s];
            long long t = (step * e) % order;
            return static_cast<int>(t < 0 ? t + order : t);
        }
    };

    template <class T>
    struct block_ops {
        int degree_ext;
        int weights;
        int ring;
        int order;
        op_counter* counter;

        std::size_t size() const { return static_cast<std::size_t>(degree_ext) * weights * ring; }

        /// dst[d + shift][w][r + t] += sign * src[d][w][r]; negative shift moves degrees down.
        void accumulate(T* dst, const T* src, int shift, int t, T sign) const
        {
            if (ring == 1 && order == 2 && (t & 1))
                sign = -sign;
            const int lo = std::max(0, -shift);
            const int hi = std::min(degree_ext, degree_ext - shift);
            for (int d = lo; d < hi; ++d) {
                const T* s = src + static_cast<std::size_t>(d) * weights * ring;
                T* o = dst + static_cast<std::size_t>(d + shift) * weights * ring;
                if (ring == 1) {
                    for (int w = 0; w < weights; ++w)
                        o[w] += sign * s[w];
                } else {
                    for (int w = 0; w < weights; ++w) {
                        const T* sw = s + static_cast<std::size_t>(w) * ring;
                        T* ow = o + static_cast<std::size_t>(w) * ring;
                        for (int r = 0; r < ring; ++r) {
                            int target = r + t;
                            if (target >= ring)
                                target -= ring;
                            ow[target] += sign * sw[r];
                        }
                    }
                }
            }
            if (counter && hi > lo)
                counter->additions += static_cast<std::uint64_t>(hi - lo) * weights * ring;
        }

        void scale(T* block, T factor) const
        {
            for (std::size_t i = 0; i < size(); ++i)
                block[i] *= factor;
            if (counter)
                counter->multiplications += size();
        }
    };

    template <class T, class Cell>
    std::vector<T> forward_transform(const state_grid<Cell>& f, const fast_plan& plan, op_counter* counter)
    {
        const int weights = f.k_ext * f.l_ext;
        block_ops<T> ops{plan.degree + 1, weights, plan.ring, plan.order, counter};
        const std::size_t bs = ops.size();
        const std::size_t positions = f.code_count();
        std::vector<T> data(positions * bs, T{0});
        for (std::size_t code = 0; code < positions; ++code)
            for (int w = 0; w < weights; ++w)
                if (f.cells[code * weights + w] != Cell{})
                    data[code * bs + static_cast<std::size_t>(w) * plan.ring] = static_cast<T>(f.cells[code * weights + w]);

        std::vector<T> in(plan.a * bs);
        std::size_t stride = 1;
        for (int coord = 0; coord < plan.arity; ++coord) {
            const std::size_t span = stride * plan.a;
            for (std::size_t outer = 0; outer < positions; outer += span)
                for (std::size_t inner = 0; inner < stride; ++inner) {
                    const std::size_t base = outer + inner;
                    for (int j = 0; j < plan.a; ++j)
                        std::copy_n(&data[(base + j * stride) * bs], bs, &in[j * bs]);
                    for (int j = 0; j < plan.a; ++j)
                        std::fill_n(&data[(base + j * stride) * bs], bs, T{0});
                    for (int s = 0; s < 2; ++s) {
                        const int cap = plan.cap[s], first = plan.first[s];
                        auto out = [&](int j) { return &data[(base + (first + j) * stride) * bs]; };
                        auto src = [&](int c) { return &in[(first + c) * bs]; };
                        for (int c = 0; c <= cap; ++c)
                            ops.accumulate(out(cap), src(c), 0, 0, T{1});
                        for (int k = 0; k < cap; ++k)
                            for (int c = 0; c < cap; ++c)
                                ops.accumulate(out(k), src(c), c, plan.rotation(s, static_cast<long long>(k) * c), T{1});
                    }
                }
            stride = span;
        }
        return data;
    }

    template <class T>
    void inverse_transform(std::vector<T>& data, std::size_t positions, const fast_plan& plan, int weights,
        op_counter* counter)
    {
        block_ops<T> ops{plan.degree + 1, weights, plan.ring, plan.order, counter};
        const std::size_t bs = ops.size();
        std::vector<T> in(plan.a * bs);
        std::size_t stride = 1;
        for (int coord = 0; coord < plan.arity; ++coord) {
            const std::size_t span = stride * plan.a;
            for (std::size_t outer = 0; outer < positions; outer += span)
                for (std::size_t inner = 0; inner < stride; ++inner) {
                    const std::size_t base = outer + inner;
                    for (int j = 0; j < plan.a; ++j)
                        std::copy_n(&data[(base + j * stride) * bs], bs, &in[j * bs]);
                    for (int s = 0; s < 2; ++s) {
                        const int cap = plan.cap[s], first = plan.first[s];
                        auto out = [&](int j) { return &data[(base + (first + j) * stride) * bs]; };
                        auto src = [&](int c) { return &in[(first + c) * bs]; };
                        for (int c = 0; c < cap; ++c) {
                            std::fill_n(out(c), bs, T{0});
                            for (int k = 0; k < cap; ++k)
                                ops.accumulate(out(c), src(k), -c, plan.rotation(s, -static_cast<long long>(k) * c), T{1});
                        }
                        std::copy_n(src(cap), bs, out(cap));
                        if (plan.scale[s] != 1)
                            ops.scale(out(cap), static_cast<T>(plan.scale[s]));
                        for (int c = 0; c < cap; ++c)
                            ops.accumulate(out(cap), out(c), 0, 0, T{-1});
                    }
                }
            stride = span;
        }
    }

    /// Reads the constant term of a ring element, reducing modulo the cyclotomic polynomial.
    template <class T>
    T ring_constant(const T* element, const fast_plan& plan, std::vector<T>& scratch)
    {
        if (plan.ring == 1)
            return element[0];
        scratch.assign(element, element + plan.ring);
        const int e = static_cast<int>(plan.phi.size()) - 1;
        for (int deg = plan.ring - 1; deg >= e; --deg) {
            T c = scratch[deg];
            if (c == T{0})
                continue;
            for (int j = 0; j <= e; ++j)
                scratch[deg - e + j] -= c * static_cast<T>(plan.phi[j]);
        }
        for (int j = 1; j < e; ++j)
            if (scratch[j] != T{0})
                throw std::logic_error("fast convolution left a non-rational residue");
        return scratch[0];
    }

    template <class T, class Cell>
    count_table convolve_fast_impl(const state_grid<Cell>& f, const state_grid<Cell>& g, int k_cap, int l_cap,
        op_counter* counter)
    {
        const fast_plan plan(f.arity, f.alphabet);
        const int ko = std::min(f.k_ext + g.k_ext - 1, k_cap + 1);
        const int lo = std::min(f.l_ext + g.l_ext - 1, l_cap + 1);
        const std::size_t positions = f.code_count();
        count_table out(f.arity, f.alphabet, ko, lo);

        auto tf = forward_transform<T>(f, plan, counter);
        auto tg = forward_transform<T>(g, plan, counter);

        const int de = plan.degree + 1, ring = plan.ring;
        const std::size_t bf = static_cast<std::size_t>(de) * f.k_ext * f.l_ext * ring;
        const std::size_t bg = static_cast<std::size_t>(de) * g.k_ext * g.l_ext * ring;
        const std::size_t bo = static_cast<std::size_t>(de) * ko * lo * ring;
        std::vector<T> product(positions * bo, T{0});
        std::uint64_t mults = 0;
        for (std::size_t p = 0; p < positions; ++p) {
            const T* fp = &tf[p * bf];
            const T* gp = &tg[p * bg];
            T* op = &product[p * bo];
            for (int d1 = 0; d1 < de; ++d1)
                for (int k1 = 0; k1 < f.k_ext; ++k1)
                    for (int l1 = 0; l1 < f.l_ext; ++l1) {
                        const T* fv = fp + ((static_cast<std::size_t>(d1) * f.k_ext + k1) * f.l_ext + l1) * ring;
                        bool zero = true;
                        for (int r = 0; r < ring; ++r)
                            zero = zero && fv[r] == T{0};
                        if (zero)
                            continue;
                        for (int d2 = 0; d1 + d2 < de; ++d2)
                            for (int k2 = 0; k2 < g.k_ext && k1 + k2 < ko; ++k2)
                                for (int l2 = 0; l2 < g.l_ext && l1 + l2 < lo; ++l2) {
                                    const T* gv = gp + ((static_cast<std::size_t>(d2) * g.k_ext + k2) * g.l_ext + l2) * ring;
                                    T* ov = op + ((static_cast<std::size_t>(d1 + d2) * ko + k1 + k2) * lo + l1 + l2) * ring;
                                    if (ring == 1) {
                                        ov[0] += fv[0] * gv[0];
                                    } else {
                                        for (int r1 = 0; r1 < ring; ++r1) {
                                            if (fv[r1] == T{0})
                                                continue;
                                            for (int r2 = 0; r2 < ring; ++r2) {
                                                int r = r1 + r2;
                                                if (r >= ring)
                                                    r -= ring;
                                                ov[r] += fv[r1] * gv[r2];
                                            }
                                        }
                                    }
                                    mults += static_cast<std::uint64_t>(ring) * ring;
                                }
                    }
        }
        if (counter) {
            counter->multiplications += mults;
            counter->additions += mults;
        }
        tf.clear();
        tf.shrink_to_fit();
        tg.clear();
        tg.shrink_to_fit();

        inverse_transform<T>(product, positions, plan, ko * lo, counter);

        const state_codec codec = out.codec();
        std::vector<T> scratch;
        for (std::size_t code = 0; code < positions; ++code) {
            T scale{1};
            for (int i = 0; i < plan.arity; ++i) {
                int digit = codec.digit(code, i);
                scale *= static_cast<T>(plan.scale[digit > plan.cap[0] ? 1 : 0]);
            }
            const T* base = &product[code * bo];
            for (int w = 0; w < ko * lo; ++w) {
                T value = ring_constant(base + static_cast<std::size_t>(w) * ring, plan, scratch);
                if (value < T{0} || value % scale != T{0})
                    throw std::logic_error("fast convolution produced an inexact count");
                out.cells[code * ko * lo + w] = static_cast<std::uint64_t>(value / scale);
            }
        }
        return out;
    }

} // namespace detail

/// Direct definition: sum over compatible pairs of nonzero cells.
template <class Cell>
count_table convolve_grid_naive(const state_grid<Cell>& f, const state_grid<Cell>& g, int k_cap, int l_cap,
    op_counter* counter = nullptr)
{
    detail::check_same_shape(f, g);
    const int ko = std::min(f.k_ext + g.k_ext - 1, k_cap + 1);
    const int lo = std::min(f.l_ext + g.l_ext - 1, l_cap + 1);
    count_table out(f.arity, f.alphabet, ko, lo);
    const state_codec codec = f.codec();
    const auto lookup = detail::join_lookup(f.alphabet);
    const int a = f.alphabet.size();

    struct cell {
        std::size_t code;
        int k, l;
        std::uint64_t weight;
    };
    auto collect = [](const state_grid<Cell>& t) {
        std::vector<cell> cells;
        for (std::size_t code = 0; code < t.code_count(); ++code)
            for (int k = 0; k < t.k_ext; ++k)
                for (int l = 0; l < t.l_ext; ++l)
                    if (t.at(code, k, l) != Cell{})
                        cells.push_back({code, k, l, static_cast<std::uint64_t>(t.at(code, k, l))});
        return cells;
    };
    const auto fc = collect(f), gc = collect(g);
    std::vector<std::vector<int>> fd(fc.size()), gd(gc.size());
    for (std::size_t i = 0; i < fc.size(); ++i)
        for (int p = 0; p < f.arity; ++p)
            fd[i].push_back(codec.digit(fc[i].code, p));
    for (std::size_t i = 0; i < gc.size(); ++i)
        for (int p = 0; p < f.arity; ++p)
            gd[i].push_back(codec.digit(gc[i].code, p));

    for (std::size_t i = 0; i < fc.size(); ++i)
        for (std::size_t j = 0; j < gc.size(); ++j) {
            const int k = fc[i].k + gc[j].k, l = fc[i].l + gc[j].l;
            if (k >= ko || l >= lo)
                continue;
            std::size_t code = 0;
            bool compatible = true;
            for (int p = 0; p < f.arity && compatible; ++p) {
                int joined = lookup[fd[i][p] * a + gd[j][p]];
                compatible = joined >= 0;
                code += codec.weight(p) * static_cast<std::size_t>(std::max(joined, 0));
            }
            if (counter)
                counter->additions += f.arity + 1;
            if (compatible) {
                out.at(code, k, l) += fc[i].weight * gc[j].weight;
                if (counter)
                    ++counter->multiplications;
            }
        }
    return out;
}

/// Transform-domain join: per-coordinate transforms, pointwise products, inverse.
template <class Cell>
count_table convolve_grid_fast(const state_grid<Cell>& f, const state_grid<Cell>& g, int k_cap, int l_cap,
    op_counter* counter = nullptr)
{
    detail::check_same_shape(f, g);
    long double mass_f = 0, mass_g = 0;
    for (const Cell& c : f.cells)
        mass_f += static_cast<long double>(c);
    for (const Cell& c : g.cells)
        mass_g += static_cast<long double>(c);
    const detail::fast_plan plan(f.arity, f.alphabet);
    const long double growth = 2.0L * std::max(plan.scale[0], plan.scale[1]);
    const long double bound = mass_f * mass_g * std::pow(growth, plan.arity) * 4.0L;
    if (bound < std::ldexp(1.0L, 62))
        return detail::convolve_fast_impl<std::int64_t>(f, g, k_cap, l_cap, counter);
    if (bound < std::ldexp(1.0L, 125) && mass_f * mass_g < std::ldexp(1.0L, 63))
        return detail::convolve_fast_impl<__int128>(f, g, k_cap, l_cap, counter);
    throw error(error_kind::cap_exceeded, "join counts exceed 128-bit intermediate range");
}

/// Rough scalar-operation estimates used to pick a kernel for one join.
template <class Cell>
double estimate_fast_cost(const state_grid<Cell>& f, const state_grid<Cell>& g)
{
    const detail::fast_plan plan(f.arity, f.alphabet);
    const double positions = static_cast<double>(f.code_count());
    const double de = plan.degree + 1, ring = plan.ring;
    const double wf = f.k_ext * f.l_ext, wg = g.k_ext * g.l_ext;
    const double wo = static_cast<double>(f.k_ext + g.k_ext - 1) * (f.l_ext + g.l_ext - 1);
    double per_coord = 0;
    for (int s = 0; s < 2; ++s)
        per_coord += (plan.cap[s] + 1.0) + static_cast<double>(plan.cap[s]) * plan.cap[s];
    per_coord /= plan.a;
    const double transforms = positions * plan.arity * per_coord * de * ring * (wf + wg + wo);
    const double products = positions * de * (de + 1) / 2 * wf * wg * ring * ring;
    return transforms + products;
}

template <class Cell>
double estimate_naive_cost(const state_grid<Cell>& f, const state_grid<Cell>& g)
{
    return static_cast<double>(f.nonzero()) * static_cast<double>(g.nonzero()) * (f.arity + 2)
        + static_cast<double>(f.cells.size() + g.cells.size());
}

inline void check_table_shapes(const indicator_table& f, const indicator_table& g)
{
    detail::check_same_shape(f, g);
    if (f.k_ext != g.k_ext || f.l_ext != 1 || g.l_ext != 1)
        throw error(error_kind::shape_error, "indicator tables differ in size range");
}

inline count_table convolve_naive(const indicator_table& f, const indicator_table& g, op_counter* counter = nullptr)
{
    check_table_shapes(f, g);
    return convolve_grid_naive(f, g, f.k_ext - 1, 0, counter);
}

inline count_table convolve_fast(const indicator_table& f, const indicator_table& g, op_counter* counter = nullptr)
{
    check_table_shapes(f, g);
    return convolve_grid_fast(f, g, f.k_ext - 1, 0, counter);
}

/// Nonzero cells as `code  states  k  l  value` lines, for test diagnostics.
template <class Cell>
void write_tsv(std::ostream& out, const state_grid<Cell>& t)
{
    const state_codec codec = t.codec();
    out << "code\tstates\tk\tl\tvalue\n";
    for (std::size_t code = 0; code < t.code_count(); ++code)
        for (int k = 0; k < t.k_ext; ++k)
            for (int l = 0; l < t.l_ext; ++l)
                if (t.at(code, k, l) != Cell{})
                    out << code << '\t' << codec.describe(code) << '\t' << k << '\t' << l << '\t'
                        << static_cast<std::uint64_t>(t.at(code, k, l)) << '\n';
}

} // namespace srdom
