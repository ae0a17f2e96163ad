#include "qaf/encoder.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qaf {

namespace {

int bit_length_index(long long v) {  // floor(log2 v)
    int b = -1;
    while (v > 0) {
        v >>= 1;
        ++b;
    }
    return b;
}

}  // namespace

std::vector<BitSplit> enumerate_bit_splits(long long n_value) {
    std::vector<BitSplit> splits;
    if (n_value < 9 || n_value % 2 == 0) return splits;
    const int ln = bit_length_index(n_value);
    for (long long p = 3; p * p <= n_value; p += 2) {
        if (n_value % p != 0) continue;
        const long long q = n_value / p;
        BitSplit s{bit_length_index(p), bit_length_index(q), ln};
        if (s.lp < 1) continue;
        if (std::find(splits.begin(), splits.end(), s) == splits.end()) splits.push_back(s);
    }
    std::sort(splits.begin(), splits.end(),
              [](const BitSplit& a, const BitSplit& b) { return std::pair(a.lp, a.lq) < std::pair(b.lp, b.lq); });
    return splits;
}

BlockLayout build_block_layout(const BitSplit& split, int w) {
    if (w < 1) throw std::invalid_argument("build_block_layout: block width must be >= 1");
    const int lp = split.lp, lq = split.lq, ln = split.ln;
    if (lp + lq < w) throw std::invalid_argument("build_block_layout: lp + lq < W");

    BlockLayout layout;
    layout.width = w;
    layout.full_blocks = (lp + lq) / w;

    // Number of product terms p_m * q_n falling in table column j.
    auto column_products = [&](int j) -> long long {
        const int m_lo = std::max(0, j - lq);
        const int m_hi = std::min(j, lp);
        return m_hi >= m_lo ? m_hi - m_lo + 1 : 0;
    };

    long long carry_max_prev = 0;  // C_{i-1} = 2^{c_{i-1}} - 1
    for (int i = 1; i <= layout.full_blocks; ++i) {
        long long max_rho = 0;
        for (int j = (i - 1) * w + 1; j <= i * w; ++j)
            max_rho += (1LL << (j - 1 - (i - 1) * w)) * column_products(j);
        const long long block_max = carry_max_prev + max_rho;  // B_i
        const long long overflow = block_max >> w;             // M_i
        const int carries = overflow == 0 ? 0 : bit_length_index(overflow) + 1;
        layout.max_sums.push_back(block_max);
        layout.carry_counts.push_back(carries);
        carry_max_prev = (1LL << carries) - 1;
    }

    const bool extra_block = ln - layout.full_blocks * w > 1;
    layout.num_blocks = extra_block ? layout.full_blocks + 1 : layout.full_blocks;
    const int carry_blocks = extra_block ? layout.full_blocks : layout.full_blocks - 1;
    layout.carry_prefix.assign(1, 0);
    for (int i = 0; i < carry_blocks; ++i)
        layout.carry_prefix.push_back(layout.carry_prefix.back() + layout.carry_counts[static_cast<std::size_t>(i)]);
    layout.total_carries = layout.carry_prefix.back();
    layout.aux_count = (lp - 1) * (lq - 1);
    layout.total_qubits = (lp - 1) + (lq - 1) + layout.total_carries + layout.aux_count;
    return layout;
}

std::optional<BlockLayout> try_block_layout(const BitSplit& split, int w) {
    if (w < 1 || split.lp + split.lq < w) return std::nullopt;
    return build_block_layout(split, w);
}

int VariableRegistry::p_var(int m) const { return p_offset() + m - 1; }
int VariableRegistry::q_var(int n) const { return q_offset() + n - 1; }
int VariableRegistry::carry_var(int k) const { return carry_offset() + k - 1; }

int VariableRegistry::aux_var(int m, int n) const {
    return aux_offset() + (m - 1) * (split.lq - 1) + (n - 1);
}

VariableRegistry make_registry(const BitSplit& split, const BlockLayout& layout) {
    VariableRegistry reg;
    reg.split = split;
    reg.layout = layout;
    for (int m = 1; m <= split.lp - 1; ++m)
        reg.vars.push_back({Variable::Role::PBit, m, 0, 0, "p" + std::to_string(m)});
    for (int n = 1; n <= split.lq - 1; ++n)
        reg.vars.push_back({Variable::Role::QBit, n, 0, 0, "q" + std::to_string(n)});
    for (int k = 1; k <= layout.total_carries; ++k)
        reg.vars.push_back({Variable::Role::Carry, k, 0, 0, "C" + std::to_string(k)});
    for (int m = 1; m <= split.lp - 1; ++m)
        for (int n = 1; n <= split.lq - 1; ++n)
            reg.vars.push_back({Variable::Role::Aux, 0, m, n,
                                "x_p" + std::to_string(m) + "q" + std::to_string(n)});
    return reg;
}

std::vector<std::vector<BlockTerm>> block_expressions(long long n_value, const BitSplit& split,
                                                      const BlockLayout& layout,
                                                      const VariableRegistry& registry) {
    const int lp = split.lp, lq = split.lq, ln = split.ln;
    const int w = layout.width;

    // Monomial of p_m * q_n with the fixed end bits substituted.
    auto product_mono = [&](int m, int n) -> Monomial {
        Monomial mono;
        if (m >= 1 && m <= lp - 1) mono.push_back(registry.p_var(m));
        if (n >= 1 && n <= lq - 1) mono.push_back(registry.q_var(n));
        std::sort(mono.begin(), mono.end());
        return mono;
    };

    std::vector<std::vector<BlockTerm>> blocks;
    for (int i = 1; i <= layout.num_blocks; ++i) {
        std::vector<BlockTerm> expr;
        const bool last = i == layout.num_blocks;
        const int col_lo = (i - 1) * w + 1;
        const int prod_hi = last ? lp + lq : i * w;
        const int target_hi = last ? ln : i * w;

        for (int j = col_lo; j <= prod_hi; ++j) {
            const long long weight = 1LL << (j - 1 - (i - 1) * w);
            for (int m = std::max(0, j - lq); m <= std::min(j, lp); ++m)
                expr.push_back({weight, product_mono(m, j - m)});
        }
        if (i > 1) {  // K_i: carries entering this block
            const int cin = layout.carry_counts[static_cast<std::size_t>(i - 2)];
            const int base = layout.carry_prefix[static_cast<std::size_t>(i - 2)];
            for (int j = 1; j <= cin; ++j)
                expr.push_back({1LL << (j - 1), {registry.carry_var(base + j)}});
        }
        if (!last) {  // F_i: carries leaving this block, valued above the block window
            const int cout = layout.carry_counts[static_cast<std::size_t>(i - 1)];
            const int base = layout.carry_prefix[static_cast<std::size_t>(i - 1)];
            for (int j = 1; j <= cout; ++j)
                expr.push_back({-(1LL << (w + j - 1)), {registry.carry_var(base + j)}});
        }
        long long target = 0;  // V_i read from the binary digits of N
        for (int j = col_lo; j <= target_hi; ++j)
            target += (1LL << (j - 1 - (i - 1) * w)) * ((n_value >> j) & 1LL);
        if (target != 0) expr.push_back({-target, {}});
        blocks.push_back(std::move(expr));
    }
    return blocks;
}

QuboPolynomial square_block(const std::vector<BlockTerm>& expr, int num_vars) {
    QuboPolynomial poly;
    poly.num_vars = num_vars;
    for (const auto& a : expr)
        for (const auto& b : expr) {
            Monomial mono = a.mono;
            mono.insert(mono.end(), b.mono.begin(), b.mono.end());
            poly.add_term(std::move(mono), a.coef * b.coef);
        }
    return poly;
}

std::pair<QuboPolynomial, VariableRegistry> build_cost_function(long long n_value,
                                                                const BitSplit& split,
                                                                const BlockLayout& layout) {
    VariableRegistry registry = make_registry(split, layout);
    QuboPolynomial poly;
    poly.num_vars = registry.count();
    for (const auto& expr : block_expressions(n_value, split, layout, registry)) {
        QuboPolynomial sq = square_block(expr, registry.count());
        poly.constant += sq.constant;
        for (auto& [mono, coef] : sq.terms) poly.add_term(mono, coef);
    }
    return {std::move(poly), std::move(registry)};
}

QuboPolynomial reduce_to_quadratic(const QuboPolynomial& poly, const VariableRegistry& registry) {
    QuboPolynomial out;
    out.num_vars = registry.count();
    out.constant = poly.constant;

    // Accumulated gadget weight per auxiliary pair.
    std::map<std::pair<int, int>, long long> penalty;

    auto classify = [&](const Monomial& mono) {
        struct Parts {
            std::vector<int> p_bits, q_bits;  // bit indices m / n
            std::vector<VarIndex> rest;       // carry variables
        } parts;
        for (VarIndex v : mono) {
            const Variable& var = registry.vars[static_cast<std::size_t>(v)];
            switch (var.role) {
                case Variable::Role::PBit: parts.p_bits.push_back(var.index); break;
                case Variable::Role::QBit: parts.q_bits.push_back(var.index); break;
                case Variable::Role::Carry: parts.rest.push_back(v); break;
                case Variable::Role::Aux:
                    throw std::invalid_argument("reduce_to_quadratic: input already contains auxiliaries");
            }
        }
        std::sort(parts.p_bits.begin(), parts.p_bits.end());
        std::sort(parts.q_bits.begin(), parts.q_bits.end());
        return parts;
    };

    for (const auto& [mono, coef] : poly.terms) {
        if (mono.size() <= 2) {
            out.add_term(mono, coef);
            continue;
        }
        if (mono.size() > 4)
            throw std::invalid_argument("reduce_to_quadratic: terms above order 4 are not supported");
        auto parts = classify(mono);
        if (parts.p_bits.empty() || parts.q_bits.empty())
            throw std::invalid_argument("reduce_to_quadratic: monomial lacks a (p, q) pair");
        if (mono.size() == 3) {
            // {C,p,q}, {p,p,q} or {p,q,q}: substitute the lexicographically
            // smallest pair, keep the leftover variable.
            const int m = parts.p_bits.front();
            const int n = parts.q_bits.front();
            VarIndex leftover;
            if (!parts.rest.empty())
                leftover = parts.rest.front();
            else if (parts.p_bits.size() == 2)
                leftover = registry.p_var(parts.p_bits.back());
            else
                leftover = registry.q_var(parts.q_bits.back());
            out.add_term({registry.aux_var(m, n), leftover}, coef);
            penalty[{m, n}] += 2 * std::abs(coef);
        } else {
            // {p,p,q,q}: substitute both pairs, min-with-min and max-with-max.
            if (parts.p_bits.size() != 2 || parts.q_bits.size() != 2)
                throw std::invalid_argument("reduce_to_quadratic: unexpected quartic shape");
            const int a1 = registry.aux_var(parts.p_bits[0], parts.q_bits[0]);
            const int a2 = registry.aux_var(parts.p_bits[1], parts.q_bits[1]);
            out.add_term({a1, a2}, coef);
            penalty[{parts.p_bits[0], parts.q_bits[0]}] += 2 * std::abs(coef);
            penalty[{parts.p_bits[1], parts.q_bits[1]}] += 2 * std::abs(coef);
        }
    }

    // Pin auxiliaries that no reduced term touched.
    for (int m = 1; m <= registry.split.lp - 1; ++m)
        for (int n = 1; n <= registry.split.lq - 1; ++n)
            if (penalty.find({m, n}) == penalty.end()) penalty[{m, n}] = 2;

    for (const auto& [pair, weight] : penalty) {
        const int pv = registry.p_var(pair.first);
        const int qv = registry.q_var(pair.second);
        const int av = registry.aux_var(pair.first, pair.second);
        out.add_term({pv, qv}, weight);
        out.add_term({pv, av}, -2 * weight);
        out.add_term({qv, av}, -2 * weight);
        out.add_term({av}, 3 * weight);
    }
    return out;
}

std::pair<long long, long long> decode_solution(std::uint64_t bits, const VariableRegistry& registry) {
    const int lp = registry.split.lp, lq = registry.split.lq;
    long long p = (1LL << lp) | 1LL;
    for (int m = 1; m <= lp - 1; ++m)
        p |= static_cast<long long>((bits >> registry.p_var(m)) & 1ULL) << m;
    long long q = (1LL << lq) | 1LL;
    for (int n = 1; n <= lq - 1; ++n)
        q |= static_cast<long long>((bits >> registry.q_var(n)) & 1ULL) << n;
    return {p, q};
}

std::optional<BitSplit> canonical_split(long long n_value, int w) {
    std::optional<BitSplit> best;
    int best_qubits = 0;
    for (const BitSplit& split : enumerate_bit_splits(n_value)) {
        auto layout = try_block_layout(split, w);
        if (!layout) continue;
        const int tq = layout->total_qubits;
        const int spread = split.lq - split.lp;
        if (!best || std::tuple(tq, spread, split.lp) <
                         std::tuple(best_qubits, best->lq - best->lp, best->lp)) {
            best = split;
            best_qubits = tq;
        }
    }
    return best;
}

Instance encode_instance(long long n_value, const BitSplit& split, int w, bool with_ground) {
    Instance inst;
    inst.n_value = n_value;
    inst.width = w;
    inst.split = split;
    const BlockLayout layout = build_block_layout(split, w);
    auto [poly, registry] = build_cost_function(n_value, split, layout);
    inst.registry = std::move(registry);
    inst.qubo = reduce_to_quadratic(poly, inst.registry);
    inst.ising = to_ising(inst.qubo);
    if (with_ground) inst.ground = brute_force_ground(inst.ising);
    return inst;
}

SizeClass build_size_class(long long lo, long long hi, int qubits, int w) {
    SizeClass cls;
    cls.qubits = qubits;
    cls.width = w;
    long long norm = 0;
    for (long long n = lo | 1LL; n <= hi; n += 2) {
        auto split = canonical_split(n, w);
        if (!split) continue;
        auto layout = try_block_layout(*split, w);
        if (!layout || layout->total_qubits != qubits) continue;
        Instance inst = encode_instance(n, *split, w, qubits <= 24);
        norm = std::max(norm, inst.qubo.max_abs_coefficient());
        cls.instances.push_back(std::move(inst));
    }
    cls.norm_constant = static_cast<double>(norm);
    return cls;
}

std::vector<SizeClass> build_size_classes(long long lo, long long hi, int w, int max_ground_qubits) {
    std::map<int, SizeClass> classes;
    for (long long n = lo | 1LL; n <= hi; n += 2) {
        auto split = canonical_split(n, w);
        if (!split) continue;
        const BlockLayout layout = build_block_layout(*split, w);
        const int tq = layout.total_qubits;
        auto& cls = classes[tq];
        cls.qubits = tq;
        cls.width = w;
        cls.instances.push_back(encode_instance(n, *split, w, tq <= max_ground_qubits));
    }
    std::vector<SizeClass> out;
    out.reserve(classes.size());
    for (auto& [tq, cls] : classes) {
        long long norm = 0;
        for (const Instance& inst : cls.instances)
            norm = std::max(norm, inst.qubo.max_abs_coefficient());
        cls.norm_constant = static_cast<double>(norm);
        out.push_back(std::move(cls));
    }
    return out;
}

}  // namespace qaf
