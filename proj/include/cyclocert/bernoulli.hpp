// Generalized Bernoulli residues mod p, the irregularity index, and an
// independent classical-recurrence oracle over exact rationals.
//
// Index convention: the reported irregular indices are the odd k in 1..p-2
// with B_{1,omega^k} = 0 mod p, equivalently p | B_{k+1}.  The idempotent
// component that dies in the minus part sits at p-1-k.
#pragma once

#include <stdexcept>
#include <vector>

#include "cyclocert/cyclotomic.hpp"
#include "cyclocert/numeric.hpp"

namespace cyclocert {

struct BernoulliChar {
    bool integral = true;  // false only for omega^k = omega^{-1} (k = p-2)
    Int residue;           // residue mod p when integral

    bool is_zero() const { return integral && residue == 0; }
};

// B_{1,omega^k} mod p computed from the character sum sum_a a*omega(a)^k taken
// mod p^2, with the Teichmueller lift omega(a) = a^p mod p^2.
inline BernoulliChar bernoulli_char(const PrimeContext& ctx, long k) {
    if (k < 1 || k > ctx.p - 2 || k % 2 == 0)
        throw std::invalid_argument("bernoulli_char: k must be odd in 1..p-2");
    const Int p(ctx.p);
    const Int p2 = p * p;
    Int sum(0);
    for (long a = 1; a < ctx.p; ++a) {
        const Int w = mod_pow(Int(a), p, p2);  // omega(a) mod p^2
        sum += Int(a) * mod_pow(w, Int(k), p2);
    }
    sum = mod_reduce(sum, p2);
    BernoulliChar out;
    if (sum % p != 0) {
        // character sum not divisible by p: B_{1,omega^{-1}} has a pole
        out.integral = false;
        out.residue = 0;
        return out;
    }
    out.residue = mod_reduce(sum / p, p);
    return out;
}

struct IrregularityReport {
    long p = 0;
    long i_p = 0;                    // number of irregular odd indices
    std::vector<long> irregular_ks;  // odd k with B_{1,omega^k} = 0 mod p
    std::vector<long> n_list;        // the complementary odd indices
    long D = 0;                      // (p-1)/2 - i_p
};

inline IrregularityReport irregularity_index(const PrimeContext& ctx) {
    IrregularityReport rep;
    rep.p = ctx.p;
    for (long k = 1; k <= ctx.p - 2; k += 2) {
        if (bernoulli_char(ctx, k).is_zero())
            rep.irregular_ks.push_back(k);
        else
            rep.n_list.push_back(k);
    }
    rep.i_p = static_cast<long>(rep.irregular_ks.size());
    rep.D = ctx.q - rep.i_p;
    return rep;
}

// Exact classical Bernoulli numbers B_0..B_max via the defining recurrence
// sum_{j<=m} C(m+1,j) B_j = 0.
inline std::vector<Rat> bernoulli_numbers(unsigned long max_m) {
    std::vector<Rat> B(max_m + 1);
    B[0] = 1;
    for (unsigned long m = 1; m <= max_m; ++m) {
        Rat s(0);
        for (unsigned long j = 0; j < m; ++j) s += Rat(binomial(m + 1, j)) * B[j];
        B[m] = -s / Rat(binomial(m + 1, m));
    }
    return B;
}

inline constexpr long kBernoulliOracleCeiling = 2000;

// Independent oracle: odd k in 1..p-2 with p | B_{k+1}, read off the exact
// rational Bernoulli numbers.  Von Staudt-Clausen guarantees p never divides
// the denominator for the even indices k+1 <= p-3; the guard still checks.
inline std::vector<long> bernoulli_oracle(long p, const std::vector<Rat>* table = nullptr) {
    if (p > kBernoulliOracleCeiling) throw std::invalid_argument("bernoulli_oracle: ceiling exceeded");
    std::vector<Rat> local;
    const std::vector<Rat>* B = table;
    if (!B) {
        local = bernoulli_numbers(static_cast<unsigned long>(p - 1));
        B = &local;
    }
    std::vector<long> out;
    for (long k = 1; k <= p - 2; k += 2) {
        const Rat& b = (*B)[static_cast<unsigned long>(k + 1)];
        if (b.get_den() % p == 0) continue;  // k = p-2 pairs with B_{p-1}: p in the denominator
        if (mod_reduce(b.get_num(), Int(p)) == 0) out.push_back(k);
    }
    return out;
}

}  // namespace cyclocert
