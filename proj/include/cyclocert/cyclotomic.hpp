// Exact arithmetic in Q(zeta_p) over the basis {zeta, zeta^2, ..., zeta^(p-1)}.
//
// An element is integral (lies in Z[zeta]) exactly when all of its basis
// coefficients are integers; the basis is unimodular over the power basis.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclocert/numeric.hpp"

namespace cyclocert {

struct PrimeContext {
    long p;  // odd prime
    long q;  // (p-1)/2
    long g;  // fixed generator of (Z/pZ)^x, sigma = sigma_g

    static PrimeContext make(long p) {
        if (p < 3 || p >= (1L << 20) || !is_prime(Int(p)) || p % 2 == 0)
            throw std::invalid_argument("PrimeContext: p must be an odd prime below 2^20");
        return PrimeContext{p, (p - 1) / 2, primitive_root(p)};
    }

    long inv_mod(long c) const {
        return static_cast<long>(mod_inverse(Int(((c % p) + p) % p), Int(p)).get_si());
    }
};

class CycNum {
public:
    CycNum() : p_(0) {}

    explicit CycNum(long p) : p_(p), c_(static_cast<std::size_t>(p - 1)) {}

    static CycNum zero(long p) { return CycNum(p); }

    static CycNum from_rational(long p, const Rat& r) {
        CycNum x(p);
        for (auto& w : x.c_) w = -r;  // 1 = -(zeta + ... + zeta^(p-1))
        return x;
    }

    // zeta^k for any integer k; k = 0 mod p falls back to the rational 1.
    static CycNum zeta_pow(long p, long k) {
        const long r = ((k % p) + p) % p;
        if (r == 0) return from_rational(p, 1);
        CycNum x(p);
        x.coeff_ref(r) = 1;
        return x;
    }

    static CycNum from_coeffs(long p, std::vector<Rat> coeffs) {
        if (static_cast<long>(coeffs.size()) != p - 1)
            throw std::invalid_argument("CycNum: coefficient count must be p-1");
        CycNum x(p);
        x.c_ = std::move(coeffs);
        return x;
    }

    long prime() const { return p_; }
    const std::vector<Rat>& coeffs() const { return c_; }
    const Rat& coeff(long c) const { return c_[static_cast<std::size_t>(c - 1)]; }
    Rat& coeff_ref(long c) { return c_[static_cast<std::size_t>(c - 1)]; }

    bool is_zero() const {
        for (const auto& w : c_)
            if (w != 0) return false;
        return true;
    }

    bool is_integral() const {
        for (const auto& w : c_)
            if (w.get_den() != 1) return false;
        return true;
    }

    // x is rational iff all coefficients agree; the value is then -w.
    std::optional<Rat> rational_value() const {
        for (const auto& w : c_)
            if (w != c_[0]) return std::nullopt;
        return Rat(-c_[0]);
    }

    CycNum operator+(const CycNum& o) const {
        check(o);
        CycNum r(p_);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
        return r;
    }

    CycNum operator-(const CycNum& o) const {
        check(o);
        CycNum r(p_);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] - o.c_[i];
        return r;
    }

    CycNum operator-() const {
        CycNum r(p_);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = -c_[i];
        return r;
    }

    CycNum operator*(const CycNum& o) const {
        check(o);
        // accumulate on exponents 0..p-1, then eliminate zeta^0 = -sum zeta^c
        std::vector<Rat> t(static_cast<std::size_t>(p_));
        for (long a = 1; a < p_; ++a) {
            const Rat& wa = coeff(a);
            if (wa == 0) continue;
            for (long b = 1; b < p_; ++b) {
                const Rat& wb = o.coeff(b);
                if (wb == 0) continue;
                t[static_cast<std::size_t>((a + b) % p_)] += wa * wb;
            }
        }
        CycNum r(p_);
        for (long c = 1; c < p_; ++c) r.coeff_ref(c) = t[static_cast<std::size_t>(c)] - t[0];
        return r;
    }

    CycNum operator*(const Rat& s) const {
        CycNum r(p_);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] * s;
        return r;
    }

    bool operator==(const CycNum& o) const { return p_ == o.p_ && c_ == o.c_; }
    bool operator!=(const CycNum& o) const { return !(*this == o); }

    // sigma_c: zeta -> zeta^c
    CycNum galois(long c) const {
        const long cr = ((c % p_) + p_) % p_;
        if (cr == 0) throw std::invalid_argument("galois: c must be a unit mod p");
        CycNum r(p_);
        for (long k = 1; k < p_; ++k) {
            long idx = static_cast<long>((static_cast<long long>(cr) * k) % p_);
            r.coeff_ref(idx) = coeff(k);
        }
        return r;
    }

    CycNum conj() const { return galois(p_ - 1); }

    // Tr(zeta^c) = -1 for every c in 1..p-1
    Rat trace() const {
        Rat s(0);
        for (const auto& w : c_) s += w;
        return -s;
    }

    // image in the residue field Z[zeta]/(lambda) = F_p (zeta -> 1), lifted to 0..p-1
    long augmentation_mod_p() const {
        Int s(0);
        for (const auto& w : c_) {
            if (w.get_den() % p_ == 0) throw std::invalid_argument("augmentation: denominator divisible by p");
            s += mod_reduce(w.get_num(), Int(p_)) * mod_inverse(mod_reduce(w.get_den(), Int(p_)), Int(p_));
        }
        return static_cast<long>(mod_reduce(s, Int(p_)).get_si());
    }

private:
    void check(const CycNum& o) const {
        if (p_ != o.p_) throw std::invalid_argument("CycNum: mixed primes");
    }

    long p_;
    std::vector<Rat> c_;
};

inline CycNum lambda_elem(long p) {
    return CycNum::from_rational(p, 1) - CycNum::zeta_pow(p, 1);
}

// 1/(1-zeta) = -(1/p) * sum_c c zeta^c
inline CycNum lambda_inverse(long p) {
    CycNum r(p);
    for (long c = 1; c < p; ++c) r.coeff_ref(c) = make_rat(Int(-c), Int(p));
    return r;
}

// mu = p^2/lambda = -p * sum_c c zeta^c, an algebraic integer
inline CycNum mu_elem(long p) {
    CycNum r(p);
    for (long c = 1; c < p; ++c) r.coeff_ref(c) = Rat(Int(-c) * p);
    return r;
}

inline Rat field_norm(const CycNum& x) {
    CycNum prod = x;
    for (long c = 2; c < x.prime(); ++c) prod = prod * x.galois(c);
    const auto v = prod.rational_value();
    if (!v) throw std::logic_error("norm: conjugate product not rational");
    return *v;
}

struct LambdaValuation {
    bool infinite = false;
    long v = 0;

    static LambdaValuation inf() { return LambdaValuation{true, 0}; }
    static LambdaValuation finite(long v) { return LambdaValuation{false, v}; }

    bool operator==(const LambdaValuation&) const = default;
};

// Largest k with lambda^k | x in Z[zeta]; requires x integral.
inline LambdaValuation lambda_valuation(const CycNum& x) {
    if (!x.is_integral()) throw std::invalid_argument("lambda_valuation: nonintegral input");
    if (x.is_zero()) return LambdaValuation::inf();
    const long p = x.prime();
    const CycNum linv = lambda_inverse(p);
    CycNum r = x;
    long v = 0;
    while (r.augmentation_mod_p() == 0) {
        r = r * linv;
        if (!r.is_integral()) throw std::logic_error("lambda_valuation: inexact division");
        ++v;
    }
    return LambdaValuation::finite(v);
}

struct LambdaExpansion {
    std::vector<long> digits;  // values in 0..p-1
    long offset = 0;
    long truncation = 0;
};

// lambda-adic digits of an integral x: x = sum_j digits[j] * lambda^j mod lambda^truncation.
// The digit is the canonical residue of the augmentation.
inline LambdaExpansion lambda_expand(const CycNum& x, long truncation) {
    if (!x.is_integral()) throw std::invalid_argument("lambda_expand: nonintegral input");
    if (truncation < 1) throw std::invalid_argument("lambda_expand: truncation >= 1 required");
    const long p = x.prime();
    const CycNum linv = lambda_inverse(p);
    LambdaExpansion e;
    e.truncation = truncation;
    CycNum r = x;
    for (long j = 0; j < truncation; ++j) {
        const long d = r.augmentation_mod_p();
        e.digits.push_back(d);
        r = (r - CycNum::from_rational(p, d)) * linv;
        if (!r.is_integral()) throw std::logic_error("lambda_expand: inexact division");
    }
    return e;
}

// Reconstruct sum digits[j]*lambda^(offset+j) exactly.
inline CycNum lambda_reconstruct(long p, const LambdaExpansion& e) {
    const CycNum lam = lambda_elem(p);
    CycNum pow = CycNum::from_rational(p, 1);
    for (long j = 0; j < e.offset; ++j) pow = pow * lam;
    CycNum acc = CycNum::zero(p);
    for (long d : e.digits) {
        acc = acc + pow * Rat(d);
        pow = pow * lam;
    }
    return acc;
}

}  // namespace cyclocert
