// Truncated arithmetic in Z_p[zeta] at a fixed precision p^K.
#pragma once

#include <stdexcept>
#include <vector>

#include "cyclocert/cyclotomic.hpp"
#include "cyclocert/numeric.hpp"

namespace cyclocert {

class PadicCyc {
public:
    PadicCyc() : p_(0), K_(0) {}

    PadicCyc(long p, long K)
        : p_(p), K_(K), pK_(ipow(Int(p), static_cast<unsigned long>(K))), c_(static_cast<std::size_t>(p - 1)) {
        if (K < 1) throw std::invalid_argument("PadicCyc: K >= 1 required");
    }

    static PadicCyc one(long p, long K) {
        PadicCyc x(p, K);
        for (auto& w : x.c_) w = x.pK_ - 1;  // 1 = -(zeta + ... + zeta^(p-1))
        return x;
    }

    long prime() const { return p_; }
    long precision() const { return K_; }
    const Int& modulus() const { return pK_; }
    const std::vector<Int>& coeffs() const { return c_; }
    const Int& coeff(long c) const { return c_[static_cast<std::size_t>(c - 1)]; }
    Int& coeff_ref(long c) { return c_[static_cast<std::size_t>(c - 1)]; }

    bool operator==(const PadicCyc& o) const { return p_ == o.p_ && K_ == o.K_ && c_ == o.c_; }
    bool operator!=(const PadicCyc& o) const { return !(*this == o); }

    PadicCyc operator+(const PadicCyc& o) const {
        check(o);
        PadicCyc r(p_, K_);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = mod_reduce(c_[i] + o.c_[i], pK_);
        return r;
    }

    PadicCyc operator-(const PadicCyc& o) const {
        check(o);
        PadicCyc r(p_, K_);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = mod_reduce(c_[i] - o.c_[i], pK_);
        return r;
    }

    PadicCyc operator*(const PadicCyc& o) const {
        check(o);
        std::vector<Int> t(static_cast<std::size_t>(p_));
        for (long a = 1; a < p_; ++a) {
            if (coeff(a) == 0) continue;
            for (long b = 1; b < p_; ++b) {
                if (o.coeff(b) == 0) continue;
                t[static_cast<std::size_t>((a + b) % p_)] += coeff(a) * o.coeff(b);
            }
        }
        PadicCyc r(p_, K_);
        for (long c = 1; c < p_; ++c) r.coeff_ref(c) = mod_reduce(t[static_cast<std::size_t>(c)] - t[0], pK_);
        return r;
    }

    PadicCyc galois(long c) const {
        const long cr = ((c % p_) + p_) % p_;
        if (cr == 0) throw std::invalid_argument("galois: c must be a unit mod p");
        PadicCyc r(p_, K_);
        for (long k = 1; k < p_; ++k)
            r.coeff_ref(static_cast<long>((static_cast<long long>(cr) * k) % p_)) = coeff(k);
        return r;
    }

    long augmentation_mod_p() const {
        Int s(0);
        for (const auto& w : c_) s += w;
        return static_cast<long>(mod_reduce(s, Int(p_)).get_si());
    }

    bool is_unit() const { return augmentation_mod_p() != 0; }

    // Newton iteration; the initial error lies in (lambda) and is nilpotent
    // modulo p^K, so log2((p-1)K)+1 doubling steps suffice.
    PadicCyc inverse() const {
        const long a = augmentation_mod_p();
        if (a == 0) throw std::invalid_argument("inverse: not a unit (lambda-valuation > 0)");
        PadicCyc y = one(p_, K_) * mod_inverse(Int(a), pK_);
        const PadicCyc two = one(p_, K_) + one(p_, K_);
        long steps = 1;
        while ((1L << steps) < (p_ - 1) * K_) ++steps;
        for (long i = 0; i <= steps; ++i) y = y * (two - *this * y);
        return y;
    }

    PadicCyc operator*(const Int& s) const {
        PadicCyc r(p_, K_);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = mod_reduce(c_[i] * s, pK_);
        return r;
    }

    PadicCyc pow(const Int& e) const {
        if (e < 0) return inverse().pow(-e);
        PadicCyc base = *this;
        PadicCyc acc = one(p_, K_);
        Int k = e;
        while (k > 0) {
            if (mpz_odd_p(k.get_mpz_t())) acc = acc * base;
            base = base * base;
            k >>= 1;
        }
        return acc;
    }

private:
    void check(const PadicCyc& o) const {
        if (p_ != o.p_ || K_ != o.K_) throw std::invalid_argument("PadicCyc: mixed precision/prime");
    }

    long p_;
    long K_;
    Int pK_;
    std::vector<Int> c_;
};

// Reduction Q(zeta) -> Z_p[zeta]/p^K; denominators must be coprime to p.
inline PadicCyc reduce_padic(const CycNum& x, long K) {
    const long p = x.prime();
    PadicCyc r(p, K);
    const Int& pK = r.modulus();
    for (long c = 1; c < p; ++c) {
        const Rat& w = x.coeff(c);
        if (w.get_den() % p == 0)
            throw std::invalid_argument("reduce_padic: denominator divisible by p");
        r.coeff_ref(c) = mod_reduce(mod_reduce(w.get_num(), pK) * mod_inverse(mod_reduce(w.get_den(), pK), pK), pK);
    }
    return r;
}

}  // namespace cyclocert
