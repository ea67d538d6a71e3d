// Certified rational interval arithmetic for archimedean (embedding) bounds.
// Every bound proved through this header is an exact rational statement; no
// floating point is involved anywhere.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cyclocert/numeric.hpp"

namespace cyclocert {

struct RatInterval {
    Rat lo;
    Rat hi;

    RatInterval() : lo(0), hi(0) {}
    RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw std::invalid_argument("RatInterval: lo > hi");
    }
    static RatInterval point(const Rat& v) { return RatInterval(v, v); }

    RatInterval operator+(const RatInterval& o) const { return RatInterval(lo + o.lo, hi + o.hi); }
    RatInterval operator-(const RatInterval& o) const { return RatInterval(lo - o.hi, hi - o.lo); }
    RatInterval operator-() const { return RatInterval(-hi, -lo); }

    RatInterval operator*(const RatInterval& o) const {
        const Rat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
        Rat mn = a, mx = a;
        for (const Rat* v : {&b, &c, &d}) {
            if (*v < mn) mn = *v;
            if (*v > mx) mx = *v;
        }
        return RatInterval(mn, mx);
    }

    RatInterval scaled(const Rat& s) const {
        return s >= 0 ? RatInterval(lo * s, hi * s) : RatInterval(hi * s, lo * s);
    }

    RatInterval square() const {
        if (lo >= 0) return RatInterval(lo * lo, hi * hi);
        if (hi <= 0) return RatInterval(hi * hi, lo * lo);
        Rat m = -lo > hi ? lo * lo : hi * hi;
        return RatInterval(Rat(0), m);
    }

    // Widen endpoints outward onto the grid with denominator 2^bits; keeps the
    // rationals short so long interval computations stay cheap.
    RatInterval rounded(unsigned bits) const {
        const Int scale = ipow(Int(2), bits);
        Int nlo, nhi;
        mpz_fdiv_q(nlo.get_mpz_t(), Int(lo.get_num() * scale).get_mpz_t(), lo.get_den().get_mpz_t());
        mpz_cdiv_q(nhi.get_mpz_t(), Int(hi.get_num() * scale).get_mpz_t(), hi.get_den().get_mpz_t());
        return RatInterval(make_rat(nlo, scale), make_rat(nhi, scale));
    }
};

// pi to 50 decimal digits, bracketed.
inline RatInterval pi_interval() {
    static const Int den = ipow(Int(10), 50);
    static const Int lo("314159265358979323846264338327950288419716939937510");
    return RatInterval(make_rat(lo, den), make_rat(lo + 1, den));
}

namespace detail {

// cos/sin of a tight rational interval via Taylor sums with an explicit
// remainder term.  Valid for |x| < 8 with the term count used here.
inline RatInterval cos_interval(const RatInterval& x, unsigned terms = 32) {
    const Rat a = x.lo;
    Rat sum(1), term(1);
    const Rat a2 = a * a;
    for (unsigned k = 1; k <= terms; ++k) {
        term *= a2;
        term /= Int(2 * k - 1) * Int(2 * k);
        sum += (k % 2 == 0) ? term : -term;
    }
    // |R| <= |a|^(2(terms+1)) / (2(terms+1))! * 1/(1 - a^2/((2t+3)(2t+4)))
    Rat rem = term * a2 / (Int(2 * terms + 1) * Int(2 * terms + 2));
    rem = abs_rat(rem) * 2;  // generous slack covering the geometric tail
    const Rat width = x.hi - x.lo;
    return RatInterval(sum - rem - width, sum + rem + width);
}

inline RatInterval sin_interval(const RatInterval& x, unsigned terms = 32) {
    const Rat a = x.lo;
    Rat sum = a, term = a;
    const Rat a2 = a * a;
    for (unsigned k = 1; k <= terms; ++k) {
        term *= a2;
        term /= Int(2 * k) * Int(2 * k + 1);
        sum += (k % 2 == 0) ? term : -term;
    }
    Rat rem = term * a2 / (Int(2 * terms + 2) * Int(2 * terms + 3));
    rem = abs_rat(rem) * 2;
    const Rat width = x.hi - x.lo;
    return RatInterval(sum - rem - width, sum + rem + width);
}

}  // namespace detail

// Certified brackets for the primitive p-th roots of unity: entry j holds
// cos(2*pi*j/p) and sin(2*pi*j/p).
class RootTable {
public:
    RootTable() : n_(0) {}

    explicit RootTable(long n) : n_(n) {
        if (n < 1) throw std::invalid_argument("RootTable: n < 1");
        cos_.resize(static_cast<std::size_t>(n));
        sin_.resize(static_cast<std::size_t>(n));
        const RatInterval two_pi = pi_interval().scaled(Rat(2));
        for (long j = 0; j < n; ++j) {
            const RatInterval angle = two_pi.scaled(make_rat(Int(j), Int(n)));
            cos_[static_cast<std::size_t>(j)] = detail::cos_interval(angle).rounded(192);
            sin_[static_cast<std::size_t>(j)] = detail::sin_interval(angle).rounded(192);
        }
    }

    long modulus() const { return n_; }
    const RatInterval& cos(long j) const { return cos_[static_cast<std::size_t>(((j % n_) + n_) % n_)]; }
    const RatInterval& sin(long j) const { return sin_[static_cast<std::size_t>(((j % n_) + n_) % n_)]; }

    // |sum_k w_k zeta^(k*c)|^2 bracketed, for coefficients w_1..w_{p-1}.
    RatInterval abs_square(const std::vector<Rat>& coeffs, long c) const {
        RatInterval re, im;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            const long k = static_cast<long>(i) + 1;
            re = re + cos(k * c).scaled(coeffs[i]);
            im = im + sin(k * c).scaled(coeffs[i]);
        }
        return re.square() + im.square();
    }

private:
    long n_;
    std::vector<RatInterval> cos_;
    std::vector<RatInterval> sin_;
};

// rational u with u*u >= r (r >= 0), tight to ~2^-bits
inline Rat sqrt_upper(const Rat& r, unsigned bits = 96) {
    if (r < 0) throw std::invalid_argument("sqrt_upper: negative");
    const Int scale = ipow(Int(2), bits);
    const Int s = isqrt_floor(r.get_num() * scale * scale / r.get_den()) + 1;
    return make_rat(s, scale);
}

// rational l >= 0 with l*l <= r
inline Rat sqrt_lower(const Rat& r, unsigned bits = 96) {
    if (r < 0) throw std::invalid_argument("sqrt_lower: negative");
    const Int scale = ipow(Int(2), bits);
    Int num;
    mpz_fdiv_q(num.get_mpz_t(), Int(r.get_num() * scale * scale).get_mpz_t(), r.get_den().get_mpz_t());
    const Int s = isqrt_floor(num);
    return make_rat(s, scale);
}

}  // namespace cyclocert
