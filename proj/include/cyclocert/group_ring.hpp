// Integer group ring Z[G] for G = Gal(Q(zeta_p)/Q): Stickelberger element,
// Fueter basis and ideal membership, orthogonal idempotents mod p, and the
// multiplicative action on cyclotomic numbers.
#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclocert/cyclotomic.hpp"
#include "cyclocert/numeric.hpp"
#include "cyclocert/padic.hpp"

namespace cyclocert {

// Finitely supported integer sum over sigma_c, c in 1..p-1.
class GroupRingElem {
public:
    GroupRingElem() : p_(0) {}
    explicit GroupRingElem(long p) : p_(p), n_(static_cast<std::size_t>(p - 1)) {}

    static GroupRingElem sigma(long p, long c) {
        GroupRingElem t(p);
        t.coeff_ref(((c % p) + p) % p) = 1;
        return t;
    }

    long prime() const { return p_; }
    const Int& coeff(long c) const { return n_[static_cast<std::size_t>(c - 1)]; }
    Int& coeff_ref(long c) {
        if (c % p_ == 0) throw std::invalid_argument("GroupRingElem: index 0 mod p");
        return n_[static_cast<std::size_t>(c - 1)];
    }
    const std::vector<Int>& coeffs() const { return n_; }

    bool is_zero() const {
        return std::all_of(n_.begin(), n_.end(), [](const Int& v) { return v == 0; });
    }

    GroupRingElem operator+(const GroupRingElem& o) const {
        check(o);
        GroupRingElem r(p_);
        for (std::size_t i = 0; i < n_.size(); ++i) r.n_[i] = n_[i] + o.n_[i];
        return r;
    }

    GroupRingElem operator-(const GroupRingElem& o) const {
        check(o);
        GroupRingElem r(p_);
        for (std::size_t i = 0; i < n_.size(); ++i) r.n_[i] = n_[i] - o.n_[i];
        return r;
    }

    GroupRingElem operator-() const {
        GroupRingElem r(p_);
        for (std::size_t i = 0; i < n_.size(); ++i) r.n_[i] = -n_[i];
        return r;
    }

    GroupRingElem operator*(const Int& s) const {
        GroupRingElem r(p_);
        for (std::size_t i = 0; i < n_.size(); ++i) r.n_[i] = n_[i] * s;
        return r;
    }

    // group-ring convolution: sigma_a * sigma_b = sigma_{ab mod p}
    GroupRingElem operator*(const GroupRingElem& o) const {
        check(o);
        GroupRingElem r(p_);
        for (long a = 1; a < p_; ++a) {
            if (coeff(a) == 0) continue;
            for (long b = 1; b < p_; ++b) {
                if (o.coeff(b) == 0) continue;
                r.coeff_ref(static_cast<long>((static_cast<long long>(a) * b) % p_)) += coeff(a) * o.coeff(b);
            }
        }
        return r;
    }

    bool operator==(const GroupRingElem& o) const { return p_ == o.p_ && n_ == o.n_; }
    bool operator!=(const GroupRingElem& o) const { return !(*this == o); }
    bool operator<(const GroupRingElem& o) const { return n_ < o.n_; }

    // left translation by sigma_d: coefficient at c comes from d^-1 c
    GroupRingElem translate(long d, const PrimeContext& ctx) const {
        GroupRingElem r(p_);
        const long dinv = ctx.inv_mod(d);
        for (long c = 1; c < p_; ++c)
            r.coeff_ref(c) = coeff(static_cast<long>((static_cast<long long>(dinv) * c) % p_));
        return r;
    }

    GroupRingElem conj_applied(const PrimeContext& ctx) const { return translate(p_ - 1, ctx); }

    Int augmentation() const {
        Int s(0);
        for (const auto& v : n_) s += v;
        return s;
    }

    GroupRingElem reduced_mod(const Int& m) const {
        GroupRingElem r(p_);
        for (std::size_t i = 0; i < n_.size(); ++i) r.n_[i] = mod_reduce(n_[i], m);
        return r;
    }

    // "n_1,n_2,...,n_{p-1}" (coefficient of sigma_c at position c)
    std::string to_text() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < n_.size(); ++i) {
            if (i) os << ',';
            os << n_[i].get_str();
        }
        return os.str();
    }

    static GroupRingElem from_text(long p, const std::string& s) {
        GroupRingElem r(p);
        std::istringstream is(s);
        std::string tok;
        long c = 1;
        while (std::getline(is, tok, ',')) {
            if (c >= p) throw std::invalid_argument("GroupRingElem: too many coefficients");
            r.coeff_ref(c++) = Int(tok);
        }
        if (c != p) throw std::invalid_argument("GroupRingElem: expected p-1 coefficients");
        return r;
    }

private:
    void check(const GroupRingElem& o) const {
        if (p_ != o.p_) throw std::invalid_argument("GroupRingElem: mixed primes");
    }

    long p_;
    std::vector<Int> n_;
};

// p * theta = sum_c c sigma_c^{-1}; the coefficient of sigma_d is d^{-1} mod p.
inline GroupRingElem p_stickelberger(const PrimeContext& ctx) {
    GroupRingElem t(ctx.p);
    for (long d = 1; d < ctx.p; ++d) t.coeff_ref(d) = ctx.inv_mod(d);
    return t;
}

// Fueter element psi_n = (1 + sigma_n - sigma_{n+1}) theta, 1 <= n <= q.
// Closed form: the coefficient of sigma_b^{-1} is floor(b(n+1)/p) - floor(bn/p),
// which lies in {0,1} and pairs to 1 with the p-b coefficient.
inline GroupRingElem fueter(const PrimeContext& ctx, long n) {
    if (n < 1 || n > ctx.q) throw std::invalid_argument("fueter: n out of range 1..q");
    GroupRingElem r(ctx.p);
    for (long b = 1; b < ctx.p; ++b) {
        const long v = static_cast<long>((static_cast<long long>(b) * (n + 1)) / ctx.p -
                                         (static_cast<long long>(b) * n) / ctx.p);
        if (v != 0) r.coeff_ref(ctx.inv_mod(b)) = v;
    }
    return r;
}

// Z-basis of the Stickelberger ideal I = theta Z[G] cap Z[G]: the q Fueter
// elements together with their conjugate partner j*psi_1 (rank of I is q+1).
inline std::vector<GroupRingElem> fueter_basis(const PrimeContext& ctx) {
    std::vector<GroupRingElem> basis;
    basis.reserve(static_cast<std::size_t>(ctx.q + 1));
    for (long n = 1; n <= ctx.q; ++n) basis.push_back(fueter(ctx, n));
    basis.push_back(fueter(ctx, 1).conj_applied(ctx));
    return basis;
}

// The constant value of c -> n_c + n_{p-c}.  Throws with the offending indices
// when the sum is not constant.
inline Int relative_weight(const GroupRingElem& theta) {
    const long p = theta.prime();
    const Int w = theta.coeff(1) + theta.coeff(p - 1);
    std::vector<long> offending;
    for (long c = 2; c < p; ++c)
        if (theta.coeff(c) + theta.coeff(p - c) != w) offending.push_back(c);
    if (!offending.empty()) {
        std::ostringstream os;
        os << "relative_weight: n_c + n_{p-c} not constant at c in {";
        for (std::size_t i = 0; i < offending.size(); ++i) os << (i ? "," : "") << offending[i];
        os << "}";
        throw std::invalid_argument(os.str());
    }
    return w;
}

enum class MembershipStatus { InIdeal, NotInSpan, NonIntegral };

struct FueterDecomposition {
    std::vector<Int> nu;  // q+1 coordinates; the last one is the j*psi_1 coordinate
};

struct MembershipResult {
    MembershipStatus status = MembershipStatus::NotInSpan;
    std::vector<Rat> rational_coords;  // populated when the rational solve succeeds
    std::optional<FueterDecomposition> decomposition;
    std::string detail;

    bool in_ideal() const { return status == MembershipStatus::InIdeal; }
};

namespace detail {

// Exact Gaussian elimination for A x = b with independent columns.
// Returns nullopt when inconsistent.
inline std::optional<std::vector<Rat>> solve_exact(std::vector<std::vector<Rat>> A, std::vector<Rat> b) {
    const std::size_t rows = A.size();
    const std::size_t cols = rows ? A[0].size() : 0;
    std::vector<std::size_t> pivot_row(cols);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = r;
        while (sel < rows && A[sel][c] == 0) ++sel;
        if (sel == rows) throw std::logic_error("solve_exact: dependent columns");
        std::swap(A[sel], A[r]);
        std::swap(b[sel], b[r]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c] == 0) continue;
            const Rat f = A[i][c] / A[r][c];
            for (std::size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
            b[i] -= f * b[r];
        }
        pivot_row[c] = r;
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<Rat> x(cols);
    for (std::size_t c = 0; c < cols; ++c) x[c] = b[pivot_row[c]] / A[pivot_row[c]][c];
    return x;
}

}  // namespace detail

// Membership in I, reported as coordinates over the Fueter basis.
inline MembershipResult stickelberger_member(const PrimeContext& ctx, const GroupRingElem& theta) {
    const auto basis = fueter_basis(ctx);
    const std::size_t rows = static_cast<std::size_t>(ctx.p - 1);
    const std::size_t cols = basis.size();
    std::vector<std::vector<Rat>> A(rows, std::vector<Rat>(cols));
    std::vector<Rat> b(rows);
    for (long c = 1; c < ctx.p; ++c) {
        for (std::size_t j = 0; j < cols; ++j) A[static_cast<std::size_t>(c - 1)][j] = Rat(basis[j].coeff(c));
        b[static_cast<std::size_t>(c - 1)] = Rat(theta.coeff(c));
    }
    MembershipResult res;
    const auto sol = detail::solve_exact(std::move(A), std::move(b));
    if (!sol) {
        res.status = MembershipStatus::NotInSpan;
        res.detail = "no rational solution against the Fueter basis";
        return res;
    }
    res.rational_coords = *sol;
    for (const auto& v : *sol) {
        if (v.get_den() != 1) {
            res.status = MembershipStatus::NonIntegral;
            res.detail = "rational but non-integral coordinates";
            return res;
        }
    }
    FueterDecomposition d;
    for (const auto& v : *sol) d.nu.push_back(v.get_num());
    res.status = MembershipStatus::InIdeal;
    res.decomposition = std::move(d);
    return res;
}

struct IdempotentModP {
    long k = 0;
    std::vector<Int> coeffs;  // residues mod p, coefficient of sigma_c at c-1

    GroupRingElem as_elem(long p) const {
        GroupRingElem e(p);
        for (long c = 1; c < p; ++c) e.coeff_ref(c) = coeffs[static_cast<std::size_t>(c - 1)];
        return e;
    }
};

// e_k = (p-1)^{-1} sum_a a^k sigma_a^{-1} mod p, with the Teichmueller
// character taken mod p (omega(sigma_a) = a).
inline IdempotentModP idempotent(const PrimeContext& ctx, long k) {
    if (k < 0 || k > ctx.p - 2) throw std::invalid_argument("idempotent: k out of range 0..p-2");
    IdempotentModP e;
    e.k = k;
    e.coeffs.resize(static_cast<std::size_t>(ctx.p - 1));
    const Int pm(ctx.p);
    const Int scale = pm - 1;  // (p-1)^{-1} = p-1 mod p
    for (long c = 1; c < ctx.p; ++c) {
        const Int a(ctx.inv_mod(c));  // sigma_a^{-1} = sigma_c with a = c^{-1}
        e.coeffs[static_cast<std::size_t>(c - 1)] = mod_reduce(scale * mod_pow(a, Int(k), pm), pm);
    }
    return e;
}

// Character value s_k(theta) = sum_c n_c c^k mod p.  e_k theta = s_k(theta) e_k,
// so the tuple over k determines the class of theta in F_p[G].
inline Int character_value(const GroupRingElem& theta, long k) {
    const long p = theta.prime();
    Int s(0);
    for (long c = 1; c < p; ++c) s += theta.coeff(c) * mod_pow(Int(c), Int(k), Int(p));
    return mod_reduce(s, Int(p));
}

// act(theta, x) = prod_c sigma_c(x)^{n_c} at precision p^K.  Negative
// exponents require x to be a unit mod lambda.
inline PadicCyc act(const GroupRingElem& theta, const CycNum& x, long K) {
    const long p = theta.prime();
    if (x.prime() != p) throw std::invalid_argument("act: mixed primes");
    const PadicCyc base = reduce_padic(x, K);
    PadicCyc acc = PadicCyc::one(p, K);
    for (long c = 1; c < p; ++c) {
        const Int& e = theta.coeff(c);
        if (e == 0) continue;
        if (e < 0 && !base.is_unit())
            throw std::invalid_argument("act: negative exponent on a non-invertible base");
        acc = acc * base.galois(c).pow(e);
    }
    return acc;
}

// Lexicographically smallest translate; identifies the G-orbit.
inline GroupRingElem canonical_orbit_form(const PrimeContext& ctx, const GroupRingElem& theta) {
    GroupRingElem best = theta;
    for (long d = 2; d < ctx.p; ++d) {
        GroupRingElem t = theta.translate(d, ctx);
        if (t < best) best = t;
    }
    return best;
}

inline std::vector<GroupRingElem> orbit(const PrimeContext& ctx, const GroupRingElem& theta) {
    std::vector<GroupRingElem> out;
    for (long d = 1; d < ctx.p; ++d) {
        GroupRingElem t = theta.translate(d, ctx);
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
    }
    return out;
}

}  // namespace cyclocert
