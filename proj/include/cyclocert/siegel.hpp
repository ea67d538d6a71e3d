// Exact integer kernels and certified small nonzero solutions of A w = 0.
//
// The box-principle bound |w|_inf <= (N M)^{d/(N-d)} is certified on the
// output by exact cross-powered integer comparison; the method (LLL on the
// kernel lattice, exhaustive radius search as fallback) is never trusted.
#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclocert/linalg.hpp"
#include "cyclocert/numeric.hpp"

namespace cyclocert {

struct IntMatrix {
    long rows = 0;
    long cols = 0;
    std::vector<std::vector<Int>> a;

    static IntMatrix zero(long r, long c) {
        IntMatrix m;
        m.rows = r;
        m.cols = c;
        m.a.assign(static_cast<std::size_t>(r), std::vector<Int>(static_cast<std::size_t>(c)));
        return m;
    }

    Int max_abs_entry() const {
        Int m(0);
        for (const auto& row : a)
            for (const auto& v : row)
                if (abs_int(v) > m) m = abs_int(v);
        return m;
    }
};

inline std::vector<Int> matvec(const IntMatrix& A, const std::vector<Int>& w) {
    std::vector<Int> out(static_cast<std::size_t>(A.rows));
    for (long i = 0; i < A.rows; ++i) {
        Int s(0);
        for (long j = 0; j < A.cols; ++j)
            s += A.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

inline bool is_kernel_vector(const IntMatrix& A, const std::vector<Int>& w) {
    const auto r = matvec(A, w);
    return std::all_of(r.begin(), r.end(), [](const Int& v) { return v == 0; });
}

// Basis of the saturated integer kernel ker(A) cap Z^N: Hermite-style row
// reduction of A^T with a unimodular transform U; the U-rows facing the zero
// rows of the reduced matrix are the kernel.  Rows of a unimodular matrix are
// primitive, and the full lattice (not a finite-index sublattice) is what the
// box-principle bound lives on.
inline std::vector<std::vector<Int>> kernel_basis(const IntMatrix& A) {
    const std::size_t N = static_cast<std::size_t>(A.cols);
    const std::size_t d = static_cast<std::size_t>(A.rows);
    std::vector<std::vector<Int>> H(N, std::vector<Int>(d));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < d; ++j) H[i][j] = A.a[j][i];
    std::vector<std::vector<Int>> U(N, std::vector<Int>(N));
    for (std::size_t i = 0; i < N; ++i) U[i][i] = 1;

    std::size_t r = 0;
    for (std::size_t c = 0; c < d && r < N; ++c) {
        while (true) {
            std::size_t piv = N;
            for (std::size_t i = r; i < N; ++i)
                if (H[i][c] != 0 && (piv == N || abs_int(H[i][c]) < abs_int(H[piv][c]))) piv = i;
            if (piv == N) break;
            std::swap(H[piv], H[r]);
            std::swap(U[piv], U[r]);
            bool finished = true;
            for (std::size_t i = r + 1; i < N; ++i) {
                if (H[i][c] == 0) continue;
                const Int q = round_nearest(make_rat(H[i][c], H[r][c]));
                if (q != 0) {
                    for (std::size_t j = 0; j < d; ++j) H[i][j] -= q * H[r][j];
                    for (std::size_t j = 0; j < N; ++j) U[i][j] -= q * U[r][j];
                }
                if (H[i][c] != 0) finished = false;
            }
            if (finished) break;
        }
        if (H[r][c] != 0) ++r;
    }
    std::vector<std::vector<Int>> out;
    for (std::size_t i = r; i < N; ++i) out.push_back(U[i]);
    return out;
}

namespace detail {

inline Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    Rat s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Int dot_int(const std::vector<Int>& a, const std::vector<Int>& b) {
    Int s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// All-integer LLL with delta = 99/100: Gram determinants D and scaled
// Gram-Schmidt coefficients lambda stay integral throughout, so no rational
// canonicalization ever runs on the hot path.
inline void lll_reduce(std::vector<std::vector<Int>>& basis) {
    const std::size_t kdim = basis.size();
    if (kdim < 2) return;
    const std::size_t n = basis[0].size();

    std::vector<Int> D(kdim + 1);
    D[0] = 1;
    std::vector<std::vector<Int>> lam(kdim, std::vector<Int>(kdim));

    auto extend_gso = [&](std::size_t k) {
        for (std::size_t j = 0; j <= k; ++j) {
            Int u = dot_int(basis[k], basis[j]);
            for (std::size_t i = 0; i < j; ++i) u = (D[i + 1] * u - lam[k][i] * lam[j][i]) / D[i];
            if (j < k)
                lam[k][j] = u;
            else {
                if (u <= 0) throw std::logic_error("lll_reduce: dependent or degenerate basis");
                D[k + 1] = u;
            }
        }
    };

    auto red = [&](std::size_t k, std::size_t l) {
        if (2 * abs_int(lam[k][l]) <= D[l + 1]) return;
        const Int q = round_nearest(make_rat(lam[k][l], D[l + 1]));
        for (std::size_t j = 0; j < n; ++j) basis[k][j] -= q * basis[l][j];
        for (std::size_t j = 0; j < l; ++j) lam[k][j] -= q * lam[l][j];
        lam[k][l] -= q * D[l + 1];
    };

    extend_gso(0);
    std::size_t k = 1;
    std::size_t kmax = 0;
    while (k < kdim) {
        if (k > kmax) {
            kmax = k;
            extend_gso(k);
        }
        red(k, k - 1);
        if (100 * (D[k + 1] * D[k - 1] + lam[k][k - 1] * lam[k][k - 1]) < 99 * D[k] * D[k]) {
            std::swap(basis[k], basis[k - 1]);
            for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
            const Int l = lam[k][k - 1];
            const Int B = (D[k - 1] * D[k + 1] + l * l) / D[k];
            for (std::size_t i = k + 1; i <= kmax; ++i) {
                const Int t = lam[i][k];
                lam[i][k] = (D[k + 1] * lam[i][k - 1] - l * t) / D[k];
                lam[i][k - 1] = (B * t + l * lam[i][k]) / D[k + 1];
            }
            D[k] = B;
            k = k > 1 ? k - 1 : 1;
        } else {
            for (std::size_t l = k - 1; l-- > 0;) red(k, l);
            ++k;
        }
    }
}

inline Int inf_norm(const std::vector<Int>& w) {
    Int m(0);
    for (const auto& v : w)
        if (abs_int(v) > m) m = abs_int(v);
    return m;
}

}  // namespace detail

struct SmallSolution {
    std::vector<Int> w;
    Int inf_norm;
    Int bound_ceiling;      // ceil((N max(M,1))^{d/(N-d)})
    bool within_bound = false;
    std::string note;
};

// LLL-reduced basis of the saturated kernel, for callers that need to scan
// several small solutions.
inline std::vector<std::vector<Int>> reduced_kernel(const IntMatrix& A) {
    auto basis = kernel_basis(A);
    detail::lll_reduce(basis);
    return basis;
}

// |w|_inf <= (N M')^{d/(N-d)} checked exactly: |w|^{N-d} <= (N M')^d.
inline bool siegel_bound_holds(const Int& norm, long N, long d, const Int& maxentry) {
    const Int M = maxentry < 1 ? Int(1) : maxentry;
    return ipow(norm, static_cast<unsigned long>(N - d)) <= ipow(Int(N) * M, static_cast<unsigned long>(d));
}

namespace detail {

// Smallest-radius kernel vector by enumerating free coordinates of the
// rational row echelon; pivots follow rationally and must land on integers.
// Returns the optimum within |w|_inf <= limit, or empty.
inline std::vector<Int> exhaustive_min_kernel(const IntMatrix& A, const Int& limit) {
    std::vector<std::vector<Rat>> mat;
    for (const auto& r : A.a) {
        std::vector<Rat> q;
        for (const auto& v : r) q.emplace_back(v);
        mat.push_back(std::move(q));
    }
    const std::size_t width = static_cast<std::size_t>(A.cols);
    std::vector<std::size_t> pivot_cols;
    std::size_t rr = 0;
    for (std::size_t c = 0; c < width && rr < mat.size(); ++c) {
        std::size_t sel = rr;
        while (sel < mat.size() && mat[sel][c] == 0) ++sel;
        if (sel == mat.size()) continue;
        std::swap(mat[sel], mat[rr]);
        for (std::size_t i = 0; i < mat.size(); ++i) {
            if (i == rr || mat[i][c] == 0) continue;
            const Rat f = mat[i][c] / mat[rr][c];
            for (std::size_t j = 0; j < width; ++j) mat[i][j] -= f * mat[rr][j];
        }
        pivot_cols.push_back(c);
        ++rr;
    }
    std::vector<std::size_t> free_cols;
    {
        std::vector<bool> is_pivot(width, false);
        for (auto c : pivot_cols) is_pivot[c] = true;
        for (std::size_t c = 0; c < width; ++c)
            if (!is_pivot[c]) free_cols.push_back(c);
    }
    if (free_cols.empty()) return {};

    for (Int radius(1); radius <= limit; ++radius) {
        std::vector<Int> f(free_cols.size(), -radius);
        while (true) {
            bool on_shell = false;
            for (const auto& v : f)
                if (abs_int(v) == radius) {
                    on_shell = true;
                    break;
                }
            if (on_shell) {
                std::vector<Int> w(width, Int(0));
                for (std::size_t i = 0; i < free_cols.size(); ++i) w[free_cols[i]] = f[i];
                bool ok = true;
                for (std::size_t k = 0; k < pivot_cols.size() && ok; ++k) {
                    Rat s(0);
                    for (auto fc : free_cols) s += mat[k][fc] * Rat(w[fc]);
                    const Rat val = -s / mat[k][pivot_cols[k]];
                    if (val.get_den() != 1 || abs_rat(val) > Rat(radius))
                        ok = false;
                    else
                        w[pivot_cols[k]] = val.get_num();
                }
                if (ok) return w;
            }
            std::size_t pos = 0;
            while (pos < f.size()) {
                if (f[pos] < radius) {
                    ++f[pos];
                    break;
                }
                f[pos] = -radius;
                ++pos;
            }
            if (pos == f.size()) break;
        }
    }
    return {};
}

}  // namespace detail

// Certified small solution of A w = 0 for underdetermined A.
inline SmallSolution siegel_solve(const IntMatrix& A, std::uint64_t seed = 0) {
    if (A.rows >= A.cols) throw std::invalid_argument("siegel_solve: need fewer rows than columns");
    const long N = A.cols;
    const Int M = A.max_abs_entry();
    // effective rank governs the certified exponent
    std::vector<std::vector<Rat>> qr;
    for (const auto& r : A.a) {
        std::vector<Rat> q;
        for (const auto& v : r) q.emplace_back(v);
        qr.push_back(std::move(q));
    }
    const long d = static_cast<long>(A.cols) -
                   static_cast<long>(kernel_basis_rational(qr, static_cast<std::size_t>(A.cols)).size());

    SmallSolution out;
    {
        // bound ceiling: smallest b with b^{N-d} >= (N max(M,1))^{d}
        const Int Me = M < 1 ? Int(1) : M;
        const Int rhs = ipow(Int(N) * Me, static_cast<unsigned long>(d));
        Int lo(1), hi(1);
        while (ipow(hi, static_cast<unsigned long>(N - d)) < rhs) hi *= 2;
        while (lo < hi) {
            const Int mid = (lo + hi) / 2;
            if (ipow(mid, static_cast<unsigned long>(N - d)) >= rhs)
                hi = mid;
            else
                lo = mid + 1;
        }
        out.bound_ceiling = lo;
    }

    if (M == 0) {
        out.w.assign(static_cast<std::size_t>(N), Int(0));
        out.w[0] = 1;
        out.inf_norm = 1;
        out.within_bound = true;
        return out;
    }

    auto basis = kernel_basis(A);
    if (basis.empty()) throw std::logic_error("siegel_solve: trivial kernel despite rows < cols");
    detail::lll_reduce(basis);

    std::vector<Int> best;
    auto consider = [&](const std::vector<Int>& w) {
        if (std::all_of(w.begin(), w.end(), [](const Int& v) { return v == 0; })) return;
        if (best.empty() || detail::inf_norm(w) < detail::inf_norm(best)) best = w;
    };
    for (const auto& b : basis) consider(b);
    // pairwise combinations often shave the sup norm after LLL
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            std::vector<Int> s(basis[i].size()), t(basis[i].size());
            for (std::size_t x = 0; x < s.size(); ++x) {
                s[x] = basis[i][x] + basis[j][x];
                t[x] = basis[i][x] - basis[j][x];
            }
            consider(s);
            consider(t);
        }
    // seeded random small combinations; keeps retries deterministic per seed
    if (seed != 0) {
        SplitMix64 rng(seed);
        for (int trial = 0; trial < 64; ++trial) {
            std::vector<Int> s(basis[0].size(), Int(0));
            for (const auto& b : basis) {
                const long c = rng.range(-1, 1);
                if (c == 0) continue;
                for (std::size_t x = 0; x < s.size(); ++x) s[x] += Int(c) * b[x];
            }
            consider(s);
        }
    }

    if (!best.empty() && siegel_bound_holds(detail::inf_norm(best), N, d, M)) {
        out.w = best;
        out.inf_norm = detail::inf_norm(best);
        out.within_bound = true;
        return out;
    }
    if (N <= 12) {
        const auto w = detail::exhaustive_min_kernel(A, out.bound_ceiling);
        if (!w.empty()) {
            out.w = w;
            out.inf_norm = detail::inf_norm(w);
            out.within_bound = siegel_bound_holds(out.inf_norm, N, d, M);
            return out;
        }
    }
    if (best.empty()) throw std::logic_error("siegel_solve: no nonzero kernel vector found");
    out.w = best;
    out.inf_norm = detail::inf_norm(best);
    out.within_bound = false;
    out.note = "reduction missed the certified bound";
    return out;
}

// The max-entry bound |w|_1 := max_i |w_i| < N * M used downstream.
inline bool l1_bound_check(const IntMatrix& A, const std::vector<Int>& w) {
    return detail::inf_norm(w) < Int(A.cols) * A.max_abs_entry();
}

}  // namespace cyclocert
