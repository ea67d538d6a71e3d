// Coordinate streams of binomial series, horizontal row vectors over orbit
// families, exact incremental rank profiles with jump sets, and the
// independence verification they support.
#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclocert/bernoulli.hpp"
#include "cyclocert/group_ring.hpp"
#include "cyclocert/series.hpp"

namespace cyclocert {

// coordinate map: w = sum_c w_c zeta^c -> (w_c), inverse of kappa_inv
inline std::vector<Rat> kappa(const CycNum& x) { return x.coeffs(); }

inline CycNum kappa_inv(long p, const std::vector<Rat>& coords) {
    return CycNum::from_coeffs(p, coords);
}

// u_n^{(c)}(theta): coordinates of a_n(theta), one stream per c.  The trace
// identity p u^{(c)} = Tr(zeta^{-c} a) - Tr(a) is re-derived for every n as a
// self-check of the coordinate convention.
struct UStreams {
    std::vector<std::vector<Rat>> u;  // u[n] has p-1 entries
};

inline UStreams u_vectors(const GroupRingElem& theta, long deg, const SeriesContext& sctx) {
    const long p = sctx.ctx.p;
    const TruncSeries f = f_theta(theta, deg, sctx);
    UStreams out;
    out.u.reserve(static_cast<std::size_t>(deg + 1));
    for (long n = 0; n <= deg; ++n) {
        const CycNum& a = f.coeff(n);
        std::vector<Rat> row = a.coeffs();
        const Rat tr = a.trace();
        for (long c = 1; c < p; ++c) {
            const Rat lhs = Rat(p) * row[static_cast<std::size_t>(c - 1)];
            const Rat rhs = (CycNum::zeta_pow(p, -c) * a).trace() - tr;
            if (lhs != rhs) throw std::logic_error("u_vectors: trace identity violated");
        }
        out.u.push_back(std::move(row));
    }
    return out;
}

struct RowVector {
    std::vector<Rat> entries;  // length N, grouped in blocks of p-1 per orbit
};

// Orbit representatives with full (p-1)-sized orbits, deduplicated by
// canonical form.
struct OrbitFamily {
    std::vector<GroupRingElem> reps;
    long orbit_size = 0;
    long N = 0;       // (p-1) * |reps|
    long Nprime = 0;  // |reps|
    bool truncated = false;
};

inline OrbitFamily make_orbit_family(const PrimeContext& ctx, const std::vector<GroupRingElem>& elems) {
    OrbitFamily fam;
    fam.orbit_size = ctx.p - 1;
    for (const auto& t : elems) {
        if (static_cast<long>(orbit(ctx, t).size()) != ctx.p - 1)
            throw std::invalid_argument("make_orbit_family: orbit smaller than p-1");
        const auto canon = canonical_orbit_form(ctx, t);
        bool dup = false;
        for (const auto& r : fam.reps)
            if (canonical_orbit_form(ctx, r) == canon) {
                dup = true;
                break;
            }
        if (dup) throw std::invalid_argument("make_orbit_family: representatives share an orbit");
        fam.reps.push_back(t);
    }
    fam.Nprime = static_cast<long>(fam.reps.size());
    fam.N = fam.Nprime * fam.orbit_size;
    return fam;
}

// Row n concatenates the coordinate vectors of a_n(rep) over all reps.
inline std::vector<RowVector> family_rows(const std::vector<GroupRingElem>& reps, long deg,
                                          const SeriesContext& sctx) {
    const long p = sctx.ctx.p;
    std::vector<RowVector> rows(static_cast<std::size_t>(deg + 1));
    for (auto& r : rows) r.entries.reserve(reps.size() * static_cast<std::size_t>(p - 1));
    for (const auto& rep : reps) {
        const TruncSeries f = f_theta(rep, deg, sctx);
        for (long n = 0; n <= deg; ++n) {
            const auto& coords = f.coeff(n).coeffs();
            auto& e = rows[static_cast<std::size_t>(n)].entries;
            e.insert(e.end(), coords.begin(), coords.end());
        }
    }
    return rows;
}

// Blockwise trace coordinates t_c = Tr(zeta^{-c} a) = p u_c - sum_block u.
// The per-block transform is invertible, so rank profiles agree with the
// plain coordinate rows; these are the coordinates the delta pairing uses.
inline RowVector trace_coordinates(const RowVector& row, long p) {
    const std::size_t block = static_cast<std::size_t>(p - 1);
    if (row.entries.size() % block != 0) throw std::invalid_argument("trace_coordinates: bad block size");
    RowVector out;
    out.entries.resize(row.entries.size());
    for (std::size_t b = 0; b < row.entries.size(); b += block) {
        Rat sum(0);
        for (std::size_t i = 0; i < block; ++i) sum += row.entries[b + i];
        for (std::size_t i = 0; i < block; ++i) out.entries[b + i] = Rat(p) * row.entries[b + i] - sum;
    }
    return out;
}

// Incremental exact rank over Q via an integer echelon with content division
// (rows are scaled integral, cross-multiplied against stored pivots, and
// re-primitivized after each reduction).
class RankAccumulator {
public:
    explicit RankAccumulator(std::size_t width) : width_(width) {}

    long rank() const { return static_cast<long>(rows_.size()); }

    bool add(const std::vector<Rat>& row) {
        auto r = reduce(row);
        if (r.empty()) return false;
        std::size_t pc = 0;
        while (r[pc] == 0) ++pc;
        const std::size_t pos = static_cast<std::size_t>(
            std::lower_bound(pivcol_.begin(), pivcol_.end(), pc) - pivcol_.begin());
        rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(r));
        pivcol_.insert(pivcol_.begin() + static_cast<std::ptrdiff_t>(pos), pc);
        return true;
    }

    bool in_span(const std::vector<Rat>& row) const { return reduce(row).empty(); }

private:
    // returns the reduced primitive integer row, or empty when in the span
    std::vector<Int> reduce(const std::vector<Rat>& row) const {
        if (row.size() != width_) throw std::invalid_argument("RankAccumulator: row width mismatch");
        Int den(1);
        for (const auto& v : row) {
            Int l;
            mpz_lcm(l.get_mpz_t(), den.get_mpz_t(), v.get_den().get_mpz_t());
            den = l;
        }
        std::vector<Int> r(width_);
        for (std::size_t i = 0; i < width_; ++i) r[i] = row[i].get_num() * (den / row[i].get_den());
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const std::size_t pc = pivcol_[k];
            if (r[pc] == 0) continue;
            const Int a = rows_[k][pc];
            const Int q = r[pc];
            for (std::size_t i = 0; i < width_; ++i) r[i] = r[i] * a - rows_[k][i] * q;
            normalize(r);
        }
        if (std::all_of(r.begin(), r.end(), [](const Int& v) { return v == 0; })) return {};
        normalize(r);
        return r;
    }

    static void normalize(std::vector<Int>& r) {
        Int g(0);
        for (const auto& v : r) {
            Int t;
            mpz_gcd(t.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
            g = t;
            if (g == 1) break;
        }
        if (g > 1)
            for (auto& v : r) v /= g;
    }

    std::size_t width_;
    std::vector<std::vector<Int>> rows_;   // echelon rows, sorted by pivot column
    std::vector<std::size_t> pivcol_;
};

struct RankProfile {
    std::vector<long> d;  // d[m] = dim span{rows 0..m}
    std::vector<long> S;  // jump indices: d(m) > d(m-1), with d(-1) = 0
    long d_inf = 0;
};

inline RankProfile rank_profile(const std::vector<RowVector>& rows) {
    RankProfile prof;
    if (rows.empty()) return prof;
    RankAccumulator acc(rows[0].entries.size());
    for (std::size_t m = 0; m < rows.size(); ++m) {
        if (acc.add(rows[m].entries)) prof.S.push_back(static_cast<long>(m));
        prof.d.push_back(acc.rank());
    }
    prof.d_inf = prof.d.back();
    return prof;
}

// Kernel of the column space: primitive rational basis of {w : R w = 0} for
// the stacked rows R.  Echelon over Q, free columns parametrized.
inline std::vector<std::vector<Rat>> kernel_basis_rational(const std::vector<std::vector<Rat>>& rows,
                                                           std::size_t width) {
    std::vector<std::vector<Rat>> mat = rows;
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
    std::vector<bool> is_pivot(width, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<Rat>> kernel;
    for (std::size_t fc = 0; fc < width; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<Rat> v(width);
        v[fc] = 1;
        for (std::size_t k = 0; k < pivot_cols.size(); ++k)
            v[pivot_cols[k]] = -mat[k][fc] / mat[k][pivot_cols[k]];
        kernel.push_back(std::move(v));
    }
    return kernel;
}

struct IndependenceVerdict {
    bool ok = false;
    long rank = 0;
    long expected = 0;
    long stabilization_degree = -1;  // first m with d(m) = N
    std::vector<Rat> kernel_witness;  // nonzero annihilator when rank deficient
};

namespace detail {

inline bool zero_mod_p(const GroupRingElem& t) {
    for (long c = 1; c < t.prime(); ++c)
        if (t.coeff(c) % t.prime() != 0) return false;
    return true;
}

inline bool same_orbit_mod_p(const PrimeContext& ctx, const GroupRingElem& a, const GroupRingElem& b) {
    const Int pm(ctx.p);
    for (long d = 1; d < ctx.p; ++d)
        if (a.reduced_mod(pm) == b.translate(d, ctx).reduced_mod(pm)) return true;
    return false;
}

}  // namespace detail

// Independence: the family of coordinate streams over distinct
// nonzero orbit classes reaches full rank N once the degree is large enough.
// Class preconditions are checked up front; with a positive irregularity
// index the odd spectral support must additionally meet the regular indices.
inline IndependenceVerdict independence_check(const OrbitFamily& family, long deg, const SeriesContext& sctx,
                                              const IrregularityReport* rank_data = nullptr) {
    const auto& ctx = sctx.ctx;
    for (std::size_t i = 0; i < family.reps.size(); ++i) {
        if (detail::zero_mod_p(family.reps[i]))
            throw std::invalid_argument("independence_check: representative vanishes mod p");
        for (std::size_t j = i + 1; j < family.reps.size(); ++j)
            if (detail::same_orbit_mod_p(ctx, family.reps[i], family.reps[j]))
                throw std::invalid_argument("independence_check: representatives collide mod p");
    }
    if (rank_data && rank_data->i_p > 0) {
        for (const auto& rep : family.reps) {
            bool alive = false;
            for (long k_reported : rank_data->n_list) {
                const long k_struct = ctx.p - 1 - k_reported;
                if (character_value(rep, k_struct) != 0) {
                    alive = true;
                    break;
                }
            }
            if (!alive)
                throw std::invalid_argument("independence_check: class dies on every regular component");
        }
    }

    const auto rows = family_rows(family.reps, deg, sctx);
    const auto prof = rank_profile(rows);
    IndependenceVerdict v;
    v.rank = prof.d_inf;
    v.expected = family.N;
    v.ok = prof.d_inf == family.N;
    if (v.ok) {
        for (std::size_t m = 0; m < prof.d.size(); ++m)
            if (prof.d[m] == family.N) {
                v.stabilization_degree = static_cast<long>(m);
                break;
            }
    } else {
        std::vector<std::vector<Rat>> stacked;
        for (const auto& r : rows) stacked.push_back(r.entries);
        auto kb = kernel_basis_rational(stacked, static_cast<std::size_t>(family.N));
        if (!kb.empty()) v.kernel_witness = kb.front();
    }
    return v;
}

}  // namespace cyclocert
