// End-to-end construction of the vanishing linear combination delta:
// weight-w Fueter combinations J, jump resolution on the exact rank profile,
// the single-block twist that converts the homogeneous solve into a
// nonvanishing guarantee, the Siegel solve, and the certificate checks.
//
// Row vectors pair against the solution through the trace form
// Tr(l . conj(a_i)), so the assembled matrix carries the trace coordinates
// Tr(zeta^{-c} a_i); the twisted row then satisfies
// H = delta_{R_hi} = -Tr(zeta^{-j} l(psi)) exactly.
#pragma once

#include <json.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclocert/group_ring.hpp"
#include "cyclocert/linalg.hpp"
#include "cyclocert/series.hpp"
#include "cyclocert/siegel.hpp"

namespace cyclocert {

struct BuildJResult {
    Int J0_count;                        // C(w+q-1, q-1), verified against enumeration
    long J_size = 0;                     // exact |J| = sum of true orbit sizes
    std::vector<GroupRingElem> reps;     // canonical representative per orbit
    std::vector<long> orbit_sizes;       // matching true orbit sizes
    bool truncated = false;
};

// J_0 = {sum c_j psi_j : c_j >= 0, sum c_j = w}, closed under G and split
// into orbits.  Enumeration is lexicographic in (c_1..c_q); an optional cap
// bounds the number of distinct orbits kept.
inline BuildJResult build_J(const PrimeContext& ctx, long w, std::optional<long> cap = std::nullopt) {
    if (w < 1) throw std::invalid_argument("build_J: weight budget must be positive");
    const auto psis = [&] {
        std::vector<GroupRingElem> v;
        for (long n = 1; n <= ctx.q; ++n) v.push_back(fueter(ctx, n));
        return v;
    }();

    BuildJResult out;
    out.J0_count = binomial(static_cast<unsigned long>(w + ctx.q - 1), static_cast<unsigned long>(ctx.q - 1));

    std::vector<long> comp(static_cast<std::size_t>(ctx.q), 0);
    comp[0] = w;
    Int enumerated(0);
    while (true) {
        ++enumerated;
        GroupRingElem theta(ctx.p);
        for (long j = 0; j < ctx.q; ++j)
            if (comp[static_cast<std::size_t>(j)] != 0)
                theta = theta + psis[static_cast<std::size_t>(j)] * Int(comp[static_cast<std::size_t>(j)]);
        const auto canon = canonical_orbit_form(ctx, theta);
        bool seen = false;
        for (const auto& r : out.reps)
            if (r == canon) {
                seen = true;
                break;
            }
        if (!seen) {
            if (cap && static_cast<long>(out.reps.size()) >= *cap) {
                out.truncated = true;
            } else {
                const long osize = static_cast<long>(orbit(ctx, theta).size());
                out.reps.push_back(canon);
                out.orbit_sizes.push_back(osize);
                out.J_size += osize;
            }
        }
        // next composition in lexicographic order
        long j = ctx.q - 1;
        while (j > 0 && comp[static_cast<std::size_t>(j - 1)] == 0) --j;
        if (j == 0) break;
        --comp[static_cast<std::size_t>(j - 1)];
        long rest = w;
        for (long i = 0; i < j; ++i) rest -= comp[static_cast<std::size_t>(i)];
        comp[static_cast<std::size_t>(j)] = rest;
        for (long i = j + 1; i < ctx.q; ++i) comp[static_cast<std::size_t>(i)] = 0;
    }
    if (!out.truncated && enumerated != out.J0_count)
        throw std::logic_error("build_J: composition count disagrees with the binomial formula");
    return out;
}

// (1-j) images of the J-orbits, deduplicated; orbits of size below p-1
// (stabilized images) are dropped so every block stays a full G-orbit.
struct MinusFamily {
    OrbitFamily family;
    long skipped_stabilized = 0;
    long merged_orbits = 0;
};

inline MinusFamily minus_family(const PrimeContext& ctx, const BuildJResult& J) {
    MinusFamily out;
    std::vector<GroupRingElem> keep;
    std::vector<GroupRingElem> canon_seen;
    for (const auto& rep : J.reps) {
        const auto img = rep - rep.conj_applied(ctx);
        if (static_cast<long>(orbit(ctx, img).size()) != ctx.p - 1) {
            ++out.skipped_stabilized;
            continue;
        }
        const auto canon = canonical_orbit_form(ctx, img);
        if (std::find(canon_seen.begin(), canon_seen.end(), canon) != canon_seen.end()) {
            ++out.merged_orbits;
            continue;
        }
        canon_seen.push_back(canon);
        keep.push_back(canon);
    }
    out.family = make_orbit_family(ctx, keep);
    return out;
}

struct ConstructionParams {
    long w = 0;
    long mprime = 0, nprime = 0, m = 0, n = 0;
    long R_lo = -1, R_hi = -1;
    long deg = 0;
};

struct JumpResolution {
    bool ok = false;
    long R_lo = -1, R_hi = -1;
    std::string message;
};

// R_lo = min{s in S : s >= n}, R_hi = min{s in S : s >= m - n}.
inline JumpResolution resolve_jumps(const RankProfile& prof, long n, long m) {
    JumpResolution out;
    for (long s : prof.S) {
        if (out.R_lo < 0 && s >= n) out.R_lo = s;
        if (out.R_hi < 0 && s >= m - n) out.R_hi = s;
    }
    if (out.R_lo < 0 || out.R_hi < 0) {
        out.message = "insufficient degree: no jump at or beyond the requested threshold";
        return out;
    }
    out.ok = true;
    return out;
}

struct TwistChoice {
    long rep_index = -1;  // which orbit block carries the twist
    long j = 0;           // basis exponent: the block vector is nu(zeta^j)
    RowVector phi_trace;  // trace coordinates of the block base vector
};

namespace detail {

inline RowVector twist_row(long p, long nreps, long rep_index, long j) {
    RowVector phi;
    phi.entries.assign(static_cast<std::size_t>(nreps * (p - 1)), Rat(0));
    const std::size_t base = static_cast<std::size_t>(rep_index * (p - 1));
    // Tr(zeta^{j-c}) = p-1 at c = j and -1 elsewhere
    for (long c = 1; c < p; ++c) phi.entries[base + static_cast<std::size_t>(c - 1)] = Rat(c == j ? p - 1 : -1);
    return phi;
}

inline std::vector<Int> scale_row_integral(const std::vector<Rat>& row) {
    Int den(1);
    for (const auto& v : row) {
        Int l;
        mpz_lcm(l.get_mpz_t(), den.get_mpz_t(), v.get_den().get_mpz_t());
        den = l;
    }
    std::vector<Int> out(row.size());
    Int g(0);
    for (std::size_t i = 0; i < row.size(); ++i) {
        out[i] = row[i].get_num() * (den / row[i].get_den());
        Int t;
        mpz_gcd(t.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
        g = t;
    }
    if (g > 1)
        for (auto& v : out) v /= g;
    return out;
}

inline std::optional<long> rational_p_valuation(const Rat& x, long p) {
    if (x == 0) return std::nullopt;
    long v = 0;
    Int num = x.get_num(), den = x.get_den();
    while (num % p == 0) {
        num /= p;
        ++v;
    }
    while (den % p == 0) {
        den /= p;
        --v;
    }
    return v;
}

}  // namespace detail

// Deterministic scan for the twist: first (rep, j) whose single-block base
// vector falls outside the span of the rows up to R_hi.  skip lets the retry
// policy advance to later valid candidates.
inline std::optional<TwistChoice> choose_twist(const std::vector<RowVector>& trace_rows, long R_hi,
                                               const OrbitFamily& fam, long p, long skip = 0) {
    RankAccumulator span(trace_rows[0].entries.size());
    for (long i = 0; i <= R_hi; ++i) span.add(trace_rows[static_cast<std::size_t>(i)].entries);
    for (long rep = 0; rep < fam.Nprime; ++rep) {
        for (long j = 1; j < p; ++j) {
            RowVector phi = detail::twist_row(p, fam.Nprime, rep, j);
            if (!span.in_span(phi.entries)) {
                if (skip > 0) {
                    --skip;
                    continue;
                }
                return TwistChoice{rep, j, std::move(phi)};
            }
        }
    }
    return std::nullopt;
}

struct DeltaCertificate {
    long p = 0, w = 0;
    std::uint64_t seed = 0;
    ConstructionParams params;
    Int J0_count;
    long J_size = 0;
    long skipped_stabilized = 0, merged_orbits = 0;
    std::vector<GroupRingElem> reps;  // minus-image orbit representatives
    TwistChoice twist;
    std::vector<CycNum> ell;       // covariant coefficients, one per rep
    Rat H;                         // = -Tr(zeta^{-j} ell(psi)) = delta_{R_hi}
    long vanish_order = -1;
    std::vector<Rat> delta_coeffs;  // exact coefficients of the truncated delta
    bool H_nonzero = false;
    bool orthogonality_ok = false;  // A w = 0 and all constrained coefficients vanish
    bool covariance_ok = false;     // delta invariant under orbit relabeling
    bool reverify_ok = false;       // vanish order and H reproduced from raw series
    bool unit_ok = false;           // tail factor is a p-adic unit at v_p(T) = 2p-3
    long retries = 0;
    IntMatrix A;
    SmallSolution solution;
    long runtime_ms = 0;
};

namespace detail {

// delta coefficients from scratch: delta_i = sum_rep Tr(ell(rep) conj(a_i)).
inline std::vector<Rat> delta_from_series(const std::vector<TruncSeries>& series,
                                          const std::vector<CycNum>& ell, long deg) {
    std::vector<Rat> out(static_cast<std::size_t>(deg + 1), Rat(0));
    for (std::size_t r = 0; r < series.size(); ++r)
        for (long i = 0; i <= deg; ++i)
            out[static_cast<std::size_t>(i)] += (ell[r] * series[r].coeff(i).conj()).trace();
    return out;
}

}  // namespace detail

// Assemble the constraint matrix from the jump rows below R_hi plus the
// twisted row, solve, and certify.  H = 0 triggers the retry policy: next
// twist candidate in scan order, then fresh Siegel solutions.
inline DeltaCertificate assemble_and_solve(const SeriesContext& sctx, const MinusFamily& mf,
                                           long w, long deg, std::uint64_t seed) {
    const auto& ctx = sctx.ctx;
    const long p = ctx.p;
    const auto& fam = mf.family;

    DeltaCertificate cert;
    cert.p = p;
    cert.w = w;
    cert.seed = seed;
    cert.skipped_stabilized = mf.skipped_stabilized;
    cert.merged_orbits = mf.merged_orbits;
    cert.reps = fam.reps;

    ConstructionParams& P = cert.params;
    P.w = w;
    P.deg = deg;
    P.mprime = fam.Nprime / 2;
    P.nprime = fam.Nprime / p;
    P.m = (p - 1) * P.mprime;
    P.n = (p - 1) * P.nprime;
    if (!(P.n < P.m && P.m <= deg))
        throw std::invalid_argument("assemble_and_solve: parameters need n < m <= deg");

    // series and rows (trace coordinates) per orbit representative
    std::vector<TruncSeries> series;
    for (const auto& rep : fam.reps) series.push_back(f_theta(rep, deg, sctx));
    std::vector<RowVector> trows(static_cast<std::size_t>(deg + 1));
    for (auto& r : trows) r.entries.reserve(static_cast<std::size_t>(fam.N));
    for (const auto& f : series) {
        for (long i = 0; i <= deg; ++i) {
            const CycNum& a = f.coeff(i);
            const Rat tr = a.trace();
            auto& e = trows[static_cast<std::size_t>(i)].entries;
            for (long c = 1; c < p; ++c) e.push_back(Rat(p) * a.coeff(c) + tr);
        }
    }

    const auto prof = rank_profile(trows);
    const auto jumps = resolve_jumps(prof, P.n, P.m);
    if (!jumps.ok) throw std::invalid_argument("assemble_and_solve: " + jumps.message);
    P.R_lo = jumps.R_lo;
    P.R_hi = jumps.R_hi;

    // spanning rows: jump indices strictly below R_hi (smallest spanning set)
    std::vector<long> selected;
    for (long s : prof.S)
        if (s < P.R_hi) selected.push_back(s);

    for (long twist_skip = 0;; ++twist_skip) {
        const auto tw = choose_twist(trows, P.R_hi, fam, p, twist_skip);
        if (!tw) {
            if (twist_skip == 0) throw std::logic_error("assemble_and_solve: no twist candidate exists");
            break;  // twists exhausted
        }
        IntMatrix A;
        A.rows = static_cast<long>(selected.size()) + 1;
        A.cols = fam.N;
        for (long s : selected)
            A.a.push_back(detail::scale_row_integral(trows[static_cast<std::size_t>(s)].entries));
        {
            std::vector<Rat> twisted = trows[static_cast<std::size_t>(P.R_hi)].entries;
            for (std::size_t i = 0; i < twisted.size(); ++i) twisted[i] += tw->phi_trace.entries[i];
            A.a.push_back(detail::scale_row_integral(twisted));
        }
        if (A.rows >= A.cols) throw std::logic_error("assemble_and_solve: constraint matrix not underdetermined");

        // Candidate solutions in increasing sup norm: the reduced kernel
        // basis, pairwise combinations, then seeded combinations.  The twist
        // choice keeps phi outside the row span, so the pairing functional
        // w -> <w, phi> cannot vanish on the whole kernel.
        std::vector<std::vector<Int>> candidates = reduced_kernel(A);
        const long dbar = A.cols - static_cast<long>(candidates.size());
        {
            const std::size_t base = candidates.size();
            for (std::size_t i = 0; i < base; ++i)
                for (std::size_t j = i + 1; j < base; ++j) {
                    std::vector<Int> s(candidates[i].size()), t(candidates[i].size());
                    for (std::size_t x = 0; x < s.size(); ++x) {
                        s[x] = candidates[i][x] + candidates[j][x];
                        t[x] = candidates[i][x] - candidates[j][x];
                    }
                    candidates.push_back(std::move(s));
                    candidates.push_back(std::move(t));
                }
            SplitMix64 rng(seed);
            for (int trial = 0; trial < 16; ++trial) {
                std::vector<Int> s(candidates[0].size(), Int(0));
                for (std::size_t i = 0; i < base; ++i) {
                    const long c = rng.range(-1, 1);
                    if (c == 0) continue;
                    for (std::size_t x = 0; x < s.size(); ++x) s[x] += Int(c) * candidates[i][x];
                }
                candidates.push_back(std::move(s));
            }
            std::stable_sort(candidates.begin(), candidates.end(),
                             [](const std::vector<Int>& a, const std::vector<Int>& b) {
                                 Int na(0), nb(0);
                                 for (const auto& v : a)
                                     if (abs_int(v) > na) na = abs_int(v);
                                 for (const auto& v : b)
                                     if (abs_int(v) > nb) nb = abs_int(v);
                                 return na < nb;
                             });
        }

        for (const auto& wvec : candidates) {
            if (std::all_of(wvec.begin(), wvec.end(), [](const Int& v) { return v == 0; })) continue;
            // H = -<w, phi> up front; zero pairings are skipped cheaply
            Rat pairing(0);
            for (std::size_t i = 0; i < wvec.size(); ++i)
                pairing += Rat(wvec[i]) * tw->phi_trace.entries[i];
            if (pairing == 0) {
                ++cert.retries;
                continue;
            }
            SmallSolution sol;
            sol.w = wvec;
            sol.inf_norm = 0;
            for (const auto& v : wvec)
                if (abs_int(v) > sol.inf_norm) sol.inf_norm = abs_int(v);
            sol.within_bound = siegel_bound_holds(sol.inf_norm, A.cols, dbar, A.max_abs_entry());
            // covariant coefficients from the solution blocks
            std::vector<CycNum> ell;
            for (long r = 0; r < fam.Nprime; ++r) {
                std::vector<Rat> block(static_cast<std::size_t>(p - 1));
                for (long c = 1; c < p; ++c)
                    block[static_cast<std::size_t>(c - 1)] =
                        Rat(sol.w[static_cast<std::size_t>(r * (p - 1) + c - 1)]);
                ell.push_back(kappa_inv(p, block));
            }
            const auto dc = detail::delta_from_series(series, ell, deg);
            const Rat Hval = dc[static_cast<std::size_t>(P.R_hi)];
            if (Hval == 0) {
                ++cert.retries;
                continue;
            }

            cert.twist = *tw;
            cert.A = A;
            cert.solution = sol;
            cert.ell = std::move(ell);
            cert.delta_coeffs = dc;
            cert.H = Hval;
            cert.H_nonzero = true;

            // H = -Tr(zeta^{-j} ell(psi)) exactly
            const Rat Hcross =
                -(CycNum::zeta_pow(p, -cert.twist.j) * cert.ell[static_cast<std::size_t>(cert.twist.rep_index)])
                     .trace();
            cert.reverify_ok = Hcross == Hval;

            cert.vanish_order = -1;
            for (long i = 0; i <= deg; ++i)
                if (dc[static_cast<std::size_t>(i)] != 0) {
                    cert.vanish_order = i;
                    break;
                }
            cert.reverify_ok = cert.reverify_ok && cert.vanish_order == P.R_hi;

            cert.orthogonality_ok = is_kernel_vector(A, sol.w);
            for (long i = 0; i < P.R_hi; ++i)
                cert.orthogonality_ok = cert.orthogonality_ok && dc[static_cast<std::size_t>(i)] == 0;

            // covariance: relabel every orbit by sigma_g and map ell along
            {
                std::vector<TruncSeries> tseries;
                std::vector<CycNum> tell;
                for (std::size_t r = 0; r < cert.reps.size(); ++r) {
                    tseries.push_back(f_theta(cert.reps[r].translate(ctx.g, ctx), deg, sctx));
                    tell.push_back(cert.ell[r].galois(ctx.g));
                }
                cert.covariance_ok = detail::delta_from_series(tseries, tell, deg) == dc;
            }

            // tail unit: 1 + sum_{i>R} (delta_i/H) T^{i-R} with v_p(T) = 2p-3
            {
                cert.unit_ok = true;
                const long vT = 2 * p - 3;
                const long vH = *detail::rational_p_valuation(Hval, p);
                for (long i = P.R_hi + 1; i <= deg; ++i) {
                    const auto vi = detail::rational_p_valuation(dc[static_cast<std::size_t>(i)], p);
                    if (vi && *vi - vH + (i - P.R_hi) * vT < 1) {
                        cert.unit_ok = false;
                        break;
                    }
                }
            }
            return cert;
        }
        ++cert.retries;
    }
    throw std::runtime_error("assemble_and_solve: twist/solution retries exhausted with H = 0");
}

struct EntryBoundReport {
    bool applicable = false;      // full-weight mode: w = p - 1
    bool entries_ok = false;      // every |entry| <= (N/2)^q (2p/3)^{N+2}
    Int max_entry;
    Rat stated_bound;
    bool chain_to_M_ok = false;   // (N/2)^q (2p/3)^{N+2} < p^N / ((2p+1)^2 N)
    long witness_row = -1, witness_col = -1;
};

inline EntryBoundReport entry_bound_report(const DeltaCertificate& cert, const PrimeContext& ctx) {
    EntryBoundReport rep;
    rep.applicable = cert.w == ctx.p - 1;
    if (!rep.applicable) return rep;
    const long N = cert.A.cols;
    const long p = ctx.p;
    rep.stated_bound = rpow(make_rat(Int(N), Int(2)), static_cast<unsigned long>(ctx.q)) *
                       rpow(make_rat(Int(2 * p), Int(3)), static_cast<unsigned long>(N + 2));
    rep.max_entry = cert.A.max_abs_entry();
    rep.entries_ok = Rat(rep.max_entry) <= rep.stated_bound;
    if (!rep.entries_ok) {
        for (long i = 0; i < cert.A.rows && rep.witness_row < 0; ++i)
            for (long j = 0; j < cert.A.cols; ++j)
                if (abs_int(cert.A.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) ==
                    rep.max_entry) {
                    rep.witness_row = i;
                    rep.witness_col = j;
                    break;
                }
    }
    const Rat M_target = make_rat(ipow(Int(p), static_cast<unsigned long>(N)), Int((2 * p + 1)) * (2 * p + 1) * N);
    rep.chain_to_M_ok = rep.stated_bound < M_target;
    return rep;
}

// One-call pipeline: build J, take the minus family, solve, certify.
inline DeltaCertificate delta_certificate(long p, long w, long deg, std::uint64_t seed,
                                          std::optional<long> cap = std::nullopt) {
    const auto sctx = make_series_context(p);
    const auto J = build_J(sctx.ctx, w, cap);
    const auto mf = minus_family(sctx.ctx, J);
    auto cert = assemble_and_solve(sctx, mf, w, deg, seed);
    cert.J0_count = J.J0_count;
    cert.J_size = J.J_size;
    return cert;
}

inline nlohmann::json delta_to_json(const DeltaCertificate& cert) {
    nlohmann::json j;
    j["p"] = std::to_string(cert.p);
    j["w"] = std::to_string(cert.w);
    j["params"] = {{"mprime", std::to_string(cert.params.mprime)},
                   {"nprime", std::to_string(cert.params.nprime)},
                   {"m", std::to_string(cert.params.m)},
                   {"n", std::to_string(cert.params.n)},
                   {"R_lo", std::to_string(cert.params.R_lo)},
                   {"R_hi", std::to_string(cert.params.R_hi)},
                   {"deg", std::to_string(cert.params.deg)},
                   {"seed", std::to_string(cert.seed)},
                   {"J0", cert.J0_count.get_str()},
                   {"J", std::to_string(cert.J_size)}};
    j["twist"] = {{"psi", cert.reps[static_cast<std::size_t>(cert.twist.rep_index)].to_text()},
                  {"j", std::to_string(cert.twist.j)}};
    nlohmann::json ell = nlohmann::json::object();
    for (std::size_t r = 0; r < cert.reps.size(); ++r) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& v : cert.ell[r].coeffs()) arr.push_back(rat_str(v));
        ell[cert.reps[r].to_text()] = arr;
    }
    j["ell"] = ell;
    j["H"] = rat_str(cert.H);
    j["vanish_order"] = std::to_string(cert.vanish_order);
    j["checks"] = {{"orthogonality", cert.orthogonality_ok},
                   {"covariance", cert.covariance_ok},
                   {"reverify", cert.reverify_ok},
                   {"unit", cert.unit_ok},
                   {"H_nonzero", cert.H_nonzero}};
    j["timings"] = {{"runtime_ms", std::to_string(cert.runtime_ms)}, {"retries", std::to_string(cert.retries)}};
    return j;
}

}  // namespace cyclocert
