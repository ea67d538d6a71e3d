// The counting estimate and the final inequality chain, verified with exact
// big-integer comparisons and certified rational log_p brackets.  Every
// verdict carries the exact comparands so a certificate re-checks without
// recomputation.
#pragma once

#include <json.hpp>

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclocert/bernoulli.hpp"
#include "cyclocert/delta.hpp"
#include "cyclocert/numeric.hpp"

namespace cyclocert {

// Certified rational brackets for log_p(x), x >= 1, via exact cross powering:
// upper = v/2^k with p^v >= x^(2^k), lower with p^v <= x^(2^k).
inline Rat log_p_upper(long p, const Rat& x, unsigned k = 6) {
    if (x < 1) throw std::invalid_argument("log_p_upper: x >= 1 required");
    const Rat xp = rpow(x, 1UL << k);
    unsigned long hi = 1;
    while (Rat(ipow(Int(p), hi)) < xp) hi *= 2;
    unsigned long lo = 0;
    while (lo < hi) {
        const unsigned long mid = lo + (hi - lo) / 2;
        if (Rat(ipow(Int(p), mid)) >= xp)
            hi = mid;
        else
            lo = mid + 1;
    }
    return make_rat(Int(lo), ipow(Int(2), k));
}

inline Rat log_p_lower(long p, const Rat& x, unsigned k = 6) {
    if (x < 1) throw std::invalid_argument("log_p_lower: x >= 1 required");
    const Rat xp = rpow(x, 1UL << k);
    unsigned long v = 0;
    while (Rat(ipow(Int(p), v + 1)) <= xp) ++v;
    return make_rat(Int(v), ipow(Int(2), k));
}

// One exact comparison with stored comparands; self-contained for recheck.
struct Comparison {
    std::string name;
    Rat lhs, rhs;
    std::string relation;  // "<", "<=", ">", ">=", "=="
    bool verdict = false;
    bool mandatory = true;

    static bool evaluate(const Rat& l, const std::string& rel, const Rat& r) {
        if (rel == "<") return l < r;
        if (rel == "<=") return l <= r;
        if (rel == ">") return l > r;
        if (rel == ">=") return l >= r;
        if (rel == "==") return l == r;
        throw std::invalid_argument("Comparison: unknown relation " + rel);
    }

    static Comparison make(std::string name, Rat lhs, std::string rel, Rat rhs, bool mandatory = true) {
        Comparison c;
        c.name = std::move(name);
        c.lhs = std::move(lhs);
        c.rhs = std::move(rhs);
        c.relation = std::move(rel);
        c.verdict = evaluate(c.lhs, c.relation, c.rhs);
        c.mandatory = mandatory;
        return c;
    }

    nlohmann::json to_json() const {
        return {{"name", name},      {"lhs", rat_str(lhs)}, {"rhs", rat_str(rhs)},
                {"relation", relation}, {"verdict", verdict},  {"mandatory", mandatory}};
    }
};

struct CountingReport {
    Comparison identity;              // C(3q-1,q-1) = (1/3) C(3q,q)
    Comparison stirling_lower;        // C(3q-1,q-1) > (27/4)^q / (9 sqrt(q)), squared form
    Comparison stirling_intermediate; // (27/4)^q/(9 sqrt q) > (p-1)(5/2)^{p-1}, squared form; non-mandatory
    Comparison end_to_end;            // C(3q-1,q-1) > (p-1)(5/2)^{p-1}
    Int N_lower;                      // C(3q-1, q-1)

    bool mandatory_ok() const { return identity.verdict && stirling_lower.verdict && end_to_end.verdict; }
};

inline CountingReport verify_counting(long p) {
    if (p < 5) throw std::invalid_argument("verify_counting: p >= 5 required");
    const unsigned long q = static_cast<unsigned long>((p - 1) / 2);
    CountingReport rep;
    rep.N_lower = binomial(3 * q - 1, q - 1);
    const Int C = rep.N_lower;

    rep.identity = Comparison::make("counting_identity", Rat(Int(3) * C), "==", Rat(binomial(3 * q, q)));
    // C > 27^q / (4^q 9 sqrt(q))  <=>  81 q 16^q C^2 > 27^{2q}
    rep.stirling_lower = Comparison::make(
        "stirling_lower", Rat(Int(81) * Int(q) * ipow(Int(16), q) * C * C), ">", Rat(ipow(Int(27), 2 * q)));
    // C 2^{p-1} > (p-1) 5^{p-1}
    rep.end_to_end =
        Comparison::make("counting_end_to_end", Rat(C * ipow(Int(2), static_cast<unsigned long>(p - 1))), ">",
                         Rat(Int(p - 1) * ipow(Int(5), static_cast<unsigned long>(p - 1))));
    // (27/4)^q/(9 sqrt q) > (p-1)(5/2)^{p-1}  <=>  27^{2q} 2^{2(p-1)} > 16^q 81 q (p-1)^2 25^{p-1}
    rep.stirling_intermediate = Comparison::make(
        "stirling_intermediate",
        Rat(ipow(Int(27), 2 * q) * ipow(Int(2), static_cast<unsigned long>(2 * (p - 1)))), ">",
        Rat(ipow(Int(16), q) * Int(81) * Int(q) * Int(p - 1) * Int(p - 1) *
            ipow(Int(25), static_cast<unsigned long>(p - 1))),
        /*mandatory=*/false);
    return rep;
}

// The inequality chain with N replaced by its counting lower bound (sound for
// a lower-bound statement; every step here is monotone in N).
inline std::vector<Comparison> verify_chain(long p, const Int& N_lower) {
    if (p < 5) throw std::invalid_argument("verify_chain: p >= 5 required");
    const long q = (p - 1) / 2;
    std::vector<Comparison> steps;

    const Rat N(N_lower);
    // N1 <= N' = N/(p-1), integer orbit count
    Int N1;
    mpz_cdiv_q(N1.get_mpz_t(), N_lower.get_mpz_t(), Int(p - 1).get_mpz_t());

    const Rat log_N_up = log_p_upper(p, N);
    const Rat log_2p1sq_up = log_p_upper(p, Rat(Int(2 * p + 1) * Int(2 * p + 1)));
    const Rat log_2p1sq_lo = log_p_lower(p, Rat(Int(2 * p + 1) * Int(2 * p + 1)));

    // ||A|| <= (N/2)^q (2p/3)^{N+2} < p^N/((2p+1)^2 N) = M, in log_p form
    {
        const Rat lhs = Rat(q) * log_p_upper(p, N / 2) + (N + 2) * log_p_upper(p, make_rat(Int(2 * p), Int(3))) +
                        log_p_upper(p, Rat(Int(2 * p + 1) * Int(2 * p + 1)) * N);
        steps.push_back(Comparison::make("entry_bound_to_M", lhs, "<", N));
    }
    // N * M = L exactly: N * (p^N/((2p+1)^2 N)) and p^N/(2p+1)^2, both over p^N
    steps.push_back(Comparison::make(
        "siegel_to_L", Rat(N_lower) * make_rat(Int(1), Int(2 * p + 1) * Int(2 * p + 1) * N_lower), "==",
        make_rat(Int(1), Int(2 * p + 1) * Int(2 * p + 1))));
    // H <= L (p-1) < p^{(m-n)(2p-3)}; m-n >= (p-1)(N1(1/2 - 1/p) - 1/2)
    {
        const Rat lhs = N + log_p_upper(p, Rat(p - 1)) - log_2p1sq_lo;
        const Rat msubn = Rat(p - 1) * (Rat(N1) * (make_rat(Int(1), Int(2)) - make_rat(Int(1), Int(p))) -
                                        make_rat(Int(1), Int(2)));
        steps.push_back(Comparison::make("H_bound", lhs, "<", Rat(2 * p - 3) * msubn));
    }
    // (2p-3)(N/2 - N/p) > (p-4) N
    steps.push_back(Comparison::make(
        "delta_lower_exponent", Rat(2 * p - 3) * (N / 2 - N / p), ">", Rat(p - 4) * N));
    // log_p(L N) < N (p-4): the upper-bound side of |delta| <= L N s^{2(p-1)}
    const Rat logLN_up = N + log_N_up - log_2p1sq_lo;
    steps.push_back(Comparison::make("delta_upper_vs_lower", logLN_up, "<", Rat(p - 4) * N));

    // s exponent: 2(p-1) log_p|s| >= E with E = N(p-4) - log_p(L N)
    const Rat E = Rat(p - 4) * N - logLN_up;
    // the simplified display E >= N(p-5) needs (2p+1)^2 >= N and is
    // reported non-mandatory
    steps.push_back(Comparison::make("simplified_exponent_display", E, ">=", Rat(p - 5) * N,
                                     /*mandatory=*/false));
    // exact identity (p-5)/(2(p-1)) = 1/2 - 1/q behind "p^{N/2 - N/q}"
    steps.push_back(Comparison::make("exponent_identity", make_rat(Int(p - 5), Int(2 * (p - 1))), "==",
                                     make_rat(Int(1), Int(2)) - make_rat(Int(1), Int(q))));
    // final: E >= 2(p-1) (5/2)^{p-1}, so |s| > p^{(5/2)^{p-1}}
    steps.push_back(Comparison::make(
        "final_exponent", E, ">=",
        Rat(2 * (p - 1)) * make_rat(ipow(Int(5), static_cast<unsigned long>(p - 1)),
                                    ipow(Int(2), static_cast<unsigned long>(p - 1)))));

    // |s^p| = |x^p + y^p| / |x+y| <= max(|x|,|y|,|z|)^p on synthetic triples
    {
        SplitMix64 rng(7);
        bool all_ok = true;
        for (int t = 0; t < 50; ++t) {
            const Int x(rng.range(-80, 80));
            const Int y(rng.range(-80, 80));
            if (x + y == 0 || x == 0 || y == 0) continue;
            const Int num = ipow(x, static_cast<unsigned long>(p)) + ipow(y, static_cast<unsigned long>(p));
            if (num % (x + y) != 0) {
                all_ok = false;
                break;
            }
            const Int sp = num / (x + y);
            const Int mx = abs_int(x) > abs_int(y) ? abs_int(x) : abs_int(y);
            if (abs_int(sp) > ipow(mx, static_cast<unsigned long>(p))) all_ok = false;
        }
        steps.push_back(Comparison::make("norm_quotient_identity", Rat(all_ok ? 1 : 0), "==", Rat(1)));
    }
    return steps;
}

struct BoundCertificate {
    long p = 0;
    CountingReport counting;
    std::vector<Comparison> chain;
    IrregularityReport rank;
    bool delta_present = false;
    long delta_vanish_order = -1;
    bool delta_H_nonzero = false;
    bool overall = false;
    std::uint64_t seed = 0;
    long runtime_ms = 0;
};

struct CertifyOptions {
    bool skip_delta = false;
    std::uint64_t seed = 1;
    long delta_weight = 2;
    long delta_deg = 40;
    // smoke-run family cap: keeps m = (p-1) floor(N'/2) within delta_deg at
    // the larger desk-scale primes
    long delta_orbit_cap = 4;
};

inline BoundCertificate certify(long p, const CertifyOptions& opts = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto ctx = PrimeContext::make(p);
    if (p < 5) throw std::invalid_argument("certify: p >= 5 required");

    BoundCertificate cert;
    cert.p = p;
    cert.seed = opts.seed;
    cert.counting = verify_counting(p);
    cert.chain = verify_chain(p, cert.counting.N_lower);
    cert.rank = irregularity_index(ctx);

    if (!opts.skip_delta && p <= 13) {
        const auto dc =
            delta_certificate(p, opts.delta_weight, opts.delta_deg, opts.seed, opts.delta_orbit_cap);
        cert.delta_present = true;
        cert.delta_vanish_order = dc.vanish_order;
        cert.delta_H_nonzero = dc.H_nonzero && dc.orthogonality_ok && dc.covariance_ok && dc.reverify_ok;
    }

    cert.overall = cert.counting.mandatory_ok();
    for (const auto& s : cert.chain)
        if (s.mandatory) cert.overall = cert.overall && s.verdict;
    cert.overall = cert.overall && cert.rank.D == ctx.q - cert.rank.i_p;
    if (cert.delta_present) cert.overall = cert.overall && cert.delta_H_nonzero;

    cert.runtime_ms = static_cast<long>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
    return cert;
}

inline nlohmann::json certificate_to_json(const BoundCertificate& cert) {
    nlohmann::json j;
    j["version"] = "1";
    j["p"] = std::to_string(cert.p);
    j["counting"] = {{"identity", cert.counting.identity.to_json()},
                     {"stirling",
                      {{"lower", cert.counting.stirling_lower.to_json()},
                       {"intermediate", cert.counting.stirling_intermediate.to_json()}}},
                     {"end_to_end", cert.counting.end_to_end.to_json()},
                     {"N_lower", cert.counting.N_lower.get_str()}};
    j["chain"] = nlohmann::json::array();
    for (const auto& s : cert.chain) j["chain"].push_back(s.to_json());
    nlohmann::json irregular = nlohmann::json::array();
    for (long k : cert.rank.irregular_ks) irregular.push_back(std::to_string(k));
    j["rank"] = {{"i_p", std::to_string(cert.rank.i_p)},
                 {"D", std::to_string(cert.rank.D)},
                 {"irregular_ks", irregular}};
    j["delta"] = {{"present", cert.delta_present},
                  {"vanish_order", std::to_string(cert.delta_vanish_order)},
                  {"H_nonzero", cert.delta_H_nonzero}};
    j["meta"] = {{"seed", std::to_string(cert.seed)}, {"runtime_ms", std::to_string(cert.runtime_ms)}};
    j["overall"] = cert.overall;
    return j;
}

// Re-evaluate every stored comparison from its serialized comparands and
// confirm the recorded verdicts and the overall conjunction.
inline bool recheck_certificate(const nlohmann::json& j) {
    auto check_one = [](const nlohmann::json& c) {
        const Rat lhs = parse_rat(c.at("lhs").get<std::string>());
        const Rat rhs = parse_rat(c.at("rhs").get<std::string>());
        const bool v = Comparison::evaluate(lhs, c.at("relation").get<std::string>(), rhs);
        return v == c.at("verdict").get<bool>();
    };
    bool ok = check_one(j.at("counting").at("identity")) &&
              check_one(j.at("counting").at("stirling").at("lower")) &&
              check_one(j.at("counting").at("stirling").at("intermediate")) &&
              check_one(j.at("counting").at("end_to_end"));
    bool mandatory = j.at("counting").at("identity").at("verdict").get<bool>() &&
                     j.at("counting").at("stirling").at("lower").at("verdict").get<bool>() &&
                     j.at("counting").at("end_to_end").at("verdict").get<bool>();
    for (const auto& c : j.at("chain")) {
        ok = ok && check_one(c);
        if (c.at("mandatory").get<bool>()) mandatory = mandatory && c.at("verdict").get<bool>();
    }
    if (j.at("delta").at("present").get<bool>())
        mandatory = mandatory && j.at("delta").at("H_nonzero").get<bool>();
    ok = ok && (mandatory == j.at("overall").get<bool>());
    return ok;
}

}  // namespace cyclocert
