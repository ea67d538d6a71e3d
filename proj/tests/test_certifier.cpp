#include <catch2/catch_amalgamated.hpp>

#include "cyclocert/certifier.hpp"

using namespace cyclocert;

TEST_CASE("log_p brackets") {
    for (long p : {5L, 257L}) {
        for (const Rat& x : {Rat(1), Rat(7), Rat(Int("123456789123456789")), make_rat(Int(22), Int(7))}) {
            const Rat up = log_p_upper(p, x);
            const Rat lo = log_p_lower(p, x);
            CHECK(lo <= up);
            // p^(64 up) >= x^64 and p^(64 lo) <= x^64 by construction; sanity:
            CHECK(up - lo <= make_rat(Int(1), Int(32)));
        }
    }
    CHECK_THROWS_AS(log_p_upper(5, make_rat(Int(1), Int(2))), std::invalid_argument);
}

TEST_CASE("counting verdicts") {
    SECTION("identity holds for all q <= 200") {
        for (unsigned long q = 1; q <= 200; ++q)
            CHECK(Int(3) * binomial(3 * q - 1, q - 1) == binomial(3 * q, q));
    }
    SECTION("p = 257: end-to-end passes, the Stirling intermediate fails") {
        const auto rep = verify_counting(257);
        CHECK(rep.identity.verdict);
        CHECK(rep.stirling_lower.verdict);
        CHECK(rep.end_to_end.verdict);
        CHECK_FALSE(rep.stirling_intermediate.verdict);
        CHECK(rep.N_lower == binomial(383, 127));
        CHECK(rep.mandatory_ok());
    }
    SECTION("p = 5: end-to-end fails as expected") {
        const auto rep = verify_counting(5);
        CHECK(rep.identity.verdict);
        CHECK_FALSE(rep.end_to_end.verdict);  // 5 < 4 * (5/2)^4
        CHECK_FALSE(rep.mandatory_ok());
    }
}

TEST_CASE("chain verdicts") {
    SECTION("p = 257: every mandatory step passes") {
        const auto counting = verify_counting(257);
        const auto chain = verify_chain(257, counting.N_lower);
        for (const auto& s : chain) {
            INFO(s.name);
            if (s.mandatory) CHECK(s.verdict);
        }
        // the simplified display needs (2p+1)^2 >= N and must fail at 257
        bool found = false;
        for (const auto& s : chain)
            if (s.name == "simplified_exponent_display") {
                found = true;
                CHECK_FALSE(s.verdict);
                CHECK_FALSE(s.mandatory);
            }
        CHECK(found);
    }
    SECTION("p = 5: failures flagged, not thrown") {
        const auto counting = verify_counting(5);
        const auto chain = verify_chain(5, counting.N_lower);
        bool some_fail = false;
        for (const auto& s : chain) some_fail = some_fail || !s.verdict;
        CHECK(some_fail);
    }
}

TEST_CASE("full certificates") {
    SECTION("p = 257 passes and re-checks") {
        CertifyOptions opts;
        const auto cert = certify(257, opts);
        CHECK(cert.overall);
        CHECK_FALSE(cert.delta_present);  // p > 13
        CHECK(cert.rank.D == 128 - cert.rank.i_p);
        const auto j = certificate_to_json(cert);
        CHECK(recheck_certificate(j));
        CHECK(j["counting"]["end_to_end"]["verdict"].get<bool>());
    }
    SECTION("p = 5: counting failure recorded, exit path is fail") {
        CertifyOptions opts;
        const auto cert = certify(5, opts);
        CHECK_FALSE(cert.overall);
        CHECK(cert.delta_present);
        CHECK(cert.delta_H_nonzero);  // the structural smoke run still passes
        CHECK(recheck_certificate(certificate_to_json(cert)));
    }
    SECTION("p = 4 rejected") { CHECK_THROWS_AS(certify(4), std::invalid_argument); }
    SECTION("smoke runs complete at the larger desk primes") {
        for (long p : {11L, 13L}) {
            const auto cert = certify(p);
            CHECK(cert.delta_present);
            CHECK(cert.delta_H_nonzero);
            CHECK(recheck_certificate(certificate_to_json(cert)));
        }
    }
    SECTION("tampered verdicts fail the recheck") {
        const auto cert = certify(257);
        auto j = certificate_to_json(cert);
        j["counting"]["end_to_end"]["verdict"] = false;
        CHECK_FALSE(recheck_certificate(j));
    }
}
