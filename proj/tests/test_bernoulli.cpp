#include <catch2/catch_amalgamated.hpp>

#include "cyclocert/bernoulli.hpp"

using namespace cyclocert;

TEST_CASE("classical Bernoulli numbers") {
    const auto B = bernoulli_numbers(12);
    CHECK(B[0] == 1);
    CHECK(B[1] == make_rat(Int(-1), Int(2)));
    CHECK(B[2] == make_rat(Int(1), Int(6)));
    CHECK(B[3] == 0);
    CHECK(B[4] == make_rat(Int(-1), Int(30)));
    CHECK(B[6] == make_rat(Int(1), Int(42)));
    CHECK(B[12] == make_rat(Int(-691), Int(2730)));
}

TEST_CASE("bernoulli character residues") {
    SECTION("p=5, k=1 nonzero") {
        const auto ctx = PrimeContext::make(5);
        const auto v = bernoulli_char(ctx, 1);
        CHECK_FALSE(v.is_zero());
        // B_{1,omega} = B_2/2 = 1/12 = 3 mod 5
        CHECK(v.integral);
        CHECK(v.residue == 3);
    }
    SECTION("p=37: the unique irregular index is 31 (B_32)") {
        const auto ctx = PrimeContext::make(37);
        CHECK(bernoulli_char(ctx, 31).is_zero());
        long zeros = 0;
        for (long k = 1; k <= 35; k += 2)
            if (bernoulli_char(ctx, k).is_zero()) ++zeros;
        CHECK(zeros == 1);
    }
    SECTION("p=13 is regular") {
        const auto ctx = PrimeContext::make(13);
        for (long k = 1; k <= 11; k += 2) CHECK_FALSE(bernoulli_char(ctx, k).is_zero());
    }
    SECTION("k = p-2 hits the non-integral character") {
        const auto ctx = PrimeContext::make(11);
        const auto v = bernoulli_char(ctx, ctx.p - 2);
        CHECK_FALSE(v.integral);
        CHECK_FALSE(v.is_zero());
    }
    CHECK_THROWS_AS(bernoulli_char(PrimeContext::make(7), 2), std::invalid_argument);
}

TEST_CASE("irregularity reports") {
    SECTION("p=13") {
        const auto rep = irregularity_index(PrimeContext::make(13));
        CHECK(rep.i_p == 0);
        CHECK(rep.D == 6);
    }
    SECTION("p=5") {
        const auto rep = irregularity_index(PrimeContext::make(5));
        CHECK(rep.i_p == 0);
        CHECK(rep.D == 2);
    }
    SECTION("p=37 cross-checked against the rational recurrence") {
        const auto rep = irregularity_index(PrimeContext::make(37));
        CHECK(rep.i_p == 1);
        CHECK(rep.D == 17);
        CHECK(rep.irregular_ks == std::vector<long>{31});
        CHECK(rep.irregular_ks == bernoulli_oracle(37));
    }
    SECTION("report invariants") {
        for (long p : {5L, 7L, 37L, 59L}) {
            const auto ctx = PrimeContext::make(p);
            const auto rep = irregularity_index(ctx);
            CHECK(rep.i_p + static_cast<long>(rep.n_list.size()) == ctx.q);
            CHECK(rep.D == ctx.q - rep.i_p);
            for (long k : rep.irregular_ks)
                CHECK(std::find(rep.n_list.begin(), rep.n_list.end(), k) == rep.n_list.end());
        }
    }
}

TEST_CASE("oracle") {
    CHECK(bernoulli_oracle(7).empty());
    CHECK(bernoulli_oracle(37) == std::vector<long>{31});
    CHECK(bernoulli_oracle(59).size() == 1);  // 59 has irregularity index 1 (59 | B_44)
    CHECK(bernoulli_oracle(59) == std::vector<long>{43});
    CHECK_THROWS_AS(bernoulli_oracle(2003), std::invalid_argument);

    SECTION("shared table matches per-prime computation") {
        const auto table = bernoulli_numbers(100);
        for (long p : {5L, 7L, 11L, 13L, 37L, 59L, 67L, 101L})
            CHECK(bernoulli_oracle(p, &table) == bernoulli_oracle(p));
    }
}

TEST_CASE("pointwise congruence against classical Bernoulli numbers") {
    // B_{1,omega^k} = B_{k+1}/(k+1) mod p for odd k with k+1 < p-1
    const auto table = bernoulli_numbers(60);
    for (long p : {5L, 7L, 11L, 13L, 37L, 59L}) {
        const auto ctx = PrimeContext::make(p);
        const Int pm(p);
        for (long k = 1; k + 1 < p - 1 && k <= 59; k += 2) {
            const auto v = bernoulli_char(ctx, k);
            REQUIRE(v.integral);
            const Rat& B = table[static_cast<unsigned long>(k + 1)];
            REQUIRE(B.get_den() % p != 0);
            const Int expect = mod_reduce(
                mod_reduce(B.get_num(), pm) *
                    mod_inverse(mod_reduce(B.get_den() * Int(k + 1), pm), pm),
                pm);
            CHECK(v.residue == expect);
        }
    }
}

TEST_CASE("character scan agrees with the oracle for p < 300") {
    const auto table = bernoulli_numbers(297);
    for (long p = 3; p < 300; p += 2) {
        if (!is_prime(Int(p))) continue;
        const auto ctx = PrimeContext::make(p);
        const auto rep = irregularity_index(ctx);
        CHECK(rep.irregular_ks == bernoulli_oracle(p, &table));
    }
}
