#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "wtail/rng.hpp"

using wtail::SeededStream;

TEST_CASE("equal (master, stream) pairs replay the same sequence") {
    SeededStream a(0xdeadbeefULL, 42);
    SeededStream b(0xdeadbeefULL, 42);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("distinct stream indices decorrelate") {
    SeededStream a(1, 0);
    SeededStream b(1, 1);
    int collisions = 0;
    for (int i = 0; i < 1000; ++i) {
        if (a.next_u64() == b.next_u64()) ++collisions;
    }
    REQUIRE(collisions == 0);
}

TEST_CASE("copies advance independently") {
    SeededStream a(7, 3);
    a.next_u64();
    SeededStream b = a;
    REQUIRE(a.next_u64() == b.next_u64());
    a.next_u64();
    REQUIRE(a.next_u64() != b.next_u64());
}

TEST_CASE("uniform01 stays in [0,1) and is roughly uniform") {
    SeededStream s(11, 0);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = s.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    REQUIRE(sum / 100000.0 == Catch::Approx(0.5).margin(0.01));
}

TEST_CASE("variate kernels have the right first moments") {
    SeededStream s(13, 0);
    double se = 0.0, sn = 0.0, sg = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double e = s.exponential();
        REQUIRE(e > 0.0);
        se += e;
        sn += s.normal();
        sg += s.gamma(2.5);
    }
    REQUIRE(se / n == Catch::Approx(1.0).margin(0.02));
    REQUIRE(sn / n == Catch::Approx(0.0).margin(0.02));
    REQUIRE(sg / n == Catch::Approx(2.5).margin(0.03));
}
