#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "synteo/rng.hpp"

using namespace synteo;

TEST_CASE("same seed, same stream") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
    Rng a(1), b(2);
    int equal = 0;
    for (int i = 0; i < 1000; ++i)
        if (a.next_u64() == b.next_u64()) ++equal;
    CHECK(equal < 5);
}

TEST_CASE("uniform_int stays inclusive of both bounds") {
    Rng rng(7);
    std::set<int64_t> seen;
    for (int i = 0; i < 4000; ++i) {
        const int64_t v = rng.uniform_int(3, 10);
        CHECK(v >= 3);
        CHECK(v <= 10);
        seen.insert(v);
    }
    CHECK(seen.size() == 8);  // all values reachable
}

TEST_CASE("uniform_int frequency is roughly flat") {
    Rng rng(11);
    std::map<int64_t, int> counts;
    const int n = 80000;
    for (int i = 0; i < n; ++i) ++counts[rng.uniform_int(0, 7)];
    for (const auto& [value, count] : counts) {
        CHECK(count > n / 8 - 600);
        CHECK(count < n / 8 + 600);
    }
}

TEST_CASE("uniform_real covers [lo, hi)") {
    Rng rng(13);
    double lo_seen = 1, hi_seen = 0;
    for (int i = 0; i < 50000; ++i) {
        const double v = rng.uniform_real(0.25, 0.75);
        CHECK(v >= 0.25);
        CHECK(v < 0.75);
        lo_seen = std::min(lo_seen, v);
        hi_seen = std::max(hi_seen, v);
    }
    CHECK(lo_seen < 0.26);
    CHECK(hi_seen > 0.74);
}

TEST_CASE("bounded always consumes exactly one draw") {
    Rng rng(5);
    rng.bounded(1);
    CHECK(rng.draw_count() == 1);
    rng.bounded(0);
    CHECK(rng.draw_count() == 2);
    rng.bounded(100);
    CHECK(rng.draw_count() == 3);
}

TEST_CASE("bounded result is in range") {
    Rng rng(17);
    for (int i = 0; i < 10000; ++i) CHECK(rng.bounded(13) < 13);
}

TEST_CASE("derived seeds differ per salt and are stable") {
    const uint64_t base = 99;
    CHECK(Rng::derive_seed(base, 0) == Rng::derive_seed(base, 0));
    std::set<uint64_t> seeds;
    for (uint64_t salt = 0; salt < 1000; ++salt)
        seeds.insert(Rng::derive_seed(base, salt));
    CHECK(seeds.size() == 1000);
}

TEST_CASE("draw count tracks every consuming call") {
    Rng rng(3);
    rng.next_u64();
    rng.uniform_real(0, 1);
    rng.uniform_int(0, 5);
    CHECK(rng.draw_count() == 3);
}
