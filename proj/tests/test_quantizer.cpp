#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qsysid/errors.hpp"
#include "qsysid/quantizer.hpp"

using namespace qsysid;

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("binary quantizer") {
    const Quantizer q = Quantizer::binary(1.0);
    CHECK(q.quantize(1.3) == 1.0);
    CHECK(q.quantize(0.2) == -1.0);
    CHECK(q.quantize(1.0) == 1.0);
    CHECK(q.quantize(std::nextafter(1.0, 0.0)) == -1.0);

    const LevelInterval lo = q.level_interval(-1.0);
    CHECK(lo.lower == -inf);
    CHECK(lo.upper == 1.0);
    CHECK_FALSE(lo.upper_closed);
    CHECK_FALSE(lo.contains(1.0));
    const LevelInterval hi = q.level_interval(1.0);
    CHECK(hi.lower == 1.0);
    CHECK(hi.lower_closed);
    CHECK(hi.contains(1.0));
    CHECK_THROWS_AS(q.level_interval(0.0), InvalidLevelError);
    CHECK_FALSE(q.warning().has_value());
    CHECK(roundtrip_check(q, 0.99));
}

TEST_CASE("binary threshold at zero warns but works") {
    const Quantizer q = Quantizer::binary(0.0);
    REQUIRE(q.warning().has_value());
    CHECK(q.quantize(0.5) == 1.0);
}

TEST_CASE("ceil quantizer") {
    const Quantizer q = Quantizer::ceil();
    CHECK(q.quantize(2.3) == 3.0);
    CHECK(q.quantize(3.0) == 3.0);
    CHECK(q.quantize(-4.2) == -4.0);
    const LevelInterval i = q.level_interval(3.0);
    CHECK(i.lower == 2.0);
    CHECK(i.upper == 3.0);
    CHECK_FALSE(i.contains(2.0));
    CHECK(i.contains(3.0));
    CHECK_THROWS_AS(q.level_interval(2.5), InvalidLevelError);
    CHECK(roundtrip_check(q, -4.2));
}

TEST_CASE("custom quantizer") {
    const Quantizer q = Quantizer::custom({-inf, 0.0, 2.0, inf}, {-5.0, 5.0, 9.0});
    CHECK(q.quantize(-1.0) == -5.0);
    CHECK(q.quantize(0.0) == -5.0);
    CHECK(q.quantize(1.0) == 5.0);
    CHECK(q.quantize(2.0) == 5.0);
    CHECK(q.quantize(2.5) == 9.0);
    const LevelInterval i = q.level_interval(5.0);
    CHECK(i.lower == 0.0);
    CHECK(i.upper == 2.0);
    CHECK_THROWS_AS(q.level_interval(7.0), InvalidLevelError);

    CHECK_THROWS_AS(Quantizer::custom({-inf, 0.0, 2.0, inf}, {-5.0, 5.0}), DomainError);
    CHECK_THROWS_AS(Quantizer::custom({-inf, 1.0, 1.0, inf}, {1.0, 2.0, 3.0}), DomainError);
    CHECK_THROWS_AS(Quantizer::custom({-inf, 1.0, inf}, {2.0, 2.0}), DomainError);
}

TEST_CASE("custom quantizer with finite outer thresholds") {
    const Quantizer q = Quantizer::custom({-1.0, 0.0, 1.0}, {0.0, 1.0});
    CHECK(q.quantize(0.5) == 1.0);
    CHECK_THROWS_AS(q.quantize(3.0), OutOfRangeError);
    CHECK_THROWS_AS(q.quantize(-1.0), OutOfRangeError);
    CHECK_THROWS_AS(roundtrip_check(q, 3.0), OutOfRangeError);
}

TEST_CASE("text form round-trips") {
    for (const char* text : {"binary:1", "binary:-0.25", "ceil", "identity", "custom:0,2:-5,5,9"}) {
        const Quantizer q = Quantizer::parse(text);
        const Quantizer back = Quantizer::parse(q.to_string());
        CHECK(back.to_string() == q.to_string());
        CHECK(back.kind() == q.kind());
    }
    const Quantizer c = Quantizer::parse("custom:0,2:-5,5,9");
    CHECK(c.quantize(1.0) == 5.0);
    const Quantizer b = Quantizer::parse("binary:0.1");
    CHECK(Quantizer::parse(b.to_string()).threshold() == 0.1);
    for (const char* bad : {"", "binary", "binary:x", "floor", "custom:0:1", "custom:1,0:1,2,3", "ceil:3"}) {
        INFO(bad);
        CHECK_THROWS_AS(Quantizer::parse(bad), DomainError);
    }
}

TEST_CASE("roundtrip and monotonicity on random inputs") {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> nd(0.0, 3.0);
    const Quantizer qs[] = {Quantizer::binary(1.0), Quantizer::ceil(),
                            Quantizer::custom({-inf, -1.0, 0.5, 4.0, inf}, {10.0, -3.0, 0.0, 7.0})};
    for (const Quantizer& q : qs) {
        std::vector<double> xs(20000);
        for (double& x : xs) x = nd(gen);
        int violations = 0;
        for (double x : xs) violations += roundtrip_check(q, x) ? 0 : 1;
        CHECK(violations == 0);
        std::sort(xs.begin(), xs.end());
        for (std::size_t i = 1; i < xs.size(); ++i) REQUIRE(q.ordinal(xs[i - 1]) <= q.ordinal(xs[i]));
    }
}
