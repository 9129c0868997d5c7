#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "qsysid/benchmark.hpp"
#include "qsysid/errors.hpp"

using namespace qsysid;

TEST_CASE("fit score identities") {
    ImpulseResponse g(2), zero = ImpulseResponse::Zero(2);
    g << 1.0, 0.0;
    CHECK(fit_score(g, g) == 1.0);
    CHECK(fit_score(g, ImpulseResponse::Constant(2, 0.5)) == 0.0);
    CHECK(fit_score(g, zero) == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(fit_score(g, zero) - (-0.4142)) < 1e-4);

    ImpulseResponse h(5);
    h << 0.3, -1.0, 2.0, 0.7, 0.1;
    const ImpulseResponse m = ImpulseResponse::Constant(5, h.mean());
    for (double a : {0.0, 0.25, 0.5, 0.9, 1.0}) {
        CHECK(fit_score(h, a * h + (1.0 - a) * m) == doctest::Approx(a).epsilon(1e-12));
    }
    CHECK_THROWS_AS(fit_score(ImpulseResponse::Constant(3, 2.0), zero.head(2)), DomainError);
    CHECK_THROWS_AS(fit_score(ImpulseResponse::Constant(3, 2.0), ImpulseResponse::Zero(3)), DegenerateError);
}

TEST_CASE("estimator names") {
    for (EstimatorId id : kAllEstimators) CHECK(parse_estimator(to_string(id)) == id);
    CHECK(parse_estimator("SSML-NQ") == EstimatorId::SSML_NQ);
    CHECK_THROWS_AS(parse_estimator("PEM"), DomainError);
}

TEST_CASE("summaries") {
    std::vector<RunRecord> recs(4);
    const double fits[] = {0.2, 0.6, 0.4};
    for (int i = 0; i < 3; ++i) {
        recs[i].run_index = i;
        recs[i].fit[EstimatorId::LS] = fits[i];
    }
    recs[3].run_index = 3;
    recs[3].fit[EstimatorId::LS] = std::nullopt;
    recs[3].errors[EstimatorId::LS] = "boom";
    const Summary s = summarize(recs, EstimatorId::LS);
    CHECK(s.median == doctest::Approx(0.4));
    CHECK(s.q25 == doctest::Approx(0.3));
    CHECK(s.q75 == doctest::Approx(0.5));
    CHECK(s.iqr == doctest::Approx(0.2));
    CHECK(s.successes == 3);
    CHECK(s.failures == 1);

    const std::vector<RunRecord> single(recs.begin(), recs.begin() + 1);
    const Summary one = summarize(single, EstimatorId::LS);
    CHECK(one.q25 == 0.2);
    CHECK(one.median == 0.2);
    CHECK(one.q75 == 0.2);
    CHECK_THROWS_AS(summarize(recs, EstimatorId::BQGS), InsufficientDataError);
}

TEST_CASE("high SNR oracle least squares is near perfect") {
    Protocol p;
    p.runs = 1;
    p.samples = 200;
    p.snr = 1e9;
    p.estimators = {EstimatorId::LS_NQ};
    const auto recs = run_monte_carlo(p, 5);
    REQUIRE(recs.size() == 1);
    REQUIRE(recs[0].fit.at(EstimatorId::LS_NQ).has_value());
    CHECK(*recs[0].fit.at(EstimatorId::LS_NQ) > 0.999);
}

TEST_CASE("monte carlo is deterministic and independent of thread count") {
    Protocol p;
    p.runs = 4;
    p.samples = 120;
    p.order = 15;
    p.chain.iterations = 150;
    p.chain.burn_in = 50;
    p.threads = 1;
    const auto a = run_monte_carlo(p, 11);
    p.threads = 3;
    const auto b = run_monte_carlo(p, 11);
    REQUIRE(a.size() == 4);
    std::ostringstream sa, sb;
    write_results_csv(sa, a, p.estimators, false);
    write_results_csv(sb, b, p.estimators, false);
    CHECK(sa.str() == sb.str());
    for (int i = 0; i < 4; ++i) {
        CHECK(a[i].run_index == i);
        CHECK(a[i].seed == run_seed(11, i));
        for (EstimatorId id : kAllEstimators) {
            REQUIRE(a[i].fit.at(id).has_value());
            CHECK(*a[i].fit.at(id) <= 1.0);
        }
        CHECK(a[i].beta_used.has_value());
    }
    CHECK(summary_json(a, p.estimators).dump() == summary_json(b, p.estimators).dump());
}

TEST_CASE("results csv layout") {
    RunRecord r;
    r.run_index = 0;
    r.seed = 9;
    r.fit[EstimatorId::LS] = 0.5;
    r.fit[EstimatorId::BQGS] = std::nullopt;
    r.wall_times[EstimatorId::LS] = 0.25;
    r.beta_used = 0.8;
    std::ostringstream s;
    write_results_csv(s, {r}, {EstimatorId::BQGS, EstimatorId::LS}, false);
    CHECK(s.str() == "run,seed,estimator,fit,wall_time_s,beta_used\n0,9,BQGS,,,0.80000000000000004\n0,9,LS,0.5,,0.80000000000000004\n");
    std::ostringstream t;
    write_results_csv(t, {r}, {EstimatorId::LS}, true);
    CHECK(t.str() == "run,seed,estimator,fit,wall_time_s,beta_used\n0,9,LS,0.5,0.25,0.80000000000000004\n");
}
