// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Usage: acceptance <path-to-qsysid-executable> [criterion numbers...]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qsysid/baselines.hpp"
#include "qsysid/benchmark.hpp"
#include "qsysid/conditionals.hpp"
#include "qsysid/gibbs.hpp"
#include "qsysid/kernel.hpp"
#include "qsysid/samplers.hpp"
#include "qsysid/simulate.hpp"

using namespace qsysid;
namespace fs = std::filesystem;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct Outcome {
    bool pass;
    std::string detail;
};

std::string tool_path;

// Moment check: sample mean of x and x^2 against analytic values, each within
// 3 standard errors. Standard errors use the analytic variances.
struct MomentCheck {
    double s1 = 0.0, s2 = 0.0;
    std::size_t n = 0;
    void add(double x) {
        s1 += x;
        s2 += x * x;
        ++n;
    }
    bool ok(double m1, double var1, double m2, double var2) const {
        return oracle::within_se(s1 / n, m1, var1, n, 3.0) && oracle::within_se(s2 / n, m2, var2, n, 3.0);
    }
};

Outcome criterion1() {
    const std::size_t draws = 200000;
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Rng rng(101);
    int failures = 0;
    std::ostringstream where;

    for (int inst = 0; inst < 10; ++inst) {
        const double mu = -2.0 + 4.0 * unif(gen);
        const double s2 = 0.05 + 3.0 * unif(gen);
        const double s = std::sqrt(s2);
        double a = mu + s * (-4.0 + 8.0 * unif(gen));
        double b = a + s * (0.05 + 3.0 * unif(gen));
        if (inst % 3 == 1) b = inf;
        if (inst % 3 == 2) a = -inf;
        const oracle::Moments m = oracle::truncated_normal_moments(mu, s2, a, b);
        // Raw moments of the truncated normal up to order 4, by recursion on
        // E[X^k] = mu E[X^{k-1}] + s2 ((k-1) E[X^{k-2}] - (b^{k-1} f(b) - a^{k-1} f(a)))
        // with f the truncated density.
        const double al = (a - mu) / s, be = (b - mu) / s;
        double mass;
        if (al > 0.0) mass = oracle::upper_tail(al) - oracle::upper_tail(be);
        else if (be < 0.0) mass = oracle::upper_tail(-be) - oracle::upper_tail(-al);
        else mass = 1.0 - oracle::upper_tail(be) - oracle::upper_tail(-al);
        const double fa = std::isinf(a) ? 0.0 : oracle::phi(al) / (s * mass);
        const double fb = std::isinf(b) ? 0.0 : oracle::phi(be) / (s * mass);
        auto bound = [&](double x, double f, int k) { return (std::isinf(x) || f == 0.0) ? 0.0 : std::pow(x, k) * f; };
        double E[5];
        E[0] = 1.0;
        E[1] = m.mean;
        for (int k = 2; k <= 4; ++k) {
            E[k] = mu * E[k - 1] + s2 * ((k - 1) * E[k - 2] - (bound(b, fb, k - 1) - bound(a, fa, k - 1)));
        }
        MomentCheck c;
        for (std::size_t i = 0; i < draws; ++i) c.add(sample_truncated_normal(mu, s2, a, b, rng));
        if (!c.ok(E[1], E[2] - E[1] * E[1], E[2], E[4] - E[2] * E[2])) {
            ++failures;
            where << " tn#" << inst;
        }
    }

    auto gamma_moments = [](double k, double r, double (&E)[5]) {
        E[0] = 1.0;
        for (int j = 1; j <= 4; ++j) E[j] = E[j - 1] * (k + j - 1) / r;
    };

    for (int inst = 0; inst < 10; ++inst) {
        const int n = 2 + 5 * inst;
        const double beta = 0.3 + 0.065 * inst;
        Vector g(n);
        for (int i = 0; i < n; ++i) g(i) = rng.normal() * std::pow(beta, 0.5 * (i + 1));
        const double rate = g.dot(oracle::dense_inverse(oracle::tc_kernel(beta, n)) * g) / 2.0;
        double E[5];
        gamma_moments(n / 2.0, rate, E);
        MomentCheck c;
        const CholeskyFactor kf = kernel_factor(build_kernel(beta, n));
        for (std::size_t i = 0; i < draws; ++i) c.add(1.0 / sample_lambda_conditional(g, kf, rng));
        if (!c.ok(E[1], E[2] - E[1] * E[1], E[2], E[4] - E[2] * E[2])) {
            ++failures;
            where << " lambda#" << inst;
        }
    }

    for (int inst = 0; inst < 10; ++inst) {
        const int N = 2 + 40 * inst, n = 2;
        Matrix U(N, n);
        Vector z(N), g(n);
        for (int t = 0; t < N; ++t) {
            z(t) = rng.normal() * (0.3 + 0.2 * inst);
            for (int k = 0; k < n; ++k) U(t, k) = rng.normal();
        }
        for (int k = 0; k < n; ++k) g(k) = rng.normal();
        const double rate = (z - U * g).squaredNorm() / 2.0;
        double E[5];
        gamma_moments(N / 2.0, rate, E);
        MomentCheck c;
        for (std::size_t i = 0; i < draws; ++i) c.add(1.0 / sample_sigma2_conditional(z, g, U, rng));
        if (!c.ok(E[1], E[2] - E[1] * E[1], E[2], E[4] - E[2] * E[2])) {
            ++failures;
            where << " sigma2#" << inst;
        }
    }
    return {failures == 0, std::to_string(failures) + " of 30 instances outside 3 SE" + where.str()};
}

Outcome criterion2() {
    Rng rng(202);
    int bad = 0;
    double worst = 0.0;
    for (double beta : {0.5, 0.9, 0.99}) {
        for (int inst = 0; inst < 100; ++inst) {
            const int n = 1 + inst % 20;
            const int N = (inst % 3 == 0) ? std::max(1, n / 2) : n + 5 + inst % 30;
            const Matrix U = toeplitz_regressor(white_noise_input(N, rng), n);
            const double lambda = std::exp(rng.normal());
            const double sigma2 = std::exp(rng.normal() - 1.0);
            const oracle::Gaussian ref = oracle::posterior(U, lambda, beta, sigma2);
            const PosteriorGains g = compute_posterior_gains(U, lambda, beta, sigma2);
            const double eP = (g.P - ref.P).norm() / ref.P.norm();
            const double eC = ref.C.norm() > 0 ? (g.C - ref.C).norm() / ref.C.norm() : g.C.norm();
            Vector x(n);
            for (int i = 0; i < n; ++i) x(i) = rng.normal();
            const double q_ref = x.dot(oracle::dense_inverse(oracle::tc_kernel(beta, n)) * x);
            const double eQ = std::abs(kernel_quadratic_form(x, beta) - q_ref) / q_ref;
            const double e = std::max({eP, eC, eQ});
            worst = std::max(worst, e);
            if (!(e <= 1e-8)) ++bad;
        }
    }
    std::ostringstream d;
    d << bad << " of 300 instances above 1e-8, worst relative error " << worst;
    return {bad == 0, d.str()};
}

Dataset synthetic(std::uint64_t seed, Eigen::Index N, Eigen::Index n, const Quantizer& q) {
    const Rng root(seed);
    Rng sys = root.substream(0), in = root.substream(1), noise = root.substream(2);
    ImpulseResponse g = impulse_response(random_system(sys), n);
    g /= g.norm();
    return generate_dataset(g, white_noise_input(N, in), 10.0, q, noise);
}

Outcome criterion3() {
    const int N = 200, n = 20;
    int worst_instance = -1;
    double worst = 0.0;
    int outside = 0;
    double chi2 = 0.0;  // sum over instances of (M - M0) d^T P^{-1} d, chi-square with 200 dof
    for (int inst = 0; inst < 10; ++inst) {
        const std::uint64_t seed = 1001 + inst;
        const Dataset d = synthetic(seed, N, n, Quantizer::identity());
        const Matrix U = toeplitz_regressor(d.u, n);
        const double lambda = 0.5, beta = 0.8, sigma2 = *d.sigma2_true;
        ChainConfig c;
        c.order = n;
        c.iterations = 3000;
        c.burn_in = 1000;
        c.beta = beta;
        c.fixed_lambda = lambda;
        c.fixed_sigma2 = sigma2;
        c.seed = seed;
        const ChainResult r = run_chain(d, Quantizer::identity(), c);
        const oracle::Gaussian ref = oracle::posterior(U, lambda, beta, sigma2);
        const Vector mmse = ref.C * d.y;
        const Vector dev_all = r.g_hat - mmse;
        chi2 += (c.iterations - c.burn_in) * dev_all.dot(oracle::dense_inverse(ref.P) * dev_all);
        for (int k = 0; k < n; ++k) {
            const double se = std::sqrt(ref.P(k, k) / (c.iterations - c.burn_in));
            const double dev = std::abs(r.g_hat(k) - mmse(k)) / se;
            if (dev > worst) {
                worst = dev;
                worst_instance = inst;
            }
            if (dev >= 3.0) ++outside;
        }
    }
    std::ostringstream d;
    d << outside << " of 200 coordinates at or beyond 3 SE; largest deviation " << worst << " SE (instance "
      << worst_instance << "); pooled Mahalanobis statistic " << chi2 << " on 200 dof";
    return {outside == 0, d.str()};
}

struct ProtocolRun {
    std::vector<RunRecord> records;
    std::map<EstimatorId, double> medians;
    double seconds = 0.0;
};

ProtocolRun run_protocol(Eigen::Index samples, const Quantizer& q, std::uint64_t seed) {
    Protocol p;
    p.runs = 20;
    p.samples = samples;
    p.order = 50;
    p.snr = 10.0;
    p.quantizer = q;
    p.chain.iterations = 3000;
    p.chain.burn_in = 1000;
    const auto t0 = std::chrono::steady_clock::now();
    ProtocolRun out;
    out.records = run_monte_carlo(p, seed);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (EstimatorId id : kAllEstimators) out.medians[id] = summarize(out.records, id).median;
    return out;
}

const ProtocolRun& binary_protocol() {
    static const ProtocolRun r = run_protocol(500, Quantizer::binary(1.0), 51);
    return r;
}

const ProtocolRun& ceil_protocol() {
    static const ProtocolRun r = run_protocol(200, Quantizer::ceil(), 52);
    return r;
}

std::string medians_text(const ProtocolRun& r) {
    std::ostringstream s;
    s.precision(4);
    for (EstimatorId id : kAllEstimators) s << ' ' << to_string(id) << '=' << r.medians.at(id);
    s << " (" << static_cast<int>(r.seconds) << " s)";
    return s.str();
}

double median_gap(const ProtocolRun& r) {
    std::vector<double> gaps;
    for (const RunRecord& rec : r.records) {
        const auto& nq = rec.fit.at(EstimatorId::SSML_NQ);
        const auto& q = rec.fit.at(EstimatorId::SSML);
        if (nq && q) gaps.push_back(*nq - *q);
    }
    return quantile(gaps, 0.5);
}

Outcome criterion4() {
    const ProtocolRun& r = binary_protocol();
    const bool pass = r.medians.at(EstimatorId::BQGS) > r.medians.at(EstimatorId::SSML) &&
                      r.medians.at(EstimatorId::BQGS) > r.medians.at(EstimatorId::LS) && r.seconds < 1800.0;
    return {pass, "binary N=500 medians:" + medians_text(r)};
}

Outcome criterion5() {
    const ProtocolRun& c = ceil_protocol();
    const ProtocolRun& b = binary_protocol();
    const double gap_ceil = median_gap(c), gap_binary = median_gap(b);
    const bool pass = c.medians.at(EstimatorId::BQGS) >= c.medians.at(EstimatorId::SSML) && gap_ceil < gap_binary &&
                      c.seconds < 900.0;
    std::ostringstream d;
    d << "ceil N=200 medians:" << medians_text(c) << "; median SSML_NQ-SSML gap ceil " << gap_ceil << " vs binary "
      << gap_binary;
    return {pass, d.str()};
}

Outcome criterion6() {
    bool pass = true;
    std::ostringstream d;
    for (const ProtocolRun* r : {&binary_protocol(), &ceil_protocol()}) {
        const auto& m = r->medians;
        pass = pass && m.at(EstimatorId::SSML_NQ) >= m.at(EstimatorId::SSML) &&
               m.at(EstimatorId::LS_NQ) >= m.at(EstimatorId::LS);
        d << (r == &binary_protocol() ? "binary" : "; ceil") << " SSML_NQ " << m.at(EstimatorId::SSML_NQ)
          << " vs SSML " << m.at(EstimatorId::SSML) << ", LS_NQ " << m.at(EstimatorId::LS_NQ) << " vs LS "
          << m.at(EstimatorId::LS);
    }
    return {pass, d.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

int shell(const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); }

Outcome criterion7() {
    if (tool_path.empty()) return {false, "path to the qsysid executable not given"};
    const fs::path dir = fs::temp_directory_path() / ("qsysid_acceptance_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    const std::string q = "\"" + tool_path + "\"";
    const std::string d = (dir / "data.csv").string();
    std::vector<std::string> problems;
    if (shell(q + " simulate --quantizer binary:1 --samples 300 --order 30 --seed 7 --out " + d) != 0) {
        problems.push_back("simulate failed");
    }
    auto identify = [&](const std::string& out, int threads) {
        return shell(q + " identify --data " + d + " --quantizer binary:1 --order 30 --iters 1500 --burnin 500" +
                     " --seed 9 --threads " + std::to_string(threads) + " --out " + (dir / out).string());
    };
    auto benchmark = [&](const std::string& out, int threads) {
        return shell(q + " benchmark --runs 6 --samples 150 --order 20 --iters 400 --burnin 100 --seed 3" +
                     " --quantizer binary:1 --threads " + std::to_string(threads) + " --out " + (dir / out).string());
    };
    if (identify("g1.csv", 1) || identify("g2.csv", 1) || identify("g4.csv", 4)) problems.push_back("identify failed");
    if (benchmark("b1", 1) || benchmark("b2", 1) || benchmark("b4", 4)) problems.push_back("benchmark failed");
    if (problems.empty()) {
        const std::string g = slurp(dir / "g1.csv");
        if (g.empty() || g != slurp(dir / "g2.csv") || g != slurp(dir / "g4.csv")) {
            problems.push_back("identify outputs differ");
        }
        for (const char* f : {"results.csv", "summary.json"}) {
            const std::string a = slurp(dir / "b1" / f);
            if (a.empty() || a != slurp(dir / "b2" / f) || a != slurp(dir / "b4" / f)) {
                problems.push_back(std::string("benchmark ") + f + " differs");
            }
        }
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    if (problems.empty()) return {true, "identify and benchmark outputs byte-identical across repeats and 1/4 threads"};
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    return {false, msg};
}

Outcome criterion8() {
    ImpulseResponse g(2), zero = ImpulseResponse::Zero(2), mean = ImpulseResponse::Constant(2, 0.5);
    g << 1.0, 0.0;
    const double perfect = fit_score(g, g), trivial = fit_score(g, mean), worked = fit_score(g, zero);
    const bool pass = perfect == 1.0 && trivial == 0.0 && std::abs(worked - (-0.4142)) <= 1e-4;
    std::ostringstream d;
    d.precision(10);
    d << "perfect " << perfect << ", constant-mean " << trivial << ", worked case " << worked;
    return {pass, d.str()};
}

Outcome criterion9() {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> nd(0.0, 4.0);
    const Quantizer qs[] = {Quantizer::binary(1.0), Quantizer::ceil(), Quantizer::parse("custom:-2,-0.5,0,1.5,3:-9,-4,0,2,5,11"),
                            Quantizer::identity()};
    long violations = 0;
    for (const Quantizer& q : qs) {
        for (int i = 0; i < 100000; ++i) violations += roundtrip_check(q, nd(gen)) ? 0 : 1;
    }
    return {violations == 0, std::to_string(violations) + " violations over 4 kinds x 1e5 draws"};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (!a.empty() && std::isdigit(static_cast<unsigned char>(a[0]))) {
            selected.insert(std::stoi(a));
        } else {
            tool_path = a;
        }
    }
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"conditional-law moments", criterion1},
        {"linear-algebra oracle equivalence", criterion2},
        {"Gibbs reduction to the posterior mean", criterion3},
        {"binary protocol ordering", criterion4},
        {"ceil protocol ordering and gap", criterion5},
        {"oracle dominance", criterion6},
        {"determinism", criterion7},
        {"FIT identities", criterion8},
        {"quantizer roundtrip", criterion9},
    };
    // Wall-clock budgets in seconds; protocols 4 and 5 check their own.
    const double budgets[] = {30.0, 10.0, 120.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int number = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(number)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.pass && budgets[i] > 0.0 && secs > budgets[i]) {
            o.pass = false;
            o.detail += "; over the " + std::to_string(static_cast<int>(budgets[i])) + " s budget";
        }
        std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", number,
                    criteria[i].first.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
