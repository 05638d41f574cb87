#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "asir/errors.hpp"
#include "asir/sir.hpp"

using namespace asir;

namespace {

SirParams make_params(double alpha, double beta, double n, double s0, double i0, double r0,
                      std::size_t horizon) {
    SirParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.n_total = n;
    p.s0 = s0;
    p.i0 = i0;
    p.r0 = r0;
    p.horizon = horizon;
    return p;
}

}  // namespace

TEST_CASE("unit step reproduces the hand-computed example") {
    const SirParams p = make_params(0.3, 0.1, 1000, 990, 10, 0, 1);
    const SirState next = euler_unit_step({990, 10, 0}, p);
    CHECK(next.s == doctest::Approx(987.03).epsilon(1e-12));
    CHECK(next.i == doctest::Approx(11.97).epsilon(1e-12));
    CHECK(next.r == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unit step fixed points and extremes") {
    const SirParams no_infected = make_params(0.7, 0.3, 1000, 1000, 0, 0, 1);
    const SirState same = euler_unit_step({1000, 0, 0}, no_infected);
    CHECK(same.s == 1000.0);
    CHECK(same.i == 0.0);
    CHECK(same.r == 0.0);

    const SirParams full_recovery = make_params(0.5, 1.0, 100, 0, 100, 0, 1);
    const SirState recovered = euler_unit_step({0, 100, 0}, full_recovery);
    CHECK(recovered.s == 0.0);
    CHECK(recovered.i == 0.0);
    CHECK(recovered.r == 100.0);
}

TEST_CASE("unit step rejects configurations that leave the simplex") {
    // alpha * i / N > 1 drains more susceptibles than exist.
    const SirParams p = make_params(2.0, 0.1, 1000, 100, 900, 0, 5);
    CHECK_THROWS_AS(euler_unit_step({100, 900, 0}, p, 1), NegativeCompartment);
    try {
        simulate_sir_euler(p);
        FAIL("expected NegativeCompartment");
    } catch (const NegativeCompartment& error) {
        CHECK(error.timestamp == 1);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(make_params(0.4, 1.5, 100, 99, 1, 0, 10).validate(), Error);
    CHECK_THROWS_AS(make_params(-0.1, 0.5, 100, 99, 1, 0, 10).validate(), Error);
    CHECK_THROWS_AS(make_params(0.4, 0.1, 100, 90, 1, 0, 10).validate(), Error);
    CHECK_THROWS_AS(make_params(0.4, 0.1, 100, 99, 1, 0, 0).validate(), Error);
    CHECK_NOTHROW(make_params(0.4, 0.1, 100, 99, 1, 0, 10).validate());
}

TEST_CASE("euler curve equals the independently recomputed recurrence") {
    const SirParams p = make_params(0.4, 0.1, 300, 297, 3, 0, 100);
    const SirCurve curve = simulate_sir_euler(p);
    REQUIRE(curve.s.size() == 101);

    double s = p.s0, i = p.i0, r = p.r0;
    CHECK(curve.s[0] == s);
    CHECK(curve.i[0] == i);
    CHECK(curve.r[0] == r);
    for (std::size_t t = 1; t <= p.horizon; ++t) {
        const double infections = (p.alpha / p.n_total) * s * i;
        const double recoveries = p.beta * i;
        s = s - infections;
        i = i + infections - recoveries;
        r = r + recoveries;
        CHECK(curve.s[t] == s);
        CHECK(curve.i[t] == i);
        CHECK(curve.r[t] == r);
    }
}

TEST_CASE("euler curve degenerate parameter regimes") {
    const SirCurve no_transmission = simulate_sir_euler(make_params(0.0, 0.3, 100, 70, 30, 0, 50));
    for (double s : no_transmission.s) CHECK(s == 70.0);

    const SirCurve no_recovery = simulate_sir_euler(make_params(0.5, 0.0, 100, 70, 30, 0, 50));
    for (double r : no_recovery.r) CHECK(r == 0.0);
    for (std::size_t t = 1; t < no_recovery.s.size(); ++t)
        CHECK(no_recovery.s[t] < no_recovery.s[t - 1]);  // s*i stays positive here
}

TEST_CASE("both integrators conserve the population and keep monotone S and R") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int trial = 0; trial < 25; ++trial) {
        const double n = 50.0 + 1000.0 * unit(rng);
        const double i0 = n * unit(rng) * 0.5;
        const double r0 = (n - i0) * unit(rng) * 0.2;
        const double s0 = n - i0 - r0;
        const SirParams p = make_params(unit(rng), unit(rng), n, s0, i0, r0, 60);

        for (const SirCurve& curve :
             {simulate_sir_euler(p), simulate_sir_rk4(p, 1), simulate_sir_rk4(p, 50)}) {
            for (std::size_t t = 0; t < curve.s.size(); ++t) {
                CHECK(std::abs(curve.s[t] + curve.i[t] + curve.r[t] - n) <= 1e-9);
                CHECK(curve.s[t] >= 0.0);
                CHECK(curve.i[t] >= -1e-12);
                CHECK(curve.r[t] >= 0.0);
                if (t > 0) {
                    CHECK(curve.s[t] <= curve.s[t - 1] + 1e-12);
                    CHECK(curve.r[t] >= curve.r[t - 1] - 1e-12);
                }
            }
        }
    }
}

TEST_CASE("rk4 is constant at the disease-free equilibrium") {
    const SirCurve flat = simulate_sir_rk4(make_params(0.0, 0.0, 100, 60, 40, 0, 30), 10);
    for (std::size_t t = 0; t < flat.s.size(); ++t) {
        CHECK(flat.s[t] == 60.0);
        CHECK(flat.i[t] == 40.0);
    }

    const SirCurve no_infected = simulate_sir_rk4(make_params(0.9, 0.2, 100, 100, 0, 0, 30), 10);
    for (double i : no_infected.i) CHECK(i == 0.0);
    for (double s : no_infected.s) CHECK(s == 100.0);
}

TEST_CASE("rk4 self-converges as substeps grow") {
    const SirParams p = make_params(0.4, 0.1, 300, 297, 3, 0, 100);
    const SirCurve reference = simulate_sir_rk4(p, 512);

    const auto max_gap = [&](const SirCurve& curve) {
        double gap = 0.0;
        for (std::size_t t = 0; t < curve.s.size(); ++t) {
            gap = std::max(gap, std::abs(curve.s[t] - reference.s[t]));
            gap = std::max(gap, std::abs(curve.i[t] - reference.i[t]));
            gap = std::max(gap, std::abs(curve.r[t] - reference.r[t]));
        }
        return gap;
    };

    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t substeps : {1u, 2u, 4u, 8u, 16u}) {
        const double gap = max_gap(simulate_sir_rk4(p, substeps));
        CHECK(gap < previous);
        previous = gap;
    }
    CHECK(previous < 1e-6);
}

TEST_CASE("euler and rk4 disagree by the expected discretisation gap") {
    // The unit-step scheme is the equivalence reference; rk4 tracks the
    // continuous dynamics, so the curves must visibly differ at the peak of
    // a non-trivial epidemic.
    const SirParams p = make_params(0.4, 0.1, 300, 297, 3, 0, 100);
    const SirCurve euler = simulate_sir_euler(p);
    const SirCurve rk4 = simulate_sir_rk4(p, 100);
    double gap = 0.0;
    for (std::size_t t = 0; t < euler.i.size(); ++t)
        gap = std::max(gap, std::abs(euler.i[t] - rk4.i[t]));
    CHECK(gap > 1.0);
}

TEST_CASE("csv export carries full precision") {
    const SirParams p = make_params(0.4, 0.1, 300, 297, 3, 0, 5);
    const SirCurve curve = simulate_sir_euler(p);
    std::ostringstream out;
    write_sir_csv(curve, out);

    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,S,I,R");
    for (std::size_t t = 0; t <= 5; ++t) {
        std::string line;
        REQUIRE(std::getline(in, line));
        std::size_t timestamp;
        double s, i, r;
        REQUIRE(std::sscanf(line.c_str(), "%zu,%lf,%lf,%lf", &timestamp, &s, &i, &r) == 4);
        CHECK(timestamp == t);
        CHECK(s == curve.s[t]);  // 17 significant digits round-trip exactly
        CHECK(i == curve.i[t]);
        CHECK(r == curve.r[t]);
    }
}
