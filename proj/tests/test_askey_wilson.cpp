#include "doctest.h"

#include <cmath>

#include "sixv/askey_wilson.hpp"
#include "sixv/exact.hpp"
#include "sixv/mpa.hpp"

using namespace sixv;

namespace {

const StripParams kRun{0.5, 0.3, 0.4, 0.2, 0.2, 0.5};
// fan-region set in the low-density phase (C > sqrt(r))
const StripParams kFanLD{0.5, 0.7, 0.4, 0.1, 0.2, 0.5};
// maximal-current set
const StripParams kFanMC{0.7, 0.6, 0.2, 0.25, 0.2, 0.5};
// high-density set (A = 6.514, AC = 0.45)
const StripParams kFanHD{0.8, 0.12, 0.05, 0.3, 0.2, 0.5};

} // namespace

TEST_CASE("q-Pochhammer finite and infinite products") {
    CHECK(qpochhammer(0.7, 0.3, 0) == 1.0);
    CHECK(qpochhammer(0.5, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    // independent oracle: partial products with the certified tail cutoff
    double oracle = 1, zq = 0.5;
    for (int j = 0; j < 200; ++j) {
        oracle *= 1 - zq;
        zq *= 0.5;
    }
    CHECK(qpochhammer(0.5, 0.5) == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(qpochhammer(0.5, 0.5) == doctest::Approx(0.28878809508660242).epsilon(1e-13));
    // finite product agrees with the definition
    CHECK(qpochhammer(0.5, 0.5, 2) == doctest::Approx(0.5 * 0.75).epsilon(1e-15));
}

TEST_CASE("atom-free measure integrates to unit mass") {
    const AWMeasure m = aw_measure(0, 0, 0, 0, 0.4);
    CHECK(m.atoms.empty());
    CHECK(total_mass(m) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("measure (2,0,0,0,0.4) carries exactly one atom at 1.25") {
    const AWMeasure m = aw_measure(2, 0, 0, 0, 0.4);
    REQUIRE(m.atoms.size() == 1);
    CHECK(m.atoms[0].y == doctest::Approx(1.25).epsilon(1e-15));
    // p(y_0) = (a^-2; q)_inf, frozen at high precision
    CHECK(m.atoms[0].mass == doctest::Approx(0.63085129743320599).epsilon(1e-12));
    CHECK(total_mass(m) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("inadmissible parameter products are rejected") {
    CHECK_THROWS_AS(aw_measure(1.2, 0, 0.9, 0, 0.4), precondition_error);     // ac >= 1
    CHECK_THROWS_AS(aw_measure(1.5, 1.2, 0.8, 0.7, 0.4), precondition_error); // abcd >= 1
}

TEST_CASE("unit mass, nonnegative decreasing atom masses across a parameter grid") {
    struct GridPoint {
        double pa, pb, pc, pd, q;
    };
    // covers 0, 1 and 2 atoms, negative parameters and two generating chis
    const GridPoint grid[] = {
        {0, 0, 0, 0, 0.4},        {0.5, -0.3, 0.2, -0.1, 0.4}, {2, 0, 0, 0, 0.4},
        {2, -0.4, 0.3, 0, 0.5},   {3, 0, 0, 0, 0.5},           {3, -0.2, 0.1, -0.1, 0.5},
        {1.6, 0, 0, -1.4, 0.3},   {-2.2, 0, 0.3, 0, 0.45},     {1.3, -0.8, 0.4, -0.3, 0.35},
        {4, 0, 0.2, -0.15, 0.55},
    };
    int with_zero = 0, with_one = 0, with_two = 0;
    for (const auto& g : grid) {
        const AWMeasure m = aw_measure(g.pa, g.pb, g.pc, g.pd, g.q);
        if (m.atoms.empty()) ++with_zero;
        if (m.atoms.size() == 1) ++with_one;
        if (m.atoms.size() >= 2) ++with_two;
        double prev = 1e300;
        double last_chi = 0;
        for (const AWAtom& a : m.atoms) {
            CHECK(a.mass >= 0.0);
            CHECK(std::fabs(a.y) >= 1.0);
            if (a.chi == last_chi) CHECK(a.mass <= prev);
            prev = a.mass;
            last_chi = a.chi;
        }
        CHECK(total_mass(m) == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK(with_zero > 0);
    CHECK(with_one > 0);
    CHECK(with_two > 0);
}

TEST_CASE("tilted measures put every atom above -(1+r)/(2 sqrt r)") {
    for (const StripParams& sp : {kRun, kFanLD, kFanMC, kFanHD}) {
        const DerivedParams dp = derive_params(sp);
        if (!(dp.A * dp.C < 1)) continue;
        const AWMeasure m = aw_measure(dp.tA, dp.tB, dp.tC, dp.tD, dp.q);
        const double bound = -(1 + dp.r) / (2 * std::sqrt(dp.r));
        for (const AWAtom& a : m.atoms) {
            CHECK(a.y > bound);
            CHECK(1 + dp.r + 2 * std::sqrt(dp.r) * a.y > 0.0);
        }
    }
}

TEST_CASE("expectation of the constant integrand is one; site ratios stay above inf g") {
    const DerivedParams dp = derive_params(kFanLD);
    const AWMeasure m = aw_measure(dp.tA, dp.tB, dp.tC, dp.tD, dp.q);
    CHECK(aw_expectation(m, 0, dp.r, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
    const double infg = 1 + dp.r - 2 * std::sqrt(dp.r); // minimum over [-1,1]
    double prev = 1.0;
    for (int N = 1; N <= 6; ++N) {
        const double cur = aw_expectation(m, N, dp.r, 1.0);
        CHECK(cur / prev >= infg - 1e-12);
        prev = cur;
    }
}

TEST_CASE("quadrature expectation equals the algebraic grand value, N <= 20") {
    for (const StripParams& sp : {kFanLD, kFanMC}) {
        const DerivedParams dp = derive_params(sp);
        DehpEngine<double> eng(dp.q, dp.alpha, dp.beta, dp.gamma, dp.delta);
        for (double t : {0.5, 1.0, 2.0}) {
            const AWMeasure m = aw_measure(dp.tA * std::sqrt(t), dp.tB * std::sqrt(t),
                                           dp.tC / std::sqrt(t), dp.tD / std::sqrt(t), dp.q);
            for (int N : {1, 2, 5, 10, 20}) {
                const double lhs = aw_expectation(m, N, dp.r, t, 1e-12);
                const double rhs =
                    std::pow(1 - dp.q, N) * dehp_grand_value<double>(N, dp.r * t, eng);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("partition function: quadrature route equals the word-algebra route") {
    for (const StripParams& sp : {kFanLD, kFanMC, kFanHD})
        for (double t : {0.5, 1.0, 2.0})
            for (int N : {1, 3, 8, 15, 20}) {
                const double aw = log_partition_aw(N, t, sp);
                const double alg = log_partition_mpa(N, t, sp);
                CHECK(aw == doctest::Approx(alg).epsilon(1e-9));
            }
}

TEST_CASE("Z_1(t) is affine in t with positive slope") {
    const StripParams sp = kFanMC;
    const double z05 = partition_Z(1, 0.5, sp);
    const double z10 = partition_Z(1, 1.0, sp);
    const double z15 = partition_Z(1, 1.5, sp);
    CHECK(z10 - z05 > 0);
    CHECK(z15 - 2 * z10 + z05 == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("shock-region partition evaluation is rejected") {
    CHECK_THROWS_AS(partition_Z(4, 1.0, kRun), precondition_error);
}

TEST_CASE("mean density matches the exact site average at small N") {
    for (const StripParams& sp : {kFanLD, kFanMC, kFanHD})
        for (int N = 1; N <= 5; ++N) {
            const double viaAw = mean_density(N, sp);
            const double viaExact = mean_density_exact(N, sp);
            CHECK(std::fabs(viaAw - viaExact) < 1e-7);
        }
}

TEST_CASE("shock-region mean density falls back to the exact route") {
    CHECK(mean_density(1, kRun) == doctest::Approx(9.0 / 19.0).epsilon(1e-12));
    CHECK_THROWS_AS(mean_density(200, kRun), precondition_error);
}

TEST_CASE("phase classification and limiting densities") {
    SUBCASE("maximal current") {
        const PhaseReport rep = phase_limit_from(0.5, 0.5, 0.625);
        CHECK(rep.region == Region::Fan);
        CHECK(rep.phase == Phase::MaximalCurrent);
        CHECK(*rep.limit_density == doctest::Approx(0.44151844011225289).epsilon(1e-13));
    }
    SUBCASE("high density") {
        const PhaseReport rep = phase_limit_from(2.0, 0.3, 0.625);
        CHECK(rep.phase == Phase::HighDensity);
        CHECK(*rep.limit_density == doctest::Approx(1.25 / 2.25).epsilon(1e-13));
    }
    SUBCASE("running example sits in the shock region") {
        const PhaseReport rep = phase_limit(kRun);
        CHECK(rep.region == Region::Shock);
        CHECK(!rep.limit_density.has_value());
    }
    SUBCASE("points on a phase boundary report both candidates") {
        const double r = 0.625;
        const PhaseReport rep = phase_limit_from(1.0 / std::sqrt(r), 0.3, r);
        CHECK(rep.phase == Phase::Boundary);
        REQUIRE(rep.alt_limit.has_value());
        CHECK(*rep.limit_density == doctest::Approx(*rep.alt_limit).epsilon(1e-12));
    }
}

TEST_CASE("technical margin flags parameters on negative q-powers") {
    CHECK(technical_margin_one(2.5, 0.4) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(technical_margin_one(2.0, 0.4) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("finite-N densities trend monotonically to the phase limit") {
    // quick version of the asymptotic check: N up to 200 here
    for (const StripParams& sp : {kFanMC, kFanHD}) {
        const PhaseReport rep = phase_limit(sp);
        REQUIRE(rep.limit_density.has_value());
        double prev_gap = 1e9;
        for (int N : {25, 50, 100, 200}) {
            const double gap = std::fabs(mean_density(N, sp) - *rep.limit_density);
            CHECK(gap < prev_gap);
            prev_gap = gap;
        }
        CHECK(prev_gap < 0.05);
    }
}

TEST_CASE("partition mass splits: atoms dominate in HD, continuum in MC") {
    const DerivedParams hd = derive_params(kFanHD);
    const DerivedParams mc = derive_params(kFanMC);
    const int sizes[] = {50, 200, 800};
    const double floors[] = {0.9, 0.99, 0.999};
    for (int i = 0; i < 3; ++i) {
        const PartitionParts ph = partition_parts(hd, sizes[i], 1.0);
        const PartitionParts pm = partition_parts(mc, sizes[i], 1.0);
        CHECK(ph.largest_atom_share() > floors[i]);
        CHECK(pm.continuous_share() > floors[i]);
    }
}
