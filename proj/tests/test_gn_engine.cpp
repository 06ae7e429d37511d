#include <catch_amalgamated.hpp>
#include <random>

#include "support.hpp"

using namespace hybridgn;
using namespace testing_support;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("coherent and span-scaled agree for one span") {
  const QuadratureSettings q;
  const auto coh = nl_coefficient(hybrid_span(), long_haul_system(1), Coherent{}, q);
  for (double eps : {0.0, 0.15, 0.7}) {
    CHECK(nl_coefficient(hybrid_span(), long_haul_system(1), SpanScaled{eps}, q).gamma == coh.gamma);
  }
}

TEST_CASE("incoherent accumulation is linear in span count") {
  const QuadratureSettings q;
  const auto a = nl_coefficient(hybrid_span(), long_haul_system(30), SpanScaled{0.0}, q).gamma;
  const auto b = nl_coefficient(hybrid_span(), long_haul_system(60), SpanScaled{0.0}, q).gamma;
  CHECK(b.value() / a.value() == 2.0);
  CHECK_THROWS_AS(nl_coefficient(hybrid_span(), long_haul_system(2), SpanScaled{-0.1}, q), std::invalid_argument);
}

TEST_CASE("single-fiber spans scale with gamma squared") {
  const QuadratureSettings q;
  const auto s = nl_coefficient(SpanPlan({smf(100)}), long_haul_system(), Coherent{}, q).gamma.value();
  const auto qs = nl_coefficient(SpanPlan({qsmf(100)}), long_haul_system(), Coherent{}, q).gamma.value();
  const double expected = (kGammaSmf / kGammaQsmf) * (kGammaSmf / kGammaQsmf);
  CHECK_THAT(s / qs, WithinRel(expected, 0.05));
}

TEST_CASE("coherent lies between the incoherent and partially coherent models") {
  const QuadratureSettings q;
  const auto coh = nl_coefficient(hybrid_span(), long_haul_system(), Coherent{}, q).gamma;
  const auto inc = nl_coefficient(hybrid_span(), long_haul_system(), SpanScaled{0.0}, q).gamma;
  const auto pc = nl_coefficient(hybrid_span(), long_haul_system(), SpanScaled{0.3}, q).gamma;
  CHECK(inc < coh);
  CHECK(coh < pc);
}

TEST_CASE("gamma-tilde is positive and continuous in segment length") {
  const QuadratureSettings q;
  auto g = [&](double km) {
    return nl_coefficient(SpanPlan({qsmf(km), smf(100 - km)}), long_haul_system(4), Coherent{}, q).gamma.value();
  };
  const double g0 = g(40);
  CHECK(g0 > 0);
  const double d1 = (g(40 + 1e-1) - g0) / 1e-1;
  const double d2 = (g(40 + 1e-2) - g0) / 1e-2;
  const double d3 = (g(40 + 1e-3) - g0) / 1e-3;
  CHECK_THAT(d2, WithinRel(d1, 0.05));
  CHECK_THAT(d3, WithinRel(d2, 0.05));
}

TEST_CASE("ASE coefficient") {
  const auto reference = ase_coefficient(hybrid_span(), long_haul_system());
  CHECK_THAT(reference.value(), WithinRel(2.9494239414354572002e-5, 1e-12));
  CHECK(ase_coefficient(SpanPlan({fiber("ideal", 100, 0, -26.6, 1)}), long_haul_system()).value() == 0.0);
  CHECK_THAT(ase_coefficient(hybrid_span(), long_haul_system(120)).value(), WithinRel(2 * reference.value(), 1e-15));
}

TEST_CASE("OSNR formula") {
  const PerformanceCoeffs ase_only{Watts(1e-5), 0.0, PerWattSquared(0.0)};
  CHECK_THAT(osnr_eff(Watts(1e-3), ase_only), WithinRel(100.0, 1e-15));
  CHECK_THROWS_AS(osnr_eff(Watts(1e-3), PerformanceCoeffs{}), std::domain_error);
  CHECK_THROWS_AS(osnr_eff(Watts(0.0), ase_only), std::domain_error);

  const PerformanceCoeffs c{Watts(3e-5), 1e-3, PerWattSquared(800.0)};
  for (double p : {1e-4, 1e-3, 1e-2, 1.0}) {
    const double d = c.ase.value() + c.mpi * p + c.nl.value() * p * p * p;
    CHECK_THAT(osnr_eff(Watts(p), c) * d, WithinRel(p, 1e-15));
  }
  CHECK(osnr_eff(Watts(1e4), c) < 1e-10);
}

TEST_CASE("optimal power") {
  CHECK(optimal_power(PerformanceCoeffs{Watts(2.0), 0.0, PerWattSquared(1.0)}).value() == 1.0);
  CHECK_THROWS_AS(optimal_power(PerformanceCoeffs{Watts(2.0), 0.0, PerWattSquared(0.0)}), std::domain_error);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lg(-1, 1);
  for (int i = 0; i < 50; ++i) {
    const PerformanceCoeffs c{Watts(1e-5 * std::pow(10, lg(rng))), 0.0, PerWattSquared(1e3 * std::pow(10, lg(rng)))};
    const Watts closed = optimal_power(c);
    CHECK_THAT(golden_section_optimal_power(c).value(), WithinRel(closed.value(), 1e-9));
    CHECK_THAT(osnr_eff(closed, c), WithinRel(closed.value() / (1.5 * c.ase.value()), 1e-12));
    // same optimum after scaling both coefficients
    const PerformanceCoeffs k{c.ase * 7.0, 0.0, c.nl * 7.0};
    CHECK(optimal_power(k).value() == Catch::Approx(closed.value()).epsilon(1e-15));
  }
}

TEST_CASE("crosstalk never helps the optimum") {
  double prev = INFINITY;
  for (double b : {0.0, 1e-4, 1e-3, 1e-2}) {
    const PerformanceCoeffs c{Watts(3e-5), b, PerWattSquared(800.0)};
    const double best = osnr_eff(optimal_power(c), c);
    CHECK(best <= prev);
    prev = best;
  }
}

TEST_CASE("Q mapping") {
  const auto sys = long_haul_system();
  double prev = -INFINITY;
  for (double osnr_db = 5; osnr_db < 30; osnr_db += 0.5) {
    const double q = q_factor(convert::db_to_linear(osnr_db), sys);
    CHECK(q > prev);
    prev = q;
  }
  CHECK(q_factor(convert::db_to_linear(25), sys) > q_factor(convert::db_to_linear(15), sys) + 3);
  CHECK(q_db_from_ber(0.5) == -INFINITY);
  CHECK(q_factor(1e-6, sys) < 0);
  CHECK_THROWS_AS(q_factor(0.0, sys), std::domain_error);

  for (double q_db : {2.0, 6.5, 9.0, 12.0}) {
    CHECK_THAT(q_db_from_ber(ber_from_q_db(q_db)), WithinAbs(q_db, 1e-9));
  }
  for (double snr : {3.0, 30.0, 150.0}) CHECK_THAT(snr_from_ber(ber_from_snr(snr)), WithinRel(snr, 1e-9));

  SystemConfig wide = sys;
  wide.resolution_bw = convert::ghz(12.5);
  CHECK(q_factor(100.0, wide) < q_factor(100.0, sys));
}
