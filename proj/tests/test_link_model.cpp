#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace hybridgn;
using namespace testing_support;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("attenuation conversion") {
  CHECK(attenuation_db_per_km_to_np_per_m(0.0).value() == 0.0);
  CHECK_THAT(attenuation_db_per_km_to_np_per_m(0.16).value(), WithinRel(3.6841361487904730944e-5, 1e-14));
  CHECK_THAT(attenuation_db_per_km_to_np_per_m(0.158).value(), WithinRel(3.6380844469305921807e-5, 1e-14));
  CHECK_THROWS_AS(attenuation_db_per_km_to_np_per_m(-0.1), std::domain_error);
}

TEST_CASE("gamma from effective area") {
  const NonlinearIndex n2(2.6e-20);
  const Meters wl(1.55e-6);
  CHECK_THAT(gamma_from_aeff(n2, wl, convert::um2(80)).value(), WithinRel(1.317442080537655229e-3, 1e-14));
  CHECK_THAT(gamma_from_aeff(n2, wl, convert::um2(160)).value(),
             WithinRel(gamma_from_aeff(n2, wl, convert::um2(80)).value() / 2, 1e-15));
  CHECK(gamma_from_aeff(NonlinearIndex(0.0), wl, convert::um2(80)).value() == 0.0);
  CHECK_THROWS_AS(gamma_from_aeff(n2, wl, convert::um2(0)), std::domain_error);
  CHECK_THROWS_AS(gamma_from_aeff(n2, Meters(-1.0), convert::um2(80)), std::domain_error);
  CHECK_THAT(gamma_from_aeff(n2, wl, convert::um2(250)).value() * 1e3, WithinRel(kGammaQsmf, 1e-14));
}

TEST_CASE("segment and span validation") {
  CHECK_THROWS_AS(SpanPlan({}), std::invalid_argument);
  CHECK_THROWS_AS(SpanPlan({fiber("x", 0, 0.2, -20, 1)}), std::invalid_argument);
  CHECK_THROWS_AS(SpanPlan({fiber("x", 10, 0.2, 0.0, 1)}), std::invalid_argument);
  CHECK_THROWS_AS(SpanPlan({fiber("x", 10, 0.2, -20, -1)}), std::invalid_argument);
  CHECK_NOTHROW(SpanPlan({qsmf(50), smf(50)}, convert::km(100)));
  CHECK_THROWS_AS(SpanPlan({qsmf(50), smf(50)}, convert::km(100.001)), std::invalid_argument);

  SystemConfig sys = long_haul_system();
  sys.channel_count = 8;
  CHECK_THROWS_AS(sys.validate(), std::invalid_argument);
  sys = long_haul_system();
  sys.span_count = 0;
  CHECK_THROWS_AS(sys.validate(), std::invalid_argument);
}

TEST_CASE("derived constants of the long-haul system") {
  const auto d = derive_span(hybrid_span(), long_haul_system());
  CHECK_THAT(d.f_phi.value(), WithinRel(3085881986.6543926579, 1e-13));
  CHECK_THAT(d.zeta0, WithinRel(1088.7705417004611625, 1e-13));
  CHECK(d.n_int == 347);
  CHECK_THAT(d.bandwidth.value(), WithinRel(288e9, 1e-15));
  // the same f_phi for every segment split when beta2 is uniform
  CHECK(derive_span(smf_span(), long_haul_system()).zeta0 == Catch::Approx(d.zeta0).epsilon(1e-14));
}

TEST_CASE("uniform dispersion reduces lambda_k to length fractions") {
  const auto d = derive_span(SpanPlan({qsmf(30), smf(70)}), long_haul_system());
  REQUIRE(d.segments.size() == 2);
  CHECK_THAT(d.segments[0].lambda, WithinRel(0.3, 1e-14));
  CHECK_THAT(d.segments[1].lambda, WithinRel(0.7, 1e-14));
  CHECK_THAT(d.segments[0].lambda + d.segments[1].lambda, WithinAbs(1.0, 1e-12));
  const double sigma0 = attenuation_db_per_km_to_np_per_m(0.16) * convert::km(100) / 2;
  CHECK_THAT(d.segments[0].sigma, WithinRel(sigma0, 1e-13));
  CHECK(d.sigma == std::min(d.segments[0].sigma, d.segments[1].sigma));
}

TEST_CASE("lambda_k sum to one with mixed magnitudes of one sign") {
  const auto d = derive_span(SpanPlan({fiber("a", 20, 0.2, -5, 1), fiber("b", 60, 0.17, -21, 1.3),
                                       fiber("c", 20, 0.2, -30, 0.8)}),
                             long_haul_system());
  double sum = 0;
  for (const auto& t : d.segments) sum += t.lambda;
  CHECK_THAT(sum, WithinAbs(1.0, 1e-12));
}

TEST_CASE("sigma rises when the minimizing segment is removed") {
  const auto three = derive_span(SpanPlan({fiber("a", 30, 0.25, -20, 1), fiber("b", 30, 0.1, -20, 1),
                                           fiber("c", 40, 0.2, -20, 1)}),
                                 long_haul_system());
  const auto two = derive_span(SpanPlan({fiber("a", 30, 0.25, -20, 1), fiber("c", 40, 0.2, -20, 1)}), long_haul_system());
  CHECK(two.sigma > three.sigma);
}

TEST_CASE("zeta0 and kappa scaling") {
  SystemConfig a = long_haul_system();
  SystemConfig b = a;
  b.channel_count = 27;
  b.span_count = 120;
  const auto da = derive_span(hybrid_span(), a);
  const auto db = derive_span(hybrid_span(), b);
  CHECK_THAT(db.zeta0 / da.zeta0, WithinRel(9.0, 1e-14));
  CHECK_THAT(db.kappa / da.kappa, WithinRel(4.0, 1e-14));
}

TEST_CASE("zero average dispersion is rejected") {
  const SpanPlan span({fiber("a", 50, 0.2, -20, 1), fiber("b", 50, 0.2, 20, 1)});
  CHECK_THROWS_WITH(derive_span(span, long_haul_system()), Catch::Matchers::ContainsSubstring("zero average dispersion"));
}

TEST_CASE("mixed-sign dispersion keeps the phase sign") {
  const auto d = derive_span(SpanPlan({fiber("a", 80, 0.2, -20, 1), fiber("b", 20, 0.5, 60, 1)}), long_haul_system());
  CHECK(d.segments[0].phase_ratio > 0);
  CHECK(d.segments[1].phase_ratio < 0);
  CHECK_THAT(d.segments[0].phase_ratio + d.segments[1].phase_ratio, WithinAbs(1.0, 1e-12));
  CHECK(d.segments[1].lambda > 0);
}

TEST_CASE("derive_span is deterministic") {
  const auto a = derive_span(hybrid_span(), long_haul_system());
  const auto b = derive_span(hybrid_span(), long_haul_system());
  CHECK(a.zeta0 == b.zeta0);
  CHECK(a.kappa == b.kappa);
  CHECK(a.gamma_worst == b.gamma_worst);
  CHECK(a.sigma == b.sigma);
}

TEST_CASE("worst-case coefficient is partition invariant") {
  const auto one = derive_span(SpanPlan({smf(100)}), long_haul_system());
  const auto split = derive_span(SpanPlan({smf(10), smf(45), smf(45)}), long_haul_system());
  CHECK(split.gamma_worst.value() == Catch::Approx(one.gamma_worst.value()).epsilon(1e-14));
  // single uniform segment: Gamma = gamma l (1 + e^{-2 sigma}) / 2
  const double sigma = one.sigma;
  CHECK_THAT(one.gamma_worst.value(), WithinRel(kGammaSmf * 100 * (1 + std::exp(-2 * sigma)) / 2, 1e-14));
}
