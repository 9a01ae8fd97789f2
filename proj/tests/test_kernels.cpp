#include <doctest.h>

#include <cmath>

#include "cit/kernels.hpp"
#include "cit/common.hpp"
#include "cit/rng.hpp"
#include "oracles.hpp"

using namespace cit;

TEST_SUITE("kernels") {

TEST_CASE("kernel values") {
  const KernelSpec gauss{KernelFamily::gaussian, 2};
  const KernelSpec epan{KernelFamily::epanechnikov, 2};
  CHECK(kernel_weight(gauss, 0.0) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-10));
  CHECK(kernel_weight(epan, 0.0) == doctest::Approx(0.75));
  CHECK(kernel_weight(epan, 1.5) == 0.0);
  CHECK(kernel_weight(epan, -1.5) == 0.0);

  rng::Engine eng(1);
  for (int i = 0; i < 100; ++i) {
    const double u = 4.0 * (eng.uniform() - 0.5);
    CHECK(kernel_weight(gauss, u) == kernel_weight(gauss, -u));
    CHECK(kernel_weight(epan, u) == kernel_weight(epan, -u));
    CHECK(kernel_weight(gauss, u) >= 0.0);
    CHECK(kernel_weight(epan, u) >= 0.0);
  }
}

TEST_CASE("kernel moments by quadrature") {
  for (KernelFamily family : {KernelFamily::gaussian, KernelFamily::epanechnikov}) {
    const KernelSpec spec{family, 2};
    const double lim = family == KernelFamily::gaussian ? 10.0 : 1.0;
    const auto k0 = [&](double u) { return kernel_weight(spec, u); };
    const auto k1 = [&](double u) { return u * kernel_weight(spec, u); };
    const auto k2 = [&](double u) { return u * u * kernel_weight(spec, u); };
    CHECK(oracle::simpson(k0, -lim, lim, 2048) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(oracle::simpson(k1, -lim, lim, 2048)) < 1e-8);
    const double m2 = oracle::simpson(k2, -lim, lim, 2048);
    CHECK(m2 > 0.01);
    CHECK(m2 < 2.0);
  }
}

TEST_CASE("rule of thumb bandwidth") {
  BandwidthPolicy unit;
  const double h = rule_of_thumb_bandwidth(1.0, 100, 1, unit);
  // 1.06 * 100^(-1/5), evaluated by hand.
  CHECK(h == doctest::Approx(0.4219936).epsilon(1e-6));

  BandwidthPolicy half{0.5, {}};
  CHECK(rule_of_thumb_bandwidth(2.0, 100, 1, half) ==
        doctest::Approx(h).epsilon(1e-12));

  // Homogeneous of degree 1 in sd and in c.
  rng::Engine eng(2);
  for (int i = 0; i < 20; ++i) {
    const double sd = 0.1 + 3.0 * eng.uniform();
    const double c = 0.2 + 2.0 * eng.uniform();
    const double k = 0.5 + 2.0 * eng.uniform();
    BandwidthPolicy pc{c, {}};
    BandwidthPolicy pkc{k * c, {}};
    CHECK(rule_of_thumb_bandwidth(k * sd, 400, 2, pc) ==
          doctest::Approx(k * rule_of_thumb_bandwidth(sd, 400, 2, pc))
              .epsilon(1e-12));
    CHECK(rule_of_thumb_bandwidth(sd, 400, 2, pkc) ==
          doctest::Approx(k * rule_of_thumb_bandwidth(sd, 400, 2, pc))
              .epsilon(1e-12));
  }

  BandwidthPolicy fixed{1.0, 0.3};
  CHECK(rule_of_thumb_bandwidth(123.0, 7, 4, fixed) == 0.3);

  CHECK_THROWS_AS(rule_of_thumb_bandwidth(0.0, 100, 1, unit), DataError);
  CHECK_THROWS_AS(rule_of_thumb_bandwidth(1.0, 1, 1, unit), DataError);
  BandwidthPolicy bad{-1.0, {}};
  CHECK_THROWS_AS(rule_of_thumb_bandwidth(1.0, 100, 1, bad), DataError);
}

TEST_CASE("bandwidth regime along n") {
  BandwidthPolicy unit;
  double prev_nh8 = 1e300, prev_rate = 0.0;
  for (double n : {1e2, 1e3, 1e4, 1e5, 1e6}) {
    const double h = rule_of_thumb_bandwidth(1.0, static_cast<std::size_t>(n), 1, unit);
    const double nh8 = n * std::pow(h, 8.0);
    const double rate = n * h * h / (std::log(n) * std::log(n));
    CHECK(nh8 < prev_nh8);
    CHECK(rate > prev_rate);
    prev_nh8 = nh8;
    prev_rate = rate;
  }
  CHECK(prev_nh8 < 1e-2);
  CHECK(prev_rate > 10.0);
}

TEST_CASE("kernel family parsing") {
  CHECK(kernel_family_from_string("gaussian") == KernelFamily::gaussian);
  CHECK(kernel_family_from_string("epanechnikov") == KernelFamily::epanechnikov);
  CHECK_THROWS_AS(kernel_family_from_string("box"), DataError);
  CHECK(to_string(KernelFamily::gaussian) == "gaussian");
}

}  // TEST_SUITE
