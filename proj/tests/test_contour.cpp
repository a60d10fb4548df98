#include <doctest.h>

#include "bethe/contour.hpp"

using namespace bethe;

TEST_CASE("small-contour certification examples") {
  // ASEP p=q=1/2: r = 0.25 clears the pole near 0.5
  CHECK(certify_radius(ScatteringSpec::for_model(ModelParams::asep(0.5)), 0.25,
                       RadiusMode::Small));
  // a radius on top of the pole set must fail
  CHECK_FALSE(certify_radius(ScatteringSpec::for_model(ModelParams::asep(0.5)),
                             0.5, RadiusMode::Small));
}

TEST_CASE("enclosed-pole certification for the push and avalanche forms") {
  // PushASEP mu=lambda=1/2: poles inside requires r above (1+sqrt 2)
  const auto push = ScatteringSpec::for_model(ModelParams::push_asep(0.5, 0.5));
  CHECK_FALSE(certify_radius(push, 0.2, RadiusMode::Small));
  CHECK_FALSE(certify_radius(push, 1.0, RadiusMode::Small));
  CHECK(certify_radius(push, 3.2, RadiusMode::Small));
  const auto asap = ScatteringSpec::for_model(ModelParams::asap(0.7, 0.4));
  CHECK_FALSE(certify_radius(asap, 0.3, RadiusMode::Small));
  CHECK(certify_radius(asap, 1.6, RadiusMode::Small));
}

TEST_CASE("large-contour certification example") {
  const auto spec = ScatteringSpec::for_model(ModelParams::azrp(0.5));
  CHECK(certify_radius(spec, 4.0, RadiusMode::Large));
  CHECK_FALSE(certify_radius(spec, 1.0, RadiusMode::Large));
}

TEST_CASE("chosen radii are certified") {
  for (const auto& m :
       {ModelParams::asep(0.7), ModelParams::asep(1.0),
        ModelParams::push_asep(0.6, 0.4), ModelParams::asap(0.5, 0.5),
        ModelParams::azrp(0.3)}) {
    const auto spec = ScatteringSpec::for_model(m);
    const double r = choose_radius(spec, 3, RadiusMode::Small);
    CHECK(r > 0.0);
    CHECK(certify_radius(spec, r, RadiusMode::Small));
    CHECK(pole_distance_ratio(spec, contour_radii(spec, 3, RadiusMode::Small)) <
          0.9);
  }
  const auto azrp = ScatteringSpec::for_model(ModelParams::azrp(0.7));
  const double big = choose_radius(azrp, 3, RadiusMode::Large);
  CHECK(big > 1.0);
  CHECK(certify_radius(azrp, big, RadiusMode::Large));
  // substituted ASEP form with negative first coefficient: enclosed class
  const auto subst = ScatteringSpec::asep_form(-0.4 / 0.6, 1.0 / 0.6);
  const double rs = choose_radius(subst, 2, RadiusMode::Small);
  CHECK(certify_radius(subst, rs, RadiusMode::Small));
}

TEST_CASE("single-particle contours skip certification") {
  CHECK(choose_radius(ScatteringSpec::for_model(ModelParams::asep(0.5)), 1,
                      RadiusMode::Small) > 0.0);
}
