#include "pbo/types.hpp"

#include <doctest.h>

using namespace pbo;

TEST_CASE("duel concat and swap") {
  Duel d{Vector::Constant(2, 1.0), Vector::Constant(2, 2.0)};
  const Vector c = d.concat();
  CHECK(c.size() == 4);
  CHECK(c(0) == 1.0);
  CHECK(c(3) == 2.0);
  const Duel back = Duel::from_concat(c);
  CHECK(back.left == d.left);
  CHECK(back.right == d.right);
  CHECK(d.swapped().left == d.right);
}

TEST_CASE("dataset add and validation") {
  DuelDataset data(1);
  CHECK(data.empty());
  data.add(Duel{Vector::Constant(1, 0.1), Vector::Constant(1, 0.2)}, 1);
  data.add(Duel{Vector::Constant(1, 0.3), Vector::Constant(1, 0.4)}, 0);
  CHECK(data.size() == 2);
  CHECK(data.inputs(1, 1) == doctest::Approx(0.4));
  CHECK(data.labels(0) == 1);
  CHECK_NOTHROW(data.validate());

  SUBCASE("label outside {0,1}") {
    CHECK_THROWS_AS(data.add(Duel{Vector::Zero(1), Vector::Zero(1)}, 2), Error);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(data.add(Duel{Vector::Zero(2), Vector::Zero(2)}, 1), Error);
  }
}

TEST_CASE("domain unit-cube map round trips") {
  Domain d{{{-2.0, 2.0}, {-1.0, 1.0}}, 5};
  CHECK_NOTHROW(d.validate());
  Points p(2, 2);
  p << -2, -1, 2, 0.5;
  const Points u = d.to_unit(p);
  CHECK(u(0, 0) == doctest::Approx(0.0));
  CHECK(u(1, 1) == doctest::Approx(0.75));
  CHECK((d.from_unit(u) - p).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(d.contains(Vector::Zero(2)));
  CHECK_FALSE(d.contains(Vector::Constant(2, 3.0)));
}

TEST_CASE("invalid domains are rejected") {
  CHECK_THROWS_AS((Domain{{{1.0, 0.0}}, 3}.validate()), Error);
  CHECK_THROWS_AS((Domain{{}, 3}.validate()), Error);
  CHECK_THROWS_AS((Domain{{{0.0, 1.0}}, 1}.validate()), Error);
}

TEST_CASE("derived seeds separate streams and are stable") {
  CHECK(derive_seed(0, "oracle") == derive_seed(0, "oracle"));
  CHECK(derive_seed(0, "oracle") != derive_seed(0, "policy"));
  CHECK(derive_seed(0, "oracle", 0) != derive_seed(0, "oracle", 1));
  CHECK(derive_seed(0, "oracle") != derive_seed(1, "oracle"));
  Rng a = make_stream(7, "x");
  Rng b = make_stream(7, "x");
  CHECK(a() == b());
}

TEST_CASE("error codes have names") {
  CHECK(to_string(Errc::not_found) == "not_found");
  const Error e(Errc::conflict, "busy");
  CHECK(e.code() == Errc::conflict);
  CHECK(std::string(e.what()) == "busy");
}
