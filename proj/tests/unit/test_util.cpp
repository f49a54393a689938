#include <doctest.h>

#include <atomic>
#include <set>
#include <stdexcept>
#include <vector>

#include "mixlens/errors.hpp"
#include "mixlens/util/hash.hpp"
#include "mixlens/util/parallel.hpp"
#include "mixlens/util/random.hpp"

using namespace mixlens;
using namespace mixlens::util;

TEST_CASE("fnv1a64 published vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(to_hex(0xabcULL) == "0000000000000abc");
}

TEST_CASE("derived seeds depend on both master seed and id") {
  CHECK(derive_seed(1, "x") == derive_seed(1, "x"));
  CHECK(derive_seed(1, "x") != derive_seed(2, "x"));
  CHECK(derive_seed(1, "x") != derive_seed(1, "y"));
}

TEST_CASE("Rng is reproducible and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.below(7) == b.below(7));
  Rng r(3);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) {
    const auto x = r.below(5);
    REQUIRE(x < 5);
    ++counts[x];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK_THROWS_AS(r.below(0), DomainError);
}

TEST_CASE("subset draws distinct sorted indices uniformly") {
  Rng r(9);
  std::vector<int> hits(6, 0);
  for (int i = 0; i < 30000; ++i) {
    const auto s = r.subset(6, 2);
    REQUIRE(s.size() == 2);
    CHECK(s[0] < s[1]);
    for (auto x : s) ++hits[x];
  }
  for (int h : hits) CHECK(std::abs(h - 10000) < 500);
  CHECK(r.subset(4, 4) == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(r.subset(4, 0).empty());
  CHECK_THROWS_AS(r.subset(2, 3), DomainError);
}

TEST_CASE("categorical follows its weights") {
  Rng r(11);
  std::vector<int> hits(3, 0);
  for (int i = 0; i < 40000; ++i) ++hits[r.categorical({1.0, 0.0, 3.0})];
  CHECK(hits[1] == 0);
  CHECK(std::abs(hits[0] - 10000) < 600);
  CHECK_THROWS_AS(r.categorical({0.0, 0.0}), DomainError);
}

TEST_CASE("parallel_for visits every index exactly once") {
  for (unsigned jobs : {1u, 2u, 8u}) {
    std::vector<std::atomic<int>> seen(1000);
    parallel_for(seen.size(), jobs, [&](std::size_t i) { seen[i]++; });
    for (auto& s : seen) CHECK(s.load() == 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
  for (unsigned jobs : {1u, 4u}) {
    try {
      parallel_for(100, jobs, [](std::size_t i) {
        if (i == 3 || i == 7) throw std::runtime_error(std::to_string(i));
      });
      FAIL("expected a throw");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "3");
    }
  }
}
