#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "redpath/signature.hpp"
#include "redpath/signature_io.hpp"

using namespace redpath;
using Q = boost::multiprecision::cpp_rational;

namespace {

/// Reduced axis path with n segments, |r| in [0.1, 3], adjacent indices distinct.
AxisPath random_reduced_path(std::mt19937_64& rng, int d, int n) {
  std::uniform_real_distribution<double> mag(0.1, 3.0);
  std::uniform_int_distribution<int> idx(1, d);
  AxisPath p;
  for (int k = 0; k < n; ++k) {
    int i = idx(rng);
    while (!p.empty() && i == p.back().index) i = idx(rng);
    p.push_back({(rng() % 2 ? 1.0 : -1.0) * mag(rng), i});
  }
  return p;
}

AxisPath random_path(std::mt19937_64& rng, int d, int n) {
  std::uniform_real_distribution<double> r(-2.0, 2.0);
  std::uniform_int_distribution<int> idx(1, d);
  AxisPath p;
  for (int k = 0; k < n; ++k) p.push_back({r(rng), idx(rng)});
  return p;
}

TensorSeries<double> random_series(std::mt19937_64& rng, int d, int depth) {
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  TensorSeries<double> s(d, depth);
  for (int k = 0; k < 40; ++k) {
    std::vector<int> w(rng() % static_cast<unsigned>(depth + 1));
    for (auto& x : w) x = 1 + static_cast<int>(rng() % static_cast<unsigned>(d));
    s.set(Word(w), c(rng));
  }
  return s;
}

/// Every word over [1, d] of length <= depth.
std::vector<std::vector<int>> all_words(int d, int depth) {
  std::vector<std::vector<int>> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (static_cast<int>(out[i].size()) == depth) continue;
    for (int a = 1; a <= d; ++a) {
      auto w = out[i];
      w.push_back(a);
      out.push_back(w);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("Word") {
  const Word w{1, 2, 3};
  CHECK(w.size() == 3);
  CHECK(w[0] == 1);
  CHECK(w[2] == 3);
  CHECK(w.str() == "1 2 3");
  CHECK(Word::parse("1 2 3") == w);
  CHECK(Word::parse("") == Word{});
  CHECK(Word::from_key(w.key()) == w);
  CHECK(w.square_free());
  CHECK_FALSE((Word{1, 1}).square_free());
  CHECK((Word{2} < Word{1, 1}));
  CHECK((Word{1, 2} < Word{2, 1}));
  CHECK_THROWS_AS(Word({0}), std::invalid_argument);
  CHECK_THROWS_AS(Word({16}), std::invalid_argument);
  CHECK_THROWS_AS(Word::parse("1 x"), std::invalid_argument);
  CHECK(Word{15, 15}.indices() == std::vector<int>{15, 15});
}

TEST_CASE("unit and coefficients") {
  const auto u = ts_unit<double>(3, 4);
  CHECK(u.coefficient(Word{}) == 1.0);
  CHECK(u.coefficient(Word{1}) == 0.0);
  CHECK(ts_unit<double>(2, 0).size() == 1);
  CHECK_THROWS_AS(u.coefficient(Word{1, 1, 1, 1, 1}), std::out_of_range);
  CHECK_THROWS_AS(u.coefficient(Word{4}), std::invalid_argument);
  CHECK_THROWS_AS(TensorSeries<double>(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(TensorSeries<double>(2, 17), std::invalid_argument);

  std::mt19937_64 rng(1);
  const auto x = random_series(rng, 3, 4);
  CHECK(max_abs_difference(ts_mul(u, x), x) == 0.0);
  CHECK(max_abs_difference(ts_mul(x, u), x) == 0.0);
  CHECK_THROWS_AS(ts_mul(x, ts_unit<double>(3, 5)), std::invalid_argument);
  CHECK_THROWS_AS(ts_mul(x, ts_unit<double>(2, 4)), std::invalid_argument);
}

TEST_CASE("products and segment exponentials") {
  CHECK(max_abs_difference(ts_mul(exp_segment(2, 6, 1, 1.0), exp_segment(2, 6, 1, -1.0)), ts_unit<double>(2, 6)) <
        1e-12);
  const auto e = exp_segment(2, 3, 1, 2.0);
  CHECK(e.coefficient(Word{}) == 1.0);
  CHECK(e.coefficient(Word{1}) == 2.0);
  CHECK(e.coefficient(Word{1, 1}) == 2.0);
  CHECK(e.coefficient(Word{1, 1, 1}) == doctest::Approx(4.0 / 3).epsilon(1e-15));
  CHECK(e.coefficient(Word{2}) == 0.0);
  CHECK(max_abs_difference(exp_segment(2, 4, 2, 0.0), ts_unit<double>(2, 4)) == 0.0);
  CHECK_THROWS_AS(exp_segment(2, 3, 3, 1.0), std::invalid_argument);

  const auto p = ts_mul(exp_segment(2, 3, 1, 2.0), exp_segment(2, 3, 2, 3.0));
  CHECK(p.coefficient(Word{1, 2}) == 6.0);
  CHECK(p.coefficient(Word{1, 1, 2}) == 6.0);

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_series(rng, 3, 5), b = random_series(rng, 3, 5), c = random_series(rng, 3, 5);
    CHECK(max_abs_difference(ts_mul(ts_mul(a, b), c), ts_mul(a, ts_mul(b, c))) < 1e-12);
  }
}

TEST_CASE("signature against the iterated-integral oracle") {
  const auto s = signature(AxisPath{{2, 1}, {3, 2}}, 2, 3);
  CHECK(s.coefficient(Word{1}) == 2.0);
  CHECK(s.coefficient(Word{2}) == 3.0);
  CHECK(s.coefficient(Word{1, 2}) == 6.0);
  CHECK(s.coefficient(Word{2, 1}) == 0.0);
  CHECK(s.coefficient(Word{1, 1, 2}) == 6.0);
  CHECK(max_abs_difference(signature(AxisPath{}, 3, 4), ts_unit<double>(3, 4)) == 0.0);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const int depth = 1 + static_cast<int>(rng() % 4);
    const auto path = random_path(rng, d, static_cast<int>(rng() % 5));
    const auto sig = signature(path, d, depth);
    for (const auto& w : all_words(d, depth)) {
      const double expected = oracle::iterated_integral<double>(path, w);
      CHECK(std::abs(sig.coefficient(Word(w)) - expected) < 1e-12 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("signature properties") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const int depth = 1 + static_cast<int>(rng() % 6);
    const auto a = random_path(rng, d, static_cast<int>(rng() % 5));
    const auto b = random_path(rng, d, static_cast<int>(rng() % 5));
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    const auto sa = signature(a, d, depth), sb = signature(b, d, depth), sab = signature(ab, d, depth);

    // Chen
    CHECK(max_abs_difference(sab, ts_mul(sa, sb)) < 1e-12 * std::max(1.0, max_abs_difference(sab, TensorSeries<double>(d, depth))));
    // reduction invariance
    CHECK(max_abs_difference(sab, signature(reduce_axis(ab), d, depth)) < 1e-10 * std::max(1.0, max_abs_difference(sab, TensorSeries<double>(d, depth))));
    // path followed by its reverse is tree-like
    auto loop = a;
    const auto back = reverse_axis(a);
    loop.insert(loop.end(), back.begin(), back.end());
    CHECK(max_abs_difference(signature(loop, d, depth), ts_unit<double>(d, depth)) < 1e-10);
    CHECK(sab.coefficient(Word{}) == 1.0);

    if (depth >= 2) {
      for (int i = 1; i <= d; ++i) {
        for (int j = 1; j <= d; ++j) {
          const double lhs = sab.coefficient(Word{i}) * sab.coefficient(Word{j});
          const double rhs = sab.coefficient(Word{i, j}) + sab.coefficient(Word{j, i});
          CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
        }
      }
    }
    // level one is the endpoint
    const auto end = axis_endpoint(ab, d);
    for (int i = 1; i <= d; ++i) CHECK(sab.coefficient(Word{i}) == doctest::Approx(end[static_cast<std::size_t>(i - 1)]));
  }
}

TEST_CASE("inversion") {
  const auto s = signature(AxisPath{{2, 1}, {3, 2}}, 2, 3);
  const auto p = invert(s);
  REQUIRE(p.size() == 2);
  CHECK(p[0].index == 1);
  CHECK(p[1].index == 2);
  CHECK(p[0].r == 2.0);
  CHECK(p[1].r == 3.0);
  CHECK(invert(ts_unit<double>(3, 5)).empty());

  SUBCASE("round trip on random reduced paths") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      const int d = 2 + static_cast<int>(rng() % 3);
      const int n = 1 + static_cast<int>(rng() % 8);
      const auto path = random_reduced_path(rng, d, n);
      const auto back = invert(signature(path, d, n + 1));
      REQUIRE(back.size() == path.size());
      for (std::size_t k = 0; k < path.size(); ++k) {
        CHECK(back[k].index == path[k].index);
        CHECK(std::abs(back[k].r - path[k].r) <= 1e-9);
      }
    }
  }
  SUBCASE("exact rational mode") {
    std::vector<BasicAxisSegment<Q>> path{{Q(2), 1}, {Q(-7, 3), 2}, {Q(1, 5), 3}, {Q(5, 2), 1}};
    const auto sig = signature<Q>(std::span<const BasicAxisSegment<Q>>(path), 3, 5);
    CHECK(sig.coefficient(Word{1, 2}) == Q(-14, 3));
    const auto back = invert<Q>(sig, Q(0));
    CHECK(back == path);
    // Rational oracle agrees with the Chen product exactly.
    for (const auto& w : all_words(3, 4)) CHECK(sig.coefficient(Word(w)) == oracle::iterated_integral<Q>(path, w));
  }
  SUBCASE("errors") {
    // Shape of length 2 at depth 2: no room for the doubled words.
    try {
      (void)invert(signature(AxisPath{{2, 1}, {3, 2}}, 2, 2));
      FAIL("expected too_shallow");
    } catch (const InversionError& e) {
      CHECK(e.kind() == InversionError::Kind::too_shallow);
    }
    // Two square-free words of maximal length: not a signature of an axis path.
    TensorSeries<double> x = ts_unit<double>(2, 3);
    x.set(Word{1, 2}, 1.0);
    x.set(Word{2, 1}, 1.0);
    try {
      (void)invert(x);
      FAIL("expected not_unique");
    } catch (const InversionError& e) {
      CHECK(e.kind() == InversionError::Kind::not_unique);
    }
    try {
      (void)invert(ts_unit<double>(2, 14));
      FAIL("expected search_too_large");
    } catch (const InversionError& e) {
      CHECK(e.kind() == InversionError::Kind::search_too_large);
    }
  }
}

TEST_CASE("JSON and path literals") {
  const auto sig = signature(AxisPath{{2, 1}, {3, 2}}, 2, 3);
  const auto j = signature_to_json(sig);
  CHECK(j["d"] == 2);
  CHECK(j["depth"] == 3);
  CHECK(j["coeffs"][""] == 1.0);
  CHECK(j["coeffs"]["1 1 2"] == 6.0);
  CHECK(j["coeffs"].begin().key() == "");
  const auto back = signature_from_json(nlohmann::ordered_json::parse(j.dump()));
  CHECK(max_abs_difference(back, sig) == 0.0);

  std::mt19937_64 rng(6);
  const auto noisy = signature(random_path(rng, 3, 4), 3, 4);
  CHECK(max_abs_difference(signature_from_json(nlohmann::ordered_json::parse(signature_to_json(noisy).dump())), noisy) == 0.0);

  for (const char* bad : {R"({"d": 2})", R"({"d": 2, "depth": 3, "coeffs": {"1 3": 1.0}})",
                          R"({"d": 2, "depth": 1, "coeffs": {"1 1": 1.0}})", R"({"d": "2", "depth": 1, "coeffs": {}})",
                          R"({"d": 2, "depth": 1, "coeffs": {"1": "x"}})", R"([1, 2])"}) {
    CHECK_THROWS_AS(signature_from_json(nlohmann::ordered_json::parse(bad)), std::invalid_argument);
  }

  const auto p = parse_axis_path("2:1,-3.5:2", 2);
  CHECK(p == AxisPath{{2, 1}, {-3.5, 2}});
  CHECK(format_axis_path(p) == "2:1,-3.5:2");
  CHECK(parse_axis_path("").empty());
  CHECK_THROWS_AS(parse_axis_path("2:3", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_axis_path("2", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_axis_path("a:1", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_axis_path("1:0"), std::invalid_argument);
}
