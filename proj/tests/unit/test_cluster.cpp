#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "fixtures.hpp"
#include "gridwatch/cluster.hpp"
#include "gridwatch/error.hpp"
#include "gridwatch/rng.hpp"
#include "oracles.hpp"

namespace gw = gridwatch;

namespace {

std::vector<double> random_seq(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

// points on a line, distance |a - b|
gw::DistanceMatrix line_matrix(const std::vector<double>& pts) {
  gw::DistanceMatrix d(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) d.set(i, j, std::abs(pts[i] - pts[j]));
  }
  return d;
}

}  // namespace

TEST_CASE("minmax examples") {
  CHECK(gw::minmax_normalize(std::vector<double>{2, 4, 6}) == std::vector<double>{0, 0.5, 1});
  CHECK(gw::minmax_normalize(std::vector<double>{7, 7, 7}) == std::vector<double>{0.5, 0.5, 0.5});
  auto rng = gw::stream_for(30, 0);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = random_seq(rng, 50);
    for (auto& v : x) v = v * 1e3 - 400;
    const auto y = gw::minmax_normalize(x);
    CHECK(*std::min_element(y.begin(), y.end()) == 0.0);
    CHECK(*std::max_element(y.begin(), y.end()) == 1.0);
    for (double v : y) {
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
    }
  }
}

TEST_CASE("dtw of a series with itself: zero along the diagonal") {
  const std::vector<double> u = {0.3, 0.1, 0.9, 0.4};
  const auto r = gw::dtw(u, u);
  CHECK(r.distance == 0.0);
  REQUIRE(r.path.steps.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(r.path.steps[i] == std::pair<std::size_t, std::size_t>{i, i});
}

TEST_CASE("dtw([0,0,1,1], [0,1]) is zero") {
  const std::vector<double> u = {0, 0, 1, 1};
  const std::vector<double> v = {0, 1};
  CHECK(oracle::dtw_brute(u, v) == 0.0);
  CHECK(gw::dtw(u, v).distance == 0.0);
}

TEST_CASE("dtw equals path enumeration; paths are valid") {
  auto rng = gw::stream_for(31, 0);
  std::uniform_int_distribution<std::size_t> len(1, 8);
  for (int trial = 0; trial < 150; ++trial) {
    const auto u = random_seq(rng, len(rng));
    const auto v = random_seq(rng, len(rng));
    const auto r = gw::dtw(u, v);
    REQUIRE(r.distance == oracle::dtw_brute(u, v));
    REQUIRE(gw::dtw_distance(u, v) == r.distance);
    const auto& p = r.path.steps;
    REQUIRE(p.front() == std::pair<std::size_t, std::size_t>{0, 0});
    REQUIRE(p.back() == std::pair<std::size_t, std::size_t>{u.size() - 1, v.size() - 1});
    double cost = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      cost += std::abs(u[p[k].first] - v[p[k].second]);
      if (k == 0) continue;
      const auto da = p[k].first - p[k - 1].first;
      const auto db = p[k].second - p[k - 1].second;
      REQUIRE(da <= 1);
      REQUIRE(db <= 1);
      REQUIRE(da + db >= 1);
    }
    CHECK(cost == doctest::Approx(r.distance).epsilon(1e-12));
  }
}

TEST_CASE("banded dtw") {
  auto rng = gw::stream_for(32, 0);
  std::uniform_int_distribution<std::size_t> len(1, 8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_seq(rng, len(rng));
    const auto v = random_seq(rng, len(rng));
    const std::size_t gap = u.size() > v.size() ? u.size() - v.size() : v.size() - u.size();
    CHECK(gw::dtw_distance(u, v, std::max(u.size(), v.size())) == gw::dtw(u, v).distance);
    for (std::size_t band = gap; band <= gap + 2; ++band) {
      REQUIRE(gw::dtw_distance(u, v, band) == oracle::dtw_brute(u, v, band));
      REQUIRE(gw::dtw(u, v, band).distance == oracle::dtw_brute(u, v, band));
    }
    if (gap > 0) {
      try {
        gw::dtw(u, v, gap - 1);
        FAIL("expected an error");
      } catch (const gw::Error& e) {
        CHECK(std::string(e.what()) == "band excludes all valid paths");
      }
    }
  }
}

TEST_CASE("dtw matrix") {
  std::vector<std::vector<double>> same = {{0.1, 0.5, 0.2}, {0.1, 0.5, 0.2}};
  const auto z = gw::dtw_matrix(same);
  CHECK(z(0, 0) == 0.0);
  CHECK(z(0, 1) == 0.0);
  CHECK(z(1, 0) == 0.0);

  auto rng = gw::stream_for(33, 0);
  std::vector<std::vector<double>> s;
  for (int i = 0; i < 12; ++i) s.push_back(random_seq(rng, 10 + i));
  const auto m = gw::dtw_matrix(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(m(i, i) == 0.0);
    for (std::size_t j = 0; j < s.size(); ++j) {
      REQUIRE(m(i, j) == m(j, i));
      if ((i * 7 + j) % 5 == 0 && i != j) CHECK(m(i, j) == gw::dtw(s[i], s[j]).distance);
    }
  }
}

TEST_CASE("pam: L = n puts every point on its own medoid") {
  const auto d = line_matrix({0, 1, 3, 7, 8});
  const auto c = gw::pam(d, 5, 1);
  CHECK(c.total_cost == 0.0);
  CHECK(c.medoids == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(gw::pam(d, 6, 1), gw::Error);
  CHECK_THROWS_AS(gw::pam(d, 0, 1), gw::Error);
}

TEST_CASE("pam: L = 1 finds the 1-median") {
  auto rng = gw::stream_for(34, 0);
  for (int trial = 0; trial < 30; ++trial) {
    auto pts = random_seq(rng, 25);
    const auto d = line_matrix(pts);
    const auto c = gw::pam(d, 1, static_cast<std::uint64_t>(trial));
    const auto best = oracle::one_median(d.size(), d);
    double best_sum = 0, got_sum = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      best_sum += d(i, best);
      got_sum += d(i, c.medoids[0]);
    }
    CHECK(got_sum == best_sum);
  }
}

TEST_CASE("pam: two separated blobs are recovered exactly") {
  auto rng = gw::stream_for(35, 0);
  std::vector<double> pts;
  std::vector<int> truth;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    pts.push_back(u(rng));
    truth.push_back(0);
    pts.push_back(100 + u(rng));
    truth.push_back(1);
  }
  const auto c = gw::pam(line_matrix(pts), 2, 4);
  CHECK(gw::adjusted_rand_index(c.assignment, truth) == 1.0);
}

TEST_CASE("pam: invariants and determinism") {
  auto rng = gw::stream_for(36, 0);
  const auto d = line_matrix(random_seq(rng, 40));
  int swaps = 0;
  const auto c = gw::pam(d, 4, 11, [&](double before, double after) {
    ++swaps;
    CHECK(after < before);
  });
  CHECK(swaps > 0);
  double total = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto k = static_cast<std::size_t>(c.assignment[i]);
    total += d(i, c.medoids[k]);
    for (auto m : c.medoids) CHECK(d(i, c.medoids[k]) <= d(i, m));
  }
  CHECK(total == doctest::Approx(c.total_cost).epsilon(1e-12));
  for (std::size_t k = 0; k < c.medoids.size(); ++k) CHECK(c.assignment[c.medoids[k]] == static_cast<int>(k));
  const auto again = gw::pam(d, 4, 11);
  CHECK(again.medoids == c.medoids);
  CHECK(again.assignment == c.assignment);
}

TEST_CASE("pam: ties go to the lower medoid index") {
  // point 1 is equidistant from medoids 0 and 2
  const auto d = line_matrix({0, 1, 2});
  const auto c = gw::pam(d, 2, 3);
  if (c.medoids == std::vector<std::size_t>{0, 2}) CHECK(c.assignment[1] == 0);
}

TEST_CASE("elbow endpoints") {
  auto rng = gw::stream_for(37, 0);
  const auto d = line_matrix(random_seq(rng, 15));
  const std::vector<int> Ls = {1, 15};
  const auto rows = gw::elbow(d, Ls, 2, 3);
  const auto med = oracle::one_median(d.size(), d);
  double mean = 0;
  for (std::size_t i = 0; i < d.size(); ++i) mean += d(i, med);
  mean /= static_cast<double>(d.size());
  CHECK(rows[0].mean_intra_distance == doctest::Approx(mean).epsilon(1e-12));
  CHECK(rows[1].mean_intra_distance == 0.0);
}

TEST_CASE("adjusted Rand index agrees with pair counting") {
  auto rng = gw::stream_for(38, 0);
  std::uniform_int_distribution<int> k(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> a(60), b(60);
    for (auto& v : a) v = k(rng);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = trial % 2 ? k(rng) : (a[i] + 1) % 5;
    CHECK(gw::adjusted_rand_index(a, b) == doctest::Approx(oracle::ari_pairs(a, b)).epsilon(1e-12));
  }
  const std::vector<int> x = {0, 0, 1, 1, 2};
  const std::vector<int> y = {5, 5, 3, 3, 9};
  CHECK(gw::adjusted_rand_index(x, y) == 1.0);
}

TEST_CASE("geo export: one row per station, one color per cluster") {
  fixture::TempDir dir;
  gw::Clustering c;
  c.L = 5;
  std::vector<gw::StationMeta> st;
  for (int i = 0; i < 20; ++i) {
    st.push_back({i, "b", 45.0 + i * 0.1, -120.0 - i * 0.1});
    c.assignment.push_back(i % 5);
  }
  gw::geo_export(c, st, dir / "a.csv", dir / "a.svg");
  const auto text = gw::csv::read_file(dir / "a.csv");
  CHECK(std::count(text.begin(), text.end(), '\n') == 21);
  CHECK(text.rfind("station_id,lat,lon,cluster\n", 0) == 0);
  const auto svg = gw::csv::read_file(dir / "a.svg");
  std::set<std::string> fills;
  for (auto pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) {
    const auto f = svg.find("fill=\"", pos) + 6;
    fills.insert(svg.substr(f, svg.find('"', f) - f));
  }
  CHECK(fills.size() == 5);
  st.pop_back();
  CHECK_THROWS_AS(gw::geo_export(c, st, dir / "b.csv"), gw::Error);
}
