#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "dadist/rng.hpp"
#include "dadist/shapes.hpp"

using namespace dadist;

namespace {

// A synthetic outline: sector A at x in [-4, -1], B and C near the axis, D
// mirrored from A on the far side of the vertical line x = 0 through the cut
// landmarks 30 and 45.
LandmarkSet symmetric_outline() {
  LandmarkSet set;
  set.specimen = "synthetic";
  set.points.resize(60);
  for (int i = 1; i <= 15; ++i) set.points[i - 1] = {-1.0 - 0.2 * i, 0.1 * i};  // A
  for (int i = 16; i <= 30; ++i) set.points[i - 1] = {-0.5, 0.05 * i};          // B
  for (int i = 31; i <= 45; ++i) set.points[i - 1] = {0.5, 0.05 * i};           // C
  for (int i = 46; i <= 60; ++i) {                                              // D = reflect(A)
    const auto& a = set.points[i - 46];
    set.points[i - 1] = {-a[0], a[1]};
  }
  set.points[29] = {-0.25, 2.0};  // cut landmarks straddle x = 0 symmetrically
  set.points[44] = {0.25, 2.0};
  return set;
}

LandmarkSet random_outline(Rng& rng) {
  LandmarkSet set;
  set.specimen = "rand";
  for (int i = 0; i < 60; ++i)
    set.points.push_back({rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)});
  return set;
}

}  // namespace

TEST_CASE("default pairings cover the documented landmark columns") {
  const auto p = default_pairing();
  REQUIRE(p.size() == 14);
  CHECK(p.front() == std::pair<int, int>{2, 16});
  CHECK(p.back() == std::pair<int, int>{15, 29});
  const auto m = mirror_pairing();
  REQUIRE(m.size() == 14);
  CHECK(m.front() == std::pair<int, int>{46, 31});
  CHECK(m.back() == std::pair<int, int>{59, 44});
}

TEST_CASE("quaternions take their components straight from the landmark pairs") {
  LandmarkSet set = symmetric_outline();
  set.points[1] = {1.0, 0.0};   // landmark 2
  set.points[15] = {0.0, 1.0};  // landmark 16
  const auto sample = build_quaternion_sample(set);
  REQUIRE(sample.q.size() == 14);
  CHECK(sample.q[0] == std::array<double, 4>{1.0, 0.0, 0.0, 1.0});

  // Pairing a landmark with itself duplicates its coordinates.
  set.points[4] = {2.5, -0.75};
  const auto self = build_quaternion_sample(set, {{5, 5}});
  CHECK(self.q[0] == std::array<double, 4>{2.5, -0.75, 2.5, -0.75});

  // Full pairing against a hand-built 14-vector.
  Rng rng(5);
  LandmarkSet r = random_outline(rng);
  const auto full = build_quaternion_sample(r);
  for (int u = 0; u < 14; ++u) {
    CHECK(full.q[u][0] == r.points[u + 1][0]);
    CHECK(full.q[u][1] == r.points[u + 1][1]);
    CHECK(full.q[u][2] == r.points[u + 15][0]);
    CHECK(full.q[u][3] == r.points[u + 15][1]);
  }

  CHECK_THROWS_AS(build_quaternion_sample(r, {{0, 16}}), config_error);
  CHECK_THROWS_AS(build_quaternion_sample(r, {{2, 61}}), config_error);
  CHECK_THROWS_AS((build_quaternion_sample(r, {{2, 16}, {2, 17}})), config_error);
  LandmarkSet short_set = r;
  short_set.points.pop_back();
  CHECK_THROWS_AS(build_quaternion_sample(short_set), config_error);
}

TEST_CASE("symmetrize reflects the free sector across the cut axis") {
  LandmarkSet set = symmetric_outline();
  // Move sector D onto A's side so the reflection triggers.
  for (int i = 46; i <= 60; ++i) set.points[i - 1][0] = -set.points[i - 1][0];
  const double axis = 0.5 * (set.points[29][0] + set.points[44][0]);

  const LandmarkSet fixed = symmetrize(set);
  for (int i = 1; i <= 45; ++i) {
    CHECK(fixed.points[i - 1][0] == set.points[i - 1][0]);
    CHECK(fixed.points[i - 1][1] == set.points[i - 1][1]);
  }
  for (int i = 46; i <= 60; ++i) {
    CHECK(fixed.points[i - 1][0] == doctest::Approx(2.0 * axis - set.points[i - 1][0]));
    CHECK(fixed.points[i - 1][1] == set.points[i - 1][1]);
  }

  // Idempotent: a second application changes nothing.
  const LandmarkSet twice = symmetrize(fixed);
  for (int i = 0; i < 60; ++i) {
    CHECK(twice.points[i][0] == fixed.points[i][0]);
    CHECK(twice.points[i][1] == fixed.points[i][1]);
  }

  // Identity on an already symmetric outline.
  const LandmarkSet sym = symmetric_outline();
  const LandmarkSet same = symmetrize(sym);
  for (int i = 0; i < 60; ++i) {
    CHECK(same.points[i][0] == sym.points[i][0]);
    CHECK(same.points[i][1] == sym.points[i][1]);
  }
}

TEST_CASE("F values are quaternion squared norms") {
  QuaternionSample s{"s", {{1.0, 1.0, 1.0, 1.0}}};
  CHECK(squared_norm(s) == 4.0);

  auto reps = to_quaternion_replicates({s});
  REQUIRE(reps.size() == 1);
  REQUIRE(reps[0].pds.size() == 1);
  CHECK(trace_real(reps[0].pds[0]) == 4.0);

  // Zero quaternion lands on the support boundary and is flagged downstream.
  QuaternionSample z{"z", {{0.0, 0.0, 0.0, 0.0}}};
  CHECK(squared_norm(z) == 0.0);

  Rng rng(9);
  QuaternionSample r{"r", {}};
  for (int u = 0; u < 14; ++u)
    r.q.push_back({rng.normal(), rng.normal(), rng.normal(), rng.normal()});
  // |T|^2 equals the trace of the Gram matrix of the 14x1 quaternion vector,
  // both directly and through the complex embedding.
  const DAMatrix t = to_quaternion_vector(r);
  CHECK(trace_gram(t) == doctest::Approx(squared_norm(r)).epsilon(1e-14));
  const Eigen::MatrixXcd e = embed_complex(t);
  CHECK(trace_real_embedded(Eigen::MatrixXcd(e.adjoint() * e), 4) ==
        doctest::Approx(squared_norm(r)).epsilon(1e-12));

  const FamilyPoint joint = to_specimen_collection({r, s});
  REQUIRE(joint.pds.size() == 2);
  CHECK(trace_real(joint.pds[0]) == doctest::Approx(squared_norm(r)));
  CHECK(trace_real(joint.pds[1]) == 4.0);

  const DAMatrix two = to_quaternion_matrix(r, r);
  CHECK(trace_gram(two) == doctest::Approx(2.0 * squared_norm(r)).epsilon(1e-12));
}

TEST_CASE("landmark CSV round trip is lossless") {
  Rng rng(31);
  std::vector<LandmarkSet> sets = {random_outline(rng), random_outline(rng)};
  sets[0].specimen = "bone-1";
  sets[1].specimen = "bone-2";
  sets[0].points[7] = {1.0 / 3.0, 0.1 + 0.2};

  std::stringstream buf;
  write_landmarks_csv(buf, sets);
  const auto back = read_landmarks_csv(buf);
  REQUIRE(back.size() == 2);
  for (std::size_t s = 0; s < 2; ++s) {
    CHECK(back[s].specimen == sets[s].specimen);
    for (int i = 0; i < 60; ++i) {
      CHECK(back[s].points[i][0] == sets[s].points[i][0]);
      CHECK(back[s].points[i][1] == sets[s].points[i][1]);
    }
  }

  std::stringstream bad("specimen,landmark_index,x,y\nb,1,0.5\n");
  CHECK_THROWS_AS(read_landmarks_csv(bad), config_error);
  std::stringstream incomplete("b,1,0.5,0.5\n");
  CHECK_THROWS_AS(read_landmarks_csv(incomplete), config_error);
  std::stringstream dup("b,1,0.5,0.5\nb,1,0.25,0.25\n");
  CHECK_THROWS_AS(read_landmarks_csv(dup), config_error);
}

TEST_CASE("quaternion CSV round trip is lossless") {
  Rng rng(77);
  std::vector<QuaternionSample> samples(3);
  for (int s = 0; s < 3; ++s) {
    samples[s].specimen = "spec" + std::to_string(s);
    for (int u = 0; u < 14; ++u)
      samples[s].q.push_back({rng.normal() * 1e-8, rng.normal() * 1e8,
                              rng.normal(), 1.0 / 3.0 + rng.normal()});
  }
  std::stringstream buf;
  write_quaternions_csv(buf, samples);
  const auto back = read_quaternions_csv(buf);
  REQUIRE(back.size() == 3);
  for (int s = 0; s < 3; ++s) {
    CHECK(back[s].specimen == samples[s].specimen);
    REQUIRE(back[s].q.size() == 14);
    for (int u = 0; u < 14; ++u)
      for (int r = 0; r < 4; ++r) CHECK(back[s].q[u][r] == samples[s].q[u][r]);
  }
}
