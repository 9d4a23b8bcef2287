#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dadist/families.hpp"

namespace dadist {

/// One specimen outline: 60 ordered planar landmarks, grouped in four sectors
/// A = 1..15, B = 16..30, C = 31..45, D = 46..60 (1-based indices).
struct LandmarkSet {
  std::string specimen;
  std::vector<std::array<double, 2>> points;
};

/// One specimen reduced to quaternions q_u = a + b i + c j + d k, each built
/// from a pair of landmarks: (a, b) from the first, (c, d) from the second.
struct QuaternionSample {
  std::string specimen;
  std::vector<std::array<double, 4>> q;
};

/// The standard first-column pairing (2,16), (3,17), .., (15,29): sector A
/// against sector B, 14 quaternions.
std::vector<std::pair<int, int>> default_pairing();

/// The mirrored second-column pairing (46,31), (47,32), .., (59,44): sector D
/// against sector C, for the 14x2 quaternion-matrix variant.
std::vector<std::pair<int, int>> mirror_pairing();

/// Quaternion u from landmark pair (first, second): components
/// (x_first, y_first, x_second, y_second). Pair indices are 1-based, must lie
/// in 1..60 and be pairwise distinct within each column of the pairing.
QuaternionSample build_quaternion_sample(
    const LandmarkSet& set,
    const std::vector<std::pair<int, int>>& pairing = default_pairing());

/// Normalize the free sector D to sit mirror to sector A across the vertical
/// axis through the midpoint of the cut landmarks: if D's centroid lies on
/// A's side, every D point (x, y) becomes (2 x0 - x, y). Idempotent, and the
/// identity on an already symmetric outline.
LandmarkSet symmetrize(const LandmarkSet& set,
                       std::pair<int, int> cut_indices = {30, 45});

/// Squared norm |T|^2 = sum_u |q_u|^2 of the specimen's quaternion vector.
double squared_norm(const QuaternionSample& sample);

/// The dependent-sample collection of the vector route: one point whose
/// entries are F_i = T_i^H T_i = |T_i|^2 per specimen (k = #specimens).
FamilyPoint to_specimen_collection(const std::vector<QuaternionSample>& samples);

/// One replicate per specimen with the per-quaternion values F_1..F_14.
std::vector<FamilyPoint> to_quaternion_replicates(
    const std::vector<QuaternionSample>& samples);

/// The specimen's quaternion vector as a 14 x 1 quaternionic matrix.
DAMatrix to_quaternion_vector(const QuaternionSample& sample);

/// The 14 x 2 variant: first column from one pairing, second from another
/// (typically default_pairing and mirror_pairing of the symmetrized outline).
DAMatrix to_quaternion_matrix(const QuaternionSample& col1,
                              const QuaternionSample& col2);

/// CSV rows `specimen,landmark_index,x,y`; an optional header line is
/// skipped. Every specimen must provide indices 1..60 exactly once.
std::vector<LandmarkSet> read_landmarks_csv(std::istream& in);
void write_landmarks_csv(std::ostream& out, const std::vector<LandmarkSet>& sets);

/// CSV rows `specimen,u,a,b,c,d`, 17 significant digits (exact round trip).
std::vector<QuaternionSample> read_quaternions_csv(std::istream& in);
void write_quaternions_csv(std::ostream& out,
                           const std::vector<QuaternionSample>& samples);

}  // namespace dadist
