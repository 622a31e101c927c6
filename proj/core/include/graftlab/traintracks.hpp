#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "graftlab/exact.hpp"

namespace graftlab {

// One incoming and two outgoing branch ends.
struct Switch {
  int in = 0;
  std::array<int, 2> out{0, 0};
};

// Trivalent train track. A branch that appears at no switch is a closed loop
// component; every other branch has exactly two ends.
class TrainTrack {
 public:
  // Throws ValidationError on out-of-range indices or branches with one or
  // more than two ends.
  TrainTrack(int branches, std::vector<Switch> switches);

  [[nodiscard]] int branches() const { return branches_; }
  [[nodiscard]] const std::vector<Switch>& switches() const { return switches_; }

  // Integer coefficient matrix of the switch conditions, one row per switch.
  [[nodiscard]] std::vector<std::vector<int>> switch_matrix() const;

 private:
  int branches_;
  std::vector<Switch> switches_;
};

using WeightVector = std::vector<Rational>;
using IntWeights = std::vector<std::int64_t>;
// Weights in a quadratic field, e.g. widths of a decomposition.
using QuadWeights = std::vector<QuadNumber>;

// Throws ValidationError when the sizes disagree.
bool check_switch(const TrainTrack& t, const WeightVector& w);
bool check_switch(const TrainTrack& t, const IntWeights& n);

// Branches whose weights are free in the balanced subspace, in increasing
// order; the remaining weights are determined by the switch conditions.
std::vector<int> free_branches(const TrainTrack& t);
// Completes values given on free_branches(t), in that order, to a balanced vector.
WeightVector complete_balanced(const TrainTrack& t, const WeightVector& free_values);

struct IntegralApproximation {
  IntWeights weights;
  Rational max_deviation;  // max_b |n_b - w_b|
  int k_impl = 0;          // guaranteed bound, equal to the branch count
};

// Balanced positive integer vector minimizing the largest per-branch deviation
// from w; among minimizers the first in branch order with values closest to the
// half-even rounding wins. Throws ValidationError if w is unbalanced, and
// GeometryError if no positive solution lies within distance K_impl.
IntegralApproximation integral_approximation(const TrainTrack& t, const WeightVector& w);

struct Loop {
  std::vector<int> branches;  // cyclic sequence, canonical rotation
  std::int64_t weight = 0;
};

struct WeightedMultiloop {
  std::vector<Loop> loops;
};

// Splits n into parallel strands and follows them through the switches.
WeightedMultiloop weights_to_multiloop(const TrainTrack& t, const IntWeights& n);
IntWeights induced_weights(const TrainTrack& t, const WeightedMultiloop& m);

// Carrying data of one splitting step: old = carrying * new on branch weights.
struct SplitStep {
  std::vector<std::vector<std::int64_t>> carrying;
  // Switch rows of the split track. The carrying matrix alone may be
  // singular; it is injective on balanced weights.
  std::vector<std::vector<int>> target_switches;

  static SplitStep identity(int branches);
};

// Weights on the split track; throws NumericalError if the step is singular
// on balanced weights or w is not in its image.
WeightVector transfer_weights(const SplitStep& step, const WeightVector& w);
IntWeights transfer_weights(const SplitStep& step, const IntWeights& n);
QuadWeights transfer_weights(const SplitStep& step, const QuadWeights& w);

}  // namespace graftlab
