#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "sigmadep/dependence.hpp"
#include "sigmadep/isomonodromy.hpp"

namespace sigmadep {

// Truncated sequence model: Y(i) for i = i0 .. i0 + horizon - 1 with
// Y(i0) = I and Y(i + 1) = A(i) Y(i), A evaluated at z = i.
struct SequenceFrame {
  long i0 = 0;
  long horizon = 0;
  Point params;                // values of the variables below z
  std::vector<QMatrix> values;  // values[k] = Y(i0 + k)
  std::set<long> skipped;      // indices i where A(i) had a pole or was singular

  const QMatrix& at(long i) const { return values.at(static_cast<std::size_t>(i - i0)); }
};

// Builds the frame. Needs phi(z) = z + 1 (unsupported_tower otherwise) and
// a value for every parameter of A (invalid_argument). When A(i) has a pole
// or is singular for some i used by the recurrence, either throws
// singular_a_at_index or, with auto_advance, restarts just after i.
SequenceFrame fundamental_matrix(const LinearSystem& sys, long i0, long horizon,
                                 const Point& params = {}, bool auto_advance = false);

// Y(i + 1) == A(i) Y(i) over the whole frame, recomputed from sys.
bool satisfies_frame_law(const LinearSystem& sys, const SequenceFrame& frame);

// Sample points for identity testing. Parameters get large random
// denominators; z gets numerators in [-z_range, z_range].
struct SamplePlan {
  std::uint64_t seed = 0;
  std::size_t trials = 20;
  long z_range = 1000;
  std::vector<Point> points;
};

SamplePlan make_sample_plan(const TowerSpec& tower, std::size_t trials, std::uint64_t seed,
                            long z_range = 1000);

struct NumericCheck {
  bool agree = true;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // samples that hit a pole

  explicit operator bool() const { return agree; }
};

// prod_r a(sigma^r P)^{n_r} == b(phi P) / b(P) at every pole-free sample P.
// Throws all_samples_hit_poles when no sample could be evaluated.
NumericCheck check_certificate_numeric(const FieldElement& a, const Certificate& c,
                                       const TowerSpec& tower, const SamplePlan& plan);

// phi(B) == sigma(A) B A^{-1} entrywise at every sample where all three
// sides are defined.
NumericCheck check_isomonodromy_numeric(const LinearSystem& sys, const GaugeWitness& w,
                                        const SamplePlan& plan);

}  // namespace sigmadep
