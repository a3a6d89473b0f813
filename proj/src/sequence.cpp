#include "sigmadep/sequence.hpp"

#include <optional>
#include <random>
#include <string>

#include "sigmadep/errors.hpp"

namespace sigmadep {

namespace {

QMatrix identity_q(std::size_t n) {
  QMatrix m(n, std::vector<BigRational>(n, BigRational(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

QMatrix mul_q(const QMatrix& a, const QMatrix& b) {
  QMatrix out(a.size(), std::vector<BigRational>(b[0].size(), BigRational(0)));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (sgn(a[i][k]) == 0) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

// Gauss-Jordan inverse; nullopt when singular.
std::optional<QMatrix> inverse_q(QMatrix a) {
  const std::size_t n = a.size();
  QMatrix inv = identity_q(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const BigRational s = 1 / a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] *= s;
      inv[c][k] *= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(a[r][c]) == 0) continue;
      const BigRational f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

BigRational pow_q(const BigRational& x, long e) {
  if (e < 0) {
    if (sgn(x) == 0) throw EngineError(ErrorCode::pole_at_point, "negative power of zero");
    return pow_q(1 / x, -e);
  }
  BigRational r = 1;
  for (long i = 0; i < e; ++i) r *= x;
  return r;
}

BigRational random_rational(std::mt19937_64& rng, long num_bound, long den_lo, long den_hi) {
  std::uniform_int_distribution<long> num(-num_bound, num_bound);
  std::uniform_int_distribution<long> den(den_lo, den_hi);
  BigRational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

void require_unit_shift(const TowerSpec& tower) {
  const Action& ph = tower.action(Endo::phi, tower.top());
  if (ph.kind != ActionKind::shift || !ph.c.is_one()) {
    throw EngineError(ErrorCode::unsupported_tower, "sequence frames need phi(z) = z + 1");
  }
}

// A(i) when defined and invertible.
std::optional<QMatrix> step_matrix(const LinearSystem& sys, const Point& params, long i) {
  Point p = params;
  p[sys.tower.top()] = BigRational(i);
  try {
    QMatrix a = evaluate(sys.A, p);
    if (!inverse_q(a)) return std::nullopt;
    return a;
  } catch (const EngineError& e) {
    if (e.code() != ErrorCode::pole_at_point) throw;
    return std::nullopt;
  }
}

}  // namespace

SequenceFrame fundamental_matrix(const LinearSystem& sys, long i0, long horizon, const Point& params,
                                 bool auto_advance) {
  require_unit_shift(sys.tower);
  if (horizon < 1) throw EngineError(ErrorCode::invalid_argument, "horizon must be positive");
  for (int v = 0; v < sys.tower.top(); ++v) {
    bool used = false;
    for (const FieldElement& f : sys.A.data()) used = used || f.contains(v);
    if (used && !params.count(v)) {
      throw EngineError(ErrorCode::invalid_argument, "no value for parameter " + sys.tower.var(v).name);
    }
  }
  SequenceFrame frame;
  frame.horizon = horizon;
  frame.params = params;
  long start = i0;
  while (true) {
    frame.values.assign(1, identity_q(sys.n()));
    bool restarted = false;
    for (long i = start; i < start + horizon - 1; ++i) {
      auto a = step_matrix(sys, params, i);
      if (!a) {
        if (!auto_advance) {
          throw EngineError(ErrorCode::singular_a_at_index,
                            "A(" + std::to_string(i) + ") is undefined or singular");
        }
        frame.skipped.insert(i);
        start = i + 1;
        restarted = true;
        break;
      }
      frame.values.push_back(mul_q(*a, frame.values.back()));
    }
    if (!restarted) break;
  }
  frame.i0 = start;
  if (!satisfies_frame_law(sys, frame)) {
    throw EngineError(ErrorCode::invalid_argument, "frame violates Y(i+1) = A(i) Y(i)");
  }
  return frame;
}

bool satisfies_frame_law(const LinearSystem& sys, const SequenceFrame& frame) {
  if (frame.values.empty() || frame.values[0] != identity_q(sys.n())) return false;
  for (std::size_t k = 0; k + 1 < frame.values.size(); ++k) {
    const long i = frame.i0 + static_cast<long>(k);
    auto a = step_matrix(sys, frame.params, i);
    if (!a || mul_q(*a, frame.values[k]) != frame.values[k + 1]) return false;
  }
  return true;
}

SamplePlan make_sample_plan(const TowerSpec& tower, std::size_t trials, std::uint64_t seed, long z_range) {
  SamplePlan plan;
  plan.seed = seed;
  plan.trials = trials;
  plan.z_range = z_range;
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < trials; ++s) {
    Point p;
    for (int v = 0; v < tower.top(); ++v) p[v] = random_rational(rng, 1'000'000, 1'000'000, 1'000'000'000);
    p[tower.top()] = random_rational(rng, z_range, 1, 997);
    plan.points.push_back(std::move(p));
  }
  return plan;
}

NumericCheck check_certificate_numeric(const FieldElement& a, const Certificate& c, const TowerSpec& tower,
                                       const SamplePlan& plan) {
  NumericCheck out;
  for (const Point& p : plan.points) {
    try {
      BigRational lhs = 1;
      for (std::size_t r = 0; r < c.word.exponents.size(); ++r) {
        const long e = c.word.exponents[r];
        if (e == 0) continue;
        lhs *= pow_q(evaluate(a, map_point(p, tower, Endo::sigma, static_cast<unsigned>(r))), e);
      }
      const BigRational b0 = evaluate(c.b, p);
      if (sgn(b0) == 0) throw EngineError(ErrorCode::pole_at_point, "b vanishes");
      const BigRational rhs = evaluate(c.b, map_point(p, tower, Endo::phi)) / b0;
      ++out.evaluated;
      if (lhs != rhs) out.agree = false;
    } catch (const EngineError& e) {
      if (e.code() != ErrorCode::pole_at_point) throw;
      ++out.skipped;
    }
  }
  if (out.evaluated == 0) throw EngineError(ErrorCode::all_samples_hit_poles, "every sample hit a pole");
  return out;
}

NumericCheck check_isomonodromy_numeric(const LinearSystem& sys, const GaugeWitness& w,
                                        const SamplePlan& plan) {
  if (w.B.rows() != sys.n() || w.B.cols() != sys.n()) {
    throw EngineError(ErrorCode::dimension_mismatch, "B must have the size of A");
  }
  NumericCheck out;
  for (const Point& p : plan.points) {
    try {
      const QMatrix a = evaluate(sys.A, p);
      const auto a_inv = inverse_q(a);
      if (!a_inv) throw EngineError(ErrorCode::pole_at_point, "A is singular at the sample");
      const QMatrix b = evaluate(w.B, p);
      const QMatrix phi_b = evaluate(w.B, map_point(p, sys.tower, Endo::phi));
      const QMatrix sigma_a = evaluate(sys.A, map_point(p, sys.tower, Endo::sigma));
      ++out.evaluated;
      if (phi_b != mul_q(mul_q(sigma_a, b), *a_inv)) out.agree = false;
    } catch (const EngineError& e) {
      if (e.code() != ErrorCode::pole_at_point) throw;
      ++out.skipped;
    }
  }
  if (out.evaluated == 0) throw EngineError(ErrorCode::all_samples_hit_poles, "every sample hit a pole");
  return out;
}

}  // namespace sigmadep
