#include "sigmadep/dependence.hpp"

#include <algorithm>
#include <set>

#include "sigmadep/errors.hpp"

namespace sigmadep {

AikTable compute_aik(const OrbitDecomposition& d) {
  AikTable out;
  out.classes = d.R();
  out.t = d.t;
  out.values.assign(out.classes * static_cast<std::size_t>(out.t), 0);
  for (std::size_t i = 0; i < d.R(); ++i) {
    for (const auto& [off, s] : d.classes[i].terms) {
      out.values[i * static_cast<std::size_t>(out.t) + static_cast<std::size_t>(off.first)] += s;
    }
  }
  return out;
}

IntMatrix build_dependence_matrix(const AikTable& aik, long t, bool lambda_is_root_of_unity) {
  if (t < 1) throw EngineError(ErrorCode::invalid_argument, "t must be at least 1");
  const std::size_t band = static_cast<std::size_t>(2 * t - 1);
  IntMatrix m(band * aik.classes + (lambda_is_root_of_unity ? 0 : 1), static_cast<std::size_t>(t));
  for (std::size_t i = 0; i < aik.classes; ++i) {
    for (long k = -(t - 1); k <= t - 1; ++k) {
      const std::size_t row = i * band + static_cast<std::size_t>(k + t - 1);
      for (long r = 0; r < t; ++r) m.at(row, static_cast<std::size_t>(r)) = aik.at(i, r + k);
    }
  }
  if (!lambda_is_root_of_unity) {
    for (std::size_t c = 0; c < m.cols; ++c) m.at(m.rows - 1, c) = 1;
  }
  return m;
}

std::vector<IntVector> integer_kernel(const IntMatrix& m) {
  // Rows of [m^T | I]; integer row operations keep the right block
  // unimodular, so rows whose left block vanishes span the kernel lattice.
  const std::size_t n = m.cols;
  const std::size_t w = m.rows;
  std::vector<std::vector<BigInt>> rows(n, std::vector<BigInt>(w + n, BigInt(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < w; ++j) rows[i][j] = m.at(j, i);
    rows[i][w + i] = 1;
  }
  auto combine = [&](std::size_t dst, std::size_t src, const BigInt& f) {
    for (std::size_t c = 0; c < w + n; ++c) rows[dst][c] -= f * rows[src][c];
  };
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < w && pivot_row < n; ++col) {
    // Euclid on the column until a single nonzero entry remains.
    while (true) {
      std::size_t best = n;
      for (std::size_t r = pivot_row; r < n; ++r) {
        if (sgn(rows[r][col]) == 0) continue;
        if (best == n || abs(rows[r][col]) < abs(rows[best][col])) best = r;
      }
      if (best == n) break;
      std::swap(rows[pivot_row], rows[best]);
      bool done = true;
      for (std::size_t r = pivot_row + 1; r < n; ++r) {
        if (sgn(rows[r][col]) == 0) continue;
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), rows[r][col].get_mpz_t(), rows[pivot_row][col].get_mpz_t());
        combine(r, pivot_row, q);
        if (sgn(rows[r][col]) != 0) done = false;
      }
      if (done) {
        ++pivot_row;
        break;
      }
    }
  }
  std::vector<IntVector> basis;
  for (std::size_t r = pivot_row; r < n; ++r) {
    IntVector v(rows[r].begin() + static_cast<std::ptrdiff_t>(w), rows[r].end());
    auto lead = std::find_if(v.begin(), v.end(), [](const BigInt& x) { return sgn(x) != 0; });
    if (lead != v.end() && sgn(*lead) < 0) {
      for (BigInt& x : v) x = -x;
    }
    basis.push_back(std::move(v));
  }
  std::sort(basis.begin(), basis.end(), [](const IntVector& a, const IntVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (abs(a[i]) != abs(b[i])) return abs(a[i]) > abs(b[i]);
      if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
  });
  return basis;
}

std::optional<long> is_root_of_unity(const FieldElement& lambda, int z) {
  if (lambda.contains(z)) throw EngineError(ErrorCode::non_constant_lambda, "lambda depends on z");
  if (lambda.is_one()) return 1;
  if ((-lambda).is_one()) return 2;
  return std::nullopt;
}

void validate_rank_one(const FieldElement& a, const TowerSpec& tower) {
  if (a.is_zero()) throw EngineError(ErrorCode::invalid_argument, "coefficient a must be nonzero");
  const Lattice lat = equation_lattice(tower);
  std::set<int> params;
  a.collect_vars(params);
  lat.phi_shift.collect_vars(params);
  lat.sigma_shift.collect_vars(params);
  params.erase(lat.z);
  for (int v : params) {
    for (Endo e : {Endo::phi, Endo::sigma}) {
      if (tower.action(e, v).kind != ActionKind::identity) {
        throw EngineError(ErrorCode::unsupported_tower,
                          "parameter " + tower.var(v).name + " must be fixed by phi and sigma");
      }
    }
  }
}

std::pair<FieldElement, std::map<LKey, long>> synthesize_b(const OrbitDecomposition& d,
                                                           const MultiplicativeWord& word) {
  const long tw = static_cast<long>(word.exponents.size());
  const long N = d.N;
  std::map<LKey, long> table;
  FieldElement b(1L);
  for (std::size_t i = 0; i < d.R(); ++i) {
    for (long k = -(tw - 1); k <= d.t - 1; ++k) {
      auto e = [&](long dd) {
        long acc = 0;
        for (long r = 0; r < tw; ++r) acc += word.exponents[r] * d.exponent(i, r + k, dd);
        return acc;
      };
      // l_{k,-N-1} = 0, l_{k,d+1} = l_{k,d} + e(d).
      long l = 0;
      for (long dd = -N - 1; dd < N; ++dd) {
        l += e(dd);
        if (l != 0) table[{k, dd + 1, i}] = l;
      }
      if (e(N) != -l) {
        throw EngineError(ErrorCode::inconsistent_word,
                          "word does not annihilate the dependence system");
      }
    }
  }
  for (const auto& [key, l] : table) {
    const auto& [k, dd, i] = key;
    const FieldElement shift = d.lattice.sigma_shift * FieldElement(k) +
                               d.lattice.phi_shift * FieldElement(dd);
    b *= shift_poly(d.classes[i].representative, d.lattice.z, shift).pow(l);
  }
  return {b, table};
}

bool verify_certificate(const FieldElement& a, const Certificate& c, const TowerSpec& tower) {
  if (a.is_zero() || c.b.is_zero()) return false;
  const auto& ns = c.word.exponents;
  if (std::all_of(ns.begin(), ns.end(), [](long n) { return n == 0; })) return false;
  FieldElement lhs(1L);
  FieldElement shifted = a;
  for (std::size_t r = 0; r < ns.size(); ++r) {
    if (r > 0) shifted = apply_endo(shifted, tower, Endo::sigma);
    if (ns[r] != 0) lhs *= shifted.pow(ns[r]);
  }
  return lhs == apply_endo(c.b, tower, Endo::phi) / c.b;
}

Verdict decide(const FieldElement& a, const TowerSpec& tower) {
  validate_rank_one(a, tower);
  Verdict v;
  v.decomposition = decompose(a, tower);
  v.aik = compute_aik(v.decomposition);
  const std::optional<long> root = is_root_of_unity(v.decomposition.lambda, v.decomposition.lattice.z);
  v.lambda_root_of_unity = root.has_value();
  const long t = root ? v.decomposition.t : std::max(v.decomposition.t, 2L);
  v.kernel = integer_kernel(build_dependence_matrix(v.aik, t, v.lambda_root_of_unity));

  Independent ind;
  for (std::size_t i = 0; i < v.aik.classes; ++i) {
    for (long k = 0; k < v.aik.t; ++k) {
      if (long val = v.aik.at(i, k); val != 0) {
        ind.witnesses.push_back({i, v.decomposition.classes[i].representative, k, val});
      }
    }
  }
  if (!ind.witnesses.empty()) {
    if (!v.kernel.empty()) {
      throw EngineError(ErrorCode::inconsistent_word, "kernel is nontrivial despite a nonzero a_{i,k}");
    }
    v.outcome = std::move(ind);
    return v;
  }
  if (v.kernel.empty()) {
    throw EngineError(ErrorCode::inconsistent_word, "kernel is trivial although every a_{i,k} vanishes");
  }
  Certificate cert;
  cert.u = root.value_or(1);
  cert.word.exponents = root ? std::vector<long>{*root} : std::vector<long>{1, -1};
  std::tie(cert.b, cert.l_table) = synthesize_b(v.decomposition, cert.word);
  if (!verify_certificate(a, cert, tower)) {
    throw EngineError(ErrorCode::inconsistent_word, "synthesized certificate does not verify");
  }
  v.outcome = Dependent{std::move(cert)};
  return v;
}

}  // namespace sigmadep
