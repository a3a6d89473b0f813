#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. They work on raw exponent data and never call the orbit or
// dependence modules.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "sigmadep/field.hpp"

namespace sigmadep::testing {

// lambda * prod (z - k*t - d)^s in the tower Q(t)(z), phi = z+1, sigma = z+t.
struct LatticeInstance {
  long lambda = 1;
  std::map<std::pair<long, long>, long> exps;  // (k, d) -> s

  FieldElement build() const {
    const Poly z = Poly::variable(1);
    const Poly t = Poly::variable(0);
    FieldElement a(lambda);
    for (const auto& [kd, s] : exps) {
      if (s != 0) a *= FieldElement(z - t.scaled(kd.first) - kd.second).pow(s);
    }
    return a;
  }
};

struct OracleCertificate {
  std::vector<long> word;
  FieldElement b;
};

// Exponent of (z - k t - d) in prod_r sigma^r(a)^{n_r}; sigma lowers k by one.
inline std::map<std::pair<long, long>, long> word_exponents(const LatticeInstance& inst,
                                                            const std::vector<long>& word) {
  std::map<std::pair<long, long>, long> out;
  for (const auto& [kd, s] : inst.exps) {
    for (std::size_t r = 0; r < word.size(); ++r) {
      out[{kd.first - static_cast<long>(r), kd.second}] += word[r] * s;
    }
  }
  return out;
}

// Searches words with at most max_t letters and |n_r| <= max_n. A word
// admits b exactly when lambda^(sum n) = 1 and, on every phi-orbit
// {z - k t - d : d in Z}, the exponents sum to zero; b is then the
// prefix-sum product. The first hit is confirmed by substitution.
inline std::optional<OracleCertificate> brute_force_certificate(const LatticeInstance& inst,
                                                                const TowerSpec& tower,
                                                                long max_t = 3, long max_n = 3) {
  for (long tw = 1; tw <= max_t; ++tw) {
    std::vector<long> word(static_cast<std::size_t>(tw), -max_n);
    while (true) {
      bool nonzero = false;
      long total = 0;
      for (long n : word) {
        nonzero = nonzero || n != 0;
        total += n;
      }
      bool lambda_ok = inst.lambda == 1 || total == 0 || (inst.lambda == -1 && total % 2 == 0);
      if (nonzero && word.back() != 0 && lambda_ok) {
        auto e = word_exponents(inst, word);
        std::map<long, long> orbit_sum;
        for (const auto& [kd, s] : e) orbit_sum[kd.first] += s;
        bool ok = true;
        for (const auto& [k, s] : orbit_sum) ok = ok && s == 0;
        if (ok) {
          const Poly z = Poly::variable(1);
          const Poly t = Poly::variable(0);
          // phi(b)/b has exponent c_{k,d+1} - c_{k,d} at (z - k t - d).
          FieldElement b(1L);
          std::map<long, std::map<long, long>> by_orbit;
          for (const auto& [kd, s] : e) by_orbit[kd.first][kd.second] += s;
          for (const auto& [k, row] : by_orbit) {
            long c = 0;
            const long lo = row.begin()->first;
            const long hi = row.rbegin()->first;
            for (long d = lo; d <= hi; ++d) {
              auto it = row.find(d);
              if (it != row.end()) c += it->second;
              if (c != 0) b *= FieldElement(z - t.scaled(k) - (d + 1)).pow(c);
            }
          }
          FieldElement a = inst.build();
          FieldElement lhs(1L);
          FieldElement sh = a;
          for (std::size_t r = 0; r < word.size(); ++r) {
            if (r > 0) sh = apply_endo(sh, tower, Endo::sigma);
            lhs *= sh.pow(word[r]);
          }
          if (lhs == apply_endo(b, tower, Endo::phi) / b) return OracleCertificate{word, b};
          return std::nullopt;  // would mean the exponent criterion is wrong
        }
      }
      std::size_t pos = 0;
      while (pos < word.size() && word[pos] == max_n) word[pos++] = -max_n;
      if (pos == word.size()) break;
      ++word[pos];
    }
  }
  return std::nullopt;
}

}  // namespace sigmadep::testing
