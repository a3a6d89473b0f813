#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "sigmadep/field.hpp"
#include "sigmadep/orbit.hpp"

namespace sigmadep {

// a_{i,k} = sum over d of s_{k,d,i}, for classes i and 0 <= k < t.
struct AikTable {
  std::size_t classes = 0;
  long t = 1;
  std::vector<long> values;  // row-major, classes x t

  long at(std::size_t i, long k) const {
    if (k < 0 || k >= t) return 0;
    return values[i * static_cast<std::size_t>(t) + static_cast<std::size_t>(k)];
  }
};

AikTable compute_aik(const OrbitDecomposition& d);

struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<BigInt> data;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, BigInt(0)) {}
  BigInt& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const BigInt& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

using IntVector = std::vector<BigInt>;

// Rows (i, k) for k = -(t-1)..t-1 hold sum_r n_r a_{i,r+k} = 0; classes are
// stacked. Without a root of unity an all-ones row (sum n_r = 0) follows.
IntMatrix build_dependence_matrix(const AikTable& aik, long t, bool lambda_is_root_of_unity);

// Basis of the lattice {n in Z^cols : m n = 0}, via a unimodular row
// reduction of the transpose. Each vector has a positive leading entry.
std::vector<IntVector> integer_kernel(const IntMatrix& m);

// 1 for lambda = 1, 2 for lambda = -1, nullopt otherwise. The coefficient
// field is purely transcendental over Q, so these are its only roots of
// unity. Throws non_constant_lambda if lambda involves the equation variable.
std::optional<long> is_root_of_unity(const FieldElement& lambda, int z);

// phi(x) = x^{n_0} sigma(x)^{n_1} ... sigma^{t-1}(x)^{n_{t-1}}.
struct MultiplicativeWord {
  std::vector<long> exponents;
};

using LKey = std::tuple<long, long, std::size_t>;  // (k, d, class index)

struct Certificate {
  MultiplicativeWord word;
  FieldElement b;
  std::map<LKey, long> l_table;
  long u = 1;
};

struct IndependenceWitness {
  std::size_t class_index = 0;
  Poly representative;
  long k = 0;
  long value = 0;
};

struct Independent {
  std::vector<IndependenceWitness> witnesses;
};

struct Dependent {
  Certificate certificate;
};

struct Verdict {
  OrbitDecomposition decomposition;
  AikTable aik;
  bool lambda_root_of_unity = false;
  std::vector<IntVector> kernel;
  std::variant<Independent, Dependent> outcome;

  bool dependent() const { return std::holds_alternative<Dependent>(outcome); }
  const Certificate& certificate() const { return std::get<Dependent>(outcome).certificate; }
  const std::vector<IndependenceWitness>& witnesses() const {
    return std::get<Independent>(outcome).witnesses;
  }
};

// Checks that a, the lattice shifts, and their parameters fit the theorem:
// shift lattice on z and every parameter of a fixed by phi and sigma.
void validate_rank_one(const FieldElement& a, const TowerSpec& tower);

Verdict decide(const FieldElement& a, const TowerSpec& tower);

// Telescoping solution of the per-(k, i) triangular systems; b has constant
// factor 1. Throws inconsistent_word when the word is not in the kernel.
std::pair<FieldElement, std::map<LKey, long>> synthesize_b(const OrbitDecomposition& d,
                                                           const MultiplicativeWord& word);

// prod_r sigma^r(a)^{n_r} == phi(b)/b.
bool verify_certificate(const FieldElement& a, const Certificate& c, const TowerSpec& tower);

}  // namespace sigmadep
