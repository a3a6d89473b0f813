#include "sigmadep/univariate.hpp"

#include <algorithm>
#include <map>

#include "sigmadep/errors.hpp"

namespace sigmadep::upoly {

namespace {

constexpr unsigned long kTrialDivisionLimit = 20'000'000UL;
constexpr double kKroneckerSearchLimit = 4e6;

bool less_upoly(const UPoly& a, const UPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = a.size(); i-- > 0;) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return false;
}


using ModPoly = std::vector<long long>;

long long mod(const BigInt& x, long long p) {
  BigInt r;
  mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(p));
  return static_cast<long long>(r.get_si());
}

long long inv_mod(long long a, long long p) {
  long long r = 1;
  long long e = p - 2;
  a %= p;
  while (e > 0) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return r;
}

void trim_mod(ModPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// True when gcd(f, g) over F_p is a nonzero constant.
bool coprime_mod(ModPoly f, ModPoly g, long long p) {
  trim_mod(f);
  trim_mod(g);
  while (!g.empty()) {
    const long long inv = inv_mod(g.back(), p);
    while (f.size() >= g.size()) {
      const long long c = f.back() * inv % p;
      const std::size_t shift = f.size() - g.size();
      for (std::size_t i = 0; i < g.size(); ++i) f[shift + i] = ((f[shift + i] - c * g[i]) % p + p) % p;
      trim_mod(f);
      if (f.empty()) break;
    }
    std::swap(f, g);
  }
  return f.size() == 1;
}

// Monic gcd over F_p.
ModPoly gcd_mod(ModPoly f, ModPoly g, long long p) {
  trim_mod(f);
  trim_mod(g);
  while (!g.empty()) {
    const long long inv = inv_mod(g.back(), p);
    while (f.size() >= g.size()) {
      const long long c = f.back() * inv % p;
      const std::size_t shift = f.size() - g.size();
      for (std::size_t i = 0; i < g.size(); ++i) f[shift + i] = ((f[shift + i] - c * g[i]) % p + p) % p;
      trim_mod(f);
      if (f.empty()) break;
    }
    std::swap(f, g);
  }
  if (!f.empty()) {
    const long long inv = inv_mod(f.back(), p);
    for (long long& c : f) c = c * inv % p;
  }
  return f;
}

BigInt pow_int(const BigInt& b, std::size_t e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

BigInt horner(const std::vector<BigInt>& f, const BigInt& x) {
  BigInt acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Integer roots of a square-free integer polynomial with f[0] != 0: roots
// modulo a prime where f stays square-free, Newton-lifted past twice the
// Cauchy bound, then checked exactly.
std::vector<BigInt> padic_integer_roots(const std::vector<BigInt>& f) {
  const std::size_t n = f.size() - 1;
  std::vector<BigInt> roots;
  if (n == 1) {
    if (f[0] % f[1] == 0) roots.push_back(-f[0] / f[1]);
    return roots;
  }
  BigInt bound = 0;
  for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, BigInt(abs(f[i])));
  bound = bound / abs(f[n]) + 2;
  std::vector<BigInt> df(n);
  for (std::size_t i = 1; i <= n; ++i) df[i - 1] = f[i] * static_cast<unsigned long>(i);
  for (long long p = 1009;; p += 2) {
    if (!is_prime(p) || mod(f[n], p) == 0) continue;
    ModPoly fp(n + 1), dfp(n);
    for (std::size_t i = 0; i <= n; ++i) fp[i] = mod(f[i], p);
    for (std::size_t i = 0; i < n; ++i) dfp[i] = mod(df[i], p);
    if (!coprime_mod(fp, dfp, p)) continue;
    for (long long x = 0; x < p; ++x) {
      long long acc = 0;
      for (std::size_t i = n + 1; i-- > 0;) acc = (acc * x + fp[i]) % p;
      if (acc != 0) continue;
      BigInt r = static_cast<long>(x);
      BigInt m = static_cast<long>(p);
      while (m <= 2 * bound) {
        m *= m;
        BigInt d = horner(df, r) % m;
        if (d < 0) d += m;
        BigInt inv;
        mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), m.get_mpz_t());
        r = (r - horner(f, r) * inv) % m;
        if (r < 0) r += m;
      }
      if (2 * r > m) r -= m;
      if (horner(f, r) == 0) roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
  }
}

// Word-size primes below 2^31, found once and extended on demand.
long long gcd_prime(std::size_t i) {
  static std::vector<long long> primes;
  long long p = primes.empty() ? 2147483629 + 2 : primes.back();
  while (primes.size() <= i) {
    p -= 2;
    if (is_prime(p)) primes.push_back(p);
  }
  return primes[i];
}

}  // namespace

void trim(UPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

UPoly mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly out(a.size() + b.size() - 1, BigRational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.empty()) throw EngineError(ErrorCode::division_by_zero, "univariate division by zero");
  UPoly r = a;
  trim(r);
  if (r.size() < b.size()) return {UPoly{}, r};
  UPoly q(r.size() - b.size() + 1, BigRational(0));
  for (std::size_t k = q.size(); k-- > 0;) {
    BigRational f = r[k + b.size() - 1] / b.back();
    q[k] = f;
    if (sgn(f) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[j + k] -= f * b[j];
  }
  r.resize(b.size() - 1);
  trim(r);
  trim(q);
  return {q, r};
}

UPoly monic(const UPoly& p) {
  if (p.empty()) return p;
  UPoly out = p;
  BigRational lc = p.back();
  for (auto& c : out) c /= lc;
  return out;
}

// Modular gcd: images modulo word-size primes combined by CRT until the
// candidate divides both inputs.
UPoly gcd(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  if (a.empty()) return monic(b);
  if (b.empty()) return monic(a);
  if (a.size() == 1 || b.size() == 1) return {BigRational(1)};
  const std::vector<BigInt> fa = primitive_integer(a);
  const std::vector<BigInt> fb = primitive_integer(b);
  BigInt lead;
  mpz_gcd(lead.get_mpz_t(), fa.back().get_mpz_t(), fb.back().get_mpz_t());
  std::size_t deg = std::min(fa.size(), fb.size()) + 1;
  std::vector<BigInt> h;
  BigInt modulus = 1;
  for (std::size_t k = 0;; ++k) {
    const long long p = gcd_prime(k);
    if (mod(fa.back(), p) == 0 || mod(fb.back(), p) == 0) continue;
    ModPoly ap(fa.size()), bp(fb.size());
    for (std::size_t i = 0; i < fa.size(); ++i) ap[i] = mod(fa[i], p);
    for (std::size_t i = 0; i < fb.size(); ++i) bp[i] = mod(fb[i], p);
    ModPoly g = gcd_mod(ap, bp, p);
    if (g.size() == 1) return {BigRational(1)};
    if (g.size() > deg) continue;  // unlucky prime
    const long long lp = mod(lead, p);
    for (long long& c : g) c = c * lp % p;
    const BigInt P = static_cast<long>(p);
    if (g.size() < deg) {
      deg = g.size();
      h.assign(deg, BigInt(0));
      for (std::size_t i = 0; i < deg; ++i) h[i] = static_cast<long>(g[i]);
      modulus = P;
      continue;
    }
    const long long minv = inv_mod(mod(modulus, p), p);
    // Stable when the symmetric representative already matches this image.
    bool changed = false;
    for (std::size_t i = 0; i < deg; ++i) {
      BigInt sym = h[i];
      if (2 * sym > modulus) sym -= modulus;
      if (mod(sym, p) != g[i]) changed = true;
      const long long d = ((g[i] - mod(h[i], p)) % p + p) % p;
      if (d != 0) h[i] += modulus * static_cast<long>(d * minv % p);
    }
    modulus *= P;
    if (changed) continue;
    UPoly cand(deg);
    for (std::size_t i = 0; i < deg; ++i) {
      BigInt c = h[i];
      if (2 * c > modulus) c -= modulus;
      cand[i] = c;
    }
    const std::vector<BigInt> prim = primitive_integer(cand);
    UPoly q(prim.begin(), prim.end());
    if (divmod(a, q).second.empty() && divmod(b, q).second.empty()) return monic(q);
  }
}

UPoly derivative(const UPoly& p) {
  UPoly out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * static_cast<long>(i));
  trim(out);
  return out;
}

BigRational eval(const UPoly& p, const BigRational& x) {
  BigRational r = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
  return r;
}

UPoly taylor_shift(const UPoly& p, const BigRational& c) {
  // Horner with (x + c).
  UPoly r;
  const UPoly xc{c, BigRational(1)};
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    r = mul(r, xc);
    if (r.empty()) r.push_back(BigRational(0));
    r[0] += *it;
    trim(r);
  }
  return r;
}

std::vector<BigInt> primitive_integer(const UPoly& p) {
  BigInt den = 1;
  for (const auto& c : p) {
    BigInt d = c.get_den();
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
  }
  std::vector<BigInt> out;
  out.reserve(p.size());
  BigInt g = 0;
  for (const auto& c : p) {
    BigInt v = c.get_num() * (den / c.get_den());
    out.push_back(v);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  if (g != 0) {
    for (auto& v : out) v /= g;
  }
  if (!out.empty() && out.back() < 0) {
    for (auto& v : out) v = -v;
  }
  return out;
}

std::optional<std::vector<long>> shift_candidates(const UPoly& u, const UPoly& v, long limit) {
  const std::vector<BigInt> fu = primitive_integer(u);
  const std::vector<BigInt> fv = primitive_integer(v);
  // Fujiwara bound 2 max |a_{n-i} / a_n|^{1/i} on the roots of each side; a
  // common root of u(x) and v(x + j) gives |j| <= bound(u) + bound(v).
  auto root_bound = [](const std::vector<BigInt>& f) {
    const std::size_t n = f.size() - 1;
    const BigInt lc = abs(f[n]);
    BigInt best = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      BigInt q = (abs(f[n - i]) + lc - 1) / lc;
      BigInt r;
      mpz_root(r.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(i));
      best = std::max(best, BigInt(r + 1));
    }
    return BigInt(2 * best);
  };
  const BigInt bound = root_bound(fu) + root_bound(fv);
  if (bound > limit) return std::nullopt;
  const long top = bound.get_si();
  std::size_t k = 0;
  long long p = gcd_prime(k);
  while (mod(fu.back(), p) == 0 || mod(fv.back(), p) == 0) p = gcd_prime(++k);
  ModPoly up(fu.size()), vp(fv.size());
  for (std::size_t i = 0; i < fu.size(); ++i) up[i] = mod(fu[i], p);
  for (std::size_t i = 0; i < fv.size(); ++i) vp[i] = mod(fv[i], p);
  std::vector<long> out;
  for (long j = 0; j <= top; ++j) {
    if (!coprime_mod(up, vp, p)) out.push_back(j);
    // v(x) <- v(x + 1) by synthetic division steps.
    for (std::size_t i = 0; i + 1 < vp.size(); ++i) {
      for (std::size_t m = vp.size() - 1; m > i; --m) vp[m - 1] = (vp[m - 1] + vp[m]) % p;
    }
  }
  return out;
}

std::vector<BigInt> divisors(const BigInt& n) {
  BigInt m = abs(n);
  if (m == 0) throw EngineError(ErrorCode::invalid_argument, "divisors of zero");
  // Prime factorization by trial division.
  std::vector<std::pair<BigInt, int>> fac;
  BigInt d = 2;
  unsigned long steps = 0;
  while (d * d <= m) {
    if (++steps > kTrialDivisionLimit) {
      throw EngineError(ErrorCode::limit_exceeded, "integer too large for trial division");
    }
    if (m % d == 0) {
      int e = 0;
      while (m % d == 0) {
        m /= d;
        ++e;
      }
      fac.emplace_back(d, e);
    }
    d += (d == 2) ? 1 : 2;
  }
  if (m > 1) fac.emplace_back(m, 1);
  std::vector<BigInt> out{BigInt(1)};
  for (const auto& [prime, e] : fac) {
    const std::size_t sz = out.size();
    BigInt pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= prime;
      for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BigRational> rational_roots(const UPoly& p0) {
  UPoly p = p0;
  trim(p);
  std::vector<BigRational> roots;
  if (p.size() <= 1) return roots;
  std::size_t low = 0;
  while (low < p.size() && sgn(p[low]) == 0) ++low;
  if (low > 0) roots.emplace_back(0);
  UPoly q(p.begin() + static_cast<std::ptrdiff_t>(low), p.end());
  if (q.size() > 1) {
    UPoly sf = divmod(q, gcd(q, derivative(q))).first;
    std::vector<BigInt> ip = primitive_integer(sf);
    // x = y / c with c the leading coefficient makes the polynomial in y
    // monic with integer coefficients.
    const std::size_t n = ip.size() - 1;
    const BigInt c = ip[n];
    std::vector<BigInt> mon(n + 1);
    for (std::size_t i = 0; i < n; ++i) mon[i] = ip[i] * pow_int(c, n - 1 - i);
    mon[n] = 1;
    for (const BigInt& y : padic_integer_roots(mon)) {
      BigRational r(y, c);
      r.canonicalize();
      roots.push_back(r);
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::vector<BigInt> integer_roots(const UPoly& p0) {
  std::vector<BigInt> roots;
  for (const BigRational& r : rational_roots(p0)) {
    if (r.get_den() == 1) roots.push_back(r.get_num());
  }
  return roots;
}

std::vector<std::pair<UPoly, int>> squarefree(const UPoly& p0) {
  UPoly p = monic(p0);
  trim(p);
  std::vector<std::pair<UPoly, int>> out;
  if (p.size() <= 1) return out;
  UPoly dp = derivative(p);
  UPoly a = gcd(p, dp);
  UPoly b = divmod(p, a).first;
  UPoly c = divmod(dp, a).first;
  UPoly d = c;
  {
    UPoly db = derivative(b);
    d.resize(std::max(d.size(), db.size()), BigRational(0));
    for (std::size_t i = 0; i < db.size(); ++i) d[i] -= db[i];
    trim(d);
  }
  int i = 1;
  while (b.size() > 1) {
    UPoly g = gcd(b, d);
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    if (g.size() > 1) out.emplace_back(monic(g), i);
    UPoly db = derivative(b);
    d = c;
    d.resize(std::max(d.size(), db.size()), BigRational(0));
    for (std::size_t k = 0; k < db.size(); ++k) d[k] -= db[k];
    trim(d);
    ++i;
  }
  return out;
}

namespace {

// Lagrange interpolation through (xs[j], ys[j]).
UPoly interpolate(const std::vector<BigInt>& xs, const std::vector<BigInt>& ys) {
  UPoly out;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    UPoly basis{BigRational(1)};
    BigRational denom = 1;
    for (std::size_t m = 0; m < xs.size(); ++m) {
      if (m == j) continue;
      basis = mul(basis, UPoly{BigRational(-xs[m]), BigRational(1)});
      denom *= BigRational(xs[j] - xs[m]);
    }
    BigRational f = BigRational(ys[j]) / denom;
    out.resize(std::max(out.size(), basis.size()), BigRational(0));
    for (std::size_t k = 0; k < basis.size(); ++k) out[k] += f * basis[k];
  }
  trim(out);
  return out;
}

// Finds a nontrivial factor of a primitive square-free integer polynomial
// without rational roots, or returns empty when it is irreducible.
UPoly kronecker_split(const UPoly& f) {
  const std::size_t n = f.size() - 1;
  std::vector<BigInt> fi = primitive_integer(f);
  for (std::size_t k = 2; k <= n / 2; ++k) {
    // Evaluation points with few divisors keep the search small.
    std::vector<std::pair<std::size_t, BigInt>> scored;
    for (long x = -12; x <= 12; ++x) {
      BigInt iv = 0;
      for (auto it = fi.rbegin(); it != fi.rend(); ++it) iv = iv * x + *it;
      if (iv == 0) continue;
      scored.emplace_back(divisors(iv).size(), BigInt(x));
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    if (scored.size() < k + 1) continue;
    std::vector<BigInt> xs;
    std::vector<std::vector<BigInt>> choices;
    double combos = 1;
    for (std::size_t j = 0; j <= k; ++j) {
      const BigInt& x = scored[j].second;
      xs.push_back(x);
      BigInt iv = 0;
      for (auto it = fi.rbegin(); it != fi.rend(); ++it) iv = iv * x + *it;
      std::vector<BigInt> ds;
      for (const auto& d : divisors(iv)) {
        ds.push_back(d);
        if (j > 0) ds.push_back(-d);
      }
      combos *= static_cast<double>(ds.size());
      choices.push_back(std::move(ds));
    }
    if (combos > kKroneckerSearchLimit) {
      throw EngineError(ErrorCode::limit_exceeded,
                        "polynomial factorization search space exceeds limit");
    }
    std::vector<std::size_t> idx(k + 1, 0);
    std::vector<BigInt> ys(k + 1);
    while (true) {
      for (std::size_t j = 0; j <= k; ++j) ys[j] = choices[j][idx[j]];
      UPoly g = interpolate(xs, ys);
      if (g.size() == k + 1) {
        bool integral = std::all_of(g.begin(), g.end(),
                                    [](const BigRational& c) { return c.get_den() == 1; });
        if (integral && fi.back() % g.back().get_num() == 0) {
          auto [q, r] = divmod(f, g);
          if (r.empty()) return monic(g);
        }
      }
      std::size_t pos = 0;
      while (pos <= k) {
        if (++idx[pos] < choices[pos].size()) break;
        idx[pos] = 0;
        ++pos;
      }
      if (pos > k) break;
    }
  }
  return {};
}

void factor_squarefree_into(const UPoly& f, std::vector<UPoly>& out) {
  UPoly rest = monic(f);
  for (const auto& r : rational_roots(rest)) {
    UPoly lin{BigRational(-r), BigRational(1)};
    out.push_back(lin);
    rest = divmod(rest, lin).first;
  }
  if (rest.size() <= 1) return;
  if (rest.size() <= 4) {  // degree <= 3 without rational roots
    out.push_back(monic(rest));
    return;
  }
  UPoly g = kronecker_split(rest);
  if (g.empty()) {
    out.push_back(monic(rest));
    return;
  }
  factor_squarefree_into(g, out);
  factor_squarefree_into(divmod(rest, g).first, out);
}

}  // namespace

std::vector<std::pair<UPoly, int>> factor(const UPoly& p) {
  std::vector<std::pair<UPoly, int>> out;
  for (const auto& [part, mult] : squarefree(p)) {
    std::vector<UPoly> irr;
    factor_squarefree_into(part, irr);
    for (auto& g : irr) out.emplace_back(std::move(g), mult);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (less_upoly(a.first, b.first)) return true;
    if (less_upoly(b.first, a.first)) return false;
    return a.second < b.second;
  });
  return out;
}

}  // namespace sigmadep::upoly
