#include <algorithm>
#include <vector>

#include "costab/homotopy.hpp"

namespace costab {

namespace {

using Int = boost::multiprecision::cpp_int;

std::vector<Int> divisors(Int n, std::size_t cap = 4096) {
  if (n < 0) n = -n;
  std::vector<Int> out;
  if (n == 0) return out;
  for (Int d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
      if (out.size() > cap) break;  // give up on huge candidate sets
    }
    if (d > 2000000) break;  // trial division budget
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Rat> poly_roots(const std::vector<Rat>& coeffs0) {
  std::vector<Rat> coeffs = coeffs0;
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  std::vector<Rat> roots;
  if (coeffs.size() <= 1) return roots;

  // strip roots at zero
  std::size_t low = 0;
  while (low < coeffs.size() - 1 && coeffs[low] == 0) ++low;
  if (low > 0) {
    roots.push_back(Rat(0));
    coeffs.erase(coeffs.begin(), coeffs.begin() + low);
  }
  if (coeffs.size() <= 1) return roots;

  Int den_lcm = 1;
  for (const auto& c : coeffs) {
    Int d = denominator(c);
    den_lcm = lcm(den_lcm, d);
  }
  std::vector<Int> ic(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    Rat scaled = coeffs[i] * Rat(den_lcm);
    ic[i] = numerator(scaled);
  }
  auto eval = [&](const Rat& x) {
    Rat v = 0;
    for (std::size_t i = ic.size(); i-- > 0;) v = v * x + Rat(ic[i]);
    return v;
  };
  std::vector<Int> ps = divisors(ic.front());
  std::vector<Int> qs = divisors(ic.back());
  if (ps.empty()) ps.push_back(1);
  for (const Int& p : ps)
    for (const Int& q : qs) {
      for (int sign = 0; sign < 2; ++sign) {
        Rat cand = Rat(p, q);
        if (sign) cand = -cand;
        if (eval(cand) == 0 &&
            std::find(roots.begin(), roots.end(), cand) == roots.end())
          roots.push_back(cand);
      }
    }
  return roots;
}

std::vector<Fp> poly_roots(const std::vector<Fp>& coeffs0) {
  std::vector<Fp> coeffs = coeffs0;
  while (coeffs.size() > 1 && coeffs.back().is_zero()) coeffs.pop_back();
  std::vector<Fp> roots;
  if (coeffs.size() <= 1) return roots;
  for (std::int64_t a = 0; a < Fp::P; ++a) {
    Fp x(a), v(0);
    for (std::size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i];
    if (v.is_zero()) roots.push_back(x);
  }
  return roots;
}

}  // namespace costab
