#include "fpsym/linalg.hpp"

#include <algorithm>

namespace fpsym {

namespace {

Rational rational_gcd(const Rational& a, const Rational& b) {
  if (a == 0) return b < 0 ? Rational(-b) : b;
  if (b == 0) return a < 0 ? Rational(-a) : a;
  Integer num = gcd(numerator(a) * denominator(b), numerator(b) * denominator(a));
  Integer den = denominator(a) * denominator(b);
  Rational g(num, den);
  return g < 0 ? Rational(-g) : g;
}

} // namespace

SparseRow primitive_part(SparseRow row) {
  for (auto it = row.begin(); it != row.end();)
    it = it->second.is_zero() ? row.erase(it) : std::next(it);
  if (row.empty()) return row;

  Rational content(0);
  std::map<Atom, int, bool (*)(const Atom&, const Atom&)> minpow(
      [](const Atom& a, const Atom& b) { return compare(a, b) < 0; });
  bool first_term = true;
  for (const auto& [col, e] : row) {
    (void)col;
    for (const Term& t : e.terms()) {
      content = rational_gcd(content, t.coeff);
      if (first_term) {
        for (const Factor& f : t.factors) minpow[f.atom] = f.power;
        first_term = false;
      } else {
        for (auto it = minpow.begin(); it != minpow.end();) {
          int p = 0;
          for (const Factor& f : t.factors)
            if (f.atom == it->first) p = f.power;
          it->second = std::min(it->second, p);
          it = (it->second == 0) ? minpow.erase(it) : std::next(it);
        }
      }
    }
  }

  Expr divisor = Expr::from_rational(content);
  for (const auto& [atom, p] : minpow) divisor = divisor * Expr::from_atom(atom).pow(p);
  if (divisor == Expr::from_int(1)) return row;
  for (auto& [col, e] : row) {
    (void)col;
    e = e / divisor;
  }
  return row;
}

SparseRow RowSpace::reduce(SparseRow row) const {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    auto hit = row.find(pivot_[i]);
    if (hit == row.end()) continue;
    // fraction-free: row <- b_p * row - r_p * b
    Expr rp = hit->second;
    const Expr& bp = basis_[i].at(pivot_[i]);
    for (auto& [col, e] : row) e = bp * e;
    for (const auto& [col, e] : basis_[i]) {
      auto it = row.lower_bound(col);
      if (it != row.end() && it->first == col)
        it->second = it->second - rp * e;
      else
        row.emplace_hint(it, col, -(rp * e));
    }
    row = primitive_part(std::move(row));
  }
  return row;
}

bool RowSpace::insert(SparseRow row) {
  row = reduce(primitive_part(std::move(row)));
  if (row.empty()) return false;
  // Prefer the sparsest entry as pivot; dividing by a monomial pivot keeps
  // reduced rows primitive, so degrees do not accumulate.
  std::size_t best = row.begin()->first;
  std::size_t best_terms = row.begin()->second.terms().size();
  for (const auto& [col, e] : row)
    if (e.terms().size() < best_terms) {
      best = col;
      best_terms = e.terms().size();
    }
  pivot_.push_back(best);
  basis_.push_back(std::move(row));
  return true;
}

bool RowSpace::contains(SparseRow row) const {
  return reduce(primitive_part(std::move(row))).empty();
}

Fraction operator+(const Fraction& a, const Fraction& b) {
  return {a.num * b.den + b.num * a.den, a.den * b.den};
}

Fraction operator-(const Fraction& a, const Fraction& b) {
  return {a.num * b.den - b.num * a.den, a.den * b.den};
}

Fraction operator*(const Fraction& a, const Fraction& b) {
  return {a.num * b.num, a.den * b.den};
}

Fraction operator/(const Fraction& a, const Fraction& b) {
  if (b.is_zero()) throw Error(Error::Kind::domain, "fraction division by zero");
  return {a.num * b.den, a.den * b.num};
}

std::optional<std::vector<Fraction>> solve_linear(const FractionMatrix& a,
                                                  const std::vector<Fraction>& b) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m) throw Error(Error::Kind::domain, "rhs size mismatch");

  std::vector<std::vector<Fraction>> rows(m, std::vector<Fraction>(n + 1, Fraction::zero()));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) rows[r][c] = a.at(r, c);
    rows[r][n] = b[r];
  }

  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < n && rank < m; ++c) {
    std::size_t sel = rank;
    while (sel < m && rows[sel][c].is_zero()) ++sel;
    if (sel == m) continue;
    std::swap(rows[sel], rows[rank]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == rank || rows[r][c].is_zero()) continue;
      Fraction factor = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k <= n; ++k)
        rows[r][k] = rows[r][k] - factor * rows[rank][k];
      rows[r][c] = Fraction::zero();
    }
    pivot_col.push_back(c);
    ++rank;
  }

  for (std::size_t r = rank; r < m; ++r)
    if (!rows[r][n].is_zero()) return std::nullopt;

  std::vector<Fraction> x(n, Fraction::zero());
  for (std::size_t r = 0; r < rank; ++r)
    x[pivot_col[r]] = rows[r][n] / rows[r][pivot_col[r]];
  return x;
}

} // namespace fpsym
