// Exact linear algebra over the parameter ring.
//
// Two tools live here. RowSpace does fraction-free Gauss elimination on
// sparse rows whose entries are (Laurent-)polynomials in the parameters;
// rows are kept primitive by stripping rational and parameter-monomial
// content, so degrees stay small and the zero test is the canonical one.
// solve_linear is a tiny dense solver over the fraction field used to
// express Lie brackets in a generator basis.
#pragma once

#include "fpsym/expr.hpp"

#include <map>
#include <optional>
#include <vector>

namespace fpsym {

// sparse row: column index -> nonzero parameter polynomial
using SparseRow = std::map<std::size_t, Expr>;

// Divides out the common rational content and common parameter-monomial
// powers; the zero row stays zero.
SparseRow primitive_part(SparseRow row);

class RowSpace {
public:
  // Reduces the row against the basis (fraction-free); a surviving remainder
  // joins the basis and the call returns true.
  bool insert(SparseRow row);

  // True when the row is a linear combination of basis rows over the
  // parameter fraction field.
  bool contains(SparseRow row) const;

  std::size_t rank() const { return basis_.size(); }

private:
  SparseRow reduce(SparseRow row) const;
  std::vector<SparseRow> basis_;     // each row's first column is its pivot
  std::vector<std::size_t> pivot_;
};

struct Fraction {
  Expr num;
  Expr den = Expr::from_int(1);

  static Fraction zero() { return {Expr(), Expr::from_int(1)}; }
  static Fraction of(Expr e) { return {std::move(e), Expr::from_int(1)}; }
  bool is_zero() const { return num.is_zero(); }
};

Fraction operator+(const Fraction& a, const Fraction& b);
Fraction operator-(const Fraction& a, const Fraction& b);
Fraction operator*(const Fraction& a, const Fraction& b);
Fraction operator/(const Fraction& a, const Fraction& b); // b nonzero

class FractionMatrix {
public:
  FractionMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Fraction::zero()) {}

  Fraction& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Fraction& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

private:
  std::size_t rows_, cols_;
  std::vector<Fraction> data_;
};

// Solves A x = b exactly; nullopt when inconsistent. Free variables are zero.
std::optional<std::vector<Fraction>> solve_linear(const FractionMatrix& a,
                                                  const std::vector<Fraction>& b);

} // namespace fpsym
