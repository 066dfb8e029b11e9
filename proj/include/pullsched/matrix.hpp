#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pullsched {

// Dense rectangular weight matrix with a per-cell forbidden mask. A forbidden
// cell stands in for the "minus a big number" sentinel of assignment
// matrices; solvers substitute a finite penalty that dominates any feasible
// objective, so "forbidden" never leaks into arithmetic as an actual huge
// literal.
class WeightMatrix {
 public:
  WeightMatrix() = default;

  // Starts with every cell forbidden.
  WeightMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows),
        cols_(cols),
        cells_(rows * cols, 0.0),
        forbidden_(rows * cols, 1) {}

  static WeightMatrix dense(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    WeightMatrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != m.cols_)
        throw std::invalid_argument("WeightMatrix: ragged rows");
      for (std::size_t c = 0; c < m.cols_; ++c) m.set(r, c, rows[r][c]);
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void set(std::size_t r, std::size_t c, double w) {
    if (!std::isfinite(w))
      throw std::invalid_argument("WeightMatrix: weight must be finite");
    cells_[idx(r, c)] = w;
    forbidden_[idx(r, c)] = 0;
  }

  void set_forbidden(std::size_t r, std::size_t c) {
    cells_[idx(r, c)] = 0.0;
    forbidden_[idx(r, c)] = 1;
  }

  double at(std::size_t r, std::size_t c) const { return cells_[idx(r, c)]; }

  bool is_forbidden(std::size_t r, std::size_t c) const {
    return forbidden_[idx(r, c)] != 0;
  }

  // Largest |weight| over non-forbidden cells; 0 when there are none.
  double max_abs_weight() const {
    double m = 0.0;
    for (std::size_t i = 0; i < cells_.size(); ++i)
      if (!forbidden_[i]) m = std::max(m, std::abs(cells_[i]));
    return m;
  }

  std::size_t allowed_count() const {
    std::size_t n = 0;
    for (char f : forbidden_)
      if (!f) ++n;
    return n;
  }

 private:
  std::size_t idx(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_)
      throw std::out_of_range("WeightMatrix: index out of range");
    return r * cols_ + c;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> cells_;
  std::vector<char> forbidden_;
};

// Row-oriented assignment result. row_to_col[r] == -1 means row r is
// unassigned; objective is the sum of the selected weights.
struct Matching {
  std::vector<int> row_to_col;
  double objective = 0.0;
};

}  // namespace pullsched
