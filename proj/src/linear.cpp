#include "pcause/linear.hpp"

#include <map>
#include <stdexcept>

namespace pcause {

std::vector<Rat> solve_linear(const std::vector<SparseRow>& a, std::vector<Rat> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("solve_linear: dimension mismatch");
  // Rows kept as ordered maps so elimination only touches the nonzero structure.
  std::vector<std::map<std::size_t, Rat>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, v] : a[i]) {
      if (j >= n) throw std::invalid_argument("solve_linear: column out of range");
      if (sgn(v) != 0) rows[i][j] += v;
    }
    std::erase_if(rows[i], [](const auto& kv) { return sgn(kv.second) == 0; });
  }

  std::vector<std::size_t> pivot_row_of(n, n);
  std::vector<bool> used(n, false);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t r = 0; r < n; ++r) {
      if (!used[r] && rows[r].contains(col)) {
        piv = r;
        break;
      }
    }
    if (piv == n) throw std::domain_error("solve_linear: singular system");
    used[piv] = true;
    pivot_row_of[col] = piv;

    const Rat pv = rows[piv].at(col);
    for (auto& [j, v] : rows[piv]) v /= pv;
    b[piv] /= pv;

    for (std::size_t r = 0; r < n; ++r) {
      if (r == piv) continue;
      auto it = rows[r].find(col);
      if (it == rows[r].end()) continue;
      const Rat factor = it->second;
      for (const auto& [j, v] : rows[piv]) {
        auto& target = rows[r][j];
        target -= factor * v;
        if (sgn(target) == 0) rows[r].erase(j);
      }
      b[r] -= factor * b[piv];
    }
  }

  std::vector<Rat> x(n);
  for (std::size_t col = 0; col < n; ++col) x[col] = b[pivot_row_of[col]];
  return x;
}

std::vector<Rat> solve_fixpoint(const std::vector<SparseRow>& p, std::vector<Rat> b) {
  const std::size_t n = p.size();
  std::vector<SparseRow> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i].emplace_back(i, Rat(1));
    for (const auto& [j, v] : p[i]) a[i].emplace_back(j, Rat(-v));
  }
  return solve_linear(a, std::move(b));
}

}  // namespace pcause
