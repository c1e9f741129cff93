#include "cvent/scan.hpp"

#include <cmath>

#include "cvent/csv.hpp"
#include "cvent/parallel.hpp"

namespace cvent {

namespace {

// On the coalescence line g = 2|d| + 1 both families are the same state.
double ordering_gap(double s, double d, double g) {
  if (g <= (2 * std::abs(d) + 1) * (1 + 1e-12)) return 0.0;
  return m_opt_gmems(ExtremalParams<double>{s, d, g, 1.0}) -
         m_opt_glems(ExtremalParams<double>{s, d, g, -1.0});
}

bool both_entangled(Regime r) {
  return r == Regime::ordering_preserved || r == Regime::ordering_inverted;
}

// Walks one line of constant (s, d) in increasing g and bisects every
// inverted/preserved transition.
void trace_column(const std::vector<ScanCell>& cells, std::size_t first, std::size_t count,
                  const ScanOptions& opts, std::vector<BoundaryPoint>& out, std::size_t& rejected) {
  for (std::size_t k = first; k + 1 < first + count; ++k) {
    const ScanCell& lo = cells[k];
    const ScanCell& hi = cells[k + 1];
    if (!both_entangled(lo.verdict.regime) || !both_entangled(hi.verdict.regime)) continue;
    if (lo.verdict.regime == hi.verdict.regime) continue;
    const double g = bisect_ordering_boundary(lo.s, lo.d, lo.g, hi.g, opts.bisection_tol);
    const double gap = ordering_gap(lo.s, lo.d, g);
    if (std::abs(gap) < opts.boundary_gap_tol) {
      out.push_back({lo.s, lo.d, g, gap});
    } else {
      ++rejected;
    }
  }
}

ScanResult run_scan(std::vector<ScanCell> cells, std::size_t columns, std::size_t column_length,
                    const ScanOptions& opts) {
  parallel_for(cells.size(), opts.threads, [&](std::size_t i) {
    cells[i] = scan_cell(cells[i].s, cells[i].d, cells[i].g);
  });
  ScanResult result;
  for (std::size_t c = 0; c < columns; ++c) {
    trace_column(cells, c * column_length, column_length, opts, result.boundary,
                 result.rejected_brackets);
  }
  result.cells = std::move(cells);
  return result;
}

}  // namespace

ScanCell scan_cell(double s, double d, double g) {
  ScanCell cell{s, d, g, ordering_compare(s, d, g), 1.0, 1.0};
  if (cell.verdict.regime == Regime::unphysical) {
    cell.nu_tilde_gmems = cell.nu_tilde_glems = std::nan("");
  } else {
    cell.nu_tilde_gmems = nu_tilde_from_m(cell.verdict.m_gmems);
    cell.nu_tilde_glems = nu_tilde_from_m(cell.verdict.m_glems);
  }
  return cell;
}

double bisect_ordering_boundary(double s, double d, double g_lo, double g_hi, double tol) {
  double f_lo = ordering_gap(s, d, g_lo);
  const double f_hi = ordering_gap(s, d, g_hi);
  // An exact tie at an endpoint (the coalescence line g = 2|d| + 1) is itself the boundary.
  if (f_lo == 0) return g_lo;
  if (f_hi == 0) return g_hi;
  if ((f_lo < 0) == (f_hi < 0)) throw DomainError("ordering boundary not bracketed");
  while (g_hi - g_lo > tol) {
    const double mid = 0.5 * (g_lo + g_hi);
    const double f_mid = ordering_gap(s, d, mid);
    if ((f_mid < 0) == (f_lo < 0)) {
      g_lo = mid;
      f_lo = f_mid;
    } else {
      g_hi = mid;
    }
  }
  return 0.5 * (g_lo + g_hi);
}

ScanResult scan_fixed_a(double a, Range b, Range g, int res_b, int res_g, const ScanOptions& opts) {
  std::vector<ScanCell> cells;
  cells.reserve(std::size_t(res_b) * std::size_t(res_g));
  for (int i = 0; i < res_b; ++i) {
    const double bi = b.at(i, res_b);
    for (int j = 0; j < res_g; ++j) {
      cells.push_back({0.5 * (a + bi), 0.5 * (a - bi), g.at(j, res_g), {}, 1.0, 1.0});
    }
  }
  return run_scan(std::move(cells), std::size_t(res_b), std::size_t(res_g), opts);
}

ScanResult scan_sdg(Range s, Range d, Range g, int res_s, int res_d, int res_g,
                    const ScanOptions& opts) {
  std::vector<ScanCell> cells;
  cells.reserve(std::size_t(res_s) * std::size_t(res_d) * std::size_t(res_g));
  for (int i = 0; i < res_s; ++i) {
    for (int j = 0; j < res_d; ++j) {
      for (int k = 0; k < res_g; ++k) {
        cells.push_back({s.at(i, res_s), d.at(j, res_d), g.at(k, res_g), {}, 1.0, 1.0});
      }
    }
  }
  return run_scan(std::move(cells), std::size_t(res_s) * std::size_t(res_d), std::size_t(res_g),
                  opts);
}

void write_scan_csv(std::ostream& out, const ScanResult& result) {
  out << "s,d,g,m_gmems,m_glems,nu_tilde_gmems,nu_tilde_glems,regime\n";
  for (const auto& c : result.cells) {
    out << fmt17(c.s) << ',' << fmt17(c.d) << ',' << fmt17(c.g) << ',' << fmt17(c.verdict.m_gmems)
        << ',' << fmt17(c.verdict.m_glems) << ',' << fmt17(c.nu_tilde_gmems) << ','
        << fmt17(c.nu_tilde_glems) << ',' << to_string(c.verdict.regime) << '\n';
  }
}

void write_boundary_csv(std::ostream& out, const ScanResult& result) {
  out << "s,d,g_boundary\n";
  for (const auto& p : result.boundary) {
    out << fmt17(p.s) << ',' << fmt17(p.d) << ',' << fmt17(p.g_boundary) << '\n';
  }
}

}  // namespace cvent
