#pragma once
// Grid scans of the extremal ordering over mixedness space, with the bisected
// m_gmems = m_glems boundary.

#include <cstddef>
#include <ostream>
#include <vector>

#include "cvent/extremal.hpp"

namespace cvent {

struct Range {
  double lo{0};
  double hi{0};
  /// i-th of n evenly spaced points, endpoints included.
  double at(int i, int n) const { return n <= 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1); }
};

struct ScanCell {
  double s{0};
  double d{0};
  double g{0};
  OrderingVerdict<double> verdict;
  double nu_tilde_gmems{1};
  double nu_tilde_glems{1};
};

struct BoundaryPoint {
  double s{0};
  double d{0};
  double g_boundary{0};
  double gap{0};  // m_gmems - m_glems at g_boundary
};

struct ScanResult {
  std::vector<ScanCell> cells;
  std::vector<BoundaryPoint> boundary;
  /// Brackets whose bisected root missed the |Δm| < boundary_gap_tol contract.
  std::size_t rejected_brackets{0};
};

struct ScanOptions {
  double bisection_tol = 1e-6;
  double boundary_gap_tol = 1e-5;
  unsigned threads = 0;  // 0: hardware concurrency
};

ScanCell scan_cell(double s, double d, double g);

/// Root of m_gmems - m_glems in g on [g_lo, g_hi] at fixed (s, d); the bracket must
/// straddle a sign change inside the region where both families are entangled.
double bisect_ordering_boundary(double s, double d, double g_lo, double g_hi, double tol = 1e-6);

/// Slice at fixed local mixedness a of mode 1 over (b, g); b outer, g inner.
ScanResult scan_fixed_a(double a, Range b, Range g, int res_b, int res_g,
                        const ScanOptions& opts = {});

/// Full (s, d, g) grid; s outer, then d, then g.
ScanResult scan_sdg(Range s, Range d, Range g, int res_s, int res_d, int res_g,
                    const ScanOptions& opts = {});

void write_scan_csv(std::ostream& out, const ScanResult& result);
void write_boundary_csv(std::ostream& out, const ScanResult& result);

}  // namespace cvent
