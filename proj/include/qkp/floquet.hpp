#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qkp/core.hpp"
#include "qkp/scaled.hpp"

// Periodic-channel solver: modified determinant recursion, regularized
// secular function zeta(eta, omega), 2D grid scanning, zero location,
// Floquet-curve tracing and band extraction.
namespace qkp::floquet {

struct FloquetParams {
    ModelParams model;
    double omega = 0.0;  // |omega| <= pi
};

// v_m = 2 (1 - cos w / cosh(sqrt(m+eta) L)), u_m = tanh(sqrt(m+eta) L).
std::pair<double, double> uv_coeffs(int m, double eta, const FloquetParams& fp);

// D_0 = v_0, D_1 = v_0 v_1 - Lambda^2 u_0 u_1 / sqrt(eta(1+eta)),
// D_{m+1} = v_{m+1} D_m - Lambda^2 (m+1)/sqrt((m+eta)(m+1+eta)) u_m u_{m+1} D_{m-1}.
struct FloquetMinorSequence {
    std::vector<ScaledValue> values;  // D_0 .. D_n

    const ScaledValue& d(int m) const { return values[m]; }
};

FloquetMinorSequence floquet_minors(double eta, const FloquetParams& fp, int n_max);

struct SecularValue {
    double value = 0.0;
    int pole_crossings = 0;
};

// Backward-ratio mismatch against D_1/D_0.  The recursion coefficients share
// the single-delta asymptotics, so the backward sweep is seeded with xi_+ at
// the same default depth.
SecularValue zeta_floquet_info(double eta, const FloquetParams& fp, int m_start = 0);
double zeta_floquet(double eta, const FloquetParams& fp, int m_start = 0);

struct SecularSample {
    double eta = 0.0;
    double omega = 0.0;
    double zeta = 0.0;
};

struct ScanGrid {
    std::vector<double> omegas;
    std::vector<double> etas;
    std::vector<double> zeta;  // row-major, [i_omega * n_eta + j_eta]

    double at(int i_omega, int j_eta) const {
        return zeta[static_cast<std::size_t>(i_omega) * etas.size() + j_eta];
    }
    std::vector<SecularSample> column(int i_omega) const;
};

struct ScanOptions {
    int n_omega = 500;
    int n_eta = 200;
    double eta_min = kEtaMinDefault;
    int m_start = 0;  // 0 -> default policy
    int threads = 1;
};

// Complete matrix of zeta values on [0, pi] x [eta_min, 1/2 - eta_min], both
// endpoints included.  Output is independent of the thread count.
ScanGrid grid_scan(const ModelParams& p, const ScanOptions& opt);

// Sign changes along one omega column, linearly interpolated then refined by
// bisection to tol.  A refined root is kept only if |zeta| there drops below
// both bracket endpoint magnitudes (rejects pole-type crossings).
std::vector<double> locate_zeros(const std::vector<SecularSample>& column,
                                 const std::function<double(double)>& zeta_at,
                                 double tol);

// One spectral branch eta = chi_b(omega) as an ordered point list.
struct FloquetCurve {
    std::vector<std::pair<double, double>> points;  // (omega, eta)

    std::pair<double, double> start() const { return points.front(); }
    std::pair<double, double> end() const { return points.back(); }
};

struct TraceResult {
    std::vector<FloquetCurve> curves;     // length >= min_length
    std::vector<FloquetCurve> fragments;  // shorter chains, resolution artifacts
};

// Nearest-neighbour chaining across adjacent omega columns.  Each active
// chain predicts its next eta by linear extrapolation; candidates within
// max(jump_threshold, 2.5 * last jump) are matched greedily by distance.
TraceResult trace_curves(const std::vector<double>& omegas,
                         const std::vector<std::vector<double>>& roots_per_omega,
                         double jump_threshold = 0.0125, int min_length = 5);

struct GridTraceOptions {
    double tol = 1e-9;       // eta refinement on vertical edges
    int min_points = 0;      // 0: auto, max(5, n_omega/10, n_eta/25)
    int merge_gap_cols = 6;  // endpoint gap bridging, in omega columns
    double merge_gap_eta = 0.02;
    int threads = 1;
};

// Zero-contour extraction over the full scan grid.  Sign changes on vertical
// edges (within a column) and horizontal edges (within a row) are refined and
// pole-rejected, then joined cell by cell into polylines; saddle cells are
// disambiguated by a centre sample.  Column sampling is dense where a curve
// is flat and row sampling dense where it is steep, so curves of any slope
// are recovered — the column-chaining tracer above loses near-vertical
// branches.  Small endpoint gaps (zero-pole collisions hiding a flat curve
// locally) are bridged afterwards.
TraceResult trace_curves_from_grid(
    const ScanGrid& grid,
    const std::function<double(double omega, double eta)>& zeta2d,
    const GridTraceOptions& opt);

struct Band {
    double lo = 0.0;
    double hi = 0.0;
    int index = 0;
};

struct BandSet {
    std::vector<Band> bands;  // sorted by lo
    int curve_count = 0;      // B
};

BandSet extract_bands(const std::vector<FloquetCurve>& curves);

struct BandPipelineOptions {
    ScanOptions scan;
    double tol = 1e-9;
    int refine_factor = 10;  // eta-step divisor per refinement pass
    int refine_passes = 1;
    GridTraceOptions trace;
};

struct BandPipelineResult {
    std::vector<double> omegas;
    std::vector<std::vector<double>> roots_per_omega;  // refined locate_zeros
    TraceResult traced;
    BandSet bands;
};

// scan -> (refined rescan) -> locate -> grid trace -> bands.
BandPipelineResult floquet_bands(const ModelParams& p,
                                 const BandPipelineOptions& opt);

}  // namespace qkp::floquet
