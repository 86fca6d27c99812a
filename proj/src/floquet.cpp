#include "qkp/floquet.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qkp/channel_scatter.hpp"

namespace qkp::floquet {

namespace {

// sech with the underflow guarded; cosh overflows past ~710.
double sech(double x) { return x > 350.0 ? 0.0 : 1.0 / std::cosh(x); }

void check_params(const FloquetParams& fp) {
    if (std::fabs(fp.omega) > M_PI + 1e-12)
        throw std::domain_error("floquet: |omega| must be <= pi");
    require_subcritical(fp.model.lambda_scaled);
}

void parallel_rows(int n, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, threads);
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

std::pair<double, double> uv_coeffs(int m, double eta, const FloquetParams& fp) {
    if (m < 0) throw std::domain_error("uv_coeffs: m must be >= 0");
    if (!(eta > 0.0)) throw std::domain_error("uv_coeffs: eta must be > 0");
    const double x = std::sqrt(m + eta) * fp.model.period;
    const double v = 2.0 * (1.0 - std::cos(fp.omega) * sech(x));
    return {v, std::tanh(x)};
}

FloquetMinorSequence floquet_minors(double eta, const FloquetParams& fp, int n_max) {
    check_params(fp);
    if (n_max < 1) throw std::domain_error("floquet_minors: n_max must be >= 1");
    if (!(eta > 0.0)) throw std::domain_error("floquet_minors: eta must be > 0");
    const double Lambda = fp.model.lambda_scaled;

    FloquetMinorSequence seq;
    seq.values.reserve(n_max + 1);
    auto [v0, u0] = uv_coeffs(0, eta, fp);
    auto [v1, u1] = uv_coeffs(1, eta, fp);
    seq.values.push_back(ScaledValue::from_double(v0));
    seq.values.push_back(ScaledValue::from_double(
        v0 * v1 - Lambda * Lambda * u0 * u1 / std::sqrt(eta * (1.0 + eta))));
    double u_m = u1;
    for (int m = 1; m < n_max; ++m) {
        auto [v_m1, u_m1] = uv_coeffs(m + 1, eta, fp);
        const double a = Lambda * Lambda * (m + 1.0) /
                         std::sqrt((m + eta) * (m + 1.0 + eta)) * u_m * u_m1;
        const ScaledValue next = seq.values[m] * v_m1 - seq.values[m - 1] * a;
        seq.values.push_back(next);
        u_m = u_m1;
    }
    return seq;
}

SecularValue zeta_floquet_info(double eta, const FloquetParams& fp, int m_start) {
    check_params(fp);
    if (!(eta > 0.0)) throw std::domain_error("zeta_floquet: eta must be > 0");
    const double Lambda = fp.model.lambda_scaled;
    const double L = fp.model.period;
    const double cw = std::cos(fp.omega);
    if (m_start <= 0) m_start = channel::default_m_start(eta, Lambda);

    SecularValue out;
    double g = channel::xi_roots(Lambda).first;
    double x_m1 = std::sqrt(m_start + eta) * L;
    for (int m = m_start - 1; m >= 1; --m) {
        const double x_m = std::sqrt(m + eta) * L;
        const double a = Lambda * Lambda * (m + 1.0) /
                         std::sqrt((m + eta) * (m + 1.0 + eta)) *
                         std::tanh(x_m) * std::tanh(x_m1);
        const double v_m1 = 2.0 * (1.0 - cw * sech(x_m1));
        double denom = v_m1 - g;
        if (std::fabs(denom) < 1e-30) {
            ++out.pole_crossings;
            denom = std::copysign(1e-30, denom == 0.0 ? 1.0 : denom);
        }
        g = a / denom;
        x_m1 = x_m;
    }
    // x_m1 now holds sqrt(1+eta) L
    const double x0 = std::sqrt(eta) * L;
    const double v0 = 2.0 * (1.0 - cw * sech(x0));
    const double v1 = 2.0 * (1.0 - cw * sech(x_m1));
    const double d1_over_d0 = v1 - fp.model.lambda_scaled * fp.model.lambda_scaled *
                                       std::tanh(x0) * std::tanh(x_m1) /
                                       (std::sqrt(eta * (1.0 + eta)) * v0);
    out.value = g - d1_over_d0;
    return out;
}

double zeta_floquet(double eta, const FloquetParams& fp, int m_start) {
    return zeta_floquet_info(eta, fp, m_start).value;
}

std::vector<SecularSample> ScanGrid::column(int i_omega) const {
    std::vector<SecularSample> col;
    col.reserve(etas.size());
    for (std::size_t j = 0; j < etas.size(); ++j)
        col.push_back({etas[j], omegas[i_omega], at(i_omega, static_cast<int>(j))});
    return col;
}

ScanGrid grid_scan(const ModelParams& p, const ScanOptions& opt) {
    require_subcritical(p.lambda_scaled);
    if (opt.n_omega < 2 || opt.n_eta < 2)
        throw std::domain_error("grid_scan: grid sizes must be >= 2");

    ScanGrid grid;
    grid.omegas.resize(opt.n_omega);
    grid.etas.resize(opt.n_eta);
    for (int i = 0; i < opt.n_omega; ++i)
        grid.omegas[i] = M_PI * i / (opt.n_omega - 1.0);
    const double eta_lo = opt.eta_min, eta_hi = 0.5 - opt.eta_min;
    for (int j = 0; j < opt.n_eta; ++j)
        grid.etas[j] = eta_lo + (eta_hi - eta_lo) * j / (opt.n_eta - 1.0);
    grid.zeta.assign(static_cast<std::size_t>(opt.n_omega) * opt.n_eta, 0.0);

    const double Lambda = p.lambda_scaled;
    const double L = p.period;
    const double seed = channel::xi_roots(Lambda).first;
    std::vector<double> cw(opt.n_omega);
    for (int i = 0; i < opt.n_omega; ++i) cw[i] = std::cos(grid.omegas[i]);

    // One eta row at a time: the m-loop coefficients are omega-independent,
    // so the backward recursion runs vectorized over all omega lanes.
    parallel_rows(opt.n_eta, opt.threads, [&](int j) {
        const double eta = grid.etas[j];
        const int m_start =
            opt.m_start > 0 ? opt.m_start : channel::default_m_start(eta, Lambda);
        std::vector<double> g(opt.n_omega, seed);
        double x_m1 = std::sqrt(m_start + eta) * L;
        for (int m = m_start - 1; m >= 1; --m) {
            const double x_m = std::sqrt(m + eta) * L;
            const double a = Lambda * Lambda * (m + 1.0) /
                             std::sqrt((m + eta) * (m + 1.0 + eta)) *
                             std::tanh(x_m) * std::tanh(x_m1);
            const double vcoef = 2.0 * sech(x_m1);
            if (vcoef == 0.0) {
                for (int i = 0; i < opt.n_omega; ++i) g[i] = a / (2.0 - g[i]);
            } else {
                for (int i = 0; i < opt.n_omega; ++i)
                    g[i] = a / (2.0 - vcoef * cw[i] - g[i]);
            }
            x_m1 = x_m;
        }
        const double x0 = std::sqrt(eta) * L;
        const double u01 = std::tanh(x0) * std::tanh(x_m1);
        const double s0 = sech(x0), s1 = sech(x_m1);
        const double k01 = std::sqrt(eta * (1.0 + eta));
        for (int i = 0; i < opt.n_omega; ++i) {
            const double v0 = 2.0 * (1.0 - cw[i] * s0);
            const double v1 = 2.0 * (1.0 - cw[i] * s1);
            grid.zeta[static_cast<std::size_t>(i) * opt.n_eta + j] =
                g[i] - (v1 - Lambda * Lambda * u01 / (k01 * v0));
        }
    });
    return grid;
}

std::vector<double> locate_zeros(const std::vector<SecularSample>& column,
                                 const std::function<double(double)>& zeta_at,
                                 double tol) {
    std::vector<double> roots;
    for (std::size_t j = 0; j + 1 < column.size(); ++j) {
        const double a = column[j].zeta, b = column[j + 1].zeta;
        if (!std::isfinite(a) || !std::isfinite(b) || !(a * b < 0.0)) continue;
        double lo = column[j].eta, hi = column[j + 1].eta;
        double flo = a;
        // Linear interpolation seeds the bracket, bisection refines it.
        const double interp = lo + (hi - lo) * a / (a - b);
        const double fi = zeta_at(interp);
        if (fi != 0.0) {
            if ((fi < 0.0) == (a < 0.0)) {
                lo = interp;
                flo = fi;
            } else {
                hi = interp;
            }
        }
        for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = zeta_at(mid);
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        const double root = 0.5 * (lo + hi);
        if (std::fabs(zeta_at(root)) < std::min(std::fabs(a), std::fabs(b)))
            roots.push_back(root);
    }
    return roots;
}

TraceResult trace_curves(const std::vector<double>& omegas,
                         const std::vector<std::vector<double>>& roots_per_omega,
                         double jump_threshold, int min_length) {
    if (omegas.size() != roots_per_omega.size())
        throw std::invalid_argument("trace_curves: omega/root column mismatch");

    struct Chain {
        std::vector<std::pair<double, double>> pts;
    };
    std::vector<Chain> closed, active;

    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const double om = omegas[i];
        const std::vector<double>& roots = roots_per_omega[i];
        std::vector<bool> used(roots.size(), false);

        struct Cand {
            double dist;
            std::size_t chain, root;
        };
        std::vector<Cand> cands;
        for (std::size_t c = 0; c < active.size(); ++c) {
            const auto& pts = active[c].pts;
            double pred = pts.back().second;
            double window = jump_threshold;
            if (pts.size() >= 2) {
                const auto& p1 = pts[pts.size() - 2];
                const auto& p2 = pts.back();
                const double slope = (p2.second - p1.second) / (p2.first - p1.first);
                pred = p2.second + slope * (om - p2.first);
                window = std::max(jump_threshold,
                                  2.5 * std::fabs(p2.second - p1.second));
            }
            for (std::size_t r = 0; r < roots.size(); ++r) {
                const double d = std::fabs(roots[r] - pred);
                if (d <= window) cands.push_back({d, c, r});
            }
        }
        std::sort(cands.begin(), cands.end(),
                  [](const Cand& a, const Cand& b) { return a.dist < b.dist; });

        std::vector<bool> matched(active.size(), false);
        for (const Cand& c : cands) {
            if (matched[c.chain] || used[c.root]) continue;
            active[c.chain].pts.emplace_back(om, roots[c.root]);
            matched[c.chain] = true;
            used[c.root] = true;
        }

        std::vector<Chain> still_active;
        for (std::size_t c = 0; c < active.size(); ++c) {
            if (matched[c])
                still_active.push_back(std::move(active[c]));
            else
                closed.push_back(std::move(active[c]));
        }
        active = std::move(still_active);

        for (std::size_t r = 0; r < roots.size(); ++r)
            if (!used[r]) active.push_back({{{om, roots[r]}}});
    }
    for (auto& c : active) closed.push_back(std::move(c));

    TraceResult out;
    for (auto& c : closed) {
        FloquetCurve curve{std::move(c.pts)};
        if (static_cast<int>(curve.points.size()) >= min_length)
            out.curves.push_back(std::move(curve));
        else
            out.fragments.push_back(std::move(curve));
    }
    // Stable report order: by starting omega, then starting eta.
    auto by_start = [](const FloquetCurve& a, const FloquetCurve& b) {
        return a.points.front() < b.points.front();
    };
    std::sort(out.curves.begin(), out.curves.end(), by_start);
    std::sort(out.fragments.begin(), out.fragments.end(), by_start);
    return out;
}

namespace {

struct Crossing {
    double omega = 0.0;
    double eta = 0.0;
    bool is_zero = false;  // false: pole-type crossing, excluded from contours
};

// Bisect f over [lo, hi] given f(lo) = flo with a sign change; classify by
// whether |f| at the refined point drops below both endpoint magnitudes.
Crossing refine_classify(const std::function<double(double)>& f, double lo,
                         double hi, double flo, double fhi, int iters,
                         double tol) {
    const double a0 = std::fabs(flo), b0 = std::fabs(fhi);
    for (int it = 0; it < iters && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Crossing c;
    const double x = 0.5 * (lo + hi);
    c.is_zero = std::fabs(f(x)) < std::min(a0, b0);
    c.eta = x;  // caller reinterprets for horizontal edges
    return c;
}

}  // namespace

TraceResult trace_curves_from_grid(
    const ScanGrid& grid,
    const std::function<double(double, double)>& zeta2d,
    const GridTraceOptions& opt) {
    const int nw = static_cast<int>(grid.omegas.size());
    const int ne = static_cast<int>(grid.etas.size());
    const int kNone = -1;

    // Crossing nodes on vertical edges (i, j)-(i, j+1) and horizontal edges
    // (i, j)-(i+1, j).  Ids index into `nodes`.
    std::vector<int> vnode(static_cast<std::size_t>(nw) * (ne - 1), kNone);
    std::vector<int> hnode(static_cast<std::size_t>(nw - 1) * ne, kNone);
    std::vector<std::pair<double, double>> nodes;  // (omega, eta)
    std::vector<std::vector<std::pair<double, double>>> node_buf;

    // Vertical edges: full-precision eta refinement (these fix band edges).
    node_buf.assign(nw, {});
    std::vector<std::vector<int>> vflag(nw);
    parallel_rows(nw, opt.threads, [&](int i) {
        const double w = grid.omegas[i];
        auto f = [&](double eta) { return zeta2d(w, eta); };
        for (int j = 0; j + 1 < ne; ++j) {
            const double a = grid.at(i, j), b = grid.at(i, j + 1);
            if (!std::isfinite(a) || !std::isfinite(b) || !(a * b < 0.0)) continue;
            Crossing c = refine_classify(f, grid.etas[j], grid.etas[j + 1], a, b,
                                         200, opt.tol);
            if (!c.is_zero) continue;
            node_buf[i].push_back({w, c.eta});
            vflag[i].push_back(j);
        }
    });
    for (int i = 0; i < nw; ++i)
        for (std::size_t k = 0; k < vflag[i].size(); ++k) {
            vnode[static_cast<std::size_t>(i) * (ne - 1) + vflag[i][k]] =
                static_cast<int>(nodes.size());
            nodes.push_back(node_buf[i][k]);
        }

    // Horizontal edges: a short bisection fixes the omega coordinate well
    // below the cell size; the magnitude test still rejects poles.
    node_buf.assign(ne, {});
    std::vector<std::vector<int>> hflag(ne);
    parallel_rows(ne, opt.threads, [&](int j) {
        const double eta = grid.etas[j];
        auto f = [&](double w) { return zeta2d(w, eta); };
        for (int i = 0; i + 1 < nw; ++i) {
            const double a = grid.at(i, j), b = grid.at(i + 1, j);
            if (!std::isfinite(a) || !std::isfinite(b) || !(a * b < 0.0)) continue;
            Crossing c = refine_classify(f, grid.omegas[i], grid.omegas[i + 1], a,
                                         b, 10, 0.0);
            if (!c.is_zero) continue;
            node_buf[j].push_back({c.eta /*omega*/, eta});
            hflag[j].push_back(i);
        }
    });
    for (int j = 0; j < ne; ++j)
        for (std::size_t k = 0; k < hflag[j].size(); ++k) {
            hnode[static_cast<std::size_t>(hflag[j][k]) * ne + j] =
                static_cast<int>(nodes.size());
            nodes.push_back({node_buf[j][k].first, node_buf[j][k].second});
        }

    // Connect crossings cell by cell; node degree never exceeds two because a
    // crossing is shared by at most two cells and pairs once in each.
    std::vector<std::array<int, 2>> adj(nodes.size(), {kNone, kNone});
    auto link = [&](int a, int b) {
        if (a == kNone || b == kNone) return;
        auto attach = [&](int from, int to) {
            if (adj[from][0] == kNone)
                adj[from][0] = to;
            else if (adj[from][1] == kNone)
                adj[from][1] = to;
        };
        attach(a, b);
        attach(b, a);
    };

    for (int i = 0; i + 1 < nw; ++i)
        for (int j = 0; j + 1 < ne; ++j) {
            int ids[4];  // left, right, bottom, top
            ids[0] = vnode[static_cast<std::size_t>(i) * (ne - 1) + j];
            ids[1] = vnode[static_cast<std::size_t>(i + 1) * (ne - 1) + j];
            ids[2] = hnode[static_cast<std::size_t>(i) * ne + j];
            ids[3] = hnode[static_cast<std::size_t>(i) * ne + j + 1];
            int present[4], cnt = 0;
            for (int e = 0; e < 4; ++e)
                if (ids[e] != kNone) present[cnt++] = e;
            if (cnt == 2) {
                link(ids[present[0]], ids[present[1]]);
            } else if (cnt == 4) {
                // Saddle: pair edges around the corner whose sign matches the
                // cell centre.
                const double centre =
                    zeta2d(0.5 * (grid.omegas[i] + grid.omegas[i + 1]),
                           0.5 * (grid.etas[j] + grid.etas[j + 1]));
                const double corner = grid.at(i, j);  // bottom-left
                if ((centre < 0.0) == (corner < 0.0)) {
                    link(ids[0], ids[3]);  // left-top
                    link(ids[1], ids[2]);  // right-bottom
                } else {
                    link(ids[0], ids[2]);  // left-bottom
                    link(ids[1], ids[3]);  // right-top
                }
            }
            // odd counts: a misclassified companion crossing; leave unpaired
        }

    // Walk the degree <= 2 graph into polylines, endpoints first.
    std::vector<char> used(nodes.size(), 0);
    std::vector<std::vector<int>> components;
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t s = 0; s < nodes.size(); ++s) {
            if (used[s]) continue;
            const int degree = (adj[s][0] != kNone) + (adj[s][1] != kNone);
            if (pass == 0 && degree == 2) continue;  // loops handled second
            std::vector<int> chain;
            int prev = kNone, cur = static_cast<int>(s);
            while (cur != kNone && !used[cur]) {
                used[cur] = 1;
                chain.push_back(cur);
                const int a = adj[cur][0], b = adj[cur][1];
                const int next = (a != prev && a != kNone) ? a : (b != prev ? b : kNone);
                prev = cur;
                cur = next;
            }
            components.push_back(std::move(chain));
        }

    // Assemble polylines in arc order, canonically oriented along increasing
    // omega with eta decreasing (the curves are monotone).
    std::vector<FloquetCurve> pieces;
    for (const auto& comp : components) {
        FloquetCurve c;
        c.points.reserve(comp.size());
        for (int id : comp) c.points.push_back(nodes[id]);
        const auto& f = c.points.front();
        const auto& b = c.points.back();
        if (b.first < f.first || (b.first == f.first && b.second > f.second))
            std::reverse(c.points.begin(), c.points.end());
        pieces.push_back(std::move(c));
    }

    // Bridge endpoint gaps where the curve disappears for a short stretch
    // (zero and pole sharing a scan cell hide the sign change); repeatedly
    // join the closest compatible end-to-start pair.
    const double gap_w =
        opt.merge_gap_cols * (grid.omegas[1] - grid.omegas[0]) + 1e-12;
    while (true) {
        double best = 2.0;
        std::size_t ba = 0, bb = 0;
        for (std::size_t a = 0; a < pieces.size(); ++a)
            for (std::size_t b = 0; b < pieces.size(); ++b) {
                if (a == b) continue;
                const auto& ea = pieces[a].points.back();
                const auto& sb = pieces[b].points.front();
                const double dw = sb.first - ea.first;
                const double drop = ea.second - sb.second;
                if (dw < -1e-12 || dw > gap_w) continue;
                if (drop < -1e-3 || drop > opt.merge_gap_eta) continue;
                const double cost = dw / gap_w + std::fabs(drop) / opt.merge_gap_eta;
                if (cost < best) {
                    best = cost;
                    ba = a;
                    bb = b;
                }
            }
        if (best > 1.999) break;
        pieces[ba].points.insert(pieces[ba].points.end(),
                                 pieces[bb].points.begin(),
                                 pieces[bb].points.end());
        pieces.erase(pieces.begin() + bb);
    }

    // A curve counts as resolved only when it is sampled over a nontrivial
    // fraction of the grid; marginal branches surviving as isolated islands
    // are reported as fragments (they accumulate indefinitely towards the
    // steep edge with ever-shrinking zero-pole separation).
    const int min_points =
        opt.min_points > 0 ? opt.min_points
                           : std::max({5, nw / 10, ne / 25});
    TraceResult out;
    for (auto& c : pieces) {
        if (static_cast<int>(c.points.size()) >= min_points)
            out.curves.push_back(std::move(c));
        else
            out.fragments.push_back(std::move(c));
    }
    auto by_start = [](const FloquetCurve& a, const FloquetCurve& b) {
        return a.points.front() < b.points.front();
    };
    std::sort(out.curves.begin(), out.curves.end(), by_start);
    std::sort(out.fragments.begin(), out.fragments.end(), by_start);
    return out;
}

BandSet extract_bands(const std::vector<FloquetCurve>& curves) {
    BandSet set;
    set.curve_count = static_cast<int>(curves.size());
    for (const FloquetCurve& c : curves) {
        Band b;
        b.lo = b.hi = c.points.front().second;
        for (const auto& [om, eta] : c.points) {
            b.lo = std::min(b.lo, eta);
            b.hi = std::max(b.hi, eta);
        }
        set.bands.push_back(b);
    }
    std::sort(set.bands.begin(), set.bands.end(),
              [](const Band& a, const Band& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < set.bands.size(); ++i)
        set.bands[i].index = static_cast<int>(i);
    return set;
}

BandPipelineResult floquet_bands(const ModelParams& p,
                                 const BandPipelineOptions& opt) {
    ScanOptions scan_opt = opt.scan;
    scan_opt.n_eta = opt.scan.n_eta;
    for (int pass = 0; pass < opt.refine_passes; ++pass)
        scan_opt.n_eta *= opt.refine_factor;
    const ScanGrid grid = grid_scan(p, scan_opt);

    BandPipelineResult result;
    result.omegas = grid.omegas;
    result.roots_per_omega.assign(grid.omegas.size(), {});
    parallel_rows(static_cast<int>(grid.omegas.size()), scan_opt.threads,
                  [&](int i) {
                      FloquetParams fp{p, grid.omegas[i]};
                      auto zeta = [&](double eta) {
                          return zeta_floquet(eta, fp, scan_opt.m_start);
                      };
                      result.roots_per_omega[i] =
                          locate_zeros(grid.column(i), zeta, opt.tol);
                  });

    GridTraceOptions trace_opt = opt.trace;
    trace_opt.tol = opt.tol;
    trace_opt.threads = scan_opt.threads;
    auto zeta2d = [&](double w, double eta) {
        return zeta_floquet(eta, {p, w}, scan_opt.m_start);
    };
    result.traced = trace_curves_from_grid(grid, zeta2d, trace_opt);
    result.bands = extract_bands(result.traced.curves);
    return result;
}

}  // namespace qkp::floquet
