#include "rabi/exceptional.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "rabi/errors.hpp"

namespace rabi {

namespace {

constexpr double kEdgeRefineTol = 1e-10;  // bisection width along a grid edge

using Field = std::function<double(double delta, double g)>;

void require_window(const PlaneWindow& w, const ModelParams& base) {
    if (!(w.delta_lo >= 0.0) || !(w.delta_hi > w.delta_lo) || !(w.g_hi > w.g_lo))
        throw SolverError("plane window must satisfy 0 <= delta_lo < delta_hi and g_lo < g_hi");
    if (w.n_delta < 2 || w.n_g < 2)
        throw SolverError("plane grid needs at least 2 samples per axis");
    if (!(w.g_lo > kCouplingMinFactor * base.omega) || !(w.g_hi <= kCouplingMaxFactor * base.omega))
        throw SolverError("plane window g-range must lie inside the supported coupling window");
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    v.back() = hi;
    return v;
}

PlaneGrid sample_field(const PlaneWindow& w, const Field& f) {
    PlaneGrid grid;
    grid.window = w;
    grid.delta = linspace(w.delta_lo, w.delta_hi, w.n_delta);
    grid.g = linspace(w.g_lo, w.g_hi, w.n_g);
    grid.values.resize(static_cast<std::size_t>(w.n_delta) * w.n_g);
    for (int ig = 0; ig < w.n_g; ++ig)
        for (int id = 0; id < w.n_delta; ++id)
            grid.values[static_cast<std::size_t>(ig) * w.n_delta + id] =
                f(grid.delta[static_cast<std::size_t>(id)], grid.g[static_cast<std::size_t>(ig)]);
    return grid;
}

// Window sides an open contour chain can end on.
enum Side { kSideNone = -1, kSideLeft = 0, kSideBottom = 1, kSideRight = 2, kSideTop = 3 };

struct Crossing {
    double delta{0.0};
    double g{0.0};
    int nb[2]{-1, -1};
    int degree{0};
    int side{kSideNone};
    bool visited{false};
};

struct QuadrantChain {
    std::vector<PlanePoint> pts;
    bool cycle{false};
    int side_front{kSideNone};
    int side_back{kSideNone};
};

// Extracts the zero contours of a sampled field restricted to the quadrant
// window.  Crossing positions are refined by bisecting the live field along
// the hosting grid edge, so the returned vertices are grid-bias free.
std::vector<QuadrantChain> trace_quadrant(const PlaneGrid& grid, const Field& f) {
    const int nd = static_cast<int>(grid.delta.size());
    const int ng = static_cast<int>(grid.g.size());
    const auto positive = [](double v) { return v >= 0.0; };

    const auto refine = [&](double lo, double hi, double vlo, bool horizontal, double other) {
        const bool want = positive(vlo);
        while (hi - lo > kEdgeRefineTol) {
            const double mid = 0.5 * (lo + hi);
            const double vm = horizontal ? f(mid, other) : f(other, mid);
            (positive(vm) == want ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    // Edge tables: horizontal edge h(ig, id) joins samples (ig, id)-(ig, id+1),
    // vertical edge v(ig, id) joins (ig, id)-(ig+1, id).
    const int n_h = ng * (nd - 1);
    const int n_v = (ng - 1) * nd;
    std::vector<int> crossing_of(static_cast<std::size_t>(n_h + n_v), -1);
    const auto h_key = [&](int ig, int id) { return ig * (nd - 1) + id; };
    const auto v_key = [&](int ig, int id) { return n_h + ig * nd + id; };

    std::vector<Crossing> crossings;
    for (int ig = 0; ig < ng; ++ig) {
        for (int id = 0; id + 1 < nd; ++id) {
            const double va = grid.at(ig, id);
            const double vb = grid.at(ig, id + 1);
            if (positive(va) == positive(vb)) continue;
            Crossing c;
            c.g = grid.g[static_cast<std::size_t>(ig)];
            c.delta = refine(grid.delta[static_cast<std::size_t>(id)],
                             grid.delta[static_cast<std::size_t>(id) + 1], va, true, c.g);
            c.side = ig == 0 ? kSideBottom : (ig == ng - 1 ? kSideTop : kSideNone);
            crossing_of[static_cast<std::size_t>(h_key(ig, id))] = static_cast<int>(crossings.size());
            crossings.push_back(c);
        }
    }
    for (int ig = 0; ig + 1 < ng; ++ig) {
        for (int id = 0; id < nd; ++id) {
            const double va = grid.at(ig, id);
            const double vb = grid.at(ig + 1, id);
            if (positive(va) == positive(vb)) continue;
            Crossing c;
            c.delta = grid.delta[static_cast<std::size_t>(id)];
            c.g = refine(grid.g[static_cast<std::size_t>(ig)], grid.g[static_cast<std::size_t>(ig) + 1],
                         va, false, c.delta);
            c.side = id == 0 ? kSideLeft : (id == nd - 1 ? kSideRight : kSideNone);
            crossing_of[static_cast<std::size_t>(v_key(ig, id))] = static_cast<int>(crossings.size());
            crossings.push_back(c);
        }
    }

    const auto link = [&](int a, int b) {
        crossings[static_cast<std::size_t>(a)].nb[crossings[static_cast<std::size_t>(a)].degree++] = b;
        crossings[static_cast<std::size_t>(b)].nb[crossings[static_cast<std::size_t>(b)].degree++] = a;
    };

    // Per cell the crossed-edge count is 0, 2 or 4; a saddle (4) is resolved
    // by the sign of the cell-center average.
    for (int ig = 0; ig + 1 < ng; ++ig) {
        for (int id = 0; id + 1 < nd; ++id) {
            const int e[4] = {crossing_of[static_cast<std::size_t>(h_key(ig, id))],
                              crossing_of[static_cast<std::size_t>(v_key(ig, id + 1))],
                              crossing_of[static_cast<std::size_t>(h_key(ig + 1, id))],
                              crossing_of[static_cast<std::size_t>(v_key(ig, id))]};
            int hit[4];
            int n_hit = 0;
            for (int k = 0; k < 4; ++k)
                if (e[k] >= 0) hit[n_hit++] = k;
            if (n_hit == 0) continue;
            if (n_hit == 2) {
                link(e[hit[0]], e[hit[1]]);
                continue;
            }
            const double c00 = grid.at(ig, id);
            const double c10 = grid.at(ig, id + 1);
            const double c01 = grid.at(ig + 1, id);
            const double c11 = grid.at(ig + 1, id + 1);
            const double center = 0.25 * (c00 + c10 + c01 + c11);
            if (positive(center) == positive(c00)) {
                link(e[0], e[1]);  // isolate the (ig, id+1) corner
                link(e[2], e[3]);  // isolate the (ig+1, id) corner
            } else {
                link(e[0], e[3]);  // isolate the (ig, id) corner
                link(e[1], e[2]);  // isolate the (ig+1, id+1) corner
            }
        }
    }

    std::vector<QuadrantChain> chains;
    const auto walk = [&](int start, bool cycle) {
        QuadrantChain ch;
        ch.cycle = cycle;
        ch.side_front = crossings[static_cast<std::size_t>(start)].side;
        int prev = -1;
        int cur = start;
        while (true) {
            Crossing& c = crossings[static_cast<std::size_t>(cur)];
            c.visited = true;
            ch.pts.push_back({c.delta, c.g});
            int nxt = -1;
            for (int k = 0; k < c.degree; ++k)
                if (c.nb[k] != prev) nxt = c.nb[k];
            if (cycle && nxt == start) break;
            if (nxt == -1) break;
            prev = cur;
            cur = nxt;
        }
        ch.side_back = crossings[static_cast<std::size_t>(cur)].side;
        chains.push_back(std::move(ch));
    };
    for (std::size_t i = 0; i < crossings.size(); ++i)
        if (!crossings[i].visited && crossings[i].degree == 1) walk(static_cast<int>(i), false);
    for (std::size_t i = 0; i < crossings.size(); ++i)
        if (!crossings[i].visited && crossings[i].degree == 2) walk(static_cast<int>(i), true);
    return chains;
}

std::vector<PlanePoint> mirrored_delta(std::vector<PlanePoint> q) {
    for (PlanePoint& p : q) p.delta = p.delta == 0.0 ? 0.0 : -p.delta;
    return q;
}

std::vector<PlanePoint> mirrored_g(std::vector<PlanePoint> q) {
    for (PlanePoint& p : q) p.g = p.g == 0.0 ? 0.0 : -p.g;
    return q;
}

void append_skip_first(std::vector<PlanePoint>& dst, const std::vector<PlanePoint>& src) {
    dst.insert(dst.end(), src.begin() + 1, src.end());
}

std::vector<PlanePoint> reversed(std::vector<PlanePoint> q) {
    std::reverse(q.begin(), q.end());
    return q;
}

// Extends the terminal segment linearly to g = 0.  Fails (returns false) only
// when the neighboring vertex does not sit strictly above the endpoint.
bool extend_to_axis(std::vector<PlanePoint>& q, bool at_front) {
    const PlanePoint p0 = at_front ? q.front() : q.back();
    const PlanePoint p1 = at_front ? q[1] : q[q.size() - 2];
    if (!(p1.g > p0.g) || !(p0.g > 0.0)) return false;
    const double slope = (p0.delta - p1.delta) / (p0.g - p1.g);
    const PlanePoint axis{p0.delta - slope * p0.g, 0.0};
    if (at_front)
        q.insert(q.begin(), axis);
    else
        q.push_back(axis);
    return true;
}

// Assembles one quadrant chain into full-plane polylines under the mirror
// symmetries.  Ends on the delta = 0 axis (when the window starts there and
// delta-mirroring applies) and extrapolated g = 0 points are join points; a
// chain clipped by any other window edge stays open.
void emit_chain(const QuadrantChain& chain, bool mirror_delta, ContourSet& out) {
    const auto push = [&out](std::vector<PlanePoint> poly, bool closed) {
        out.polylines.push_back(std::move(poly));
        out.closed_flags.push_back(closed ? 1 : 0);
    };

    std::vector<PlanePoint> q = chain.pts;
    if (chain.cycle) {
        q.push_back(q.front());
        push(q, true);
        push(mirrored_g(q), true);
        if (mirror_delta) {
            push(mirrored_delta(q), true);
            push(mirrored_delta(mirrored_g(q)), true);
        }
        return;
    }

    enum End { kClip = 0, kLeft = 1, kBottom = 2 };
    const auto classify = [mirror_delta](int side) {
        if (side == kSideLeft && mirror_delta) return kLeft;
        if (side == kSideBottom) return kBottom;
        return kClip;
    };
    int s0 = classify(chain.side_front);
    int s1 = classify(chain.side_back);
    if (s0 > s1) {
        q = reversed(q);
        std::swap(s0, s1);
    }
    if (s1 == kBottom && !extend_to_axis(q, false)) s1 = kClip;
    if (s0 == kBottom && !extend_to_axis(q, true)) s0 = kClip;
    if (s0 > s1) {
        q = reversed(q);
        std::swap(s0, s1);
    }

    if (s0 == kLeft && s1 == kLeft) {
        std::vector<PlanePoint> j = q;
        append_skip_first(j, reversed(mirrored_delta(q)));
        push(j, true);
        push(mirrored_g(j), true);
    } else if (s0 == kLeft && s1 == kBottom) {
        std::vector<PlanePoint> j = q;  // left axis -> extrapolated g = 0 point
        append_skip_first(j, reversed(mirrored_g(q)));
        append_skip_first(j, reversed(mirrored_delta(j)));
        push(j, true);
    } else if (s0 == kBottom && s1 == kBottom) {
        std::vector<PlanePoint> j = q;
        append_skip_first(j, reversed(mirrored_g(q)));
        push(j, true);
        if (mirror_delta) push(mirrored_delta(j), true);
    } else if (s0 == kClip && s1 == kLeft) {
        std::vector<PlanePoint> j = q;
        append_skip_first(j, reversed(mirrored_delta(q)));
        push(j, false);
        push(mirrored_g(j), false);
    } else if (s0 == kClip && s1 == kBottom) {
        std::vector<PlanePoint> j = q;
        append_skip_first(j, reversed(mirrored_g(q)));
        push(j, false);
        if (mirror_delta) push(mirrored_delta(j), false);
    } else {
        push(q, false);
        push(mirrored_g(q), false);
        if (mirror_delta) {
            push(mirrored_delta(q), false);
            push(mirrored_delta(mirrored_g(q)), false);
        }
    }
}

ContourSet assemble(const std::vector<QuadrantChain>& chains, bool mirror_delta, int level) {
    ContourSet cs;
    cs.level_index = level;
    cs.quadrant_components = static_cast<int>(chains.size());
    for (const QuadrantChain& ch : chains) emit_chain(ch, mirror_delta, cs);
    return cs;
}

Field juddian_field(int n, const ModelParams& base) {
    return [n, omega = base.omega](double delta, double g) {
        return juddian_constraint_normalized(n, ModelParams{omega, g, delta});
    };
}

Field cofactor_field(int n, Branch branch, const ModelParams& base, const Truncation& t) {
    return [n, branch, omega = base.omega, t](double delta, double g) {
        // delta -> 0 limit: the direct -+ delta term dominates the
        // normalization, so the normalized cofactor tends to -+ 1.
        if (delta == 0.0) return branch == Branch::Plus ? -1.0 : 1.0;
        const ResiduePair rp = residue_pair(n, ModelParams{omega, g, delta}, t);
        return branch == Branch::Plus ? rp.c_plus_hat : rp.c_minus_hat;
    };
}

// Marks contour points where the Juddian constraint changes sign along a
// traced cofactor chain (the Juddian/non-degenerate locus crossings).
void collect_juddian_marks(int n, const ModelParams& base, const std::vector<QuadrantChain>& chains,
                           ContourSet& cs) {
    const Field k_hat = juddian_field(n, base);
    std::vector<PlanePoint> marks;
    for (const QuadrantChain& ch : chains) {
        if (ch.pts.size() < 2) continue;
        double prev = k_hat(ch.pts.front().delta, ch.pts.front().g);
        for (std::size_t i = 1; i < ch.pts.size(); ++i) {
            const double cur = k_hat(ch.pts[i].delta, ch.pts[i].g);
            if ((prev >= 0.0) != (cur >= 0.0)) {
                const double s = prev / (prev - cur);
                marks.push_back({ch.pts[i - 1].delta + s * (ch.pts[i].delta - ch.pts[i - 1].delta),
                                 ch.pts[i - 1].g + s * (ch.pts[i].g - ch.pts[i - 1].g)});
            }
            prev = cur;
        }
    }
    cs.juddian_marks = marks;
    for (const PlanePoint& m : marks) cs.juddian_marks.push_back({m.delta, -m.g});
}

}  // namespace

ExceptionalClass classify_point(int n, const ModelParams& p, const Truncation& t) {
    if (n < 0) throw SolverError("classify_point requires n >= 0");
    const ModelParams q = validate_params(p);
    if (q.delta == 0.0)
        throw UnsupportedCoupling("classification is undefined on the delta = 0 axis");
    const ResiduePair rp = residue_pair(n, q, t);
    if (std::abs(rp.k_hat) < kTolK) return ExceptionalClass::JuddianDegenerate;
    if (std::abs(rp.c_plus_hat) < kTolC) return ExceptionalClass::NonDegeneratePlus;
    if (std::abs(rp.c_minus_hat) < kTolC) return ExceptionalClass::NonDegenerateMinus;
    return ExceptionalClass::None;
}

PlaneGrid sample_juddian_field(int n, const PlaneWindow& w, const ModelParams& base,
                               const Truncation& t) {
    if (n < 0) throw SolverError("sample_juddian_field requires n >= 0");
    const ModelParams b = validate_params(base);
    require_window(w, b);
    (void)t;  // the constraint chain is finite; no series truncation involved
    return sample_field(w, juddian_field(n, b));
}

std::pair<PlaneGrid, PlaneGrid> sample_cofactor_fields(int n, const PlaneWindow& w,
                                                       const ModelParams& base,
                                                       const Truncation& t) {
    if (n < 0) throw SolverError("sample_cofactor_fields requires n >= 0");
    const ModelParams b = validate_params(base);
    require_window(w, b);
    // One residue evaluation feeds both branches; sample plus, then fill the
    // minus grid through the shared pair to avoid doubling the chain work.
    PlaneGrid plus;
    plus.window = w;
    plus.delta = linspace(w.delta_lo, w.delta_hi, w.n_delta);
    plus.g = linspace(w.g_lo, w.g_hi, w.n_g);
    plus.values.resize(static_cast<std::size_t>(w.n_delta) * w.n_g);
    PlaneGrid minus = plus;
    for (int ig = 0; ig < w.n_g; ++ig) {
        for (int id = 0; id < w.n_delta; ++id) {
            const double delta = plus.delta[static_cast<std::size_t>(id)];
            const double g = plus.g[static_cast<std::size_t>(ig)];
            const std::size_t k = static_cast<std::size_t>(ig) * w.n_delta + id;
            if (delta == 0.0) {
                plus.values[k] = -1.0;
                minus.values[k] = 1.0;
                continue;
            }
            const ResiduePair rp = residue_pair(n, ModelParams{b.omega, g, delta}, t);
            plus.values[k] = rp.c_plus_hat;
            minus.values[k] = rp.c_minus_hat;
        }
    }
    return {std::move(plus), std::move(minus)};
}

ContourSet juddian_locus(int n, const PlaneWindow& w, const ModelParams& base, const Truncation& t) {
    if (n < 0) throw SolverError("juddian_locus requires n >= 0");
    const ModelParams b = validate_params(base);
    require_window(w, b);
    ContourSet cs;
    cs.level_index = n;
    if (n == 0) return cs;  // K_0 = 1 never vanishes
    const PlaneGrid grid = sample_juddian_field(n, w, b, t);
    const std::vector<QuadrantChain> chains = trace_quadrant(grid, juddian_field(n, b));
    cs = assemble(chains, w.delta_lo == 0.0, n);
    return cs;
}

std::pair<ContourSet, ContourSet> nondegenerate_locus(int n, const PlaneWindow& w,
                                                      const ModelParams& base,
                                                      const Truncation& t) {
    if (n < 0) throw SolverError("nondegenerate_locus requires n >= 0");
    const ModelParams b = validate_params(base);
    require_window(w, b);
    const auto grids = sample_cofactor_fields(n, w, b, t);
    const Field f_plus = cofactor_field(n, Branch::Plus, b, t);
    const Field f_minus = cofactor_field(n, Branch::Minus, b, t);
    const std::vector<QuadrantChain> chains_plus = trace_quadrant(grids.first, f_plus);
    const std::vector<QuadrantChain> chains_minus = trace_quadrant(grids.second, f_minus);
    ContourSet cs_plus = assemble(chains_plus, false, n);
    ContourSet cs_minus = assemble(chains_minus, false, n);
    collect_juddian_marks(n, b, chains_plus, cs_plus);
    collect_juddian_marks(n, b, chains_minus, cs_minus);
    return {std::move(cs_plus), std::move(cs_minus)};
}

std::pair<int, int> count_components(const ContourSet& cs) {
    int closed = 0;
    for (char f : cs.closed_flags) closed += f != 0;
    return {closed, static_cast<int>(cs.closed_flags.size()) - closed};
}

}  // namespace rabi
