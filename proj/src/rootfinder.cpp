#include "rabi/rootfinder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rabi {

namespace {

double eval_branch(double x, Branch b, const ModelParams& p, const Truncation& t) {
    const GPair g = g_pair(SpectralPoint{x}, p, t);
    return b == Branch::Plus ? g.g_plus : g.g_minus;
}

// Push x outward until it clears the pole margin; guards against the sum
// center + margin rounding a hair inside the refusal zone.
double push_outside(double x, double center, double margin, double dir) {
    while (std::abs(x - center) < margin) {
        x = std::nextafter(x, dir * std::numeric_limits<double>::infinity());
    }
    return x;
}

struct Segment {
    double lo;
    double hi;
};

// Pole-free sub-intervals of [x_lo, x_hi]; pole centers m*omega (m >= 0) are
// excised with their margins.
std::vector<Segment> pole_free_segments(const ModelParams& p, double x_lo, double x_hi,
                                        std::vector<double>& gaps) {
    const double margin = pole_margin(p);
    std::vector<Segment> segs;
    const int m_lo = std::max(0, static_cast<int>(std::ceil((x_lo - margin) / p.omega)));
    const int m_hi = static_cast<int>(std::floor((x_hi + margin) / p.omega));
    double start = x_lo;
    for (int m = m_lo; m <= m_hi; ++m) {
        const double c = m * p.omega;
        gaps.push_back(c);
        const double left = push_outside(c - margin, c, margin, -1.0);
        const double right = push_outside(c + margin, c, margin, +1.0);
        if (left > start) {
            segs.push_back({start, std::min(left, x_hi)});
        }
        start = std::max(start, right);
    }
    if (x_hi > start) {
        segs.push_back({start, x_hi});
    }
    return segs;
}

double median_magnitude(std::vector<double> mags) {
    if (mags.empty()) {
        return 0.0;
    }
    const std::size_t mid = mags.size() / 2;
    std::nth_element(mags.begin(), mags.begin() + mid, mags.end());
    return mags[mid];
}

}  // namespace

ScanResult scan_brackets(const ModelParams& p0, double x_lo, double x_hi,
                         const Truncation& t, double step) {
    const ModelParams p = validate_params(p0);
    if (step <= 0.0) {
        step = p.omega / kScanStepsPerOmega;
    }
    ScanResult out;
    if (x_hi < x_lo) {
        return out;
    }
    for (const Segment& seg : pole_free_segments(p, x_lo, x_hi, out.pole_gaps)) {
        const int n_steps = std::max(1, static_cast<int>(std::ceil((seg.hi - seg.lo) / step)));
        std::vector<double> xs(static_cast<std::size_t>(n_steps) + 1);
        std::vector<double> vp(xs.size());
        std::vector<double> vm(xs.size());
        for (int i = 0; i <= n_steps; ++i) {
            const double x = i == n_steps ? seg.hi : seg.lo + (seg.hi - seg.lo) * i / n_steps;
            const GPair g = g_pair(SpectralPoint{x}, p, t);
            xs[i] = x;
            vp[i] = g.g_plus;
            vm[i] = g.g_minus;
        }
        for (int br = 0; br < 2; ++br) {
            const Branch branch = br == 0 ? Branch::Plus : Branch::Minus;
            const std::vector<double>& v = br == 0 ? vp : vm;
            for (std::size_t i = 0; i + 1 < v.size(); ++i) {
                if (v[i] == 0.0) {
                    continue;  // exact grid zero: the neighbor pair brackets it
                }
                if (v[i] * v[i + 1] < 0.0 || (v[i + 1] == 0.0 && i + 2 == v.size())) {
                    out.brackets.push_back({xs[i], xs[i + 1], branch, BracketKind::SignChange});
                }
            }
            std::vector<double> mags(v.size());
            std::transform(v.begin(), v.end(), mags.begin(),
                           [](double y) { return std::abs(y); });
            const double scale = median_magnitude(mags);
            for (std::size_t i = 1; i + 1 < v.size(); ++i) {
                const bool local_min = mags[i] < mags[i - 1] && mags[i] <= mags[i + 1];
                const bool deep = mags[i] < kMinDipFactor * scale;
                const bool no_crossing = v[i - 1] * v[i] > 0.0 && v[i] * v[i + 1] > 0.0;
                if (local_min && deep && no_crossing) {
                    out.dip_candidates.push_back(
                        {xs[i - 1], xs[i + 1], branch, BracketKind::DipMinimum});
                }
            }
        }
    }
    std::sort(out.brackets.begin(), out.brackets.end(),
              [](const Bracket& a, const Bracket& b) { return a.lo < b.lo; });
    return out;
}

namespace {

RootResult refine_sign_change(const Bracket& b, const ModelParams& p, const Truncation& t) {
    double lo = b.lo;
    double hi = b.hi;
    double glo = eval_branch(lo, b.branch, p, t);
    double ghi = eval_branch(hi, b.branch, p, t);
    if (glo == 0.0) {
        return {lo, b.branch, 0.0, 0.0, false};
    }
    if (ghi == 0.0) {
        return {hi, b.branch, 0.0, 0.0, false};
    }
    if ((glo > 0.0) == (ghi > 0.0)) {
        throw LostBracket("bracket endpoints have equal signs");
    }
    const double x_tol = kRootTolFactor * p.omega;
    for (int iter = 0; iter < 100 && hi - lo > x_tol; ++iter) {
        double x_next;
        const double width = hi - lo;
        // Opportunistic secant on even iterations, bisection otherwise, so the
        // bracket width provably halves at least every other step.
        if (iter % 2 == 0 && ghi != glo) {
            x_next = (lo * ghi - hi * glo) / (ghi - glo);
            if (!(x_next > lo + 0.01 * width && x_next < hi - 0.01 * width)) {
                x_next = 0.5 * (lo + hi);
            }
        } else {
            x_next = 0.5 * (lo + hi);
        }
        const double g_next = eval_branch(x_next, b.branch, p, t);
        if (g_next == 0.0) {
            return {x_next, b.branch, 0.0, hi - lo, false};
        }
        if ((g_next > 0.0) == (glo > 0.0)) {
            lo = x_next;
            glo = g_next;
        } else {
            hi = x_next;
            ghi = g_next;
        }
    }
    const double x_star = 0.5 * (lo + hi);
    return {x_star, b.branch, std::abs(eval_branch(x_star, b.branch, p, t)), hi - lo, false};
}

// A dip candidate either splits into real crossings under a finer look, or
// bottoms out as a (suspected) tangency, or disappears.
std::vector<RootResult> resolve_dip(const Bracket& b, const ModelParams& p,
                                    const Truncation& t) {
    std::vector<RootResult> roots;
    const int n = 200;
    std::vector<double> xs(n + 1);
    std::vector<double> vs(n + 1);
    for (int i = 0; i <= n; ++i) {
        xs[i] = b.lo + (b.hi - b.lo) * i / n;
        vs[i] = eval_branch(xs[i], b.branch, p, t);
    }
    bool crossed = false;
    for (int i = 0; i < n; ++i) {
        if (vs[i] != 0.0 && vs[i] * vs[i + 1] < 0.0) {
            roots.push_back(refine_sign_change(
                {xs[i], xs[i + 1], b.branch, BracketKind::SignChange}, p, t));
            crossed = true;
        }
    }
    if (crossed) {
        return roots;
    }
    // Golden-section minimum of |G|.
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = b.lo;
    double hi = b.hi;
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = std::abs(eval_branch(x1, b.branch, p, t));
    double f2 = std::abs(eval_branch(x2, b.branch, p, t));
    const double min_width = 1e3 * kRootTolFactor * p.omega;
    while (hi - lo > min_width) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = std::abs(eval_branch(x1, b.branch, p, t));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = std::abs(eval_branch(x2, b.branch, p, t));
        }
    }
    const double x_min = 0.5 * (lo + hi);
    const double v_min = std::abs(eval_branch(x_min, b.branch, p, t));
    const double edge_scale = std::max(std::abs(vs.front()), std::abs(vs.back()));
    if (v_min < 1e-6 * std::max(edge_scale, std::numeric_limits<double>::min())) {
        roots.push_back({x_min, b.branch, v_min, hi - lo, true});
    }
    return roots;
}

}  // namespace

std::optional<RootResult> refine_root(const Bracket& b, const ModelParams& p0,
                                      const Truncation& t) {
    const ModelParams p = validate_params(p0);
    if (b.kind == BracketKind::SignChange) {
        return refine_sign_change(b, p, t);
    }
    const std::vector<RootResult> roots = resolve_dip(b, p, t);
    if (roots.empty()) {
        return std::nullopt;
    }
    return roots.front();
}

RegularSpectrum regular_spectrum(const ModelParams& p0, int count, const Truncation& t) {
    const ModelParams p = validate_params(p0);
    if (count < 1) {
        throw SolverError("regular_spectrum requires count >= 1");
    }
    const double q = p.g / p.omega;
    if (q <= kCouplingMinFactor || q > kCouplingMaxFactor) {
        throw UnsupportedCoupling(
            "g/omega outside the validated series window; use the diagonalization path");
    }
    if (p.delta == 0.0) {
        throw UnsupportedCoupling(
            "delta = 0 collapses both G branches; use the diagonalization path");
    }

    const double x_floor = -p.delta - 0.5 * p.omega;
    const double window = 2.0 * p.omega;
    const double dedupe_tol = 10.0 * kRootTolFactor * p.omega;

    std::vector<RootResult> roots;
    std::vector<double> gaps;
    const int max_windows = count + 20;
    for (int k = 0; k < max_windows; ++k) {
        const double lo = x_floor + k * window;
        const double hi = x_floor + (k + 1) * window;
        const ScanResult scan = scan_brackets(p, lo, hi, t);
        for (double c : scan.pole_gaps) {
            if (gaps.empty() || c > gaps.back()) {
                gaps.push_back(c);
            }
        }
        std::vector<RootResult> found;
        for (const Bracket& b : scan.brackets) {
            found.push_back(refine_sign_change(b, p, t));
        }
        for (const Bracket& b : scan.dip_candidates) {
            for (const RootResult& r : resolve_dip(b, p, t)) {
                found.push_back(r);
            }
        }
        for (const RootResult& r : found) {
            const bool duplicate =
                std::any_of(roots.begin(), roots.end(), [&](const RootResult& s) {
                    return s.branch == r.branch && std::abs(s.x_star - r.x_star) < dedupe_tol;
                });
            if (!duplicate) {
                roots.push_back(r);
            }
        }
        if (static_cast<int>(roots.size()) >= count) {
            break;
        }
    }
    if (static_cast<int>(roots.size()) < count) {
        throw SolverError("scan windows exhausted before finding the requested levels");
    }

    std::sort(roots.begin(), roots.end(),
              [](const RootResult& a, const RootResult& b) { return a.x_star < b.x_star; });
    roots.resize(static_cast<std::size_t>(count));

    RegularSpectrum out;
    out.pole_gaps = std::move(gaps);
    for (const RootResult& r : roots) {
        out.energies.push_back(energy_from_x(SpectralPoint{r.x_star}, p,
                                             parity_of_branch(r.branch), EnergyKind::Regular));
        out.roots.push_back(r);
    }
    return out;
}

}  // namespace rabi
