#pragma once
// Exceptional spectrum at x = n*omega: Juddian degeneracies (K_n(n omega) = 0,
// pole lifted in both G branches) and non-degenerate exceptional points (one
// residue cofactor vanishing), plus plane tracing of both zero loci.

#include <utility>
#include <vector>

#include "rabi/gfunction.hpp"
#include "rabi/model.hpp"

namespace rabi {

enum class ExceptionalClass {
    None,
    JuddianDegenerate,
    NonDegeneratePlus,
    NonDegenerateMinus,
};

// Classifies x = n*omega using the normalized constraint and cofactors:
// Juddian iff |K^| < kTolK; otherwise NonDegenerate+/- iff |c^| < kTolC.
// Requires delta != 0: on the delta = 0 axis every x = m*omega is trivially
// exceptional and the classification is meaningless.
ExceptionalClass classify_point(int n, const ModelParams& p, const Truncation& t = {});

// Rectangular sampling window in the (delta, g) quadrant.  g_lo must sit
// inside the supported coupling window (g_lo > 1e-3 * omega); delta_lo >= 0.
struct PlaneWindow {
    double delta_lo{0.0};
    double delta_hi{1.5};
    double g_lo{0.02};
    double g_hi{1.0};
    int n_delta{400};
    int n_g{400};
};

// Sampled scalar field over a PlaneWindow; values stored row-major by g.
struct PlaneGrid {
    PlaneWindow window;
    std::vector<double> delta;   // n_delta ascending coordinates
    std::vector<double> g;       // n_g ascending coordinates
    std::vector<double> values;  // values[ig * n_delta + id]

    double at(int ig, int id) const { return values[static_cast<std::size_t>(ig) * delta.size() + id]; }
};

struct PlanePoint {
    double delta{0.0};
    double g{0.0};
};

// Zero-level contours of a plane field, assembled to full-plane polylines
// under the model symmetries delta -> -delta and g -> -g.  Vertices with
// g == 0 exactly are synthetic axis crossings obtained by linear
// extrapolation from g_lo (the series itself cannot be evaluated at g = 0).
// quadrant_components counts connected components of the locus restricted to
// the sampled quadrant window, which is the loop count of the figure; a
// component clipped by the window top/right edge stays open in closed_flags.
struct ContourSet {
    std::vector<std::vector<PlanePoint>> polylines;
    std::vector<char> closed_flags;  // aligned with polylines; closed: first == last
    int level_index{0};
    int quadrant_components{0};
    std::vector<PlanePoint> juddian_marks;  // cofactor loci: crossings with the Juddian locus
};

// K^_n(n omega) sampled over the window; valid on the delta = 0 column.
PlaneGrid sample_juddian_field(int n, const PlaneWindow& w, const ModelParams& base,
                               const Truncation& t = {});

// Normalized cofactors c^+/c^- sampled over the window.  On the delta = 0
// column the fields are set to their one-sided limits -1/+1 (the direct term
// -+ delta dominates the normalization as delta -> 0), which keeps the
// trivial residue zero of the axis out of the traced locus.
std::pair<PlaneGrid, PlaneGrid> sample_cofactor_fields(int n, const PlaneWindow& w,
                                                       const ModelParams& base,
                                                       const Truncation& t = {});

// Zero contours of K_n(n omega) over the window.  n = 0 gives an empty set
// (K_0 = 1).  Polylines are mirrored across delta = 0 when the window starts
// at delta_lo = 0 and always across g = 0 via the extrapolated axis points.
ContourSet juddian_locus(int n, const PlaneWindow& w, const ModelParams& base,
                         const Truncation& t = {});

// Zero contours of c^+ and c^- over the window, with crossings of the
// Juddian locus marked per set.  No delta-mirroring: under delta -> -delta
// the two branches exchange, so the delta < 0 half of one branch's locus is
// the mirror of the other branch's set.
std::pair<ContourSet, ContourSet> nondegenerate_locus(int n, const PlaneWindow& w,
                                                      const ModelParams& base,
                                                      const Truncation& t = {});

// (closed, open) counts by polyline closure flags.
std::pair<int, int> count_components(const ContourSet& cs);

}  // namespace rabi
