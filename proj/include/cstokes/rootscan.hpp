#ifndef CSTOKES_ROOTSCAN_HPP
#define CSTOKES_ROOTSCAN_HPP

#include <complex>
#include <functional>
#include <vector>

#include "cstokes/core.hpp"

// Rectangle scan for zeros of a scalar analytic function: the zero count in
// a rectangle is the winding number of f along its boundary (argument
// principle), rectangles are subdivided until they isolate single zeros and
// the candidates are polished by Newton iteration.

namespace cstokes {

using Complex = std::complex<double>;
using AnalyticFn = std::function<Complex(Complex)>;

struct ScanRect {
    double re_min, re_max, im_min, im_max;

    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
    Complex center() const {
        return {(re_min + re_max) / 2.0, (im_min + im_max) / 2.0};
    }
    bool contains(Complex z, double pad = 0.0) const {
        return z.real() >= re_min - pad && z.real() <= re_max + pad &&
               z.imag() >= im_min - pad && z.imag() <= im_max + pad;
    }
};

struct ScanOptions {
    double newton_tol = 1e-12;
    double min_box = 1e-6;       // stop subdividing below this size
    int max_depth = 60;
    int max_edge_refine = 48;    // adaptive phase-tracking depth per edge
    // Disks to carve out of the search region (degenerate parameter values).
    std::vector<Complex> exclusions;
    double exclusion_radius = 0.0;
};

// All zeros of f inside rect (outside exclusion disks), deduplicated within
// merge_tol.  Multiple zeros collapse to one representative.
std::vector<Complex> scan_zeros(const AnalyticFn& f, const ScanRect& rect,
                                const ScanOptions& opt, double merge_tol = 1e-8);

// Winding number of f around the rectangle boundary; throws
// ContourThroughZero when f vanishes on the contour to sampling precision.
int winding_number(const AnalyticFn& f, const ScanRect& rect,
                   const ScanOptions& opt);

// Newton polish with finite-difference derivative (f analytic, so a real
// step suffices).  Returns the refined root or throws NonConvergence.
Complex newton_refine(const AnalyticFn& f, Complex z0, double tol,
                      int max_iter = 80,
                      double max_step = 1e300);

} // namespace cstokes

#endif
