#include "cstokes/rootscan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cstokes {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Track the continuous argument of f along the segment [za, zb].  Segments
// are bisected until consecutive increments of log f stay small, which pins
// the branch of the argument; each edge starts from 8 sub-segments.
double edge_phase(const AnalyticFn& f, Complex za, Complex zb, Complex fa,
                  Complex fb, int depth, int max_depth) {
    const double ma = std::abs(fa), mb = std::abs(fb);
    if (ma == 0.0 || mb == 0.0 || !std::isfinite(ma) || !std::isfinite(mb))
        throw ContourThroughZero("scan: f vanished or overflowed on contour node");
    const double dphi = std::arg(fb / fa);
    const double dmag = std::abs(std::log(mb / ma));
    if (depth >= 3 && std::abs(dphi) <= kPi / 2.0 && dmag <= 1.0) return dphi;
    if (depth >= max_depth) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "scan: edge depth cap near (%.9g,%.9g)-(%.9g,%.9g) |f|=%.3e,%.3e dphi=%.3f",
                      za.real(), za.imag(), zb.real(), zb.imag(), ma, mb, dphi);
        throw ContourThroughZero(buf);
    }
    const Complex zm = (za + zb) / 2.0;
    const Complex fm = f(zm);
    return edge_phase(f, za, zm, fa, fm, depth + 1, max_depth) +
           edge_phase(f, zm, zb, fm, fb, depth + 1, max_depth);
}

struct Walker {
    const AnalyticFn& f;
    const ScanOptions& opt;

    int count(const ScanRect& r) const {
        const Complex c1{r.re_min, r.im_min}, c2{r.re_max, r.im_min},
            c3{r.re_max, r.im_max}, c4{r.re_min, r.im_max};
        const Complex f1 = f(c1), f2 = f(c2), f3 = f(c3), f4 = f(c4);
        double total = 0.0;
        total += edge_phase(f, c1, c2, f1, f2, 0, opt.max_edge_refine);
        total += edge_phase(f, c2, c3, f2, f3, 0, opt.max_edge_refine);
        total += edge_phase(f, c3, c4, f3, f4, 0, opt.max_edge_refine);
        total += edge_phase(f, c4, c1, f4, f1, 0, opt.max_edge_refine);
        const double w = total / (2.0 * kPi);
        const long n = std::lround(w);
        if (std::abs(w - static_cast<double>(n)) > 0.25)
            throw ContourThroughZero("scan: non-integer winding number");
        return static_cast<int>(n);
    }

    // Retry a few times with a slightly inflated rectangle when the contour
    // happens to pass through (or very near) a zero.
    int count_jittered(ScanRect r) const {
        double pad = std::max(r.width(), r.height()) * 1e-7 + 1e-12;
        for (int attempt = 0;; ++attempt) {
            try {
                return count(r);
            } catch (const ContourThroughZero& e) {
                if (getenv("CSCAN_DEBUG"))
                    std::fprintf(stderr, "retry %d rect [%.6g,%.6g]x[%.6g,%.6g]: %s\n",
                                 attempt, r.re_min, r.re_max, r.im_min, r.im_max, e.what());
                if (attempt >= 6) throw;
                r.re_min -= pad;
                r.re_max += 1.37 * pad;
                r.im_min -= 0.71 * pad;
                r.im_max += pad;
                pad *= 3.1;
            }
        }
    }
};

bool inside_exclusion(Complex z, const ScanOptions& opt, double slack = 0.0) {
    for (Complex e : opt.exclusions)
        if (std::abs(z - e) <= opt.exclusion_radius + slack) return true;
    return false;
}

void scan_recurse(const Walker& w, const ScanRect& rect, int depth,
                  std::vector<Complex>& out) {
    // Rectangles fully inside an exclusion disk are dropped outright.
    if (w.opt.exclusion_radius > 0) {
        const Complex c = rect.center();
        const double half =
            std::hypot(rect.width(), rect.height()) / 2.0;
        for (Complex e : w.opt.exclusions)
            if (std::abs(c - e) + half <= w.opt.exclusion_radius) return;
    }
    int n = 0;
    try {
        n = w.count_jittered(rect);
    } catch (const ContourThroughZero&) {
        if (depth >= w.opt.max_depth) throw;
        // Grow the box slightly and try again one level deeper.
        ScanRect r2 = rect;
        const double px = rect.width() * 3e-5 + 1e-11;
        const double py = rect.height() * 3e-5 + 1e-11;
        r2.re_min -= px;
        r2.re_max += px;
        r2.im_min -= py;
        r2.im_max += py;
        scan_recurse(w, r2, depth + 1, out);
        return;
    }
    if (n == 0) return;

    const double sz = std::max(rect.width(), rect.height());
    const bool terminal = sz <= w.opt.min_box || depth >= w.opt.max_depth;
    if (terminal) {
        // Box is tiny: its content is one zero location (possibly multiple).
        Complex z = rect.center();
        try {
            z = newton_refine(w.f, z, w.opt.newton_tol, 80, 20.0 * sz + 1e-6);
        } catch (const NonConvergence&) {
            // keep the center; dedup below merges near-coincident finds
        }
        if (rect.contains(z, 4.0 * sz + 1e-9) && !inside_exclusion(z, w.opt))
            out.push_back(z);
        return;
    }
    if (n == 1) {
        try {
            const Complex z =
                newton_refine(w.f, rect.center(), w.opt.newton_tol, 80, 2.0 * sz);
            if (rect.contains(z, 0.05 * sz) && !inside_exclusion(z, w.opt)) {
                out.push_back(z);
                return;
            }
        } catch (const NonConvergence&) {
            // subdivide instead
        }
    }

    // Split along the longer side; nudge the split line off potential zeros.
    ScanRect a = rect, b = rect;
    if (rect.width() >= rect.height()) {
        const double mid = rect.re_min + rect.width() * 0.5000731;
        a.re_max = mid;
        b.re_min = mid;
    } else {
        const double mid = rect.im_min + rect.height() * 0.5000731;
        a.im_max = mid;
        b.im_min = mid;
    }
    scan_recurse(w, a, depth + 1, out);
    scan_recurse(w, b, depth + 1, out);
}

} // namespace

Complex newton_refine(const AnalyticFn& f, Complex z0, double tol, int max_iter,
                      double max_step) {
    Complex z = z0;
    try {
        double best = std::abs(f(z));
        Complex zbest = z;
        for (int it = 0; it < max_iter; ++it) {
            const double h = 1e-7 * std::max(1.0, std::abs(z));
            const Complex fz = f(z);
            const Complex df = (f(z + h) - f(z - h)) / (2.0 * h);
            if (std::abs(df) == 0.0) break;
            Complex step = fz / df;
            if (std::abs(step) > max_step) step *= max_step / std::abs(step);
            z -= step;
            const double fn = std::abs(f(z));
            if (fn < best) {
                best = fn;
                zbest = z;
            }
            if (std::abs(step) < tol * std::max(1.0, std::abs(z))) return z;
        }
        // Multiple roots converge linearly; accept if the residual collapsed.
        if (best < 1e-9) return zbest;
    } catch (const Error&) {
        // evaluation left the admissible domain
    }
    throw NonConvergence("newton_refine: no convergence");
}

int winding_number(const AnalyticFn& f, const ScanRect& rect, const ScanOptions& opt) {
    return Walker{f, opt}.count(rect);
}

std::vector<Complex> scan_zeros(const AnalyticFn& f, const ScanRect& rect,
                                const ScanOptions& opt, double merge_tol) {
    std::vector<Complex> found;
    Walker w{f, opt};
    scan_recurse(w, rect, 0, found);
    std::sort(found.begin(), found.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::vector<Complex> out;
    for (Complex z : found) {
        bool dup = false;
        for (Complex u : out)
            if (std::abs(u - z) < merge_tol) { dup = true; break; }
        if (!dup) out.push_back(z);
    }
    return out;
}

} // namespace cstokes
