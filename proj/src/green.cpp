#include "cstokes/green.hpp"

#include <cmath>

#include "cstokes/parallel.hpp"

namespace cstokes {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Difference geometry shared by all entry formulas.  r = x - xi,
// R = x - xi^* with xi^* = (xi1, xi2, -xi3), so R3 = x3 + xi3.
struct Geom {
    double d1, d2, d3;   // x - xi
    double R3;           // x3 + xi3
    double r, r3, r5;    // |x-xi| powers
    double R, Rc, R5;    // |x-xi^*| powers
    double x3, xi3;

    double d(int k) const { return k == 1 ? d1 : (k == 2 ? d2 : d3); }
    double Rk(int k) const { return k == 1 ? d1 : (k == 2 ? d2 : R3); }
};

Geom make_geom(const Vec3& x, const Vec3& xi, const NumericConfig& cfg) {
    Geom g;
    g.d1 = x.x1 - xi.x1;
    g.d2 = x.x2 - xi.x2;
    g.d3 = x.x3 - xi.x3;
    g.R3 = x.x3 + xi.x3;
    g.x3 = x.x3;
    g.xi3 = xi.x3;
    const double rr = g.d1 * g.d1 + g.d2 * g.d2 + g.d3 * g.d3;
    g.r = std::sqrt(rr);
    if (g.r < cfg.singularity_guard)
        throw SingularPoint("green: |x - xi| below singularity guard");
    g.r3 = g.r * rr;
    g.r5 = g.r3 * rr;
    const double RR = g.d1 * g.d1 + g.d2 * g.d2 + g.R3 * g.R3;
    g.R = std::sqrt(RR);
    if (g.R < cfg.singularity_guard)
        throw SingularPoint("green: |x - xi^*| below singularity guard");
    g.Rc = g.R * RR;
    g.R5 = g.Rc * RR;
    return g;
}

// Free-space entries.  G_{ij} = (1/8pi)(d_ij/r + di dj/r^3),
// G_{4j} = -G_{j4} = (1/4pi) dj/r^3, G_{44} = -delta(x-xi).
double fs_entry(const Geom& g, int i, int j) {
    if (i <= 3 && j <= 3) {
        const double num = g.d(i) * g.d(j);
        double v = num / g.r3;
        if (i == j) v += 1.0 / g.r;
        return v / (8.0 * kPi);
    }
    if (i == 4 && j <= 3) return g.d(j) / (4.0 * kPi * g.r3);
    if (j == 4 && i <= 3) return -g.d(i) / (4.0 * kPi * g.r3);
    return 0.0; // (4,4): pure delta
}

// Same formula evaluated at the image source, i.e. with d3 -> R3.
double fs_entry_img(const Geom& g, int i, int j) {
    if (i <= 3 && j <= 3) {
        const double num = g.Rk(i) * g.Rk(j);
        double v = num / g.Rc;
        if (i == j) v += 1.0 / g.R;
        return v / (8.0 * kPi);
    }
    if (i == 4 && j <= 3) return g.Rk(j) / (4.0 * kPi * g.Rc);
    if (j == 4 && i <= 3) return -g.Rk(i) / (4.0 * kPi * g.Rc);
    return 0.0;
}

// --- boundary condition (ii), d = 1 --------------------------------------
// G+_{ij}(x,xi) = G_{ij}(x,xi) - (-1)^{d_{j,3}} G_{ij}(x,xi^*) for i+j <= 7,
// and G+_{44} = -delta(x-xi).
double bc1_entry(const Geom& g, int i, int j) {
    if (i == 4 && j == 4) return 0.0;
    const double sign = (j == 3) ? 1.0 : -1.0;
    return fs_entry(g, i, j) + sign * fs_entry_img(g, i, j);
}

// --- Neumann condition (iv), d = 3 ----------------------------------------
// The nine explicit entries; the remaining ones close by the symmetry
// G+_{ij}(x,xi) = G+_{ji}(xi,x).
double bc3_entry_explicit(const Geom& g, int i, int j) {
    if (i <= 2 && j <= 2) {
        // G + G(img) + (1/4pi) d^2/dx_i dxi_j (x3 xi3 / R)
        double extra = -3.0 * g.d(i) * g.d(j) / g.R5;
        if (i == j) extra += 1.0 / g.Rc;
        extra *= g.x3 * g.xi3 / (4.0 * kPi);
        return fs_entry(g, i, j) + fs_entry_img(g, i, j) + extra;
    }
    if (i <= 2 && j == 3) {
        // G - G(img) - (1/4pi) d/dx_i ( x3/R + x3 xi3 (x3+xi3)/R^3 )
        const double extra =
            g.x3 * g.d(i) * (1.0 / g.Rc + 3.0 * g.xi3 * g.R3 / g.R5) / (4.0 * kPi);
        return fs_entry(g, i, j) - fs_entry_img(g, i, j) + extra;
    }
    if (i <= 2 && j == 4) {
        // G + G(img) + (1/2pi) d^2/dx_i dxi_3 ( x3 / R )
        const double extra = 3.0 * g.x3 * g.R3 * g.d(i) / (2.0 * kPi * g.R5);
        return fs_entry(g, i, j) + fs_entry_img(g, i, j) + extra;
    }
    if (i == 3 && j == 3) {
        const double extra = (1.0 / g.R + g.R3 * g.R3 / g.Rc +
                              g.x3 * g.xi3 * g.R3 * g.R3 / g.R5) /
                             (4.0 * kPi);
        return fs_entry(g, i, j) - fs_entry_img(g, i, j) + extra;
    }
    if (i == 3 && j == 4) {
        // G + G(img) - (1/2pi) d/dxi_3 ( 1/R + x3 (x3+xi3)/R^3 )
        const double extra =
            (g.xi3 / g.Rc + 3.0 * g.x3 * g.R3 * g.R3 / g.R5) / (2.0 * kPi);
        return fs_entry(g, i, j) + fs_entry_img(g, i, j) + extra;
    }
    if (i == 4 && j == 4) {
        // regular part of -delta + (1/pi) d^2/dx3 dxi3 (1/R)
        return (-1.0 / g.Rc + 3.0 * g.R3 * g.R3 / g.R5) / kPi;
    }
    return 0.0;
}

bool bc3_is_explicit(int i, int j) {
    if (i <= 2) return true;                 // (i,1..4), i = 1,2
    if (i == 3 && (j == 3 || j == 4)) return true;
    if (i == 4 && j == 4) return true;
    return false;
}

// --- free-surface condition (iii), d = 2 -----------------------------------
// Mirror image with column signs s = (+1, +1, -1, +1): the image of a force
// e_j is s_j e_j at xi^*, the image of the mass source has strength +1.
double bc2_entry(const Geom& g, int i, int j) {
    if (i == 4 && j == 4) return 0.0;
    const double sj = (j == 3) ? -1.0 : 1.0;
    return fs_entry(g, i, j) + sj * fs_entry_img(g, i, j);
}

// --- Dirichlet condition (i), d = 0 ----------------------------------------
// Stokeslet plus image system at xi^*: image Stokeslet of opposite sign, a
// potential dipole and a Stokeslet doublet, both with strength ~ xi3.  The
// mass-source column carries the correction field  x3 grad(psi) - psi e3,
// psi = (1/2pi) R3/R^3, with pressure 2 d_x3 psi.
double bc0_entry(const Geom& g, int i, int j) {
    const double h = g.xi3;
    const double betaj = (j == 3) ? -1.0 : 1.0;
    if (j <= 3 && i <= 3) {
        const double Ri = g.Rk(i), Rj = g.Rk(j);
        double grad = h * (-3.0 * Ri * Rj / g.R5);
        if (i == j) grad += h / g.Rc;
        if (i == 3) grad += Rj / g.Rc;
        grad -= (i == j ? g.R3 / g.Rc : 0.0) + (j == 3 ? Ri / g.Rc : 0.0);
        grad += 3.0 * Ri * g.R3 * Rj / g.R5;
        return fs_entry(g, i, j) - fs_entry_img(g, i, j) +
               h * betaj * grad / (4.0 * kPi);
    }
    if (i == 4 && j <= 3) {
        const double Rj = g.Rk(j);
        double grad = -3.0 * g.R3 * Rj / g.R5;
        if (j == 3) grad += 1.0 / g.Rc;
        return (g.d(j) / g.r3 - Rj / g.Rc) / (4.0 * kPi) -
               h * betaj * grad / (2.0 * kPi);
    }
    if (j == 4 && i <= 3) {
        const double Ri = g.Rk(i);
        double dpsi = -3.0 * g.R3 * Ri / g.R5;
        if (i == 3) dpsi += 1.0 / g.Rc;
        dpsi /= 2.0 * kPi;
        double v = (-g.d(i) / g.r3 + Ri / g.Rc) / (4.0 * kPi) + g.x3 * dpsi;
        if (i == 3) v -= g.R3 / (2.0 * kPi * g.Rc);
        return v;
    }
    // (4,4) regular part: 2 d_x3 psi
    return (1.0 / g.Rc - 3.0 * g.R3 * g.R3 / g.R5) / kPi;
}

double halfspace_entry(BcType bc, int i, int j, const Vec3& x, const Vec3& xi,
                       const NumericConfig& cfg) {
    const Geom g = make_geom(x, xi, cfg);
    switch (bc) {
        case BcType::mixed_normal: return bc1_entry(g, i, j);
        case BcType::free_surface: return bc2_entry(g, i, j);
        case BcType::dirichlet: return bc0_entry(g, i, j);
        case BcType::neumann:
            if (bc3_is_explicit(i, j)) return bc3_entry_explicit(g, i, j);
            // symmetry closure G+_{ij}(x,xi) = G+_{ji}(xi,x)
            return bc3_entry_explicit(make_geom(xi, x, cfg), j, i);
    }
    throw DomainError("halfspace_entry: bad bc");
}

void check_halfspace_points(const Vec3& x, const Vec3& xi) {
    if (!(xi.x3 > 0.0)) throw DomainError("halfspace_green: xi must have xi3 > 0");
    if (x.x3 < 0.0) throw DomainError("halfspace_green: x must have x3 >= 0");
}

} // namespace

GreenMatrix freespace_green(const Vec3& x, const Vec3& xi, const NumericConfig& cfg) {
    const Geom g = make_geom(x, xi, cfg);
    GreenMatrix m;
    m.x = x;
    m.xi = xi;
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) m.entry(i, j).value = fs_entry(g, i, j);
    m.entry(4, 4).has_delta = true;
    m.entry(4, 4).delta_coefficient = -1.0;
    return m;
}

GreenMatrix halfspace_green(BcType bc, const Vec3& x, const Vec3& xi,
                            const NumericConfig& cfg) {
    check_halfspace_points(x, xi);
    GreenMatrix m;
    m.bc = bc;
    m.x = x;
    m.xi = xi;
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j)
            m.entry(i, j).value = halfspace_entry(bc, i, j, x, xi, cfg);
    m.entry(4, 4).has_delta = true;
    m.entry(4, 4).delta_coefficient = -1.0;
    return m;
}

double green_entry_value(std::optional<BcType> bc, int i, int j, const Vec3& x,
                         const Vec3& xi, const NumericConfig& cfg) {
    if (i < 1 || i > 4 || j < 1 || j > 4)
        throw DomainError("green_entry_value: indices must lie in 1..4");
    if (!bc) return fs_entry(make_geom(x, xi, cfg), i, j);
    check_halfspace_points(x, xi);
    return halfspace_entry(*bc, i, j, x, xi, cfg);
}

namespace {

// Central difference with one Richardson level on the first remaining
// derivative direction; recurses until both multi-indices are exhausted.
double fd_mixed(const std::function<double(const Vec3&, const Vec3&)>& F,
                Vec3 x, Vec3 xi, MultiIndex alpha, MultiIndex gamma, double h) {
    int dir = -1;
    bool in_x = true;
    for (int k = 0; k < 3; ++k)
        if (alpha[k] > 0) { dir = k; break; }
    if (dir < 0) {
        in_x = false;
        for (int k = 0; k < 3; ++k)
            if (gamma[k] > 0) { dir = k; break; }
    }
    if (dir < 0) return F(x, xi);

    MultiIndex a = alpha, c = gamma;
    if (in_x) {
        if (dir == 0) a.a1--; else if (dir == 1) a.a2--; else a.a3--;
    } else {
        if (dir == 0) c.a1--; else if (dir == 1) c.a2--; else c.a3--;
    }
    auto shifted = [&](double t) {
        Vec3 xs = x, xis = xi;
        double* comp = in_x ? (dir == 0 ? &xs.x1 : dir == 1 ? &xs.x2 : &xs.x3)
                            : (dir == 0 ? &xis.x1 : dir == 1 ? &xis.x2 : &xis.x3);
        *comp += t;
        return fd_mixed(F, xs, xis, a, c, h);
    };
    auto central = [&](double step) {
        return (shifted(step) - shifted(-step)) / (2.0 * step);
    };
    const double d1 = central(h);
    const double d2 = central(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

} // namespace

double halfspace_green_derivative(std::optional<BcType> bc, int i, int j,
                                  const MultiIndex& alpha, const MultiIndex& gamma,
                                  const Vec3& x, const Vec3& xi,
                                  const NumericConfig& cfg) {
    if (alpha.order() + gamma.order() > cfg.max_derivative_order)
        throw OrderTooHigh("halfspace_green_derivative: |alpha|+|gamma| too large");
    const double dist = (x - xi).norm();
    if (dist < cfg.singularity_guard)
        throw SingularPoint("halfspace_green_derivative: x == xi");
    if (alpha.zero() && gamma.zero()) return green_entry_value(bc, i, j, x, xi, cfg);
    const double h = cfg.fd_step_base * dist;
    auto F = [&](const Vec3& a, const Vec3& b) {
        return green_entry_value(bc, i, j, a, b, cfg);
    };
    return fd_mixed(F, x, xi, alpha, gamma, h);
}

// ---------------------------------------------------------------- P_j

PressurePotential pressure_row_decomposition(BcType bc, int j, const Vec3& x,
                                             const Vec3& xi, const NumericConfig& cfg) {
    if (bc != BcType::mixed_normal && bc != BcType::neumann)
        throw UnsupportedBc("pressure_row_decomposition: bc must be 1 or 3");
    if (j < 1 || j > 4) throw DomainError("pressure_row_decomposition: bad column");
    check_halfspace_points(x, xi);
    const Geom g = make_geom(x, xi, cfg);
    const double c4 = 1.0 / (4.0 * kPi), c2 = 1.0 / (2.0 * kPi);
    PressurePotential out;
    if (bc == BcType::mixed_normal) {
        if (j <= 2) {
            // G+_{4j} = d_xj P with P = -(1/4pi)(1/r - 1/R)
            const double P = c4 * (1.0 / g.r - 1.0 / g.R);
            out.p_vec = {j == 1 ? P : 0.0, j == 2 ? P : 0.0, 0.0};
        } else if (j == 3) {
            out.p_vec = {-c4 * g.d1 * g.d3 * (1.0 / g.r3 + 1.0 / g.Rc),
                         -c4 * g.d2 * g.d3 * (1.0 / g.r3 + 1.0 / g.Rc),
                         -c4 * (g.d3 * g.d3 / g.r3 +
                                (g.x3 * g.x3 - g.xi3 * g.xi3) / g.Rc)};
        } else {
            out.p_vec = {c4 * g.d1 * (1.0 / g.r3 + 1.0 / g.Rc),
                         c4 * g.d2 * (1.0 / g.r3 + 1.0 / g.Rc),
                         c4 * (g.d3 / g.r3 + g.R3 / g.Rc)};
        }
        return out;
    }
    // Neumann
    if (j <= 2) {
        const double P = c4 * (1.0 / g.r + 1.0 / g.R) - c2 * g.xi3 * g.R3 / g.Rc;
        out.p_vec = {j == 1 ? P : 0.0, j == 2 ? P : 0.0, 0.0};
    } else if (j == 3) {
        out.p_vec = {-c2 * g.d1 * g.R3 / g.Rc, -c2 * g.d2 * g.R3 / g.Rc,
                     c4 * (1.0 / g.r - 1.0 / g.R - 2.0 * g.x3 * g.R3 / g.Rc)};
    } else {
        out.p_vec = {c4 * g.d1 * (1.0 / g.r3 - 3.0 / g.Rc),
                     c4 * g.d2 * (1.0 / g.r3 - 3.0 / g.Rc),
                     c4 * (g.d3 / g.r3 + g.R3 / g.Rc)};
    }
    return out;
}

// ---------------------------------------------------------------- quadrature

void gauss_legendre(int n, std::array<double, 64>& nodes, std::array<double, 64>& weights) {
    if (n < 1 || n > 64) throw DomainError("gauss_legendre: order out of range");
    for (int i = 0; i < n; ++i) {
        // Newton from the Chebyshev-like initial guess
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        nodes[i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

std::pair<Vec3, double> representation_solution(BcType bc, const SourceField& src,
                                                const Vec3& x, const NumericConfig& cfg) {
    src.support_box.validate();
    if (src.support_box.contains(x))
        throw EvaluationInsideSupport("representation_solution: x inside support box");

    const int n = cfg.quadrature_order;
    std::array<double, 64> gn{}, gw{};
    gauss_legendre(n, gn, gw);
    const Vec3 lo = src.support_box.lo, hi = src.support_box.hi;
    const double sx = (hi.x1 - lo.x1) / 2.0, sy = (hi.x2 - lo.x2) / 2.0,
                 sz = (hi.x3 - lo.x3) / 2.0;
    const double jac = sx * sy * sz;

    // The simpler formulas of conditions (i) and (iii) omit the grad(g) term;
    // for (ii) and (iv) the general formula with f + grad(g) applies.
    const bool with_grad_g =
        (bc == BcType::mixed_normal || bc == BcType::neumann);

    auto grad_g_at = [&](const Vec3& p) -> Vec3 {
        if (src.grad_g) return src.grad_g(p);
        const double h = 1e-5;
        auto gf = src.g;
        return {(gf({p.x1 + h, p.x2, p.x3}) - gf({p.x1 - h, p.x2, p.x3})) / (2 * h),
                (gf({p.x1, p.x2 + h, p.x3}) - gf({p.x1, p.x2 - h, p.x3})) / (2 * h),
                (gf({p.x1, p.x2, p.x3 + h}) - gf({p.x1, p.x2, p.x3 - h})) / (2 * h)};
    };

    // Deterministic parallel reduction: per-slab partial sums, merged in
    // index order afterwards.
    struct Partial { double u1 = 0, u2 = 0, u3 = 0, p = 0; };
    std::vector<Partial> part(static_cast<std::size_t>(n));
    par_for(static_cast<std::size_t>(n), [&](std::size_t a) {
        Partial acc;
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                const Vec3 q{lo.x1 + sx * (gn[a] + 1.0), lo.x2 + sy * (gn[b] + 1.0),
                             lo.x3 + sz * (gn[c] + 1.0)};
                const double w = gw[a] * gw[b] * gw[c] * jac;
                const GreenMatrix G = halfspace_green(bc, x, q, cfg);
                Vec3 F = src.f ? src.f(q) : Vec3{0, 0, 0};
                const double gv = src.g ? src.g(q) : 0.0;
                if (with_grad_g && src.g) F = F + grad_g_at(q);
                acc.u1 += w * (F.x1 * G.value(1, 1) + F.x2 * G.value(1, 2) +
                               F.x3 * G.value(1, 3) + gv * G.value(1, 4));
                acc.u2 += w * (F.x1 * G.value(2, 1) + F.x2 * G.value(2, 2) +
                               F.x3 * G.value(2, 3) + gv * G.value(2, 4));
                acc.u3 += w * (F.x1 * G.value(3, 1) + F.x2 * G.value(3, 2) +
                               F.x3 * G.value(3, 3) + gv * G.value(3, 4));
                acc.p += w * (F.x1 * G.value(4, 1) + F.x2 * G.value(4, 2) +
                              F.x3 * G.value(4, 3) + gv * G.value(4, 4));
            }
        }
        part[a] = acc;
    });
    Partial total;
    for (const Partial& q : part) {
        total.u1 += q.u1;
        total.u2 += q.u2;
        total.u3 += q.u3;
        total.p += q.p;
    }

    // Analytic delta contributions at x: the (4,4) delta gives -g(x); the
    // general formula carries an explicit -g(x) on top of it.  Both vanish
    // at exterior evaluation points.
    const double gx = src.g ? src.g(x) : 0.0;
    double p = total.p - gx;
    if (with_grad_g) p -= gx;
    return {Vec3{total.u1, total.u2, total.u3}, p};
}

} // namespace cstokes
