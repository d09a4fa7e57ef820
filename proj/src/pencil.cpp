#include "cstokes/pencil.hpp"

#include <algorithm>
#include <cmath>

namespace cstokes {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kAngleTol = 1e-9;

bool near(double a, double b) { return std::abs(a - b) < kAngleTol; }

// (lo, hi) = ordered pair of condition codes; the pencil is invariant under
// swapping the sides.
std::pair<int, int> ordered_codes(const WedgeConfig& c) {
    const int a = bc_code(c.d_minus), b = bc_code(c.d_plus);
    return {std::min(a, b), std::max(a, b)};
}

Complex csin(Complex z) { return std::sin(z); }
Complex ccos(Complex z) { return std::cos(z); }

// 4x4 complex determinant by cofactor expansion.
Complex det4(const std::array<std::array<Complex, 4>, 4>& m) {
    auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
        return m[r0][c0] * (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) -
               m[r0][c1] * (m[r1][c0] * m[r2][c2] - m[r1][c2] * m[r2][c0]) +
               m[r0][c2] * (m[r1][c0] * m[r2][c1] - m[r1][c1] * m[r2][c0]);
    };
    Complex d = 0.0;
    double sign = 1.0;
    const int cols[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
    for (int k = 0; k < 4; ++k) {
        d += sign * m[0][k] * det3(1, 2, 3, cols[k][0], cols[k][1], cols[k][2]);
        sign = -sign;
    }
    return d;
}

std::array<StokesBasisValue, 4> stokes_basis_unchecked(Complex lambda, double phi) {
    const Complex m = lambda + 1.0, n = lambda - 1.0;
    const Complex cm = ccos(m * phi), sm = csin(m * phi);
    const Complex cn = ccos(n * phi), sn = csin(n * phi);
    std::array<StokesBasisValue, 4> out;
    // stream function r^{lambda+1} cos((lambda+1) phi): harmonic, p = 0
    out[0] = {-m * sm, -m * cm, 0.0, -m * m * cm, m * m * sm, 0.0};
    // r^{lambda+1} sin((lambda+1) phi)
    out[1] = {m * cm, -m * sm, 0.0, -m * m * sm, -m * m * cm, 0.0};
    // r^{lambda+1} cos((lambda-1) phi): pressure -4 lambda sin((lambda-1) phi)
    out[2] = {-n * sn, -m * cn, -4.0 * lambda * sn,
              -n * n * cn, m * n * sn, -4.0 * lambda * n * cn};
    // r^{lambda+1} sin((lambda-1) phi): pressure 4 lambda cos((lambda-1) phi)
    out[3] = {n * cn, -m * sn, 4.0 * lambda * cn,
              -n * n * sn, -m * n * cn, -4.0 * lambda * n * sn};
    return out;
}

// Two boundary rows of side `s` (s = +1 at phi = +theta/2, -1 at -theta/2)
// applied to one basis column.  Conditions act on (u', p) through
// S~ / N~ per the code d: velocity rows are algebraic in (a, b), traction
// rows use eps_{r phi} = (a' + (lambda-1) b)/2 and eps_{phi phi} = a + b'.
std::array<Complex, 2> stokes_rows(int d, double s, Complex lambda,
                                   const StokesBasisValue& v) {
    const Complex shear = v.da + (lambda - 1.0) * v.b;
    const Complex normal = -v.c + 2.0 * (v.a + v.db);
    switch (d) {
        case 0: return {v.a, v.b};
        case 1: return {v.a, normal};
        case 2: return {v.b, s * shear};
        case 3: return {s * shear, normal};
    }
    throw DomainError("stokes_rows: bad condition code");
}

Complex laplace_row(int d, double s, const LaplaceBasisValue& v) {
    return d <= 1 ? v.w : s * v.dw;
}

struct BuiltMatrices {
    std::array<std::array<Complex, 4>, 4> stokes{};
    std::array<std::array<Complex, 2>, 2> laplace{};
};

BuiltMatrices build_matrices(const WedgeConfig& config, Complex lambda,
                             const std::array<StokesBasisValue, 4>& basis_minus,
                             const std::array<StokesBasisValue, 4>& basis_plus) {
    BuiltMatrices out;
    const int dm = bc_code(config.d_minus), dp = bc_code(config.d_plus);
    for (int col = 0; col < 4; ++col) {
        const auto rm = stokes_rows(dm, -1.0, lambda, basis_minus[col]);
        const auto rp = stokes_rows(dp, +1.0, lambda, basis_plus[col]);
        out.stokes[0][col] = rm[0];
        out.stokes[1][col] = rm[1];
        out.stokes[2][col] = rp[0];
        out.stokes[3][col] = rp[1];
    }
    const auto lm = laplace_basis(lambda, -config.theta / 2.0);
    const auto lp = laplace_basis(lambda, +config.theta / 2.0);
    for (int col = 0; col < 2; ++col) {
        out.laplace[0][col] = laplace_row(dm, -1.0, lm[col]);
        out.laplace[1][col] = laplace_row(dp, +1.0, lp[col]);
    }
    return out;
}

// Dedicated lambda = 1 basis: velocity fields u' = M x' with tr M = 0 plus
// the constant pressure, i.e. the span containing the rigid rotation and the
// (U,P) = (0,1) eigenvector.  In polar components at angle phi:
// a = e_r.M e_r, b = e_phi.M e_r.
StokesBasisValue linear_field_value(const std::array<std::array<double, 2>, 2>& M,
                                    double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    const double er[2] = {c, s}, ep[2] = {-s, c};
    auto quad = [&](const double* l, const double* r) {
        return l[0] * (M[0][0] * r[0] + M[0][1] * r[1]) +
               l[1] * (M[1][0] * r[0] + M[1][1] * r[1]);
    };
    StokesBasisValue v;
    v.a = quad(er, er);
    v.b = quad(ep, er);
    v.da = quad(ep, er) + quad(er, ep);
    v.db = -quad(er, er) + quad(ep, ep);
    v.c = 0.0;
    v.dc = 0.0;
    return v;
}

std::array<StokesBasisValue, 4> lambda_one_basis(double phi) {
    std::array<StokesBasisValue, 4> out;
    out[0] = linear_field_value({{{1.0, 0.0}, {0.0, -1.0}}}, phi);
    out[1] = linear_field_value({{{0.0, 1.0}, {0.0, 0.0}}}, phi);
    out[2] = linear_field_value({{{0.0, 0.0}, {1.0, 0.0}}}, phi);
    out[3] = {0.0, 0.0, 1.0, 0.0, 0.0, 0.0}; // constant pressure
    return out;
}

// Column sup-norm scaling shared by the normalized determinants.
template <std::size_t N>
Complex normalized_det(std::array<std::array<Complex, N>, N> m,
                       Complex (*det)(const std::array<std::array<Complex, N>, N>&)) {
    for (std::size_t c = 0; c < N; ++c) {
        double norm = 0.0;
        for (std::size_t r = 0; r < N; ++r) norm = std::max(norm, std::abs(m[r][c]));
        if (norm == 0.0) continue;
        for (std::size_t r = 0; r < N; ++r) m[r][c] /= norm;
    }
    return det(m);
}

Complex det2(const std::array<std::array<Complex, 2>, 2>& m) {
    return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

// guard_radius: distance to {-1, 0} below which the power basis is refused
// (columns coincide there).  The public API uses the spec-level exclusion
// disks; the determinant scan only needs a hard numerical guard.
BuiltMatrices matrices_at(const WedgeConfig& config, Complex lambda,
                          double guard_radius) {
    config.validate();
    if (std::abs(lambda - 1.0) <= 1e-9) {
        const auto bm = lambda_one_basis(-config.theta / 2.0);
        const auto bp = lambda_one_basis(+config.theta / 2.0);
        return build_matrices(config, 1.0, bm, bp);
    }
    const Complex degen[3] = {{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
    for (Complex d : degen)
        if (std::abs(lambda - d) < guard_radius)
            throw DegenerateLambda("pencil_determinant: lambda in exclusion disk");
    const auto bm = stokes_basis_unchecked(lambda, -config.theta / 2.0);
    const auto bp = stokes_basis_unchecked(lambda, +config.theta / 2.0);
    return build_matrices(config, lambda, bm, bp);
}

} // namespace

const char* eig_source_name(EigSource s) {
    switch (s) {
        case EigSource::lattice: return "lattice";
        case EigSource::eq00p: return "eq00+";
        case EigSource::eq00m: return "eq00-";
        case EigSource::eq01: return "eq01";
        case EigSource::eq02: return "eq02";
        case EigSource::eq03p: return "eq03+";
        case EigSource::eq03m: return "eq03-";
        case EigSource::determinant: return "determinant";
    }
    return "?";
}

std::array<StokesBasisValue, 4> stokes_basis(Complex lambda, double phi) {
    const Complex degen[3] = {{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
    for (Complex d : degen)
        if (std::abs(lambda - d) < 1e-3)
            throw DegenerateLambda("stokes_basis: lambda near degenerate set {-1,0,1}");
    return stokes_basis_unchecked(lambda, phi);
}

PlaneField stokes_basis_field(int col, Complex lambda, double x1, double x2) {
    if (col < 0 || col > 3) throw DomainError("stokes_basis_field: bad column");
    const double r = std::hypot(x1, x2);
    if (r == 0.0) throw DomainError("stokes_basis_field: r = 0");
    const double phi = std::atan2(x2, x1);
    const auto basis = stokes_basis_unchecked(lambda, phi);
    const StokesBasisValue& v = basis[col];
    const Complex rl = std::pow(Complex(r, 0.0), lambda);
    const Complex ur = rl * v.a, up = rl * v.b;
    const double c = std::cos(phi), s = std::sin(phi);
    return {ur * c - up * s, ur * s + up * c, rl / r * v.c};
}

std::array<LaplaceBasisValue, 2> laplace_basis(Complex lambda, double phi) {
    if (std::abs(lambda) == 0.0)
        return {{{1.0, 0.0}, {phi, 1.0}}}; // degenerate pair {1, phi}
    return {{{ccos(lambda * phi), -lambda * csin(lambda * phi)},
             {csin(lambda * phi), lambda * ccos(lambda * phi)}}};
}

PencilDeterminant pencil_determinant(const WedgeConfig& config, Complex lambda,
                                     const NumericConfig& cfg) {
    const BuiltMatrices m = matrices_at(config, lambda, cfg.exclusion_radius);
    return {det4(m.stokes), det2(m.laplace)};
}

PencilDeterminant pencil_determinant_normalized(const WedgeConfig& config,
                                                Complex lambda,
                                                const NumericConfig& cfg) {
    const BuiltMatrices m = matrices_at(config, lambda, cfg.exclusion_radius);
    return {normalized_det<4>(m.stokes, det4), normalized_det<2>(m.laplace, det2)};
}

bool zero_is_eigenvalue(const WedgeConfig& config) {
    config.validate();
    const auto [lo, hi] = ordered_codes(config);
    const double t = config.theta;
    if (hi == 3 && lo >= 1) return true;
    if (lo == hi && (lo == 1 || lo == 2)) return near(t, kPi) || near(t, 2 * kPi);
    if (lo == 1 && hi == 2) return near(t, kPi / 2) || near(t, 3 * kPi / 2);
    return false;
}

bool one_in_spectrum(const WedgeConfig& config) {
    const PencilDeterminant d = pencil_determinant_normalized(config, 1.0);
    return std::abs(d.det_stokes) <= 1e-10 || std::abs(d.det_laplace) <= 1e-10;
}

double mu_from(const WedgeConfig& config, Complex lambda1, Complex lambda2) {
    const auto [lo, hi] = ordered_codes(config);
    const bool even = (lo + hi) % 2 == 0;
    const double m = (lo == hi) ? 1.0 : 2.0;
    if (even && config.theta < kPi / m - kAngleTol) return lambda2.real();
    return lambda1.real();
}

// ---------------------------------------------------------------- spectra

namespace {

bool in_region(Complex z, const Region& reg) {
    return z.real() > 0.0 && z.real() >= reg.re_min - 1e-9 &&
           z.real() <= reg.re_max + 1e-9 && std::abs(z.imag()) <= reg.im_max + 1e-9;
}

void push_dedup(std::vector<Eigenvalue>& list, Complex z, EigSource src,
                bool refined, double merge_tol) {
    if (std::abs(z.imag()) < 1e-9) z = Complex(z.real(), 0.0);
    if (z.imag() < 0.0) z = std::conj(z); // store Im >= 0 representatives
    for (const Eigenvalue& e : list)
        if (std::abs(e.lambda - z) < merge_tol) return;
    list.push_back({z, src, refined});
}

void sort_spectrum(std::vector<Eigenvalue>& list) {
    std::sort(list.begin(), list.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
        if (a.lambda.real() != b.lambda.real())
            return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
}

// Lattice families per catalogue case, region-clipped.  j = 0 members (the
// value lambda = 0) are admitted only through the membership condition list.
void add_lattice(std::vector<Eigenvalue>& out, const WedgeConfig& config,
                 const Region& reg, double merge_tol) {
    const auto [lo, hi] = ordered_codes(config);
    const double t = config.theta;
    auto add_multiples = [&](double step) {
        for (int j = 1; step * j <= reg.re_max + 1e-9; ++j)
            if (in_region(Complex(step * j, 0.0), reg))
                push_dedup(out, Complex(step * j, 0.0), EigSource::lattice, true,
                           merge_tol);
    };
    auto add_shifted = [&](double step, bool odd_only) {
        // k*step +- 1 over all integers k (odd k only for the (1,2) case)
        const double kmax = (reg.re_max + 1.0) / step + 2.0;
        for (int k = static_cast<int>(-kmax); k <= static_cast<int>(kmax); ++k) {
            if (odd_only && k % 2 == 0) continue;
            for (double sgn : {-1.0, 1.0}) {
                const Complex z(step * k + sgn, 0.0);
                if (z.real() > 0.0 && in_region(z, reg))
                    push_dedup(out, z, EigSource::lattice, true, merge_tol);
            }
        }
    };

    if (lo == 0 && hi <= 1) add_multiples(kPi / t);            // cases 1, 2
    else if (lo == 0) add_multiples(kPi / (2.0 * t));          // cases 3, 4
    else if (lo == 1 && hi == 1) {                             // case 5
        add_multiples(kPi / t);
        add_shifted(kPi / t, false);
    } else if (lo == 1 && hi == 2) {                           // case 6
        add_multiples(kPi / (2.0 * t));
        add_shifted(kPi / (2.0 * t), true);
    } else if (lo == 1 && hi == 3) {                           // case 7
        add_multiples(kPi / (2.0 * t));
    } else if (lo == 2 && hi == 2) {                           // case 8
        add_multiples(kPi / t);
        add_shifted(kPi / t, false);
    } else {                                                   // cases 9, 10
        add_multiples(kPi / t);
    }
}

struct EqSpec {
    EigSource source;
    AnalyticFn fn;
    double theta_eff; // sin(lambda*theta_eff)-type argument scale
};

std::vector<EqSpec> equations_for(const WedgeConfig& config) {
    const auto [lo, hi] = ordered_codes(config);
    const double t = config.theta;
    const double st = std::sin(t), s2t = std::sin(2.0 * t);
    std::vector<EqSpec> eqs;
    auto eq00p = [st, t](Complex z) { return z * st + csin(z * t); };
    auto eq00m = [st, t](Complex z) { return z * st - csin(z * t); };
    auto eq01 = [s2t, t](Complex z) { return z * s2t + csin(2.0 * z * t); };
    auto eq02 = [s2t, t](Complex z) { return z * s2t - csin(2.0 * z * t); };
    auto eq03p = [st, t](Complex z) { return z * st + ccos(z * t); };
    auto eq03m = [st, t](Complex z) { return z * st - ccos(z * t); };
    if (lo == 0 && hi == 0) {
        eqs.push_back({EigSource::eq00p, eq00p, t});
        eqs.push_back({EigSource::eq00m, eq00m, t});
    } else if (lo == 0 && hi == 1) {
        eqs.push_back({EigSource::eq01, eq01, 2.0 * t});
    } else if (lo == 0 && hi == 2) {
        eqs.push_back({EigSource::eq02, eq02, 2.0 * t});
    } else if (lo == 0 && hi == 3) {
        eqs.push_back({EigSource::eq03p, eq03p, t});
        eqs.push_back({EigSource::eq03m, eq03m, t});
    } else if (lo == 1 && hi == 3) {
        eqs.push_back({EigSource::eq02, eq02, 2.0 * t});
    } else if (lo == 2 && hi == 3) {
        eqs.push_back({EigSource::eq01, eq01, 2.0 * t});
    } else if (lo == 3 && hi == 3) {
        eqs.push_back({EigSource::eq00p, eq00p, t});
        eqs.push_back({EigSource::eq00m, eq00m, t});
    }
    return eqs;
}

} // namespace

Spectrum closed_form_spectrum(const WedgeConfig& config, const Region& region,
                              const NumericConfig& cfg) {
    config.validate();
    Spectrum spec;
    spec.config = config;
    spec.region = region;

    add_lattice(spec.eigenvalues, config, region, cfg.merge_tol);

    ScanOptions opt;
    opt.newton_tol = cfg.newton_tol;
    for (const EqSpec& eq : equations_for(config)) {
        // The equations are entire with no degenerate parameter values, so
        // the whole rectangle (down to Re = 0) can be scanned directly.
        ScanRect rect{std::max(region.re_min, cfg.exclusion_radius), region.re_max + 1e-6,
                      -region.im_max - 1e-6, region.im_max + 1e-6};
        for (Complex z : scan_zeros(eq.fn, rect, opt, cfg.merge_tol))
            if (in_region(z, region) && std::abs(z) > 1e-9)
                push_dedup(spec.eigenvalues, z, eq.source, true, cfg.merge_tol);
    }

    if (region.re_min <= 0.0 && zero_is_eigenvalue(config))
        push_dedup(spec.eigenvalues, Complex(0.0, 0.0), EigSource::lattice, true,
                   cfg.merge_tol);

    sort_spectrum(spec.eigenvalues);
    return spec;
}

Spectrum scan_spectrum(const WedgeConfig& config, const Region& region,
                       const NumericConfig& cfg) {
    config.validate();
    Spectrum spec;
    spec.config = config;
    spec.region = region;

    ScanOptions opt;
    opt.newton_tol = cfg.newton_tol;
    opt.exclusions = {Complex(-1.0, 0.0), Complex(0.0, 0.0), Complex(1.0, 0.0)};
    opt.exclusion_radius = cfg.exclusion_radius;

    const ScanRect rect{std::max(region.re_min, cfg.exclusion_radius * 1.2),
                        region.re_max + 1e-6, -region.im_max - 1e-6,
                        region.im_max + 1e-6};
    // The contour may pass near (not through) the degenerate points, so the
    // determinant is evaluated with a hard numerical guard only.
    auto fs = [&](Complex z) { return det4(matrices_at(config, z, 1e-6).stokes); };
    auto fl = [&](Complex z) { return det2(matrices_at(config, z, 1e-6).laplace); };
    for (Complex z : scan_zeros(fs, rect, opt, cfg.merge_tol))
        if (in_region(z, region))
            push_dedup(spec.eigenvalues, z, EigSource::determinant, true, cfg.merge_tol);
    for (Complex z : scan_zeros(fl, rect, opt, cfg.merge_tol))
        if (in_region(z, region))
            push_dedup(spec.eigenvalues, z, EigSource::determinant, true, cfg.merge_tol);

    // Membership of the degenerate values is decided analytically, never by
    // the scan: lambda = 1 by the dedicated eigenvector path, lambda = 0 by
    // the condition list; lambda = -1 lies outside supported regions.
    if (region.re_max >= 1.0 && region.re_min <= 1.0 && one_in_spectrum(config))
        push_dedup(spec.eigenvalues, Complex(1.0, 0.0), EigSource::determinant, true,
                   cfg.merge_tol);
    if (region.re_min <= 0.0 && zero_is_eigenvalue(config))
        push_dedup(spec.eigenvalues, Complex(0.0, 0.0), EigSource::determinant, true,
                   cfg.merge_tol);

    sort_spectrum(spec.eigenvalues);
    return spec;
}

namespace {

// Region big enough to contain lambda_1 and lambda_2 for this theta: the
// lattice guarantees an eigenvalue by Re <= 2 pi / theta + 1, and equation
// roots with Re <= re_max satisfy sinh(|Im| theta_eff) <= ~2|lambda|.
Region classify_region(const WedgeConfig& config, const NumericConfig& cfg) {
    Region reg;
    reg.re_min = 0.0;
    reg.re_max = std::max(cfg.scan_re_max, 2.0 * kPi / config.theta + 2.0);
    double teff = config.theta;
    for (const EqSpec& eq : equations_for(config)) teff = std::min(teff, eq.theta_eff);
    const double bound = std::asinh(4.0 * reg.re_max + 4.0) / teff + 1.0;
    reg.im_max = std::max(cfg.scan_im_max, bound);
    return reg;
}

} // namespace

PencilClassification classify(const WedgeConfig& config, const NumericConfig& cfg) {
    Region reg = classify_region(config, cfg);
    for (int attempt = 0;; ++attempt) {
        const Spectrum spec = closed_form_spectrum(config, reg, cfg);
        const Eigenvalue* best1 = nullptr;
        const Eigenvalue* best2 = nullptr;
        auto better = [](const Eigenvalue* cur, const Eigenvalue& cand) {
            if (!cur) return true;
            if (cand.lambda.real() != cur->lambda.real())
                return cand.lambda.real() < cur->lambda.real();
            return cand.lambda.imag() < cur->lambda.imag(); // real wins ties
        };
        for (const Eigenvalue& e : spec.eigenvalues) {
            if (e.lambda.real() <= 1e-9) continue;
            if (better(best1, e)) best1 = &e;
            if (e.lambda.real() > 1.0 + 1e-9 && better(best2, e)) best2 = &e;
        }
        if (best1 && best2) {
            PencilClassification out;
            out.lambda1 = best1->lambda;
            out.lambda2 = best2->lambda;
            out.zero_is_eigenvalue = zero_is_eigenvalue(config);
            out.one_in_spectrum = one_in_spectrum(config);
            out.mu = mu_from(config, out.lambda1, out.lambda2);
            return out;
        }
        if (attempt >= 1)
            throw SpectrumEmptyInRegion("classify: no eigenvalues in enlarged region");
        reg.re_max = std::max(reg.re_max * 2.0, 5.0);
        reg.im_max *= 1.5;
    }
}

CrosscheckResult crosscheck_spectrum(const WedgeConfig& config, const Region& region,
                                     const NumericConfig& cfg) {
    const Spectrum closed = closed_form_spectrum(config, region, cfg);
    const Spectrum scanned = scan_spectrum(config, region, cfg);

    auto keep = [&](const Eigenvalue& e) {
        const Complex degen[3] = {{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
        for (Complex d : degen)
            if (std::abs(e.lambda - d) <= cfg.exclusion_radius) return false;
        return true;
    };
    std::vector<Eigenvalue> a, b;
    for (const Eigenvalue& e : closed.eigenvalues)
        if (keep(e)) a.push_back(e);
    for (const Eigenvalue& e : scanned.eigenvalues)
        if (keep(e)) b.push_back(e);

    CrosscheckResult out;
    std::vector<bool> used(b.size(), false);
    const double match_tol = 1e-6;
    for (const Eigenvalue& ea : a) {
        double bestd = match_tol;
        std::size_t besti = b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (used[i]) continue;
            const double d = std::abs(ea.lambda - b[i].lambda);
            if (d < bestd) {
                bestd = d;
                besti = i;
            }
        }
        if (besti == b.size()) {
            out.unmatched_closed_form.push_back(ea);
        } else {
            used[besti] = true;
            out.matched++;
            out.max_distance = std::max(out.max_distance, bestd);
        }
    }
    for (std::size_t i = 0; i < b.size(); ++i)
        if (!used[i]) out.unmatched_scan.push_back(b[i]);
    return out;
}

} // namespace cstokes
