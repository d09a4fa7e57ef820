#ifndef CSTOKES_CORE_HPP
#define CSTOKES_CORE_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

// Geometric primitives, boundary-condition codes, multi-indices and the
// shared numeric configuration used across the library.

namespace cstokes {

// ---------------------------------------------------------------- errors

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};
struct SingularPoint : Error {
    explicit SingularPoint(const std::string& msg) : Error(msg) {}
};
struct OrderTooHigh : Error {
    explicit OrderTooHigh(const std::string& msg) : Error(msg) {}
};
struct UnsupportedBc : Error {
    explicit UnsupportedBc(const std::string& msg) : Error(msg) {}
};
struct EvaluationInsideSupport : Error {
    explicit EvaluationInsideSupport(const std::string& msg) : Error(msg) {}
};
struct DegenerateLambda : Error {
    explicit DegenerateLambda(const std::string& msg) : Error(msg) {}
};
struct ContourThroughZero : Error {
    explicit ContourThroughZero(const std::string& msg) : Error(msg) {}
};
struct NonConvergence : Error {
    explicit NonConvergence(const std::string& msg) : Error(msg) {}
};
struct SpectrumEmptyInRegion : Error {
    explicit SpectrumEmptyInRegion(const std::string& msg) : Error(msg) {}
};
struct UnmatchedEigenvalue : Error {
    explicit UnmatchedEigenvalue(const std::string& msg) : Error(msg) {}
};
struct SchemaError : Error {
    explicit SchemaError(const std::string& msg) : Error(msg) {}
};

// ---------------------------------------------------------------- Vec3

struct Vec3 {
    double x1 = 0.0, x2 = 0.0, x3 = 0.0;

    Vec3() = default;
    Vec3(double a, double b, double c) : x1(a), x2(b), x3(c) {
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
            throw DomainError("Vec3: non-finite component");
    }

    double operator[](int k) const { return k == 0 ? x1 : (k == 1 ? x2 : x3); }

    Vec3 operator+(const Vec3& o) const { return {x1 + o.x1, x2 + o.x2, x3 + o.x3}; }
    Vec3 operator-(const Vec3& o) const { return {x1 - o.x1, x2 - o.x2, x3 - o.x3}; }
    Vec3 operator*(double t) const { return {t * x1, t * x2, t * x3}; }
    double dot(const Vec3& o) const { return x1 * o.x1 + x2 * o.x2 + x3 * o.x3; }
    double norm() const { return std::sqrt(dot(*this)); }
};

inline Vec3 operator*(double t, const Vec3& v) { return v * t; }

// Reflection across the wall plane x3 = 0 (the image point xi^*).
inline Vec3 reflect(const Vec3& p) { return {p.x1, p.x2, -p.x3}; }

// ---------------------------------------------------------------- BcType

// 0 = Dirichlet (i), 1 = mixed-normal (ii), 2 = free-surface/slip (iii),
// 3 = Neumann (iv).
enum class BcType : int {
    dirichlet = 0,
    mixed_normal = 1,
    free_surface = 2,
    neumann = 3,
};

inline BcType bc_from_code(int code) {
    if (code < 0 || code > 3) throw DomainError("BcType code must be in {0,1,2,3}");
    return static_cast<BcType>(code);
}

inline int bc_code(BcType bc) { return static_cast<int>(bc); }

inline const char* bc_name(BcType bc) {
    switch (bc) {
        case BcType::dirichlet: return "dirichlet";
        case BcType::mixed_normal: return "mixed-normal";
        case BcType::free_surface: return "free-surface";
        case BcType::neumann: return "neumann";
    }
    return "?";
}

// ---------------------------------------------------------------- MultiIndex

struct MultiIndex {
    int a1 = 0, a2 = 0, a3 = 0;

    MultiIndex() = default;
    MultiIndex(int b1, int b2, int b3) : a1(b1), a2(b2), a3(b3) {
        if (b1 < 0 || b2 < 0 || b3 < 0)
            throw DomainError("MultiIndex: negative component");
    }

    int order() const { return a1 + a2 + a3; }
    int operator[](int k) const { return k == 0 ? a1 : (k == 1 ? a2 : a3); }
    bool zero() const { return order() == 0; }
};

// ---------------------------------------------------------------- WedgeGeometry

// Wedge sides placed symmetrically at phi = +-theta/2; tangents point away
// from the edge, normals point out of the wedge.
struct WedgeGeometry {
    double theta = 0.0;
    Vec3 n_plus, n_minus;
    Vec3 tau_plus, tau_minus;
};

inline WedgeGeometry wedge_geometry(double theta) {
    if (!(theta > 0.0) || !(theta <= 2.0 * M_PI) || !std::isfinite(theta))
        throw DomainError("wedge_geometry: theta must lie in (0, 2*pi]");
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    WedgeGeometry w;
    w.theta = theta;
    w.tau_plus = {c, s, 0.0};
    w.tau_minus = {c, -s, 0.0};
    w.n_plus = {-s, c, 0.0};
    w.n_minus = {-s, -c, 0.0};
    return w;
}

// ---------------------------------------------------------------- NumericConfig

struct NumericConfig {
    double fd_step_base = 1e-3;       // FD step = fd_step_base * |x - xi|
    double newton_tol = 1e-12;
    double scan_re_max = 3.0;         // default scan rectangle
    double scan_im_max = 5.0;
    double epsilon_exponent = 0.01;   // the epsilon of the pointwise estimates
    int quadrature_order = 24;        // Gauss-Legendre points per axis
    double singularity_guard = 1e-14;
    int max_derivative_order = 2;
    double merge_tol = 1e-8;          // spectrum dedup distance
    double exclusion_radius = 1e-3;   // disks around lambda in {-1,0,1}

    void validate() const {
        if (!(fd_step_base > 0) || !(newton_tol > 0) || !(scan_re_max > 0) ||
            !(scan_im_max > 0) || !(singularity_guard > 0))
            throw DomainError("NumericConfig: tolerances must be positive");
        if (!(epsilon_exponent > 0) || epsilon_exponent > 0.1)
            throw DomainError("NumericConfig: epsilon_exponent must lie in (0, 0.1]");
        if (quadrature_order < 1) throw DomainError("NumericConfig: quadrature_order < 1");
    }
};

} // namespace cstokes

#endif
