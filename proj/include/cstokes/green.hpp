#ifndef CSTOKES_GREEN_HPP
#define CSTOKES_GREEN_HPP

#include <array>
#include <functional>
#include <optional>
#include <utility>

#include "cstokes/core.hpp"

// Stokes Green matrices of the free space and of the half-space x3 > 0 under
// the four boundary-condition types, their derivatives, the divergence-form
// potentials of the pressure row, and the representation formula evaluated by
// Gauss quadrature.

namespace cstokes {

// One matrix entry: regular (function) part plus an optional -delta(x-xi)
// distributional part, which only the (4,4) entry carries.
struct GreenEntry {
    double value = 0.0;
    bool has_delta = false;
    double delta_coefficient = 0.0;
};

struct GreenMatrix {
    // entry(i,j) with paper-style 1-based indices, i,j in 1..4.
    std::array<std::array<GreenEntry, 4>, 4> entries{};
    std::optional<BcType> bc; // empty = free space
    Vec3 x, xi;

    const GreenEntry& entry(int i, int j) const { return entries[i - 1][j - 1]; }
    GreenEntry& entry(int i, int j) { return entries[i - 1][j - 1]; }
    double value(int i, int j) const { return entry(i, j).value; }
};

GreenMatrix freespace_green(const Vec3& x, const Vec3& xi,
                            const NumericConfig& cfg = {});

GreenMatrix halfspace_green(BcType bc, const Vec3& x, const Vec3& xi,
                            const NumericConfig& cfg = {});

// Regular part of one entry; bc == nullopt selects the free-space matrix.
double green_entry_value(std::optional<BcType> bc, int i, int j, const Vec3& x,
                         const Vec3& xi, const NumericConfig& cfg = {});

// Mixed partial d_x^alpha d_xi^gamma of the regular part of entry (i,j),
// central differences with one Richardson level, step fd_step_base*|x-xi|.
double halfspace_green_derivative(std::optional<BcType> bc, int i, int j,
                                  const MultiIndex& alpha, const MultiIndex& gamma,
                                  const Vec3& x, const Vec3& xi,
                                  const NumericConfig& cfg = {});

// The vector potential P_j with -div_x P_j = regular part of G+_{4,j} and
// vanishing third component on the wall.  Available for bc in
// {mixed_normal, neumann} where the term groupings are explicit.
struct PressurePotential {
    Vec3 p_vec;
    double tail = 0.0; // remainder term; identically zero in the half-space
};

PressurePotential pressure_row_decomposition(BcType bc, int j, const Vec3& x,
                                             const Vec3& xi,
                                             const NumericConfig& cfg = {});

// ---------------------------------------------------------------- sources

struct SupportBox {
    Vec3 lo, hi;

    bool contains(const Vec3& p) const {
        return p.x1 >= lo.x1 && p.x1 <= hi.x1 && p.x2 >= lo.x2 &&
               p.x2 <= hi.x2 && p.x3 >= lo.x3 && p.x3 <= hi.x3;
    }
    void validate() const {
        if (!(lo.x1 < hi.x1 && lo.x2 < hi.x2 && lo.x3 < hi.x3))
            throw DomainError("SupportBox: empty box");
        if (!(lo.x3 > 0.0))
            throw DomainError("SupportBox: must lie strictly inside x3 > 0");
    }
};

struct SourceField {
    std::function<Vec3(const Vec3&)> f;            // body force
    std::function<double(const Vec3&)> g;          // divergence datum
    std::function<Vec3(const Vec3&)> grad_g;       // optional analytic grad g
    SupportBox support_box;
};

// Velocity and pressure at x from the representation formula.  x must lie
// outside the support box; the -g(x) term of the pressure formula and the
// delta part of entry (4,4) are added analytically.
std::pair<Vec3, double> representation_solution(BcType bc, const SourceField& src,
                                                const Vec3& x,
                                                const NumericConfig& cfg = {});

// Gauss-Legendre nodes/weights on [-1,1]; deterministic Newton construction.
void gauss_legendre(int n, std::array<double, 64>& nodes,
                    std::array<double, 64>& weights);

} // namespace cstokes

#endif
