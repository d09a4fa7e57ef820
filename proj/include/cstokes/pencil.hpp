#ifndef CSTOKES_PENCIL_HPP
#define CSTOKES_PENCIL_HPP

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "cstokes/core.hpp"
#include "cstokes/rootscan.hpp"

// Spectrum of the operator pencil A(lambda) of the plane Stokes problem in a
// wedge of opening theta with boundary-condition codes (d-, d+): closed-form
// catalogue (lattice families plus transcendental equations), independent
// boundary-determinant construction with an argument-principle scan, and the
// classification into lambda_1, lambda_2, mu and the 0/1 membership flags.

namespace cstokes {

struct WedgeConfig {
    double theta = M_PI;
    BcType d_minus = BcType::dirichlet;
    BcType d_plus = BcType::dirichlet;

    void validate() const {
        if (!(theta > 0.0) || !(theta <= 2.0 * M_PI))
            throw DomainError("WedgeConfig: theta must lie in (0, 2*pi]");
    }
    int parity_sum() const { return bc_code(d_minus) + bc_code(d_plus); }
};

enum class EigSource {
    lattice,
    eq00p,
    eq00m,
    eq01,
    eq02,
    eq03p,
    eq03m,
    determinant,
};

const char* eig_source_name(EigSource s);

struct Eigenvalue {
    Complex lambda;
    EigSource source = EigSource::determinant;
    bool refined = false;
};

struct Region {
    double re_min = 0.0; // spectrum covers Re in (max(re_min,0), re_max]
    double re_max = 3.0;
    double im_max = 5.0;
};

struct Spectrum {
    WedgeConfig config;
    Region region;
    std::vector<Eigenvalue> eigenvalues; // sorted by (re, im), Im >= 0 reps
};

struct PencilClassification {
    Complex lambda1{};          // smallest positive real part
    Complex lambda2{};          // smallest real part > 1
    bool zero_is_eigenvalue = false;
    bool one_in_spectrum = false;
    double mu = 0.0;
};

// ---------------------------------------------------------------- bases

// Homogeneous-degree-lambda solutions of the plane Stokes system generated
// from the stream functions r^{lambda+1} {cos,sin}((lambda+1)phi) and
// {cos,sin}((lambda-1)phi).  Components are polar: u_r = r^lambda a,
// u_phi = r^lambda b, p = r^{lambda-1} c; da/db/dc are phi-derivatives.
struct StokesBasisValue {
    Complex a, b, c;
    Complex da, db, dc;
};

std::array<StokesBasisValue, 4> stokes_basis(Complex lambda, double phi);

// Cartesian field (u1, u2, p) of basis column k at the plane point (x1,x2);
// test hook for residual oracles.
struct PlaneField {
    Complex u1, u2, p;
};
PlaneField stokes_basis_field(int col, Complex lambda, double x1, double x2);

// Harmonic pair {cos(lambda phi), sin(lambda phi)} for the decoupled u3
// problem; lambda = 0 degenerates to {1, phi}.
struct LaplaceBasisValue {
    Complex w, dw;
};
std::array<LaplaceBasisValue, 2> laplace_basis(Complex lambda, double phi);

// ---------------------------------------------------------------- determinant

// Determinants of the 4x4 (plane Stokes) and 2x2 (u3 Laplace) boundary
// matrices; their combined zero set in a region is the pencil spectrum.
// lambda within 1e-9 of 1 is evaluated through the dedicated linear-solution
// basis; otherwise values inside the exclusion disks around {-1,0,1} throw.
struct PencilDeterminant {
    Complex det_stokes;
    Complex det_laplace;
};

PencilDeterminant pencil_determinant(const WedgeConfig& config, Complex lambda,
                                     const NumericConfig& cfg = {});

// Same determinants with each column scaled to unit sup-norm, for
// scale-meaningful |det| thresholds.
PencilDeterminant pencil_determinant_normalized(const WedgeConfig& config,
                                                Complex lambda,
                                                const NumericConfig& cfg = {});

// lambda = 0 membership by the closed-form condition list (including the
// exceptional-angle rule for d+, d- in {1,2}).
bool zero_is_eigenvalue(const WedgeConfig& config);

// lambda = 1 membership through the dedicated eigenvector path: nontrivial
// linear velocity / constant pressure solution satisfying both side
// conditions.  Even d+ + d- implies membership for every theta.
bool one_in_spectrum(const WedgeConfig& config);

// ---------------------------------------------------------------- spectra

// The ten-case catalogue: lattice families plus the roots of the
// transcendental equations, scanned per equation by the argument principle.
Spectrum closed_form_spectrum(const WedgeConfig& config, const Region& region,
                              const NumericConfig& cfg = {});

// Independent construction: zeros of the two boundary determinants in the
// region (outside the exclusion disks), plus the analytic {0,1} members.
Spectrum scan_spectrum(const WedgeConfig& config, const Region& region,
                       const NumericConfig& cfg = {});

PencilClassification classify(const WedgeConfig& config,
                              const NumericConfig& cfg = {});

// mu rule: Re lambda_1, upgraded to Re lambda_2 when d+ + d- is even and
// theta < pi/m with m = 1 for equal codes and m = 2 otherwise.
double mu_from(const WedgeConfig& config, Complex lambda1, Complex lambda2);

struct CrosscheckResult {
    double max_distance = 0.0;
    std::size_t matched = 0;
    std::vector<Eigenvalue> unmatched_closed_form;
    std::vector<Eigenvalue> unmatched_scan;
};

// Pairwise matching of closed-form and determinant-scan spectra over the
// region with the exclusion disks removed from both sides.
CrosscheckResult crosscheck_spectrum(const WedgeConfig& config, const Region& region,
                                     const NumericConfig& cfg = {});

} // namespace cstokes

#endif
