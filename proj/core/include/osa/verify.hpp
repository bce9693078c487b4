#pragma once
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "osa/errors.hpp"
#include "osa/expr.hpp"
#include "osa/solution.hpp"

namespace osa {

// Uniform spatial grid. Spacing is h = (xmax - xmin)/(n - 1).
struct Grid {
  double xmin = 0.0, xmax = 0.0;
  long n = 0;
  double h = 0.0;

  Grid() = default;
  Grid(double lo, double hi, long points);
  double x(long i) const { return xmin + h * static_cast<double>(i); }
};

struct Band {
  double lo = 0.0, hi = 0.0;
};

struct ResidualReport {
  std::string solutionId;
  Grid grid;
  double relativeSupResidual = 0.0;
  std::vector<Band> excludedBands;  // each of width 5h
  double convergenceSlope = 0.0;    // order of log-residual vs log-h decay
};

// GridTooCoarse specialization thrown by residual(); carries the report that
// failed the tolerance check so callers can surface it.
struct GridTooCoarseWithReport : GridTooCoarse {
  ResidualReport report;
  GridTooCoarseWithReport(const std::string& msg, ResidualReport rep)
      : GridTooCoarse(msg), report(std::move(rep)) {}
};

enum class FeatureKind { Bright, Kink, Dark, Compacton };

struct Features {
  double amplitude = 0.0;
  double width = 0.0;
};

struct ScalingFit {
  std::string familyId;
  std::vector<double> amplitudes;
  std::vector<double> widths;
  double slope = 0.0;
  double slopeStdErr = 0.0;
  double predictedExponent = 0.0;
};

struct ScaleSpectrum {
  int jMin = 0, jMax = 0;
  std::vector<double> energies;  // E_j indexed by j - jMin
  int dominantJ = 0;
  double dominanceRatio = 0.0;  // E_dominant / sum E_j
};

// Centered finite-difference weights for the m-th derivative on the unit-spaced
// stencil {-halfWidth, ..., +halfWidth}; divide by h^m at the point of use.
std::vector<double> fornberg_weights(int m, int halfWidth);

// Stencil half-width giving 8th-order accuracy for the m-th derivative.
int stencil_half_width(int m);

// Substitute the solution into the full PDE on the grid using 8th-order central
// finite differences; time derivatives act as (i*omega - V d/dx)^t. The sup of
// the residual over non-excluded interior points is normalized by the sup of
// the largest individual term. Throws GridTooCoarse when the residual is above
// `tolerance` while the refinement sequence shows it is still converging.
ResidualReport residual(const Expr& eq, const SolutionSpec& sol, const Grid& grid,
                        double tolerance = 1e-6);

// Amplitude and width measured from samples of the (real) profile at t = 0.
// Bright/compacton: peak height over the far field and FWHM; kink: half the
// asymptotic jump and the 25%-75% transition width; dark: background minus dip
// and the FWHM of the dip. Widths interpolate linearly between samples.
Features measure_features(const std::vector<double>& u, const Grid& grid,
                          FeatureKind kind);

// Least-squares fit of log(width) against log(amplitude) for >= 5 amplitudes
// spanning at least one decade; widthOf maps an amplitude to a measured width.
ScalingFit fit_scaling(const std::string& familyId,
                       const std::vector<double>& amplitudes,
                       const std::function<double(double)>& widthOf,
                       double predictedExponent);

// Frame coefficients C_{j,k} = 2^{j/2} <u, Psi(2^j s - k)> with the analyzing
// waveform Psi(s) = exp(-i s - s^2/2)/pi^{1/4}, k running over an integer
// lattice scaled by kStride; a diagnostic of the dominant dyadic scale, not a
// reconstruction. Dilating the profile by 2 shifts dominantJ by exactly -1.
ScaleSpectrum scale_spectrum(const std::vector<double>& u, const Grid& grid,
                             int jMin, int jMax, int kStride = 1);

}  // namespace osa
