#pragma once

// Physical observables extracted from density matrices and post-hoc analysis
// of sampled time series (spectral peak, distribution shape, trace alignment).

#include <utility>
#include <vector>

#include "mixsim/integrator.hpp"
#include "mixsim/types.hpp"

namespace mixsim {

struct ExcitationDistribution {
  int ensemble = 1;  // 1 or 2
  std::vector<double> probabilities;  // index = excitation number, 0..cutoff
};

enum class Column { Ne1, Ne2, Imix };

// Mean excitation numbers <N_e1>, <N_e2>: diagonal sums weighted by the level index.
std::pair<double, double> excitations(const DensityMatrix& rho, const MixParams& p);

// Scattered-photon intensity I_mix/(N*gamma): excitation sums plus the phased
// cross-coherence sums. Requires N1 == N2 and gamma1 == gamma2 (AsymmetricParams otherwise).
double intensity(const DensityMatrix& rho, double t, const MixParams& p);

// Marginal diagonal distribution of one mode.
ExcitationDistribution excitation_distribution(const DensityMatrix& rho, int ensemble,
                                               const MixParams& p);

std::vector<double> extract_column(const TimeSeries& series, Column c);

// DFT peak of the windowed (Hann), mean-subtracted signal restricted to t in [t_a, t_b].
// Returns (angular frequency, half peak-to-trough amplitude); a constant signal gives (0, 0).
// Peak location is refined by parabolic interpolation on log magnitude; the raw
// resolution is 2*pi/(t_b - t_a). Throws std::invalid_argument on windows with < 32 samples.
std::pair<double, double> dominant_frequency(const TimeSeries& series, Column column,
                                             double t_a, double t_b);

// Total-variation distance to the same-mean Poisson law truncated and renormalized
// to the distribution's support.
double poisson_distance(const ExcitationDistribution& dist);

// Lag (time units) maximizing the cross-correlation of the two detrended traces
// over the window; ties resolve to the smallest |lag|. Same window rules as
// dominant_frequency.
double synchronization_lag(const TimeSeries& series, Column column1, Column column2,
                           double t_a, double t_b);

}  // namespace mixsim
