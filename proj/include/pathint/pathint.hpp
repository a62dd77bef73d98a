#pragma once

#include "pathint/cli/config.hpp"
#include "pathint/cli/experiments.hpp"
#include "pathint/cli/report.hpp"
#include "pathint/core/error.hpp"
#include "pathint/core/random.hpp"
#include "pathint/core/stats.hpp"
#include "pathint/freefield/covariance.hpp"
#include "pathint/freefield/lattice.hpp"
#include "pathint/freefield/os.hpp"
#include "pathint/gaussian/fock.hpp"
#include "pathint/gaussian/measure.hpp"
#include "pathint/gaussian/pairings.hpp"
#include "pathint/gaussian/wick.hpp"
#include "pathint/mechanics/hamiltonian.hpp"
#include "pathint/mechanics/lagrangian.hpp"
#include "pathint/mechanics/path.hpp"
#include "pathint/mechanics/phase_polynomial.hpp"
#include "pathint/numerics/bessel.hpp"
#include "pathint/numerics/fourier.hpp"
#include "pathint/numerics/fresnel.hpp"
#include "pathint/numerics/quadrature.hpp"
#include "pathint/quantum/kernel.hpp"
#include "pathint/quantum/oscillator.hpp"
#include "pathint/quantum/quantization.hpp"
#include "pathint/quantum/timeslice.hpp"
#include "pathint/quantum/wavefunction.hpp"
#include "pathint/wiener/bridge.hpp"
#include "pathint/wiener/brownian.hpp"
#include "pathint/wiener/cylinder.hpp"
#include "pathint/wiener/feynman_kac.hpp"
#include "pathint/wiener/holder.hpp"
