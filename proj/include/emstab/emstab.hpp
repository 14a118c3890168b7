#pragma once

#include "emstab/core/banded.hpp"
#include "emstab/core/error.hpp"
#include "emstab/core/fft.hpp"
#include "emstab/core/finite_diff.hpp"
#include "emstab/core/grid.hpp"
#include "emstab/core/spectral.hpp"
#include "emstab/harness/experiment.hpp"
#include "emstab/harness/monitor.hpp"
#include "emstab/harness/probe.hpp"
#include "emstab/harness/projection.hpp"
#include "emstab/harness/random.hpp"
#include "emstab/harness/systems.hpp"
#include "emstab/spherical/flow.hpp"
#include "emstab/spherical/mechanics.hpp"
#include "emstab/spherical/potential.hpp"
#include "emstab/standing/curve.hpp"
#include "emstab/standing/nonlinearity.hpp"
#include "emstab/standing/operators.hpp"
#include "emstab/standing/profile.hpp"
#include "emstab/torus/evolve.hpp"
#include "emstab/torus/model.hpp"
#include "emstab/torus/orbit.hpp"
#include "emstab/torus/soliton.hpp"
