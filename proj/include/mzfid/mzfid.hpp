#pragma once

#include "mzfid/bayes.hpp"
#include "mzfid/errors.hpp"
#include "mzfid/fidelity.hpp"
#include "mzfid/optics.hpp"
#include "mzfid/optimizer.hpp"
#include "mzfid/phase_grid.hpp"
